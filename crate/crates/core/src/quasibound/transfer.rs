//! Transfer matrices for piecewise-constant profiles in the right/left
//! mover basis.
//!
//! Within every region the field is `a e^{iq(x - x_ref)} + b e^{-iq(x - x_ref)}`
//! with `x_ref` the left edge of the region (the right edge `x_0` for the
//! left exterior, `x_K` for the right exterior). The public matrix maps
//! the left-exterior pair `(a, b)` to the right-exterior pair and is
//! gauged by the free propagation phase across the support, so a profile
//! with vanishing potential gives exactly the identity. Quasibound states
//! are roots of `M₂₂(k) = 0`, the entry coupling the incoming to the
//! outgoing channel; the gauge factor never vanishes, so both conventions
//! agree on roots.

use num_complex::Complex64;

use super::{PiecewisePotential, QuasiboundError, Segment};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// 2x2 complex matrix acting on mover amplitude pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl Matrix2 {
    pub fn identity() -> Self {
        Matrix2 {
            m11: Complex64::new(1.0, 0.0),
            m12: Complex64::new(0.0, 0.0),
            m21: Complex64::new(0.0, 0.0),
            m22: Complex64::new(1.0, 0.0),
        }
    }

    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        Matrix2 {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
        }
    }

    pub fn apply(&self, v: (Complex64, Complex64)) -> (Complex64, Complex64) {
        (
            self.m11 * v.0 + self.m12 * v.1,
            self.m21 * v.0 + self.m22 * v.1,
        )
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }
}

/// Interface matrix from a region with wavenumber `q1` into `q2`
/// (continuity of the field and its derivative).
fn interface(q1: Complex64, q2: Complex64) -> Matrix2 {
    let r = q1 / q2;
    let half_plus = (Complex64::new(1.0, 0.0) + r) * 0.5;
    let half_minus = (Complex64::new(1.0, 0.0) - r) * 0.5;
    Matrix2 {
        m11: half_plus,
        m12: half_minus,
        m21: half_minus,
        m22: half_plus,
    }
}

/// Propagation across a region of length `len`.
fn propagate(q: Complex64, len: f64) -> Matrix2 {
    let phase = (I * q * len).exp();
    Matrix2 {
        m11: phase,
        m12: Complex64::new(0.0, 0.0),
        m21: Complex64::new(0.0, 0.0),
        m22: 1.0 / phase,
    }
}

/// Ungauged transfer matrix (used internally for root finding; its `m22`
/// has the same zeros as the gauged one).
pub(crate) fn transfer_matrix_raw(
    p: &PiecewisePotential,
    k: Complex64,
) -> Result<Matrix2, QuasiboundError> {
    if k.re == 0.0 {
        return Err(QuasiboundError::InvalidWavenumber);
    }
    let bps = p.breakpoints();
    let mut m = Matrix2::identity();
    let mut q_prev = p.local_q(0, k)?;
    for i in 0..p.interval_count() {
        let q = p.local_q(i + 1, k)?;
        m = interface(q_prev, q).mul(&m);
        m = propagate(q, bps[i + 1] - bps[i]).mul(&m);
        q_prev = q;
    }
    let q_out = p.local_q(p.region_count() - 1, k)?;
    Ok(interface(q_prev, q_out).mul(&m))
}

/// Transfer matrix from the far left to the far right in the mover basis
/// with phases referenced to the interval edges; `det = 1` exactly in
/// exact arithmetic for any (possibly absorbing) profile.
pub fn transfer_matrix(p: &PiecewisePotential, k: Complex64) -> Result<Matrix2, QuasiboundError> {
    let raw = transfer_matrix_raw(p, k)?;
    let (lo, hi) = p.support();
    let q_ext = p.local_q(0, k)?;
    let gauge = (I * q_ext * (hi - lo)).exp();
    Ok(Matrix2 {
        m11: raw.m11 / gauge,
        m12: raw.m12 / gauge,
        m21: raw.m21 * gauge,
        m22: raw.m22 * gauge,
    })
}

/// Propagate the outgoing-only boundary data through the profile and build
/// the per-region segments. Returns the segments (normalized so the
/// largest interior amplitude has unit magnitude) together with the
/// relative outgoing defect `|b_right| / max amplitude` and the exterior
/// far-field amplitudes.
pub(crate) fn build_segments(
    p: &PiecewisePotential,
    k: Complex64,
) -> Result<(Vec<Segment>, f64, Complex64, Complex64), QuasiboundError> {
    let bps = p.breakpoints();
    let kk = p.local_q(0, k)?;
    let mut segments = Vec::with_capacity(p.region_count());

    // left exterior: purely outgoing to the left, b = 1 sets the scale
    let mut cur = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    segments.push(Segment {
        x_left: f64::NEG_INFINITY,
        x_right: bps[0],
        x_ref: bps[0],
        q: kk,
        a: cur.0,
        b: cur.1,
    });

    let mut q_prev = kk;
    for i in 0..p.interval_count() {
        let q = p.local_q(i + 1, k)?;
        cur = interface(q_prev, q).apply(cur);
        segments.push(Segment {
            x_left: bps[i],
            x_right: bps[i + 1],
            x_ref: bps[i],
            q,
            a: cur.0,
            b: cur.1,
        });
        cur = propagate(q, bps[i + 1] - bps[i]).apply(cur);
        q_prev = q;
    }
    let q_out = p.local_q(p.region_count() - 1, k)?;
    cur = interface(q_prev, q_out).apply(cur);
    segments.push(Segment {
        x_left: *bps.last().unwrap(),
        x_right: f64::INFINITY,
        x_ref: *bps.last().unwrap(),
        q: q_out,
        a: cur.0,
        b: cur.1,
    });

    let max_amp = segments
        .iter()
        .skip(1)
        .take(p.interval_count())
        .flat_map(|s| [s.a.norm(), s.b.norm()])
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let residual = cur.1.norm() / max_amp;

    let scale = 1.0 / max_amp;
    for s in segments.iter_mut() {
        s.a *= scale;
        s.b *= scale;
    }
    // enforce the outgoing condition exactly; the defect is recorded
    let last = segments.len() - 1;
    segments[last].b = Complex64::new(0.0, 0.0);

    // far-field amplitudes in the absolute phase convention
    // ψ(x → -inf) = ζ_L e^{-ikx}, ψ(x → +inf) = ζ_R e^{+ikx}
    let zeta_left = segments[0].b * (I * kk * bps[0]).exp();
    let zeta_right = segments[last].a * (-I * kk * bps[bps.len() - 1]).exp();

    Ok((segments, residual, zeta_left, zeta_right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasibound::WaveMode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_propagation_is_identity() {
        let p = PiecewisePotential::new(
            WaveMode::Schrodinger,
            vec![-1.0, 2.5],
            vec![c(0.0, 0.0)],
        )
        .unwrap();
        for k in [c(1.3, 0.0), c(0.7, -0.2), c(4.0, -1.0)] {
            let m = transfer_matrix(&p, k).unwrap();
            let id = Matrix2::identity();
            assert!((m.m11 - id.m11).norm() < 1e-12);
            assert!((m.m12 - id.m12).norm() < 1e-12);
            assert!((m.m21 - id.m21).norm() < 1e-12);
            assert!((m.m22 - id.m22).norm() < 1e-12);
        }
    }

    #[test]
    fn unimodular_for_real_barrier() {
        let p = PiecewisePotential::new(
            WaveMode::Schrodinger,
            vec![0.0, 1.0],
            vec![c(7.5, 0.0)],
        )
        .unwrap();
        for k in [c(1.0, 0.0), c(2.4, 0.0), c(3.1, 0.0)] {
            let m = transfer_matrix(&p, k).unwrap();
            assert!((m.det().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unimodular_for_absorbing_slab() {
        let p = PiecewisePotential::new(
            WaveMode::Schrodinger,
            vec![0.0, 2.0],
            vec![c(1.0, -0.8)],
        )
        .unwrap();
        let m = transfer_matrix(&p, c(1.7, 0.0)).unwrap();
        assert!((m.det().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn det_is_unity_for_random_profiles() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for _ in 0..50 {
            let k = c(0.2 + 3.0 * rng.gen::<f64>(), -rng.gen::<f64>());
            let p = PiecewisePotential::new(
                WaveMode::Schrodinger,
                vec![0.0, 0.7, 1.3, 2.0],
                vec![
                    c(4.0 * rng.gen::<f64>(), -rng.gen::<f64>()),
                    c(-2.0 * rng.gen::<f64>(), 0.0),
                    c(3.0 * rng.gen::<f64>(), -0.5 * rng.gen::<f64>()),
                ],
            )
            .unwrap();
            let m = transfer_matrix(&p, k).unwrap();
            assert!((m.det().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn helmholtz_slab_matches_schrodinger_well_at_fixed_k() {
        // ε = const maps onto V = k²(1 - ε) at fixed k: identical local q
        let k = c(1.9, -0.13);
        let eps = c(4.0, 0.5);
        let helm = PiecewisePotential::new(WaveMode::Helmholtz, vec![0.0, 1.7], vec![eps]).unwrap();
        let v = k * k * (Complex64::new(1.0, 0.0) - eps);
        let schr = PiecewisePotential::new(WaveMode::Schrodinger, vec![0.0, 1.7], vec![v]).unwrap();
        let mh = transfer_matrix(&helm, k).unwrap();
        let ms = transfer_matrix(&schr, k).unwrap();
        for (a, b) in [
            (mh.m11, ms.m11),
            (mh.m12, ms.m12),
            (mh.m21, ms.m21),
            (mh.m22, ms.m22),
        ] {
            assert!((a - b).norm() <= 1e-10 * b.norm().max(1.0));
        }
    }

    #[test]
    fn rejects_zero_real_part() {
        let p = PiecewisePotential::new(
            WaveMode::Schrodinger,
            vec![0.0, 1.0],
            vec![c(1.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            transfer_matrix(&p, c(0.0, -1.0)),
            Err(QuasiboundError::InvalidWavenumber)
        ));
    }
}
