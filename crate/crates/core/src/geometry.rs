//! Distance-function formulation of the nonorthogonality bound: the
//! Hilbert-Schmidt distance between unit states and the pseudo-hyperbolic /
//! Poincaré distances between complex energies on the lower half-plane.
//!
//! The bound reads `d_HS(ψ_l, ψ_j) ≥ d_ph(E_l, E_j)`; the right-hand side
//! equals `tanh(d_P/2)` identically.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{inner, vec_norm, Spectrum};

/// Eigenvalues with a roundoff-positive imaginary part up to this size are
/// clamped onto the real axis.
pub const IM_CLAMP: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("state vectors must have unit norm (got {0:.12})")]
    NotNormalized(f64),
    #[error("pseudo-hyperbolic distance undefined: both points equal and real")]
    DegenerateDenominator,
    #[error("Poincaré distance infinite: both points on the real axis")]
    InfiniteDistance,
    #[error("eigenvalue {index} lies in the upper half-plane (Im = {im:.3e})")]
    UpperHalfPlaneEigenvalue { index: usize, im: f64 },
    #[error("invalid ordering: {0}")]
    BadOrdering(String),
}

/// Complex energy on the closed lower half-plane (`Im e ≤ 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint(Complex64);

impl HalfPlanePoint {
    pub fn new(e: Complex64) -> Result<Self, GeometryError> {
        if e.im > IM_CLAMP {
            return Err(GeometryError::UpperHalfPlaneEigenvalue {
                index: 0,
                im: e.im,
            });
        }
        Ok(HalfPlanePoint(Complex64::new(e.re, e.im.min(0.0))))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// Hilbert-Schmidt distance `sqrt(1 - |⟨φ|ψ⟩|²)` between unit vectors:
/// 0 for collinear states, 1 for orthogonal ones.
pub fn d_hs(psi1: &[Complex64], psi2: &[Complex64]) -> Result<f64, GeometryError> {
    for v in [psi1, psi2] {
        let n = vec_norm(v);
        if (n - 1.0).abs() > 1e-10 {
            return Err(GeometryError::NotNormalized(n));
        }
    }
    let ov = inner(psi1, psi2).norm_sqr();
    Ok((1.0 - ov).max(0.0).sqrt().min(1.0))
}

/// Pseudo-hyperbolic distance `|E - E'| / |E* - E'|` on the lower
/// half-plane; lies in [0, 1], reaching 1 only for distinct real points.
pub fn d_ph(e1: HalfPlanePoint, e2: HalfPlanePoint) -> Result<f64, GeometryError> {
    let num = (e1.0 - e2.0).norm();
    let den = (e1.0.conj() - e2.0).norm();
    if den == 0.0 {
        if num == 0.0 {
            // identical real points: distance zero by continuity
            return Ok(0.0);
        }
        return Err(GeometryError::DegenerateDenominator);
    }
    Ok((num / den).min(1.0))
}

/// Poincaré distance `2 arctanh(d_ph)`; unbounded, additive along
/// geodesics, and related to the pseudo-hyperbolic distance by
/// `tanh(d_P/2) = d_ph` exactly.
pub fn d_poincare(e1: HalfPlanePoint, e2: HalfPlanePoint) -> Result<f64, GeometryError> {
    let d = d_ph(e1, e2)?;
    if d >= 1.0 {
        return Err(GeometryError::InfiniteDistance);
    }
    Ok(2.0 * d.atanh())
}

#[derive(Debug, Clone)]
pub struct DistanceCheck {
    pub holds: bool,
    /// `(l, j, d_HS - d_ph)` for every pair `l < j`.
    pub margins: Vec<(usize, usize, f64)>,
}

/// Evaluate `d_HS ≥ d_ph` (equivalently `d_HS ≥ tanh(d_P/2)`) for every
/// eigenstate pair of a spectrum. Eigenvalues with `Im > 1e-12` are
/// rejected; tiny positive imaginary parts are clamped to the real axis.
pub fn check_distance_inequality(spectrum: &Spectrum) -> Result<DistanceCheck, GeometryError> {
    let n = spectrum.dim();
    let mut points = Vec::with_capacity(n);
    for (idx, e) in spectrum.eigenvalues.iter().enumerate() {
        let p = HalfPlanePoint::new(*e).map_err(|_| GeometryError::UpperHalfPlaneEigenvalue {
            index: idx,
            im: e.im,
        })?;
        points.push(p);
    }
    let mut margins = Vec::with_capacity(n * (n - 1) / 2);
    let mut holds = true;
    for l in 0..n {
        for j in l + 1..n {
            let hs = d_hs(&spectrum.right_vectors[l], &spectrum.right_vectors[j])?;
            let ph = d_ph(points[l], points[j])?;
            // the tanh(d_P/2) form is the same number by construction
            if ph < 1.0 {
                debug_assert!((d_poincare(points[l], points[j]).unwrap() / 2.0).tanh() - ph <= 1e-12);
            }
            let margin = hs - ph;
            if margin < -1e-8 {
                holds = false;
            }
            margins.push((l, j, margin));
        }
    }
    Ok(DistanceCheck { holds, margins })
}

#[derive(Debug, Clone)]
pub struct PolygonCheck {
    pub lhs_sum: f64,
    pub rhs_sum: f64,
    pub holds: bool,
}

/// Compare the lengths of two polygon courses through the states listed in
/// `ordering`: `Σ d_HS(ψ_j, ψ_{j+1})` in Hilbert space against
/// `Σ d_ph(E_j, E_{j+1})` in complex energy space. The Hilbert-space length
/// doubles as a cost function when hunting for exceptional points.
pub fn polygon_inequality(
    spectrum: &Spectrum,
    ordering: &[usize],
) -> Result<PolygonCheck, GeometryError> {
    let n = spectrum.dim();
    if ordering.len() < 2 {
        return Err(GeometryError::BadOrdering(
            "ordering needs at least two states".into(),
        ));
    }
    let mut seen = vec![false; n];
    for &i in ordering {
        if i >= n {
            return Err(GeometryError::BadOrdering(format!(
                "state index {i} out of range (dim {n})"
            )));
        }
        if seen[i] {
            return Err(GeometryError::BadOrdering(format!(
                "state index {i} repeated"
            )));
        }
        seen[i] = true;
    }

    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for w in ordering.windows(2) {
        let (a, b) = (w[0], w[1]);
        lhs += d_hs(&spectrum.right_vectors[a], &spectrum.right_vectors[b])?;
        let pa = HalfPlanePoint::new(spectrum.eigenvalues[a]).map_err(|_| {
            GeometryError::UpperHalfPlaneEigenvalue {
                index: a,
                im: spectrum.eigenvalues[a].im,
            }
        })?;
        let pb = HalfPlanePoint::new(spectrum.eigenvalues[b]).map_err(|_| {
            GeometryError::UpperHalfPlaneEigenvalue {
                index: b,
                im: spectrum.eigenvalues[b].im,
            }
        })?;
        rhs += d_ph(pa, pb)?;
    }
    Ok(PolygonCheck {
        lhs_sum: lhs,
        rhs_sum: rhs,
        holds: lhs >= rhs - 1e-8,
    })
}
