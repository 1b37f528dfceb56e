//! Complex dense eigendecomposition: Householder reduction to upper
//! Hessenberg form followed by explicitly shifted QR iteration with
//! Wilkinson shifts (Schur form), then eigenvectors by back-substitution
//! on the triangular factor.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::{ensure_hermitian, inner, vec_norm, LinalgError, DEFAULT_HERMITICITY_TOL};

const ULP: f64 = f64::EPSILON;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Threshold on the largest off-diagonal eigenvector overlap above which a
/// spectrum is flagged as numerically defective (exceptional-point
/// proximity).
pub(crate) const DEFECTIVE_OVERLAP: f64 = 1.0 - 1e-6;

/// Absolute tolerance in eigenvalue space when pairing left eigenvectors
/// (computed from `H†`) with right eigenvectors by eigenvalue conjugation.
pub(crate) const LEFT_MATCH_TOL: f64 = 1e-8;

/// Full eigendecomposition of a non-Hermitian matrix.
///
/// Right and left eigenvectors carry unit conventional norm. Eigenvalues
/// are sorted by ascending real part, ties by ascending imaginary part, and
/// all per-pair arrays follow that order. A spectrum whose eigenvector
/// matrix is numerically singular is returned with `defective = true`
/// rather than as an error.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub right_vectors: Vec<Vec<Complex64>>,
    pub left_vectors: Vec<Vec<Complex64>>,
    pub residual_norms: Vec<f64>,
    pub defective: bool,
    /// Largest distance `|conj(μ) - λ|` used when pairing left and right
    /// eigenvectors.
    pub left_match_error: f64,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Decay rate `γ_j = -2 Im E_j` of eigenstate `j`.
    pub fn rate(&self, j: usize) -> f64 {
        -2.0 * self.eigenvalues[j].im
    }
}

// ── Givens rotations ────────────────────────────────────────────────

#[derive(Clone, Copy)]
struct Rotation {
    c: f64,
    s: Complex64,
}

/// Unitary G = [[c, s], [-conj(s), c]] with real c such that G·(a,b) = (r,0).
fn givens(a: Complex64, b: Complex64) -> (Rotation, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (Rotation { c: 1.0, s: ZERO }, a);
    }
    if an == 0.0 {
        return (
            Rotation {
                c: 0.0,
                s: b.conj() / bn,
            },
            Complex64::new(bn, 0.0),
        );
    }
    let r = an.hypot(bn);
    let phase = a / an;
    (
        Rotation {
            c: an / r,
            s: phase * b.conj() / r,
        },
        phase * r,
    )
}

// ── Hessenberg reduction ────────────────────────────────────────────

fn hessenberg_in_place(t: &mut ComplexMatrix, z: &mut ComplexMatrix) {
    let n = t.dim();
    for k in 0..n.saturating_sub(2) {
        let xnorm = (k + 1..n).map(|i| t[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = t[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;

        // Householder vector u = x - alpha e1 (supported on rows k+1..n)
        let mut u = vec![ZERO; n];
        for i in k + 1..n {
            u[i] = t[(i, k)];
        }
        u[k + 1] -= alpha;
        let unorm2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        if unorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / unorm2;

        // T <- P T  with  P = I - tau u u†
        for j in 0..n {
            let w: Complex64 = (k + 1..n).map(|i| u[i].conj() * t[(i, j)]).sum();
            let w = w * tau;
            for i in k + 1..n {
                let ui = u[i];
                t[(i, j)] -= ui * w;
            }
        }
        // T <- T P
        for i in 0..n {
            let w: Complex64 = (k + 1..n).map(|j| t[(i, j)] * u[j]).sum();
            let w = w * tau;
            for j in k + 1..n {
                t[(i, j)] -= w * u[j].conj();
            }
        }
        // Z <- Z P
        for i in 0..n {
            let w: Complex64 = (k + 1..n).map(|j| z[(i, j)] * u[j]).sum();
            let w = w * tau;
            for j in k + 1..n {
                z[(i, j)] -= w * u[j].conj();
            }
        }
        // clean the annihilated part of column k
        t[(k + 1, k)] = alpha;
        for i in k + 2..n {
            t[(i, k)] = ZERO;
        }
    }
}

// ── Shifted QR iteration ────────────────────────────────────────────

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let mid = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    let e1 = mid + disc;
    let e2 = mid - disc;
    if (e1 - d).norm() < (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// One explicit-shift QR sweep on the active window `l..=m`.
fn qr_sweep(t: &mut ComplexMatrix, z: &mut ComplexMatrix, l: usize, m: usize, sigma: Complex64) {
    let n = t.dim();
    for i in l..=m {
        t[(i, i)] -= sigma;
    }
    let mut rots = Vec::with_capacity(m - l);
    for i in l..m {
        let (g, r) = givens(t[(i, i)], t[(i + 1, i)]);
        for col in i..n {
            let x = t[(i, col)];
            let y = t[(i + 1, col)];
            t[(i, col)] = g.c * x + g.s * y;
            t[(i + 1, col)] = -g.s.conj() * x + g.c * y;
        }
        t[(i, i)] = r;
        t[(i + 1, i)] = ZERO;
        rots.push(g);
    }
    for (idx, g) in rots.iter().enumerate() {
        let i = l + idx;
        let row_hi = (i + 2).min(m + 1);
        for row in 0..row_hi {
            let x = t[(row, i)];
            let y = t[(row, i + 1)];
            t[(row, i)] = g.c * x + g.s.conj() * y;
            t[(row, i + 1)] = -g.s * x + g.c * y;
        }
        for row in 0..n {
            let x = z[(row, i)];
            let y = z[(row, i + 1)];
            z[(row, i)] = g.c * x + g.s.conj() * y;
            z[(row, i + 1)] = -g.s * x + g.c * y;
        }
    }
    for i in l..=m {
        t[(i, i)] += sigma;
    }
}

/// Unitary Schur decomposition `A = Z T Z†` with upper-triangular `T`.
pub(crate) fn schur_decompose(
    a: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix), LinalgError> {
    let n = a.dim();
    let mut t = a.clone();
    let mut z = ComplexMatrix::identity(n);
    if n == 1 {
        return Ok((t, z));
    }
    hessenberg_in_place(&mut t, &mut z);

    let norm_scale = t.norm_max().max(f64::MIN_POSITIVE);
    let sweep_budget = 40 * n;
    let mut sweeps = 0usize;
    let mut stalled = 0usize;
    let mut hi = n - 1;

    loop {
        // locate the unreduced block l..=hi, deflating negligible subdiagonals
        let mut l = hi;
        while l > 0 {
            let sub = t[(l, l - 1)].norm();
            let mut tol = ULP * (t[(l - 1, l - 1)].norm() + t[(l, l)].norm());
            if tol == 0.0 {
                tol = ULP * norm_scale;
            }
            if sub <= tol {
                t[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            // eigenvalue at hi converged
            if hi == 1 {
                break;
            }
            hi -= 1;
            stalled = 0;
            continue;
        }

        if sweeps >= sweep_budget {
            return Err(LinalgError::NonConvergence(sweep_budget));
        }
        let shift = if stalled > 0 && stalled % 12 == 0 {
            // exceptional shift to break rare limit cycles
            let mut mag = t[(hi, hi - 1)].norm();
            if hi >= 2 {
                mag += t[(hi - 1, hi - 2)].norm();
            }
            t[(hi, hi)] + Complex64::new(1.5 * mag, 0.0)
        } else {
            wilkinson_shift(
                t[(hi - 1, hi - 1)],
                t[(hi - 1, hi)],
                t[(hi, hi - 1)],
                t[(hi, hi)],
            )
        };
        qr_sweep(&mut t, &mut z, l, hi, shift);
        sweeps += 1;
        stalled += 1;
    }

    // zero out the strictly lower triangle left over from deflation
    for i in 0..n {
        for j in 0..i {
            t[(i, j)] = ZERO;
        }
    }
    Ok((t, z))
}

// ── Eigenvectors of the triangular factor ───────────────────────────

fn triangular_eigenvectors(t: &ComplexMatrix, z: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    let n = t.dim();
    let tnorm = t.norm_max().max(f64::MIN_POSITIVE);
    let mut vectors = Vec::with_capacity(n);
    for idx in 0..n {
        let lambda = t[(idx, idx)];
        let mut y = vec![ZERO; n];
        y[idx] = ONE;
        for j in (0..idx).rev() {
            let s: Complex64 = (j + 1..=idx).map(|m| t[(j, m)] * y[m]).sum();
            let mut d = t[(j, j)] - lambda;
            let smin = ULP * tnorm.max(lambda.norm());
            if d.norm() < smin {
                d = Complex64::new(smin, 0.0);
            }
            y[j] = -s / d;
            if y[j].norm() > 1e140 {
                let scale = 1e-140;
                for e in y.iter_mut() {
                    *e *= scale;
                }
            }
        }
        let mut v = z.mul_vec(&y);
        let nrm = vec_norm(&v);
        if nrm > 0.0 {
            for e in v.iter_mut() {
                *e /= nrm;
            }
        }
        canonical_phase(&mut v);
        vectors.push(v);
    }
    vectors
}

/// Rotate a unit vector so its largest-magnitude entry is real positive.
fn canonical_phase(v: &mut [Complex64]) {
    let mut imax = 0;
    let mut best = -1.0;
    for (i, e) in v.iter().enumerate() {
        let n = e.norm();
        if n > best {
            best = n;
            imax = i;
        }
    }
    if best > 0.0 {
        let phase = v[imax] / best;
        let rot = phase.conj();
        for e in v.iter_mut() {
            *e *= rot;
        }
    }
}

fn sort_permutation(vals: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&a, &b| {
        vals[a]
            .re
            .total_cmp(&vals[b].re)
            .then(vals[a].im.total_cmp(&vals[b].im))
    });
    idx
}

// ── Public solvers ──────────────────────────────────────────────────

/// Eigenvalues with unit-norm right and left eigenvectors of a general
/// complex matrix.
///
/// Left eigenvectors satisfy `H† |L_j⟩ = conj(E_j) |L_j⟩` and are paired to
/// the right eigenvectors by eigenvalue conjugation. Near an exceptional
/// point the spectrum is flagged `defective` instead of failing, so
/// downstream bound checks can tolerate `|⟨ψ_l|ψ_j⟩| → 1`.
pub fn eig_general(m: &ComplexMatrix) -> Result<Spectrum, LinalgError> {
    m.ensure_finite()?;
    let n = m.dim();
    let (t, z) = schur_decompose(m)?;
    let vals: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let vecs = triangular_eigenvectors(&t, &z);

    let perm = sort_permutation(&vals);
    let eigenvalues: Vec<Complex64> = perm.iter().map(|&i| vals[i]).collect();
    let right_vectors: Vec<Vec<Complex64>> = perm.iter().map(|&i| vecs[i].clone()).collect();

    let residual_norms: Vec<f64> = eigenvalues
        .iter()
        .zip(&right_vectors)
        .map(|(&lambda, v)| {
            let hv = m.mul_vec(v);
            let r: Vec<Complex64> = hv.iter().zip(v).map(|(a, b)| a - lambda * b).collect();
            vec_norm(&r)
        })
        .collect();

    // left eigenvectors from the adjoint problem
    let adj = m.adjoint();
    let (t2, z2) = schur_decompose(&adj)?;
    let lvals: Vec<Complex64> = (0..n).map(|i| t2[(i, i)]).collect();
    let lvecs = triangular_eigenvectors(&t2, &z2);

    let mut used = vec![false; n];
    let mut left_vectors = Vec::with_capacity(n);
    let mut left_match_error = 0.0_f64;
    for &lambda in &eigenvalues {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (k, &mu) in lvals.iter().enumerate() {
            if used[k] {
                continue;
            }
            let d = (mu.conj() - lambda).norm();
            if d < best_d {
                best_d = d;
                best = k;
            }
        }
        used[best] = true;
        left_match_error = left_match_error.max(best_d);
        left_vectors.push(lvecs[best].clone());
    }

    let mut max_overlap = 0.0_f64;
    for l in 0..n {
        for j in l + 1..n {
            max_overlap = max_overlap.max(inner(&right_vectors[l], &right_vectors[j]).norm());
        }
    }
    let defective = max_overlap > DEFECTIVE_OVERLAP || left_match_error > LEFT_MATCH_TOL;

    Ok(Spectrum {
        eigenvalues,
        right_vectors,
        left_vectors,
        residual_norms,
        defective,
        left_match_error,
    })
}

/// Real ascending eigenvalues and orthonormal eigenvectors of a Hermitian
/// matrix. The vectors come from the accumulated unitary transforms, so
/// orthonormality holds to machine precision.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<(Vec<f64>, Vec<Vec<Complex64>>), LinalgError> {
    m.ensure_finite()?;
    ensure_hermitian(m, DEFAULT_HERMITICITY_TOL)?;
    let n = m.dim();
    let (t, z) = schur_decompose(m)?;
    let vals: Vec<f64> = (0..n).map(|i| t[(i, i)].re).collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let eigenvalues: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
    let vectors: Vec<Vec<Complex64>> = idx
        .iter()
        .map(|&col| {
            let mut v: Vec<Complex64> = (0..n).map(|row| z[(row, col)]).collect();
            canonical_phase(&mut v);
            v
        })
        .collect();
    Ok((eigenvalues, vectors))
}
