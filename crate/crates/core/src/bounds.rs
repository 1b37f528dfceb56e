//! Overlap and bound computations for effective Hamiltonians: the
//! Lee-Wolfenstein bound on eigenstate overlaps, its normalized form `ξ`,
//! ensemble averages of `⟨ξ⟩` against the `1/rank Γ` prediction, and the
//! biorthogonal reformulation of the bound.
//!
//! Conventions: eigenstates carry unit conventional norm, detunings are
//! `Δ_lj = Re E_l - Re E_j`, and decay rates are `γ_j = -2 Im E_j`.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::hamiltonian::{build_fig1, EffectiveHamiltonian, EnsembleSpec, HamiltonianError};
use crate::linalg::{
    eig_general, inner, numerical_rank, ComplexMatrix, LinalgError, Spectrum, DEFAULT_RANK_REL_TOL,
};

/// Below this magnitude a rate or detuning counts as zero when deciding
/// whether a `ξ` entry is a 0/0 and therefore undefined.
const ZERO_MAGNITUDE: f64 = 1e-12;
/// A pair with both `lw_rhs` and `|overlap|²` below this is a numerical 0/0.
const UNDEFINED_FLOOR: f64 = 1e-14;
/// `|⟨L_j|R_j⟩|` below this triggers [`BoundsError::EigenvalueMatchFailure`].
const EP_OVERLAP_FLOOR: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error("all ξ entries are undefined (no decaying pairs)")]
    AllUndefined,
    #[error("biorthogonal normalization breaks down near an exceptional point: |⟨L_{state}|R_{state}⟩| = {magnitude:.3e}")]
    EigenvalueMatchFailure { state: usize, magnitude: f64 },
    #[error("invalid sweep request: {0}")]
    BadSweep(String),
}

/// Sign convention for the decay rates entering the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateConvention {
    /// `γ_j = -2 Im E_j` (decaying systems).
    Signed,
    /// `γ_j = |2 Im E_j|`, the convention under which the bound also holds
    /// for negative semi-definite decay matrices (pure gain).
    Absolute,
}

/// Pairwise overlap data of the right eigenstates together with the
/// Lee-Wolfenstein right-hand side and the normalized bound `ξ`.
///
/// Entries of `lw_rhs` and `xi` that are undefined (vanishing denominator
/// or a 0/0 ratio) are stored as NaN.
#[derive(Debug, Clone)]
pub struct OverlapReport {
    pub dim: usize,
    pub eigenvalues: Vec<Complex64>,
    /// `⟨ψ_l|ψ_j⟩`, Hermitian with unit diagonal.
    pub overlaps: ComplexMatrix,
    /// `Δ_lj = Re E_l - Re E_j`.
    pub detunings: Vec<Vec<f64>>,
    /// `γ_j` per state, under the requested rate convention.
    pub rates: Vec<f64>,
    /// `γ_l γ_j / (Δ_lj² + (γ_l + γ_j)²/4)`; NaN where undefined.
    pub lw_rhs: Vec<Vec<f64>>,
    /// `|⟨ψ_l|ψ_j⟩|² / lw_rhs`; NaN where undefined, `inf` where the bound
    /// is violated with a vanishing right-hand side.
    pub xi: Vec<Vec<f64>>,
    pub gamma_rank: usize,
    pub defective: bool,
}

impl OverlapReport {
    /// Iterate over the defined upper-triangle ξ entries as `(l, j, ξ)`.
    pub fn defined_xi(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |l| {
            (l + 1..self.dim).filter_map(move |j| {
                let v = self.xi[l][j];
                (!v.is_nan()).then_some((l, j, v))
            })
        })
    }

    pub fn undefined_count(&self) -> usize {
        let total = self.dim * (self.dim - 1) / 2;
        total - self.defined_xi().count()
    }
}

/// Overlap report with the default signed rate convention.
pub fn overlap_report(h: &EffectiveHamiltonian) -> Result<OverlapReport, BoundsError> {
    overlap_report_with(h, RateConvention::Signed)
}

pub fn overlap_report_with(
    h: &EffectiveHamiltonian,
    convention: RateConvention,
) -> Result<OverlapReport, BoundsError> {
    let spectrum = eig_general(&h.h)?;
    let n = spectrum.dim();

    let mut overlaps = ComplexMatrix::identity(n);
    for l in 0..n {
        for j in l + 1..n {
            let ov = inner(&spectrum.right_vectors[l], &spectrum.right_vectors[j]);
            overlaps[(l, j)] = ov;
            overlaps[(j, l)] = ov.conj();
        }
    }

    let rates: Vec<f64> = (0..n)
        .map(|j| match convention {
            RateConvention::Signed => spectrum.rate(j),
            RateConvention::Absolute => spectrum.rate(j).abs(),
        })
        .collect();

    let mut detunings = vec![vec![0.0; n]; n];
    let mut lw_rhs = vec![vec![f64::NAN; n]; n];
    let mut xi = vec![vec![f64::NAN; n]; n];
    for l in 0..n {
        for j in 0..n {
            let delta = spectrum.eigenvalues[l].re - spectrum.eigenvalues[j].re;
            detunings[l][j] = delta;
            if l == j {
                continue;
            }
            // snap roundoff-level rates to zero so numerically Hermitian
            // spectra give an exact 0 numerator instead of a tiny value of
            // arbitrary sign
            let snap = |g: f64| if g.abs() <= ZERO_MAGNITUDE { 0.0 } else { g };
            let gl = snap(rates[l]);
            let gj = snap(rates[j]);
            let denom = delta * delta + 0.25 * (gl + gj) * (gl + gj);
            if denom <= 0.0 {
                continue; // lw_rhs undefined
            }
            let rhs = gl * gj / denom;
            lw_rhs[l][j] = rhs;

            // 0/0 cases are excluded from ξ
            let degenerate_rate_pair =
                (gl.abs() <= ZERO_MAGNITUDE || gj.abs() <= ZERO_MAGNITUDE)
                    && delta.abs() <= ZERO_MAGNITUDE;
            let ov_sq = overlaps[(l, j)].norm_sqr();
            let numerical_zero_over_zero = rhs.abs() <= UNDEFINED_FLOOR && ov_sq <= UNDEFINED_FLOOR;
            if degenerate_rate_pair || numerical_zero_over_zero {
                continue;
            }
            xi[l][j] = if rhs == 0.0 {
                f64::INFINITY
            } else {
                ov_sq / rhs
            };
        }
    }

    let gamma_rank = numerical_rank(&h.gamma, DEFAULT_RANK_REL_TOL)?;
    Ok(OverlapReport {
        dim: n,
        eigenvalues: spectrum.eigenvalues,
        overlaps,
        detunings,
        rates,
        lw_rhs,
        xi,
        gamma_rank,
        defective: spectrum.defective,
    })
}

/// Outcome of checking `ξ_lj ≤ 1` for all pairs.
#[derive(Debug, Clone)]
pub struct LwCheck {
    pub holds: bool,
    /// Largest defined ξ; NaN when every entry is undefined.
    pub max_xi: f64,
    pub violating_pairs: Vec<(usize, usize, f64)>,
}

/// `holds` iff every defined ξ is at most `1 + tol`; undefined entries are
/// vacuously fine. A negative ξ (nonzero overlap against a negative
/// right-hand side, possible only with gain and loss together) also counts
/// as a violation.
pub fn check_lw(report: &OverlapReport, tol: f64) -> LwCheck {
    let mut max_xi = f64::NAN;
    let mut violating = Vec::new();
    for (l, j, v) in report.defined_xi() {
        if max_xi.is_nan() || v > max_xi {
            max_xi = v;
        }
        if v > 1.0 + tol || v < 0.0 {
            violating.push((l, j, v));
        }
    }
    LwCheck {
        holds: violating.is_empty(),
        max_xi,
        violating_pairs: violating,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct XiAverage {
    pub mean: f64,
    pub defined_count: usize,
    pub undefined_count: usize,
}

/// Mean of the defined upper-triangle ξ entries.
pub fn xi_average(report: &OverlapReport) -> Result<XiAverage, BoundsError> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for (_, _, v) in report.defined_xi() {
        sum += v;
        count += 1;
    }
    if count == 0 {
        return Err(BoundsError::AllUndefined);
    }
    Ok(XiAverage {
        mean: sum / count as f64,
        defined_count: count,
        undefined_count: report.undefined_count(),
    })
}

/// One row of an ensemble sweep over decay ranks.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub decay_rank: usize,
    pub mean_xi: f64,
    /// Sample standard deviation over realizations (0 for a single one).
    pub std_xi: f64,
    pub prediction: f64,
    pub realizations: usize,
}

/// For every requested rank `M`, run `spec.realizations` independent
/// realizations of the ensemble, average `⟨ξ⟩`, and compare against the
/// `1/M` prediction. Realizations are evaluated in parallel and aggregated
/// in realization order, so results are deterministic.
pub fn ensemble_sweep(
    spec: &EnsembleSpec,
    m_values: &[usize],
) -> Result<Vec<SweepRow>, BoundsError> {
    spec.validate().map_err(BoundsError::Hamiltonian)?;
    for &m in m_values {
        if m < 1 || m > spec.dim {
            return Err(BoundsError::BadSweep(format!(
                "rank {m} outside [1, {}]",
                spec.dim
            )));
        }
    }
    let mut rows = Vec::with_capacity(m_values.len());
    for &m in m_values {
        let mut sub = spec.clone();
        sub.decay_rank = m;
        let means: Vec<f64> = (0..spec.realizations as u64)
            .into_par_iter()
            .map(|r| {
                let h = build_fig1(&sub, r)?;
                let report = overlap_report(&h)?;
                Ok(xi_average(&report)?.mean)
            })
            .collect::<Result<Vec<_>, BoundsError>>()?;
        let n = means.len() as f64;
        let mean = means.iter().sum::<f64>() / n;
        let var = if means.len() > 1 {
            means.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        rows.push(SweepRow {
            decay_rank: m,
            mean_xi: mean,
            std_xi: var.sqrt(),
            prediction: 1.0 / m as f64,
            realizations: means.len(),
        });
    }
    Ok(rows)
}

/// Biorthogonal overlap data: the overlap matrix
/// `O_lj = ⟨R_j|R_l⟩⟨L_l|L_j⟩ / (⟨R_j|L_j⟩⟨L_l|R_l⟩)` with unit-norm right
/// and left eigenvectors, and its normalized magnitude
/// `|O_lj| / sqrt(O_ll O_jj)`.
#[derive(Debug, Clone)]
pub struct BiorthReport {
    pub dim: usize,
    pub o_matrix: ComplexMatrix,
    pub normalized_o: Vec<Vec<f64>>,
    pub right_overlaps: ComplexMatrix,
    pub left_overlaps: ComplexMatrix,
    /// `1/|⟨L_j|R_j⟩|`, the eigenvalue-sensitivity (Petermann-type) factor.
    pub sensitivity: Vec<f64>,
}

pub fn biorth_report(h: &EffectiveHamiltonian) -> Result<BiorthReport, BoundsError> {
    let spectrum = eig_general(&h.h)?;
    biorth_report_from_spectrum(&spectrum)
}

pub fn biorth_report_from_spectrum(spectrum: &Spectrum) -> Result<BiorthReport, BoundsError> {
    let n = spectrum.dim();
    let mut lr = Vec::with_capacity(n); // ⟨L_j|R_j⟩
    for j in 0..n {
        let d = inner(&spectrum.left_vectors[j], &spectrum.right_vectors[j]);
        if d.norm() < EP_OVERLAP_FLOOR {
            return Err(BoundsError::EigenvalueMatchFailure {
                state: j,
                magnitude: d.norm(),
            });
        }
        lr.push(d);
    }

    let mut right_overlaps = ComplexMatrix::identity(n);
    let mut left_overlaps = ComplexMatrix::identity(n);
    for l in 0..n {
        for j in 0..n {
            if l != j {
                right_overlaps[(l, j)] =
                    inner(&spectrum.right_vectors[l], &spectrum.right_vectors[j]);
                left_overlaps[(l, j)] = inner(&spectrum.left_vectors[l], &spectrum.left_vectors[j]);
            }
        }
    }

    let mut o = ComplexMatrix::zeros(n);
    for l in 0..n {
        for j in 0..n {
            // ⟨R_j|L_j⟩ = conj(⟨L_j|R_j⟩)
            let num = right_overlaps[(j, l)] * left_overlaps[(l, j)];
            let den = lr[j].conj() * lr[l];
            o[(l, j)] = num / den;
        }
    }

    let mut normalized = vec![vec![0.0; n]; n];
    for l in 0..n {
        for j in 0..n {
            let dll = o[(l, l)].re.max(f64::MIN_POSITIVE);
            let djj = o[(j, j)].re.max(f64::MIN_POSITIVE);
            normalized[l][j] = o[(l, j)].norm() / (dll * djj).sqrt();
            // identity |O_lj|/sqrt(O_ll O_jj) = |⟨R_l|R_j⟩||⟨L_l|L_j⟩|
            let product = right_overlaps[(l, j)].norm() * left_overlaps[(l, j)].norm();
            debug_assert!(
                (normalized[l][j] - product).abs() <= 1e-10,
                "biorthogonal identity defect {:.2e}",
                (normalized[l][j] - product).abs()
            );
        }
    }

    let sensitivity = lr.iter().map(|d| 1.0 / d.norm()).collect();
    Ok(BiorthReport {
        dim: n,
        o_matrix: o,
        normalized_o: normalized,
        right_overlaps,
        left_overlaps,
        sensitivity,
    })
}
