//! Builders for effective non-Hermitian Hamiltonians `H = H_herm - (i/2) Γ`.
//!
//! Random draws use ChaCha12 seeded from a 64-bit seed with the stream id
//! set to the realization index, so every realization is an independent,
//! reproducible stream. Determinism is guaranteed within this
//! implementation (bit-identical matrices for identical inputs).

use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{ComplexMatrix, LinalgError};

/// Decay-rate interval `(0, 2]` used by the random ensembles.
pub const DEFAULT_DECAY_INTERVAL: (f64, f64) = (0.0, 2.0);

#[derive(Debug, Error)]
pub enum HamiltonianError {
    #[error("invalid ensemble spec: {0}")]
    BadSpec(String),
    #[error("h0 must be Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("coupling vector w must be nonzero")]
    ZeroVector,
    #[error("coupling vector length {got} does not match dimension {dim}")]
    LengthMismatch { got: usize, dim: usize },
    #[error("failed to parse Hamiltonian file: {0}")]
    ParseError(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Which builder produced a Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuilderTag {
    RandomFig1,
    ChainFig1,
    SingleChannel,
    PtDimer,
    FromFile,
}

/// Hermitian part used by the ensemble builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HermitianKind {
    /// Real symmetric matrix with entries drawn uniformly from [0, 1]
    /// (upper triangle including the diagonal, mirrored).
    UniformRandom,
    /// Linear tight-binding chain: zero diagonal, unit nearest-neighbor
    /// coupling, no randomness.
    TightBindingChain,
}

/// Ensemble of `dim`-dimensional Hamiltonians built in the eigenbasis of
/// the decay matrix: `Γ` is diagonal with `decay_rank` nonzero entries
/// drawn uniformly from `decay_interval = (low, high]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub dim: usize,
    pub decay_rank: usize,
    pub hermitian_kind: HermitianKind,
    #[serde(default = "default_interval")]
    pub decay_interval: (f64, f64),
    pub realizations: usize,
    pub seed: u64,
}

fn default_interval() -> (f64, f64) {
    DEFAULT_DECAY_INTERVAL
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<(), HamiltonianError> {
        if self.dim == 0 {
            return Err(HamiltonianError::BadSpec("dim must be positive".into()));
        }
        if self.decay_rank > self.dim {
            return Err(HamiltonianError::BadSpec(format!(
                "decay_rank {} exceeds dim {}",
                self.decay_rank, self.dim
            )));
        }
        let (lo, hi) = self.decay_interval;
        if !(lo >= 0.0 && hi > lo) {
            return Err(HamiltonianError::BadSpec(format!(
                "decay interval must satisfy 0 <= low < high, got ({lo}, {hi})"
            )));
        }
        if self.realizations == 0 {
            return Err(HamiltonianError::BadSpec(
                "realizations must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Effective Hamiltonian with its cached Hermitian part and decay matrix
/// `Γ = i(H - H†)`.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    pub h: ComplexMatrix,
    pub hermitian_part: ComplexMatrix,
    pub gamma: ComplexMatrix,
    pub builder_tag: BuilderTag,
    pub seed: Option<u64>,
}

impl EffectiveHamiltonian {
    /// Assemble `H = H_herm - (i/2) Γ` entrywise; the decomposition is then
    /// exact by construction.
    pub fn from_parts(
        hermitian_part: ComplexMatrix,
        gamma: ComplexMatrix,
        builder_tag: BuilderTag,
        seed: Option<u64>,
    ) -> Self {
        assert_eq!(hermitian_part.dim(), gamma.dim());
        let h = ComplexMatrix::from_fn(hermitian_part.dim(), |i, j| {
            hermitian_part[(i, j)] - Complex64::new(0.0, 0.5) * gamma[(i, j)]
        });
        EffectiveHamiltonian {
            h,
            hermitian_part,
            gamma,
            builder_tag,
            seed,
        }
    }

    /// Wrap an arbitrary matrix, deriving `H_herm = (H + H†)/2` and
    /// `Γ = i(H - H†)`.
    pub fn from_matrix(h: ComplexMatrix, builder_tag: BuilderTag) -> Self {
        let adj = h.adjoint();
        let hermitian_part =
            ComplexMatrix::from_fn(h.dim(), |i, j| (h[(i, j)] + adj[(i, j)]) * 0.5);
        let gamma = ComplexMatrix::from_fn(h.dim(), |i, j| {
            Complex64::new(0.0, 1.0) * (h[(i, j)] - adj[(i, j)])
        });
        EffectiveHamiltonian {
            h,
            hermitian_part,
            gamma,
            builder_tag,
            seed: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }
}

/// One realization of the ensemble: Hermitian part per `hermitian_kind`,
/// diagonal decay matrix with the first `decay_rank` entries uniform in
/// `(low, high]`, remaining entries zero.
pub fn build_fig1(
    spec: &EnsembleSpec,
    realization_index: u64,
) -> Result<EffectiveHamiltonian, HamiltonianError> {
    spec.validate()?;
    if realization_index >= spec.realizations as u64 {
        return Err(HamiltonianError::BadSpec(format!(
            "realization index {} out of range (realizations = {})",
            realization_index, spec.realizations
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    rng.set_stream(realization_index);

    let n = spec.dim;
    let mut herm = ComplexMatrix::zeros(n);
    match spec.hermitian_kind {
        HermitianKind::UniformRandom => {
            // row-major upper triangle including the diagonal
            for i in 0..n {
                for j in i..n {
                    let v = Complex64::new(rng.gen::<f64>(), 0.0);
                    herm[(i, j)] = v;
                    herm[(j, i)] = v;
                }
            }
        }
        HermitianKind::TightBindingChain => {
            for i in 0..n.saturating_sub(1) {
                herm[(i, i + 1)] = Complex64::new(1.0, 0.0);
                herm[(i + 1, i)] = Complex64::new(1.0, 0.0);
            }
        }
    }

    let (lo, hi) = spec.decay_interval;
    let mut gamma = ComplexMatrix::zeros(n);
    for i in 0..spec.decay_rank {
        // map u ∈ [0, 1) to (low, high]
        let u = rng.gen::<f64>();
        gamma[(i, i)] = Complex64::new(lo + (hi - lo) * (1.0 - u), 0.0);
    }

    let tag = match spec.hermitian_kind {
        HermitianKind::UniformRandom => BuilderTag::RandomFig1,
        HermitianKind::TightBindingChain => BuilderTag::ChainFig1,
    };
    Ok(EffectiveHamiltonian::from_parts(
        herm,
        gamma,
        tag,
        Some(spec.seed),
    ))
}

/// Single decay channel: `H = h0 - (i/2) w w†`, so `Γ = w w†` has rank 1.
pub fn build_single_channel(
    h0: &ComplexMatrix,
    w: &[Complex64],
) -> Result<EffectiveHamiltonian, HamiltonianError> {
    let n = h0.dim();
    if w.len() != n {
        return Err(HamiltonianError::LengthMismatch { got: w.len(), dim: n });
    }
    let defect = h0.hermiticity_defect();
    if defect > 1e-12 * h0.norm_max().max(1.0) {
        return Err(HamiltonianError::NotHermitian(defect));
    }
    if w.iter().all(|z| z.norm() == 0.0) {
        return Err(HamiltonianError::ZeroVector);
    }
    let gamma = ComplexMatrix::from_fn(n, |i, j| w[i] * w[j].conj());
    Ok(EffectiveHamiltonian::from_parts(
        h0.clone(),
        gamma,
        BuilderTag::SingleChannel,
        None,
    ))
}

/// PT-symmetric dimer `H = [[+i γ/2, g], [g, -i γ/2]]` with gain on site 1
/// and loss on site 2; the eigenvalues `±sqrt(g² - γ²/4)` coalesce at
/// `g = γ/2`.
pub fn build_pt_dimer(g: f64, gamma: f64) -> EffectiveHamiltonian {
    let h = ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.0, gamma / 2.0), Complex64::new(g, 0.0)],
        vec![Complex64::new(g, 0.0), Complex64::new(0.0, -gamma / 2.0)],
    ]);
    let mut out = EffectiveHamiltonian::from_matrix(h, BuilderTag::PtDimer);
    out.seed = None;
    out
}

/// Load a Hamiltonian from the JSON matrix form
/// `{ "dim": n, "re": [[...]], "im": [[...]] }`.
pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<EffectiveHamiltonian, HamiltonianError> {
    let text = std::fs::read_to_string(path)?;
    let m = ComplexMatrix::from_json_str(&text).map_err(|e| match e {
        LinalgError::Parse(msg) => HamiltonianError::ParseError(msg),
        other => HamiltonianError::ParseError(other.to_string()),
    })?;
    Ok(EffectiveHamiltonian::from_matrix(m, BuilderTag::FromFile))
}

/// Save the full matrix `H` in the JSON matrix form.
pub fn save_hamiltonian(
    h: &EffectiveHamiltonian,
    path: impl AsRef<Path>,
) -> Result<(), HamiltonianError> {
    h.h.save_json(path).map_err(|e| match e {
        LinalgError::Io(io) => HamiltonianError::Io(io),
        other => HamiltonianError::ParseError(other.to_string()),
    })
}
