//! 1D quasibound states of piecewise-constant complex potentials
//! (Schrödinger mode) and permittivity profiles (Helmholtz mode) with
//! outgoing-wave conditions.
//!
//! Units: `ħ = 2m = 1`, so the Schrödinger dispersion is `E = k²` and the
//! local wavenumber is `q = sqrt(k² - V)`; `c = 1`, so the Helmholtz
//! dispersion is `ω = k` and `q = k sqrt(ε)`. The branch of every local
//! wavenumber is fixed to `Re q ≥ 0`, ties broken by `Im q ≥ 0`.
//!
//! Sign conventions for dissipation: `Im V ≤ 0` absorbs in Schrödinger
//! mode, `Im ε ≥ 0` absorbs in Helmholtz mode. Profiles with gain are
//! accepted but can be detected via [`PiecewisePotential::has_gain`]; the
//! bounds need not hold for them.

mod forms;
mod search;
mod transfer;

pub use forms::{
    backflow_scan, current, hermitian_form, modified_bound_check, volume_overlap, BackflowSample,
    ModifiedBound, WaveComponent,
};
pub use search::{find_resonances, find_resonances_with, SearchBox, SearchOptions};
pub use transfer::{transfer_matrix, Matrix2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Error)]
pub enum QuasiboundError {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("wavenumber must have nonzero real part")]
    InvalidWavenumber,
    #[error("local wavenumber vanishes exactly in region {region}; branch ambiguous")]
    BranchAmbiguity { region: usize },
    #[error("no quasibound states found in the search box")]
    NoRootsFound,
    #[error("{found} states found, exceeding the requested maximum {max}")]
    MaxStatesExceeded { found: usize, max: usize },
    #[error("root count mismatch: {found} polished roots vs winding number {winding}")]
    RootCountMismatch { found: usize, winding: i64 },
    #[error("invalid search box: {0}")]
    InvalidBox(String),
    #[error("region [{a}, {b}] does not contain the potential support [{lo}, {hi}]")]
    RegionTooSmall { a: f64, b: f64, lo: f64, hi: f64 },
    #[error("invalid region: bounds must satisfy a < b and be finite")]
    InvalidRegion,
    #[error("states live on different potentials or modes")]
    IncompatibleStates,
    #[error("states must be distinct")]
    StatesNotDistinct,
    #[error("bound right-hand side vanishes")]
    ZeroRhs,
}

/// Which wave equation a profile belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveMode {
    Schrodinger,
    Helmholtz,
}

/// Piecewise-constant profile on `K ≥ 1` contiguous intervals with free
/// space (`V = 0` or `ε = 1`) extending to infinity on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePotential {
    mode: WaveMode,
    breakpoints: Vec<f64>,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct PotentialJson {
    mode: WaveMode,
    breakpoints: Vec<f64>,
    values_re: Vec<f64>,
    values_im: Vec<f64>,
}

impl PiecewisePotential {
    pub fn new(
        mode: WaveMode,
        breakpoints: Vec<f64>,
        values: Vec<Complex64>,
    ) -> Result<Self, QuasiboundError> {
        if values.is_empty() {
            return Err(QuasiboundError::InvalidPotential(
                "at least one interval required".into(),
            ));
        }
        if breakpoints.len() != values.len() + 1 {
            return Err(QuasiboundError::InvalidPotential(format!(
                "{} breakpoints do not delimit {} intervals",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.iter().any(|x| !x.is_finite())
            || values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(QuasiboundError::InvalidPotential(
                "breakpoints and values must be finite".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QuasiboundError::InvalidPotential(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(PiecewisePotential {
            mode,
            breakpoints,
            values,
        })
    }

    pub fn mode(&self) -> WaveMode {
        self.mode
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn interval_count(&self) -> usize {
        self.values.len()
    }

    /// Support of the non-free part: `[x_0, x_K]`.
    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    /// Free-space value outside the support.
    pub fn background(&self) -> Complex64 {
        match self.mode {
            WaveMode::Schrodinger => ZERO,
            WaveMode::Helmholtz => Complex64::new(1.0, 0.0),
        }
    }

    /// Value on region index `r`, where region 0 is the left exterior,
    /// regions `1..=K` the intervals, and region `K+1` the right exterior.
    pub fn region_value(&self, r: usize) -> Complex64 {
        if r == 0 || r == self.values.len() + 1 {
            self.background()
        } else {
            self.values[r - 1]
        }
    }

    pub fn region_count(&self) -> usize {
        self.values.len() + 2
    }

    /// Region index containing `x` (boundary points belong to the region on
    /// their right).
    pub fn region_of(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&b| b <= x)
    }

    /// True if any interval has amplifying sign (`Im V > 0` in Schrödinger
    /// mode, `Im ε < 0` in Helmholtz mode).
    pub fn has_gain(&self) -> bool {
        match self.mode {
            WaveMode::Schrodinger => self.values.iter().any(|v| v.im > 0.0),
            WaveMode::Helmholtz => self.values.iter().any(|v| v.im < 0.0),
        }
    }

    pub fn has_absorption(&self) -> bool {
        match self.mode {
            WaveMode::Schrodinger => self.values.iter().any(|v| v.im < 0.0),
            WaveMode::Helmholtz => self.values.iter().any(|v| v.im > 0.0),
        }
    }

    /// Local wavenumber on region `r` at global wavenumber `k`.
    pub fn local_q(&self, r: usize, k: Complex64) -> Result<Complex64, QuasiboundError> {
        let q = match self.mode {
            WaveMode::Schrodinger => {
                let v = self.region_value(r);
                branch_sqrt(k * k - v)
            }
            WaveMode::Helmholtz => {
                if r == 0 || r == self.values.len() + 1 {
                    // exterior ε = 1: q = k exactly, no sqrt roundoff
                    normalize_branch(k)
                } else {
                    normalize_branch(k * branch_sqrt(self.region_value(r)))
                }
            }
        };
        if q == ZERO {
            return Err(QuasiboundError::BranchAmbiguity { region: r });
        }
        Ok(q)
    }

    pub fn to_json_string(&self) -> String {
        let json = PotentialJson {
            mode: self.mode,
            breakpoints: self.breakpoints.clone(),
            values_re: self.values.iter().map(|v| v.re).collect(),
            values_im: self.values.iter().map(|v| v.im).collect(),
        };
        serde_json::to_string_pretty(&json).expect("potential serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self, QuasiboundError> {
        let json: PotentialJson = serde_json::from_str(s)
            .map_err(|e| QuasiboundError::InvalidPotential(e.to_string()))?;
        if json.values_re.len() != json.values_im.len() {
            return Err(QuasiboundError::InvalidPotential(
                "values_re and values_im must have equal length".into(),
            ));
        }
        let values = json
            .values_re
            .iter()
            .zip(&json.values_im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        Self::new(json.mode, json.breakpoints, values)
    }
}

/// Principal square root normalized to `Re q ≥ 0`, ties broken by `Im q ≥ 0`.
pub(crate) fn branch_sqrt(z: Complex64) -> Complex64 {
    normalize_branch(z.sqrt())
}

pub(crate) fn normalize_branch(q: Complex64) -> Complex64 {
    if q.re < 0.0 || (q.re == 0.0 && q.im < 0.0) {
        -q
    } else {
        q
    }
}

/// One region of a solved quasibound state: amplitudes of the two movers
/// `a e^{iq(x - x_ref)} + b e^{-iq(x - x_ref)}`.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    /// Left edge (`-inf` for the left exterior).
    pub x_left: f64,
    /// Right edge (`+inf` for the right exterior).
    pub x_right: f64,
    /// Phase reference point of the mover basis.
    pub x_ref: f64,
    pub q: Complex64,
    pub a: Complex64,
    pub b: Complex64,
}

/// A quasibound state: complex wavenumber with `Re k > 0, Im k ≤ 0`, purely
/// outgoing exterior waves, and per-region mover amplitudes normalized so
/// the largest interior amplitude has unit magnitude.
#[derive(Debug, Clone)]
pub struct QuasiboundState {
    pub mode: WaveMode,
    pub k: Complex64,
    /// `E = k²` (Schrödinger) or `ω = k` (Helmholtz).
    pub energy_or_freq: Complex64,
    pub segments: Vec<Segment>,
    /// Amplitude of `e^{-ikx}` far to the left (absolute phase convention).
    pub zeta_left: Complex64,
    /// Amplitude of `e^{+ikx}` far to the right.
    pub zeta_right: Complex64,
    /// Outgoing-wave boundary defect relative to the largest amplitude.
    pub residual: f64,
    pub(crate) breakpoints: Vec<f64>,
    pub(crate) region_values: Vec<Complex64>,
}

impl QuasiboundState {
    /// Wavefunction value and derivative at `x`.
    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        let r = self.breakpoints.partition_point(|&b| b <= x);
        let seg = &self.segments[r];
        let iq = Complex64::new(0.0, 1.0) * seg.q;
        let plus = (iq * (x - seg.x_ref)).exp();
        let minus = (-iq * (x - seg.x_ref)).exp();
        let psi = seg.a * plus + seg.b * minus;
        let dpsi = iq * (seg.a * plus - seg.b * minus);
        (psi, dpsi)
    }

    /// Decay rate in the wavenumber convention, `γ = -2 Im k`.
    pub fn rate_k(&self) -> f64 {
        -2.0 * self.k.im
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub(crate) fn same_family(&self, other: &QuasiboundState) -> bool {
        self.mode == other.mode
            && self.breakpoints == other.breakpoints
            && self.region_values == other.region_values
    }

    /// Value of the profile on region `r` (exterior regions return the
    /// background value).
    pub(crate) fn region_value(&self, r: usize) -> Complex64 {
        if r == 0 || r == self.region_values.len() + 1 {
            match self.mode {
                WaveMode::Schrodinger => ZERO,
                WaveMode::Helmholtz => Complex64::new(1.0, 0.0),
            }
        } else {
            self.region_values[r - 1]
        }
    }
}

/// Integration region `Ω = [a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub a: f64,
    pub b: f64,
}

impl Region {
    pub fn new(a: f64, b: f64) -> Result<Self, QuasiboundError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(QuasiboundError::InvalidRegion);
        }
        Ok(Region { a, b })
    }

    pub(crate) fn contains_support(&self, lo: f64, hi: f64) -> bool {
        self.a <= lo && self.b >= hi
    }
}
