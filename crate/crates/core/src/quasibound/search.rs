//! Resonance search: coarse grid scan of `|M₂₂(k)|` over a rectangle in
//! the lower-right complex-k quadrant seeds a complex Newton polish with a
//! numerical derivative; an argument-principle winding count over the box
//! boundary cross-checks that no root was missed. `M₂₂(k)` is entire in
//! `k` for piecewise-constant profiles (its entries are even functions of
//! every interior local wavenumber), so both Newton and the winding count
//! are branch-safe.

use num_complex::Complex64;
use rayon::prelude::*;

use super::transfer::{build_segments, transfer_matrix_raw};
use super::{PiecewisePotential, QuasiboundState, QuasiboundError, WaveMode};

/// Rectangle `[re_min, re_max] × [im_min, im_max]` in the complex k plane,
/// restricted to `re_min > 0`, `im_max ≤ 0` (decaying states).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SearchBox {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Result<Self, QuasiboundError> {
        let b = SearchBox {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
        };
        if !(b.re_min > 0.0 && b.re_min < b.re_max && b.im_min < b.im_max && b.im_max <= 0.0) {
            return Err(QuasiboundError::InvalidBox(format!(
                "need 0 < re_min < re_max and im_min < im_max ≤ 0, got {b:?}"
            )));
        }
        Ok(b)
    }

    fn contains(&self, k: Complex64, pad: f64) -> bool {
        k.re >= self.re_min - pad
            && k.re <= self.re_max + pad
            && k.im >= self.im_min - pad
            && k.im <= self.im_max + pad
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Base grid resolution (real x imaginary direction).
    pub grid: (usize, usize),
    /// Newton iteration cap per seed.
    pub max_newton: usize,
    /// Roots closer than this are merged.
    pub dedup_radius: f64,
    /// Acceptable outgoing-wave defect of a polished root, relative to the
    /// largest interior amplitude (a scale-free measure of `|M₂₂|`).
    pub root_rel_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            grid: (200, 100),
            max_newton: 60,
            dedup_radius: 1e-8,
            root_rel_tol: 1e-10,
        }
    }
}

fn m22(p: &PiecewisePotential, k: Complex64) -> Result<Complex64, QuasiboundError> {
    Ok(transfer_matrix_raw(p, k)?.m22)
}

/// Quasibound states inside `search_box`, sorted by ascending `Re k`.
pub fn find_resonances(
    p: &PiecewisePotential,
    search_box: SearchBox,
    max_states: usize,
) -> Result<Vec<QuasiboundState>, QuasiboundError> {
    find_resonances_with(p, search_box, max_states, &SearchOptions::default())
}

pub fn find_resonances_with(
    p: &PiecewisePotential,
    search_box: SearchBox,
    max_states: usize,
    opts: &SearchOptions,
) -> Result<Vec<QuasiboundState>, QuasiboundError> {
    let mut last_counts = (0usize, 0i64);
    for attempt in 0..3u32 {
        let factor = 1usize << attempt;
        let grid = (opts.grid.0 * factor, opts.grid.1 * factor);
        let roots = polished_roots(p, search_box, grid, opts)?;
        let winding = winding_count(p, search_box, 8 * grid.0.max(grid.1))?;
        if winding == roots.len() as i64 {
            if roots.is_empty() {
                return Err(QuasiboundError::NoRootsFound);
            }
            if roots.len() > max_states {
                return Err(QuasiboundError::MaxStatesExceeded {
                    found: roots.len(),
                    max: max_states,
                });
            }
            return roots.into_iter().map(|k| build_state(p, k)).collect();
        }
        last_counts = (roots.len(), winding);
    }
    Err(QuasiboundError::RootCountMismatch {
        found: last_counts.0,
        winding: last_counts.1,
    })
}

fn polished_roots(
    p: &PiecewisePotential,
    bx: SearchBox,
    grid: (usize, usize),
    opts: &SearchOptions,
) -> Result<Vec<Complex64>, QuasiboundError> {
    let (nr, ni) = grid;
    let dre = (bx.re_max - bx.re_min) / nr as f64;
    let dim = (bx.im_max - bx.im_min) / ni as f64;
    let node = |i: usize, j: usize| {
        Complex64::new(
            bx.re_min + (i as f64 + 0.5) * dre,
            bx.im_min + (j as f64 + 0.5) * dim,
        )
    };

    let mags: Vec<Vec<f64>> = (0..nr)
        .into_par_iter()
        .map(|i| {
            (0..ni)
                .map(|j| m22(p, node(i, j)).map(|v| v.norm()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    // local minima of |M22| on the grid seed the Newton polish
    let mut seeds = Vec::new();
    for i in 0..nr {
        for j in 0..ni {
            let v = mags[i][j];
            let mut is_min = true;
            'neigh: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii < 0 || jj < 0 || ii >= nr as i64 || jj >= ni as i64 {
                        continue;
                    }
                    if mags[ii as usize][jj as usize] < v {
                        is_min = false;
                        break 'neigh;
                    }
                }
            }
            if is_min {
                seeds.push(node(i, j));
            }
        }
    }

    let polished: Vec<Option<Complex64>> = seeds
        .par_iter()
        .map(|&k0| newton_polish(p, k0, opts))
        .collect();

    let mut candidates: Vec<Complex64> = polished
        .into_iter()
        .flatten()
        .filter(|k| bx.contains(*k, 1e-9))
        .collect();
    candidates.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    candidates.dedup_by(|a, b| (*a - *b).norm() <= opts.dedup_radius);

    // keep only candidates that genuinely solve the outgoing-wave problem;
    // the relative defect is a scale-free measure of |M22| at the root
    let roots = candidates
        .into_iter()
        .filter(|&k| match build_segments(p, k) {
            Ok((_, residual, _, _)) => residual <= opts.root_rel_tol,
            Err(_) => false,
        })
        .collect();
    Ok(roots)
}

/// Newton iteration with a numerical derivative, converging on step size
/// (the outgoing-defect residual decides afterwards whether the end point
/// is a root).
fn newton_polish(
    p: &PiecewisePotential,
    mut k: Complex64,
    opts: &SearchOptions,
) -> Option<Complex64> {
    for _ in 0..opts.max_newton {
        let f = m22(p, k).ok()?;
        let h = 1e-7 * k.norm().max(1.0);
        let fp = m22(p, k + Complex64::new(h, 0.0)).ok()?;
        let fm = m22(p, k - Complex64::new(h, 0.0)).ok()?;
        let df = (fp - fm) / (2.0 * h);
        if df.norm() == 0.0 {
            return None;
        }
        let step = f / df;
        k -= step;
        if k.re <= 0.0 || !k.re.is_finite() || !k.im.is_finite() {
            return None;
        }
        if step.norm() <= 1e-13 * k.norm().max(1e-9) {
            return Some(k);
        }
    }
    Some(k)
}

/// Winding number of `M₂₂` around the box boundary, counted by tracking
/// the phase along adaptively refined segments.
fn winding_count(
    p: &PiecewisePotential,
    bx: SearchBox,
    samples_per_edge: usize,
) -> Result<i64, QuasiboundError> {
    let corners = [
        Complex64::new(bx.re_min, bx.im_min),
        Complex64::new(bx.re_max, bx.im_min),
        Complex64::new(bx.re_max, bx.im_max),
        Complex64::new(bx.re_min, bx.im_max),
    ];
    let mut total = 0.0_f64;
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        let mut prev_k = a;
        let mut prev_f = m22(p, prev_k)?;
        for s in 1..=samples_per_edge {
            let t = s as f64 / samples_per_edge as f64;
            let k = a + (b - a) * t;
            let f = m22(p, k)?;
            total += phase_step(p, prev_k, prev_f, k, f, 0)?;
            prev_k = k;
            prev_f = f;
        }
    }
    let w = total / std::f64::consts::TAU;
    let rounded = w.round();
    if (w - rounded).abs() > 0.25 {
        // phase tracking failed; report a count that cannot match so the
        // caller densifies the grid
        return Ok(i64::MIN);
    }
    Ok(rounded as i64)
}

/// Phase increment of `f` from `ka` to `kb`, bisecting while the jump is
/// too large to be tracked unambiguously.
fn phase_step(
    p: &PiecewisePotential,
    ka: Complex64,
    fa: Complex64,
    kb: Complex64,
    fb: Complex64,
    depth: u32,
) -> Result<f64, QuasiboundError> {
    let d = (fb / fa).arg();
    if d.abs() <= std::f64::consts::FRAC_PI_2 {
        return Ok(d);
    }
    if depth >= 48 {
        // a root (numerically) on the contour; give up on this segment
        return Ok(d);
    }
    let mid_k = (ka + kb) * 0.5;
    let fm = m22(p, mid_k)?;
    Ok(phase_step(p, ka, fa, mid_k, fm, depth + 1)?
        + phase_step(p, mid_k, fm, kb, fb, depth + 1)?)
}

fn build_state(p: &PiecewisePotential, k: Complex64) -> Result<QuasiboundState, QuasiboundError> {
    let (segments, residual, zeta_left, zeta_right) = build_segments(p, k)?;
    let energy_or_freq = match p.mode() {
        WaveMode::Schrodinger => k * k,
        WaveMode::Helmholtz => k,
    };
    Ok(QuasiboundState {
        mode: p.mode(),
        k,
        energy_or_freq,
        segments,
        zeta_left,
        zeta_right,
        residual,
        breakpoints: p.breakpoints().to_vec(),
        region_values: p.values().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Two thin, tall rectangles approximating a double delta barrier on
    /// [0, 1]: resonances sit near the closed-box values k_n = n π.
    fn double_delta() -> PiecewisePotential {
        PiecewisePotential::new(
            WaveMode::Schrodinger,
            vec![0.0, 0.02, 0.98, 1.0],
            vec![c(4000.0, 0.0), c(0.0, 0.0), c(4000.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn double_delta_resonances_near_closed_box_values() {
        let bx = SearchBox::new((1.0, 10.0), (-1.0, 0.0)).unwrap();
        let states = find_resonances(&double_delta(), bx, 16).unwrap();
        assert!(states.len() >= 3, "found {}", states.len());
        for s in &states {
            assert!(s.k.im < 0.0, "resonance must decay, Im k = {}", s.k.im);
            assert!(s.residual <= 1e-9);
            let n = (s.k.re / std::f64::consts::PI).round();
            assert!(
                (s.k.re - n * std::f64::consts::PI).abs() <= 0.06 * n * std::f64::consts::PI,
                "Re k = {} is not near nπ",
                s.k.re
            );
        }
        // sorted by Re k
        for w in states.windows(2) {
            assert!(w[0].k.re < w[1].k.re);
        }
    }

    #[test]
    fn absorbing_well_pushes_states_down() {
        let p = PiecewisePotential::new(
            WaveMode::Schrodinger,
            vec![0.0, 0.05, 0.95, 1.0],
            vec![c(3000.0, 0.0), c(0.0, -0.4), c(3000.0, 0.0)],
        )
        .unwrap();
        let bx = SearchBox::new((1.5, 8.0), (-1.2, 0.0)).unwrap();
        let states = find_resonances(&p, bx, 16).unwrap();
        assert!(!states.is_empty());
        for s in &states {
            assert!(s.k.im < 0.0);
        }
    }

    #[test]
    fn helmholtz_slab_matches_closed_form() {
        // slab ε = 4 on [0, 1]: q L = mπ + i ln r with r = 1/3, k = q/2
        let p = PiecewisePotential::new(
            WaveMode::Helmholtz,
            vec![0.0, 1.0],
            vec![c(4.0, 0.0)],
        )
        .unwrap();
        let bx = SearchBox::new((1.0, 7.0), (-1.0, 0.0)).unwrap();
        let states = find_resonances(&p, bx, 16).unwrap();
        let r: f64 = 1.0 / 3.0;
        let expected: Vec<Complex64> = (1..=4)
            .map(|m| (c(m as f64 * std::f64::consts::PI, r.ln())) / 2.0)
            .collect();
        assert_eq!(states.len(), expected.len());
        for (s, e) in states.iter().zip(&expected) {
            assert!(
                (s.k - e).norm() < 1e-8,
                "found {} expected {e}",
                s.k
            );
        }
    }

    #[test]
    fn empty_box_reports_no_roots() {
        // far below the first resonance of the double delta barrier
        let bx = SearchBox::new((0.5, 1.2), (-0.2, 0.0)).unwrap();
        let p = double_delta();
        match find_resonances(&p, bx, 4) {
            Err(QuasiboundError::NoRootsFound) => {}
            other => panic!("expected NoRootsFound, got {other:?}"),
        }
    }

    #[test]
    fn max_states_cap_enforced() {
        let bx = SearchBox::new((1.0, 10.0), (-1.0, 0.0)).unwrap();
        match find_resonances(&double_delta(), bx, 1) {
            Err(QuasiboundError::MaxStatesExceeded { found, max: 1 }) => assert!(found > 1),
            other => panic!("expected MaxStatesExceeded, got {other:?}"),
        }
    }

    #[test]
    fn invalid_box_rejected() {
        assert!(SearchBox::new((-1.0, 2.0), (-1.0, 0.0)).is_err());
        assert!(SearchBox::new((1.0, 2.0), (-1.0, 0.5)).is_err());
        assert!(SearchBox::new((2.0, 1.0), (-1.0, 0.0)).is_err());
    }

    #[test]
    fn state_satisfies_wave_equation_across_interfaces() {
        let bx = SearchBox::new((1.0, 7.0), (-1.0, 0.0)).unwrap();
        let states = find_resonances(&double_delta(), bx, 8).unwrap();
        let s = &states[0];
        // continuity of ψ and ψ' at every breakpoint
        for &b in &s.breakpoints {
            let (psi_l, dpsi_l) = s.eval(b - 1e-12);
            let (psi_r, dpsi_r) = s.eval(b + 1e-12);
            assert!((psi_l - psi_r).norm() < 1e-6 * psi_r.norm().max(1e-3));
            assert!((dpsi_l - dpsi_r).norm() < 1e-5 * dpsi_r.norm().max(1e-3));
        }
        // left exterior carries only the left-mover
        assert_eq!(s.segments[0].a, Complex64::new(0.0, 0.0));
        let last = s.segments.len() - 1;
        assert_eq!(s.segments[last].b, Complex64::new(0.0, 0.0));
    }
}
