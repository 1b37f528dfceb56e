//! Property tests for the algebraic invariants of the toolkit.

use num_complex::Complex64;
use proptest::prelude::*;

use nonortho_core::geometry::{d_ph, d_poincare, HalfPlanePoint};
use nonortho_core::linalg::{expm, numerical_rank, ComplexMatrix};
use nonortho_core::quasibound::{transfer_matrix, PiecewisePotential, WaveMode};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn lower_half_point() -> impl Strategy<Value = HalfPlanePoint> {
    (-5.0..5.0f64, -4.0..-1e-6f64).prop_map(|(re, im)| HalfPlanePoint::new(c(re, im)).unwrap())
}

proptest! {
    #[test]
    fn pseudo_hyperbolic_is_a_pseudometric(
        a in lower_half_point(),
        b in lower_half_point(),
        z in lower_half_point(),
    ) {
        let dab = d_ph(a, b).unwrap();
        prop_assert!(dab >= 0.0 && dab <= 1.0);
        prop_assert_eq!(dab, d_ph(b, a).unwrap());
        prop_assert_eq!(d_ph(a, a).unwrap(), 0.0);
        let daz = d_ph(a, z).unwrap();
        let dzb = d_ph(z, b).unwrap();
        prop_assert!(dab <= daz + dzb + 1e-12);
    }

    #[test]
    fn poincare_tanh_identity(a in lower_half_point(), b in lower_half_point()) {
        let ph = d_ph(a, b).unwrap();
        prop_assume!(ph < 1.0);
        let dp = d_poincare(a, b).unwrap();
        prop_assert!(((dp / 2.0).tanh() - ph).abs() <= 1e-12);
    }

    #[test]
    fn rank_one_outer_products(
        entries in proptest::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 2..12)
    ) {
        let w: Vec<Complex64> = entries.iter().map(|&(re, im)| c(re, im)).collect();
        prop_assume!(w.iter().any(|z| z.norm() > 1e-6));
        let m = ComplexMatrix::from_fn(w.len(), |i, j| w[i] * w[j].conj());
        prop_assert_eq!(numerical_rank(&m, 1e-10).unwrap(), 1);
    }

    #[test]
    fn expm_inverse(
        entries in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16),
    ) {
        let m = ComplexMatrix::from_fn(4, |i, j| {
            let (re, im) = entries[4 * i + j];
            c(re, im)
        });
        // keep within the tested regime ‖A‖ ≤ 10
        let norm = m.norm_one();
        let m = if norm > 10.0 { m.scale(c(10.0 / norm, 0.0)) } else { m };
        let e = expm(&m).unwrap();
        let einv = expm(&m.scale(c(-1.0, 0.0))).unwrap();
        let defect = e.mul(&einv).sub(&ComplexMatrix::identity(4)).norm_max();
        prop_assert!(defect <= 1e-9, "defect {}", defect);
    }

    #[test]
    fn transfer_determinant_is_unimodular(
        v1 in (-6.0..6.0f64, -1.0..0.0f64),
        v2 in (-6.0..6.0f64, -1.0..0.0f64),
        k_re in 0.2..4.0f64,
        k_im in -0.8..0.0f64,
    ) {
        let p = PiecewisePotential::new(
            WaveMode::Schrodinger,
            vec![0.0, 0.8, 1.7],
            vec![c(v1.0, v1.1), c(v2.0, v2.1)],
        ).unwrap();
        let k = c(k_re, k_im);
        if let Ok(m) = transfer_matrix(&p, k) {
            prop_assert!((m.det().norm() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn eigenvalue_trace_identity(
        entries in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 25),
    ) {
        let m = ComplexMatrix::from_fn(5, |i, j| {
            let (re, im) = entries[5 * i + j];
            c(re, im)
        });
        let s = nonortho_core::linalg::eig_general(&m).unwrap();
        let sum: Complex64 = s.eigenvalues.iter().sum();
        prop_assert!((sum - m.trace()).norm() <= 1e-10 * m.trace().norm().max(1.0));
    }
}
