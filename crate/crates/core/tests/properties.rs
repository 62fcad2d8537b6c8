use std::sync::Arc;

use arnorm_core::gof_tests::both_statistics;
use arnorm_core::{
    cov_eval, delta_shift, fit_series, gamma_coeffs, ArModel, LaplaceLaw, Ols, ResidualFit,
    SeriesSample, ShiftSpec, UniformLaw,
};
use proptest::prelude::*;

fn stationary_ar1() -> impl Strategy<Value = f64> {
    -0.95f64..0.95
}

fn series() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 20..200)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn statistics_are_affine_invariant(v in series(), shift in -1e3f64..1e3, scale in 0.01f64..100.0) {
        let fit = fit_series(&SeriesSample::new(v.clone(), 1).unwrap(), &Ols);
        prop_assume!(fit.is_ok());
        let (d0, w0) = both_statistics(&fit.unwrap()).unwrap();
        let moved: Vec<f64> = v.iter().map(|x| scale * x + shift).collect();
        let (d1, w1) = both_statistics(&fit_series(&SeriesSample::new(moved, 1).unwrap(), &Ols).unwrap()).unwrap();
        prop_assert!((d0 - d1).abs() <= 1e-8 * d0.max(1.0));
        prop_assert!((w0 - w1).abs() <= 1e-8 * w0.max(1.0));
    }

    #[test]
    fn statistics_respect_their_lower_bounds(res in prop::collection::vec(-5.0f64..5.0, 2..300)) {
        let n = res.len() as f64;
        let fit = ResidualFit::from_residuals(res, Vec::new(), 0.0);
        prop_assume!(fit.is_ok());
        let (d, w) = both_statistics(&fit.unwrap()).unwrap();
        prop_assert!(d >= 0.0);
        // √n·D ≥ 1/2 for any sample
        prop_assert!(d >= 0.5 / n.sqrt() - 1e-15);
        prop_assert!(w >= 1.0 / (12.0 * n) - 1e-15);
    }

    #[test]
    fn kernel_is_symmetric_and_dominated_by_the_bridge(s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let a = cov_eval(s, t).unwrap();
        prop_assert_eq!(a, cov_eval(t, s).unwrap());
        let diag = cov_eval(t, t).unwrap();
        prop_assert!(diag >= -1e-15);
        prop_assert!(diag <= t * (1.0 - t) + 1e-15);
    }

    #[test]
    fn psi_weights_decay(beta in stationary_ar1()) {
        let g = gamma_coeffs(&[beta], 200);
        for (j, gj) in g.iter().enumerate() {
            prop_assert!((gj - beta.powi(j as i32)).abs() <= 1e-12);
        }
    }

    #[test]
    fn stationary_models_have_summable_weights(b1 in -0.9f64..0.9, b2 in -0.9f64..0.9) {
        prop_assume!(ArModel::new(vec![b1, b2], 0.0, arnorm_core::InnovationLaw::gaussian(1.0).unwrap()).is_ok());
        let g = gamma_coeffs(&[b1, b2], 4000);
        let head: f64 = g[..2000].iter().map(|x| x.abs()).sum();
        let tail: f64 = g[2000..].iter().map(|x| x.abs()).sum();
        prop_assert!(head.is_finite());
        prop_assert!(tail < head);
    }

    #[test]
    fn delta_vanishes_at_the_endpoints(var in 0.2f64..5.0, sigma0 in 0.5f64..2.0) {
        for spec in [
            ShiftSpec::new(Arc::new(LaplaceLaw::new(var).unwrap()), sigma0).unwrap(),
            ShiftSpec::new(Arc::new(UniformLaw::new(var).unwrap()), sigma0).unwrap(),
        ] {
            prop_assert_eq!(delta_shift(&spec, 0.0), 0.0);
            prop_assert_eq!(delta_shift(&spec, 1.0), 0.0);
            prop_assert!(delta_shift(&spec, 0.3).is_finite());
        }
    }
}
