use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;

use emlab::besov::{besov_norm, besov_norm_multi, lebesgue_norm, BesovSpec};
use emlab::spectral::{
    biot_savart, curl, dealias, dealiased_product, divergence, inverse_laplacian, laplacian, riesz, riesz_semigroup,
    FourierGrid, ScalarField2D,
};

/// A real trigonometric polynomial with a few random modes below `kmax`.
fn trig_field(g: &Arc<FourierGrid>, modes: &[(i32, i32, f64, f64)]) -> ScalarField2D {
    let modes = modes.to_vec();
    ScalarField2D::from_fn(g, move |x, y| {
        modes
            .iter()
            .map(|&(a, b, amp, ph)| amp * (a as f64 * x + b as f64 * y + ph).cos())
            .sum()
    })
}

fn modes(kmax: i32) -> impl Strategy<Value = Vec<(i32, i32, f64, f64)>> {
    prop::collection::vec((-kmax..=kmax, -kmax..=kmax, -1.0..1.0f64, 0.0..(2.0 * PI)), 1..6)
}

fn grid() -> Arc<FourierGrid> {
    FourierGrid::new(32).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_roundtrip(m in modes(15)) {
        let f = trig_field(&grid(), &m);
        prop_assert!(f.to_spectral().to_physical().max_abs_diff(&f) <= 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn riesz_is_a_nonpositive_contraction(m in modes(10)) {
        let f = trig_field(&grid(), &m).without_mean();
        let rf = riesz(&f);
        let l2 = |h: &ScalarField2D| lebesgue_norm(h, 2.0);
        prop_assert!(l2(&rf) <= l2(&f) * (1.0 + 1e-12));
        // <Rf, f> <= 0
        let inner: f64 = f.physical().iter().zip(rf.physical().iter()).map(|(a, b)| a * b).sum();
        prop_assert!(inner <= 1e-10 * l2(&f).powi(2));
    }

    #[test]
    fn riesz_semigroup_composes(m in modes(10), s in 0.0..2.0f64, t in 0.0..2.0f64) {
        let f = trig_field(&grid(), &m);
        let a = riesz_semigroup(&riesz_semigroup(&f, s), t);
        let b = riesz_semigroup(&f, s + t);
        prop_assert!(a.max_abs_diff(&b) <= 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn laplacian_inverts(m in modes(10)) {
        let f = trig_field(&grid(), &m).without_mean();
        let back = laplacian(&inverse_laplacian(&f).unwrap());
        prop_assert!(back.max_abs_diff(&f) <= 1e-11 * f.max_abs().max(1.0));
    }

    #[test]
    fn biot_savart_is_solenoidal_with_the_right_curl(m in modes(10)) {
        let w = trig_field(&grid(), &m).without_mean();
        let u = biot_savart(&w);
        prop_assert!(divergence(&u).max_abs() <= 1e-11 * w.max_abs().max(1.0));
        prop_assert!(curl(&u).max_abs_diff(&w) <= 1e-11 * w.max_abs().max(1.0));
    }

    #[test]
    fn dealiased_product_matches_truncated_exact_product(a in modes(8), b in modes(8)) {
        // exact product on a grid fine enough to hold all its modes, then
        // truncated to the coarse 2/3 mask
        let coarse = grid();
        let fine = FourierGrid::new(64).unwrap();
        let p = dealiased_product(&trig_field(&coarse, &a), &trig_field(&coarse, &b));
        let exact = trig_field(&fine, &a).physical().iter()
            .zip(trig_field(&fine, &b).physical().iter())
            .map(|(x, y)| x * y)
            .collect::<Vec<_>>();
        let exact = ScalarField2D::from_physical(&fine, exact).to_spectral();
        let n = coarse.n();
        let coeffs = exact.spectral();
        let mut trunc = vec![Default::default(); n * n];
        let mask = coarse.dealias_mask();
        let (kf, kc) = (fine.wavenumbers(), coarse.wavenumbers());
        let idx = |k: f64, m: usize| if k >= 0.0 { k as usize } else { (m as f64 + k) as usize };
        for i1 in 0..n {
            for i2 in 0..n {
                if mask[i1 * n + i2] {
                    let (j1, j2) = (idx(kc[i1], 64), idx(kc[i2], 64));
                    debug_assert_eq!(kf[j1], kc[i1]);
                    trunc[i1 * n + i2] = coeffs[j1 * 64 + j2];
                }
            }
        }
        let oracle = ScalarField2D::from_spectral(&coarse, trunc);
        prop_assert!(p.max_abs_diff(&oracle) <= 1e-12 * (1.0 + oracle.max_abs()));
    }

    #[test]
    fn besov_norms_are_seminorm_like(a in modes(12), b in modes(12), s in -3.0..3.0f64) {
        let g = grid();
        let (f, h) = (dealias(&trig_field(&g, &a)), dealias(&trig_field(&g, &b)));
        for spec in [BesovSpec::B1_21, BesovSpec::B2_21, BesovSpec::B0_INF1] {
            let sum = besov_norm(&f.add(&h), spec);
            prop_assert!(sum <= (besov_norm(&f, spec) + besov_norm(&h, spec)) * (1.0 + 1e-12) + 1e-14);
            prop_assert!((besov_norm(&f.scaled(s), spec) - s.abs() * besov_norm(&f, spec)).abs()
                <= 1e-12 * (1.0 + besov_norm(&f, spec)));
        }
        // more regularity weighs more: B^1 <= B^2 with weight-1 low block
        prop_assert!(besov_norm(&f, BesovSpec::B1_21) <= besov_norm(&f, BesovSpec::B2_21) * (1.0 + 1e-12));
        // the multi-component norm of (f, 0) is the scalar norm
        let z = ScalarField2D::zeros(&g);
        let m = besov_norm_multi(&[&f, &z], BesovSpec::B2_21);
        prop_assert!((m - besov_norm(&f, BesovSpec::B2_21)).abs() <= 1e-12 * (1.0 + m));
    }

    #[test]
    fn besov_is_translation_invariant(a in modes(12), sx in 0usize..32, sy in 0usize..32) {
        let g = grid();
        let f = trig_field(&g, &a);
        let n = g.n();
        let vals = f.physical();
        let shifted: Vec<f64> = (0..n * n).map(|i| vals[((i / n + sx) % n) * n + (i % n + sy) % n]).collect();
        let fs = ScalarField2D::from_physical(&g, shifted);
        for spec in [BesovSpec::B1_21, BesovSpec::B0_INF1] {
            let (x, y) = (besov_norm(&f, spec), besov_norm(&fs, spec));
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x));
        }
    }
}
