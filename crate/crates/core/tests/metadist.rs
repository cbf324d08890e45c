//! Meta-distribution invariants and Monte Carlo cross-checks.

use proptest::prelude::*;
use pvmeta::mc::{sample_pvalues, MCConfig};
use pvmeta::metadist::{cdf, dispersion_stats, normalization, pdf, pdf_via_transform, quantile};
use pvmeta::{MetaDistParams, QuadratureConfig, SampleSize};

fn sample_size() -> impl Strategy<Value = SampleSize> {
    prop_oneof![(2u32..500).prop_map(SampleSize::Finite), Just(SampleSize::Limit)]
}

fn median() -> impl Strategy<Value = f64> {
    // Finite-n density is undefined at exactly 1/2.
    (1e-4f64..0.9999).prop_filter("p_M = 1/2", |m| (m - 0.5).abs() > 1e-6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn density_positive_and_matches_transform(m in median(), n in sample_size(), p in 1e-8f64..(1.0 - 1e-8)) {
        let params = MetaDistParams::new(m, n).unwrap();
        let closed = pdf(p, &params).unwrap();
        let route = pdf_via_transform(p, &params).unwrap();
        prop_assert!(closed.is_finite() && closed >= 0.0);
        prop_assert!((closed - route).abs() <= 1e-8 * route.max(1.0), "{} vs {}", closed, route);
    }

    #[test]
    fn median_is_preserved(m in 1e-4f64..0.9999, n in sample_size()) {
        let params = MetaDistParams::new(m, n).unwrap();
        prop_assert!((cdf(m, &params).unwrap() - 0.5).abs() <= 1e-10);
    }

    #[test]
    fn cdf_monotone(m in median(), n in sample_size(), k in 1e-6f64..0.99, dk in 1e-5f64..0.01) {
        let params = MetaDistParams::new(m, n).unwrap();
        prop_assert!(cdf(k + dk, &params).unwrap() >= cdf(k, &params).unwrap());
    }

    #[test]
    fn quantile_inverts_cdf(m in median(), n in sample_size(), u in 1e-6f64..(1.0 - 1e-6)) {
        let params = MetaDistParams::new(m, n).unwrap();
        let q = quantile(u, &params).unwrap();
        if q > 0.0 && q < 1.0 {
            prop_assert!((cdf(q, &params).unwrap() - u).abs() <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn density_integrates_to_one(m in median(), n in sample_size()) {
        let params = MetaDistParams::new(m, n).unwrap();
        let total = normalization(&params, &QuadratureConfig::default()).unwrap();
        prop_assert!((total.value - 1.0).abs() <= 1e-6, "{:?}", total);
    }
}

#[test]
fn histogram_matches_density_at_median() {
    let params = MetaDistParams::finite(0.15, 20).unwrap();
    let emp = sample_pvalues(&params, &MCConfig::new(2_000_000, 11)).unwrap();
    let (lo, hi) = (0.145, 0.155);
    let mass = emp.ecdf(hi) - emp.ecdf(lo);
    let height = mass / (hi - lo);
    let want = pdf(0.15, &params).unwrap();
    let se = (mass * (1.0 - mass) / emp.draw_count() as f64).sqrt() / (hi - lo);
    assert!(
        (height - want).abs() < 4.0 * se + 1e-3 * want,
        "{height} vs {want} (se {se})"
    );
}

#[test]
fn approaches_uniform_as_median_nears_half() {
    let grid: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
    let mut last = f64::INFINITY;
    for k in [10.0, 100.0, 1_000.0, 10_000.0] {
        for sign in [-1.0, 1.0] {
            let params = MetaDistParams::finite(0.5 + sign / k, 30).unwrap();
            let sup = grid
                .iter()
                .map(|&p| (pdf(p, &params).unwrap() - 1.0).abs())
                .fold(0.0, f64::max);
            if sign > 0.0 {
                assert!(sup < last, "k={k}: {sup} !< {last}");
                last = sup;
            }
        }
    }
    assert!(last < 1e-2, "{last}");
}

#[test]
fn dispersion_agrees_with_samples() {
    let params = MetaDistParams::finite(0.02, 10).unwrap();
    let d = dispersion_stats(&params, &[0.1, 0.75, 0.9], &QuadratureConfig::default()).unwrap();
    let emp = sample_pvalues(&params, &MCConfig::new(1_000_000, 3)).unwrap();
    let s = emp.sorted_samples();
    let mean = emp.mean();
    let std = (s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / s.len() as f64).sqrt();
    let mad = s.iter().map(|x| (x - mean).abs()).sum::<f64>() / s.len() as f64;
    assert!((d.mean.value - mean).abs() < 4.0 * emp.std_error());
    assert!((d.std.value - std).abs() < 0.01 * std, "{} vs {std}", d.std.value);
    assert!((d.mad.value - mad).abs() < 0.01 * mad, "{} vs {mad}", d.mad.value);
    for &(u, q) in &d.quantiles {
        assert!((emp.ecdf(q) - u).abs() < 0.003, "level {u}");
    }
}
