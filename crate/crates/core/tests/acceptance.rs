//! Acceptance gate. Every test prints exactly one `ACCEPT <name>: PASS|FAIL`
//! line (run with `--nocapture` to see them) and then asserts the same verdict.

use std::time::Instant;

use pvmeta::diagnostics::{claims_sweep, DEFAULT_SWEEP};
use pvmeta::mc::{ks_distance, sample_pvalues, MCConfig};
use pvmeta::metadist::{cdf, mean_true_pvalue, normalization, pdf, pdf_approx_small_p, solve_median_for_mean};
use pvmeta::phacking::{expected_min, hacking_curve, pdf_min, pdf_min_limit_closed_form};
use pvmeta::power::{power_metadensity, power_metadensity_integral, PowerParams};
use pvmeta::specfun::{reg_inc_beta, BetaArgs};
use pvmeta::{HackingParams, MetaDistParams, QuadratureConfig, SampleSize};

const GRID_MEDIANS: [f64; 6] = [0.01, 0.05, 0.1, 0.15, 0.25, 0.4];
const GRID_NS: [SampleSize; 5] = [
    SampleSize::Finite(3),
    SampleSize::Finite(5),
    SampleSize::Finite(10),
    SampleSize::Finite(30),
    SampleSize::Limit,
];

fn verdict(name: &str, pass: bool, detail: impl std::fmt::Display) {
    println!("ACCEPT {name}: {} | {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

fn grid() -> impl Iterator<Item = MetaDistParams> {
    GRID_MEDIANS
        .into_iter()
        .flat_map(|m| GRID_NS.into_iter().map(move |n| MetaDistParams::new(m, n).unwrap()))
}

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn ibeta(x: f64, a: f64, b: f64) -> f64 {
    reg_inc_beta(BetaArgs::new(x, a, b).unwrap())
}

#[test]
fn normalization_suite() {
    let start = Instant::now();
    let worst = grid()
        .map(|p| (normalization(&p, &quad()).unwrap().value - 1.0).abs())
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    verdict(
        "normalization",
        worst <= 1e-6 && secs < 30.0,
        format!("30 configs, max |∫φ - 1| = {worst:.3e} (tol 1e-6), {secs:.2} s (limit 30 s)"),
    );
}

#[test]
fn median_preservation() {
    let worst = grid()
        .map(|p| (cdf(p.median(), &p).unwrap() - 0.5).abs())
        .fold(0.0, f64::max);
    verdict(
        "median_preservation",
        worst <= 1e-6,
        format!("max |cdf(p_M) - 0.5| = {worst:.3e} (tol 1e-6)"),
    );
}

#[test]
fn seventy_five_percent_claim() {
    let m = solve_median_for_mean(0.05, SampleSize::Limit, &quad()).unwrap().get();
    let frac = cdf(0.05, &MetaDistParams::limit(m).unwrap()).unwrap();
    verdict(
        "seventy_five_percent",
        (frac - 0.75).abs() <= 0.02,
        format!("p_M = {m:.6} for mean 0.05, cdf(0.05) = {frac:.6} (target 0.75 ± 0.02)"),
    );
}

#[test]
fn hacking_figure_parameters() {
    let base = MetaDistParams::finite(0.15, 20).unwrap();
    let mean = mean_true_pvalue(&base, &quad()).unwrap().value;
    let curve = hacking_curve(&base, 20, &quad()).unwrap();
    let decreasing = curve
        .windows(2)
        .all(|w| w[1].expected_min.value < w[0].expected_min.value);
    let lowest = curve.last().unwrap().expected_min.value;
    let first_below = curve.iter().find(|r| r.expected_min.value < 0.02).map(|r| r.trials);
    verdict(
        "hacking_figure",
        (mean - 0.22).abs() <= 0.02 && decreasing && lowest < 0.02,
        format!(
            "p_s = {mean:.4} (0.22 ± 0.02), strictly decreasing = {decreasing}, E[p_min] at m=20 = {lowest:.4}, first m below .02 = {first_below:?}"
        ),
    );
}

#[test]
fn uniform_limit() {
    let exact = (1..100).all(|i| pdf(i as f64 / 100.0, &MetaDistParams::limit(0.5).unwrap()).unwrap() == 1.0);
    let grid: Vec<f64> = (0..=998).map(|i| 0.001 + i as f64 * 0.001).collect();
    let k = 1e4;
    let sup = [0.5 - 1.0 / k, 0.5 + 1.0 / k]
        .into_iter()
        .map(|m| {
            let params = MetaDistParams::finite(m, 30).unwrap();
            grid.iter()
                .map(|&p| (pdf(p, &params).unwrap() - 1.0).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    verdict(
        "uniform_limit",
        exact && sup <= 0.02,
        format!("limit pdf ≡ 1: {exact}; n=30, p_M = 1/2 ± 1e-4: sup |φ - 1| = {sup:.3e} (tol 0.02)"),
    );
}

#[test]
fn convergence_to_limit() {
    let grid: Vec<f64> = (0..=998).map(|i| 0.001 + i as f64 * 0.001).collect();
    let ns = [5u32, 10, 30, 100, 1000];
    let mut monotone = true;
    let mut at_1000 = Vec::new();
    let mut detail = Vec::new();
    for m in [0.05, 0.15] {
        let limit = MetaDistParams::limit(m).unwrap();
        let gaps: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let params = MetaDistParams::finite(m, n).unwrap();
                grid.iter()
                    .map(|&p| (pdf(p, &params).unwrap() - pdf(p, &limit).unwrap()).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        monotone &= gaps.windows(2).all(|w| w[1] <= w[0]);
        at_1000.push(*gaps.last().unwrap());
        detail.push(format!("p_M={m}: {:.4?}", gaps));
    }
    let bound = at_1000.iter().all(|&g| g <= 0.02);
    verdict(
        "convergence",
        monotone && bound,
        format!(
            "sup gaps over n = {ns:?}: {}; monotone = {monotone}; ≤ 0.02 at n=1000 = {bound}",
            detail.join("; ")
        ),
    );
}

#[test]
fn min_density_closed_form_consistency() {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for &p in &[1e-4, 0.01, 0.05, 0.2, 0.6] {
        for &m in &[0.01, 0.05, 0.15, 0.3, 0.5] {
            for &trials in &[1u32, 2, 5, 20] {
                let h = HackingParams::new(MetaDistParams::limit(m).unwrap(), trials).unwrap();
                let closed = pdf_min_limit_closed_form(p, m, trials).unwrap();
                let composed = pdf_min(p, &h).unwrap();
                worst = worst.max((closed - composed).abs() / composed.abs().max(1.0));
                count += 1;
            }
        }
    }
    verdict(
        "min_density_closed_form",
        count == 100 && worst <= 1e-10,
        format!("{count} (p, p_M, m) points, max scaled difference = {worst:.3e} (tol 1e-10)"),
    );
}

#[test]
fn monte_carlo_concordance() {
    let start = Instant::now();
    let fig1 = MetaDistParams::finite(0.15, 20).unwrap();
    let solved = solve_median_for_mean(0.11, SampleSize::Finite(20), &quad())
        .unwrap()
        .get();
    let fig3 = MetaDistParams::finite(solved, 20).unwrap();
    let mut lines = Vec::new();
    let mut pass = true;
    for (label, params, seed) in [
        ("p_M=0.15 n=20", fig1, 20_240_601u64),
        ("mean 0.11 n=20", fig3, 20_240_603),
    ] {
        let emp = sample_pvalues(&params, &MCConfig::new(1_000_000, seed)).unwrap();
        let ks = ks_distance(&emp, |x| {
            cdf(x.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON), &params).unwrap()
        });
        pass &= ks < 0.002;
        lines.push(format!("{label} (p_M = {:.6}): KS = {ks:.5}", params.median()));
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        "monte_carlo",
        pass && secs < 60.0,
        format!("{} (tol 0.002), {secs:.2} s (limit 60 s)", lines.join("; ")),
    );
}

#[test]
fn uniform_order_statistics() {
    let base = MetaDistParams::limit(0.5).unwrap();
    let worst = (1..=10u32)
        .map(|m| {
            let e = expected_min(&HackingParams::new(base, m).unwrap(), &quad()).unwrap();
            (e.value - 1.0 / (m as f64 + 1.0)).abs()
        })
        .fold(0.0, f64::max);
    verdict(
        "uniform_order_statistics",
        worst <= 1e-6,
        format!("max |E[p_min] - 1/(m+1)| = {worst:.3e} (tol 1e-6)"),
    );
}

#[test]
fn small_p_approximation() {
    let mut pass = true;
    let mut lines = Vec::new();
    for m in [0.05, 0.1] {
        let limit = MetaDistParams::limit(m).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..=50 {
            // log-spaced over [1e-4, 0.05]
            let p = 1e-4 * (500f64).powf(i as f64 / 50.0);
            let ratio = pdf_approx_small_p(p, m).unwrap() / pdf(p, &limit).unwrap();
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        pass &= lo >= 0.5 && hi <= 2.0;
        lines.push(format!("p_M={m}: ratio in [{lo:.4}, {hi:.4}]"));
    }
    verdict(
        "small_p_approximation",
        pass,
        format!("{} (band [0.5, 2])", lines.join("; ")),
    );
}

#[test]
fn power_density_sweep() {
    let betas: Vec<f64> = (0..=200)
        .map(|i| 1e-4 + (1.0 - 2e-4) * i as f64 / 200.0)
        .filter(|&b| b != 0.5)
        .collect();
    let mut pass = true;
    let mut negatives = 0usize;
    let mut worst_trip: f64 = 0.0;
    let mut integrals = Vec::new();
    for ps in [0.6, 0.8, 0.9] {
        for n in [5u32, 10, 30] {
            let params = PowerParams::new(ps, n).unwrap();
            let half = 0.5 * n as f64;
            for &b in &betas {
                let Ok(ev) = power_metadensity(b, &params) else {
                    pass = false;
                    continue;
                };
                pass &= ev.value.is_finite();
                negatives += usize::from(ev.is_negative());
                let i = ev.intermediates;
                worst_trip = worst_trip.max((ibeta(i.gamma3, half, 0.5) - (2.0 * ps - 1.0)).abs());
                if let Some(g1) = i.gamma1 {
                    worst_trip = worst_trip.max((ibeta(g1, half, 0.5) - 2.0 * b).abs());
                }
                if let Some(g2) = i.gamma2 {
                    worst_trip = worst_trip.max((ibeta(g2, 0.5, half) - (2.0 * b - 1.0)).abs());
                    pass &= (ev.beta_ratio - 1.0).abs() < 1e-12;
                }
            }
            let integral = power_metadensity_integral(&params, &quad())
                .map(|e| format!("{:.6}", e.value))
                .unwrap_or_else(|e| format!("error: {e}"));
            integrals.push(format!("(p_s={ps}, n={n}) ∫ = {integral}"));
        }
    }
    pass &= worst_trip <= 1e-10;
    verdict(
        "power_density",
        pass,
        format!(
            "9 configs × {} β_c; all finite = {pass}; negative values = {negatives}; max γ round-trip error = {worst_trip:.3e} (tol 1e-10); {}",
            betas.len(),
            integrals.join(", ")
        ),
    );
}

#[test]
fn claims_sweep_table() {
    let rows = claims_sweep(&DEFAULT_SWEEP, &quad()).unwrap();
    println!("n, p_M(mean .05), P(p<.05), p_M(mean .12), P(p<.05), mean|p_M=.02, std|p_M=.02, MAD|p_M=.02");
    for r in &rows {
        println!(
            "{}, {:.5}, {:.4}, {:.5}, {:.4}, {:.4}, {:.4}, {:.4}",
            r.n,
            r.median_for_mean_05,
            r.below_05_at_mean_05,
            r.median_for_mean_12,
            r.below_05_at_mean_12,
            r.mean_at_median_02,
            r.std_at_median_02,
            r.mad_at_median_02
        );
    }
    let complete = rows.len() == DEFAULT_SWEEP.len()
        && rows.iter().all(|r| {
            [
                r.below_05_at_mean_05,
                r.below_05_at_mean_12,
                r.std_at_median_02,
                r.mad_at_median_02,
            ]
            .iter()
            .all(|v| v.is_finite())
        });
    verdict("claims_sweep_emitted", complete, format!("{} rows over n", rows.len()));
}
