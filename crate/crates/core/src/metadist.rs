//! The meta-distribution of one-tailed p-values.
//!
//! A p-value is `P = g(ζ̄ + T)` where `g` is the one-tailed survival function
//! of the reference statistic and `T` a central draw from it. The location
//! `ζ̄` is fixed by the median: `g(ζ̄) = p_M`. For finite `n` the density is
//! evaluated with the closed form in the inverse regularized beta quantities
//! `λ_p`, `λ_pM`, `λ'_p`; in the large-sample limit it reduces to an
//! expression in `erfc^{-1}` alone.
//!
//! Integrals over `p` are pulled back to the statistic line through
//! `p = g(ζ)`, where the integrand becomes the smooth shifted kernel
//! `f(ζ - ζ̄)` instead of a density with an integrable pole at `p = 0`.

use crate::error::{Error, Result};
use crate::quad::{integrate_real_line, integrate_upper, QuadratureConfig};
use crate::specfun::{erfc, inv_erfc_unchecked, inv_ibeta_pair};
use crate::statistic;
use crate::types::{Estimate, MetaDistParams, PValue, SampleSize};

/// The inverse-beta quantities entering the finite-n density at one `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetaPdfIntermediates {
    /// `I^{-1}_{2p}(n/2, 1/2)`, defined for `p <= 1/2`.
    pub lambda_p: Option<f64>,
    /// `I^{-1}_{1-2p_M}(1/2, n/2)`.
    pub lambda_median: f64,
    /// `I^{-1}_{2p-1}(1/2, n/2)`, defined for `p >= 1/2`.
    pub lambda_p_prime: Option<f64>,
}

/// `ζ̄`, the location of the statistic whose p-value has median `p_M`.
pub fn location_from_median(params: &MetaDistParams) -> Result<f64> {
    statistic::inverse_survival(params.median(), params.sample_size())
}

/// A value together with its complement `1 - value`, both carried at full
/// relative precision.
#[derive(Debug, Clone, Copy)]
struct Split {
    v: f64,
    c: f64,
}

/// Per-parameter state of the finite-n density (`λ_pM` is shared by every `p`).
struct FiniteDensity {
    n: f64,
    lambda_m: Split,
}

impl FiniteDensity {
    /// Requires `p_M < 1/2`.
    fn new(median: f64, n: u32) -> Result<Self> {
        let half_n = 0.5 * n as f64;
        let (v, c) = inv_ibeta_pair(1.0 - 2.0 * median, 2.0 * median, 0.5, half_n)?;
        Ok(FiniteDensity {
            n: n as f64,
            lambda_m: Split { v, c },
        })
    }

    fn lambda_p(&self, p: f64) -> Result<Split> {
        let (v, c) = inv_ibeta_pair(2.0 * p, 1.0 - 2.0 * p, 0.5 * self.n, 0.5)?;
        Ok(Split { v, c })
    }

    fn lambda_p_prime(&self, p: f64) -> Result<Split> {
        let (v, c) = inv_ibeta_pair(2.0 * p - 1.0, 2.0 * (1.0 - p), 0.5, 0.5 * self.n)?;
        Ok(Split { v, c })
    }

    /// Lower branch (`p < 1/2`), evaluated in logarithms term by term.
    fn lower(&self, lp: Split) -> f64 {
        let n = self.n;
        let lm = self.lambda_m;
        let cross = (lp.c * lp.v).sqrt() * (lm.c * lm.v).sqrt();

        let lead = -0.5 * (n + 1.0) * lp.v.ln();
        let root_num = lp.v * lm.c;
        let root_den = -lp.c * lm.v - 2.0 * cross + 1.0;
        let root = 0.5 * (root_num / root_den).ln();
        let bracket = 1.0 / lp.v - 2.0 * lp.c.sqrt() * lm.v.sqrt() / (lp.v.sqrt() * lm.c.sqrt()) + 1.0 / lm.c - 1.0;
        let tail = -0.5 * n * bracket.ln();
        (lead + root + tail).exp()
    }

    /// Upper branch (`p > 1/2`).
    fn upper(&self, lq: Split) -> f64 {
        let n = self.n;
        let lm = self.lambda_m;
        let cross = (lq.c * lq.v).sqrt() * (lm.c * lm.v).sqrt();

        let lead = -0.5 * (n + 1.0) * lq.c.ln();
        let num = lq.c * lm.c;
        let den = -lq.v * lm.v + 2.0 * cross + 1.0;
        let body = 0.5 * (n + 1.0) * (num / den).ln();
        (lead + body).exp()
    }

    fn eval(&self, p: f64) -> Result<f64> {
        if p < 0.5 {
            Ok(self.lower(self.lambda_p(p)?))
        } else if p >= 1.0 {
            // Reached only through the p_M > 1/2 reflection when p rounds to 0.
            Ok(0.0)
        } else if p > 0.5 {
            Ok(self.upper(self.lambda_p_prime(p)?))
        } else {
            // Seam: mean of the one-sided limits (λ_p -> 1, λ'_p -> 0).
            let left = self.lower(Split { v: 1.0, c: 0.0 });
            let right = self.upper(Split { v: 0.0, c: 1.0 });
            Ok(0.5 * (left + right))
        }
    }
}

/// Large-sample density `exp(-z_M (z_M - 2 z_p))` with `z = erfc^{-1}(2·)`.
fn limit_pdf(p: f64, median: f64) -> f64 {
    let zm = inv_erfc_unchecked(2.0 * median);
    let zp = inv_erfc_unchecked(2.0 * p);
    (-zm * (zm - 2.0 * zp)).exp()
}

/// Large-sample CDF `½ erfc(erf^{-1}(1-2k) - erf^{-1}(1-2p_M))`, using
/// `erf^{-1}(1-2x) = erfc^{-1}(2x)`.
fn limit_cdf(k: f64, median: f64) -> f64 {
    0.5 * erfc(inv_erfc_unchecked(2.0 * k) - inv_erfc_unchecked(2.0 * median))
}

fn check_open_unit(p: f64, what: &str) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} {p} is not in (0, 1)")))
    }
}

/// Evaluator of the density for fixed parameters; reuses `λ_pM` across points.
pub(crate) enum Density {
    Limit { median: f64 },
    Finite { inner: FiniteDensityHandle },
}

pub(crate) struct FiniteDensityHandle {
    core: FiniteDensity,
    reflect: bool,
}

impl Density {
    pub(crate) fn new(params: &MetaDistParams) -> Result<Self> {
        let median = params.median();
        match params.sample_size() {
            SampleSize::Limit => Ok(Density::Limit { median }),
            SampleSize::Finite(n) => {
                if median == 0.5 {
                    return Err(Error::domain(
                        "the finite-n density is undefined at p_M = 1/2; approach it with p_M = 1/2 ± 1/k",
                    ));
                }
                // p_M > 1/2 uses φ(p; p_M) = φ(1 - p; 1 - p_M).
                let reflect = median > 0.5;
                let m = if reflect { 1.0 - median } else { median };
                Ok(Density::Finite {
                    inner: FiniteDensityHandle {
                        core: FiniteDensity::new(m, n)?,
                        reflect,
                    },
                })
            }
        }
    }

    pub(crate) fn eval(&self, p: f64) -> Result<f64> {
        match self {
            Density::Limit { median } => Ok(limit_pdf(p, *median)),
            Density::Finite { inner } => {
                if inner.reflect {
                    inner.core.eval(1.0 - p)
                } else {
                    inner.core.eval(p)
                }
            }
        }
    }
}

/// The inverse-beta intermediates of the finite-n density at `p`.
pub fn intermediates(p: f64, params: &MetaDistParams) -> Result<MetaPdfIntermediates> {
    check_open_unit(p, "p")?;
    let n = params
        .sample_size()
        .finite()
        .ok_or_else(|| Error::domain("the λ intermediates exist only for finite n"))?;
    let median = params.median();
    if median >= 0.5 {
        return Err(Error::domain("the λ intermediates are defined for p_M < 1/2"));
    }
    let core = FiniteDensity::new(median, n)?;
    Ok(MetaPdfIntermediates {
        lambda_p: if p <= 0.5 { Some(core.lambda_p(p)?.v) } else { None },
        lambda_median: core.lambda_m.v,
        lambda_p_prime: if p >= 0.5 {
            Some(core.lambda_p_prime(p)?.v)
        } else {
            None
        },
    })
}

/// Density `φ(p; p_M)` of the p-value across identical repetitions.
pub fn pdf(p: f64, params: &MetaDistParams) -> Result<f64> {
    check_open_unit(p, "p")?;
    Density::new(params)?.eval(p)
}

/// The same density by the change-of-variables route: `f(ζ - ζ̄) / f(ζ)` at
/// `ζ = g^{-1}(p)`. Independent of the inverse-beta closed form.
pub fn pdf_via_transform(p: f64, params: &MetaDistParams) -> Result<f64> {
    check_open_unit(p, "p")?;
    let n = params.sample_size();
    let shift = location_from_median(params)?;
    let z = statistic::inverse_survival(p, n)?;
    Ok(statistic::log_density_ratio(z, shift, n).exp())
}

/// Cumulative distribution `P(P <= k)`.
///
/// In the limit this is the erfc closed form. For finite `n` the integral of
/// the density over `(0, k)`, taken on the statistic line, has the exact value
/// `g(g^{-1}(k) - ζ̄)`; [`cdf_by_quadrature`] evaluates the same integral
/// numerically from the density formula.
pub fn cdf(k: f64, params: &MetaDistParams) -> Result<f64> {
    check_open_unit(k, "k")?;
    cdf_unchecked(k, params)
}

pub(crate) fn cdf_unchecked(k: f64, params: &MetaDistParams) -> Result<f64> {
    if k <= 0.0 {
        return Ok(0.0);
    }
    if k >= 1.0 {
        return Ok(1.0);
    }
    match params.sample_size() {
        SampleSize::Limit => Ok(limit_cdf(k, params.median())),
        n => {
            let shift = location_from_median(params)?;
            let zk = statistic::inverse_survival(k, n)?;
            Ok(statistic::survival(zk - shift, n))
        }
    }
}

/// `∫_0^k φ(p) dp` by adaptive quadrature of `φ(g(ζ)) f(ζ)` over `ζ >= g^{-1}(k)`.
pub fn cdf_by_quadrature(k: f64, params: &MetaDistParams, quad: &QuadratureConfig) -> Result<Estimate> {
    check_open_unit(k, "k")?;
    let n = params.sample_size();
    let density = Density::new(params)?;
    let shift = location_from_median(params)?;
    let zk = statistic::inverse_survival(k, n)?;
    let integrand = pulled_back(&density, n);

    // Split at the kernel peak and the branch seam when they lie above ζ_k.
    let mut acc = Estimate::exact(0.0);
    let mut start = zk;
    let mut cuts: Vec<f64> = [0.0, shift].into_iter().filter(|&c| c > zk).collect();
    cuts.sort_by(f64::total_cmp);
    for c in cuts {
        let piece = crate::quad::integrate(&integrand, start, c, quad)?;
        acc.value += piece.value;
        acc.abs_error += piece.abs_error;
        start = c;
    }
    let tail = integrate_upper(&integrand, start, quad)?;
    acc.value += tail.value;
    acc.abs_error += tail.abs_error;
    Ok(acc)
}

/// `ζ -> φ(g(ζ)) |g'(ζ)|`; zero where `g(ζ)` rounds to an endpoint.
fn pulled_back(density: &Density, n: SampleSize) -> impl Fn(f64) -> f64 + '_ {
    move |z| {
        let p = statistic::survival(z, n);
        if !(p > 0.0 && p < 1.0) {
            return 0.0;
        }
        let f = statistic::density(z, n);
        if f == 0.0 {
            return 0.0;
        }
        density.eval(p).map(|phi| phi * f).unwrap_or(f64::NAN)
    }
}

/// `∫_0^1 φ(p) dp`, computed on the statistic line; equals 1 up to the
/// quadrature tolerance.
pub fn normalization(params: &MetaDistParams, quad: &QuadratureConfig) -> Result<Estimate> {
    let n = params.sample_size();
    let density = Density::new(params)?;
    let shift = location_from_median(params)?;
    integrate_real_line(pulled_back(&density, n), &[0.0, shift], quad)
}

/// Approximation of the large-sample density for small `p`, valid in the band
/// `0 < p < 1/(2π)`:
///
/// `√(2π) p_M √L(p_M) · exp(√(-ln(2π L(p)) - 2 ln p) · √(-ln(2π L(p_M)) - 2 ln p_M))`
/// with `L(x) = ln(1 / (2π x²))`.
pub fn pdf_approx_small_p(p: f64, median: f64) -> Result<f64> {
    use std::f64::consts::PI;
    let band = 1.0 / (2.0 * PI);
    for (name, v) in [("p", p), ("p_M", median)] {
        if !(v > 0.0 && v < band) {
            return Err(Error::domain(format!(
                "small-p approximation needs 0 < {name} < 1/(2π), got {v}"
            )));
        }
    }
    let two_pi = 2.0 * PI;
    let log_term = |x: f64| (1.0 / (two_pi * x * x)).ln();
    let root_term = |x: f64| (-(two_pi * log_term(x)).ln() - 2.0 * x.ln()).sqrt();
    Ok(two_pi.sqrt() * median * log_term(median).sqrt() * (root_term(p) * root_term(median)).exp())
}

/// Expected p-value `p_s = E[P] = ∫ g(ζ) f(ζ - ζ̄) dζ`.
pub fn mean_true_pvalue(params: &MetaDistParams, quad: &QuadratureConfig) -> Result<Estimate> {
    let n = params.sample_size();
    let shift = location_from_median(params)?;
    integrate_real_line(
        |z| statistic::survival(z, n) * statistic::density(z - shift, n),
        &[0.0, shift],
        quad,
    )
}

/// Closed form of the large-sample mean, `½ erfc(ζ̄ / 2)`, from the
/// convolution of two unit Gaussians. `None` for finite `n`.
pub fn mean_true_pvalue_limit_closed_form(params: &MetaDistParams) -> Option<f64> {
    if !params.sample_size().is_limit() {
        return None;
    }
    let shift = location_from_median(params).ok()?;
    Some(0.5 * erfc(0.5 * shift))
}

/// Median `p_M` whose meta-distribution has mean `target`, by bisection.
pub fn solve_median_for_mean(target: f64, n: SampleSize, quad: &QuadratureConfig) -> Result<PValue> {
    check_open_unit(target, "target mean")?;
    let mean_at = |m: f64| -> Result<f64> { Ok(mean_true_pvalue(&MetaDistParams::new(m, n)?, quad)?.value) };

    let (mut lo, mut hi) = (1e-12, 1.0 - 1e-12);
    let (f_lo, f_hi) = (mean_at(lo)? - target, mean_at(hi)? - target);
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::Bracket(format!(
            "mean {target} is not attainable for n = {n}: range is [{}, {}]",
            f_lo + target,
            f_hi + target
        )));
    }
    let mut mid = 0.5;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let f = mean_at(mid)? - target;
        if f.abs() <= 1e-12 || hi - lo <= 1e-15 {
            break;
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    PValue::new(mid)
}

/// `u`-quantile of the meta-distribution, `g(ζ̄ + g^{-1}(u))`.
pub fn quantile(u: f64, params: &MetaDistParams) -> Result<f64> {
    check_open_unit(u, "quantile level")?;
    let n = params.sample_size();
    let shift = location_from_median(params)?;
    Ok(statistic::survival(shift + statistic::inverse_survival(u, n)?, n))
}

/// Spread of the meta-distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispersion {
    pub mean: Estimate,
    pub std: Estimate,
    /// Mean absolute deviation around the mean.
    pub mad: Estimate,
    /// `(level, quantile)` pairs in the order requested.
    pub quantiles: Vec<(f64, f64)>,
}

/// Standard deviation, mean absolute deviation and quantiles.
pub fn dispersion_stats(params: &MetaDistParams, levels: &[f64], quad: &QuadratureConfig) -> Result<Dispersion> {
    let n = params.sample_size();
    let shift = location_from_median(params)?;
    let mean = mean_true_pvalue(params, quad)?;

    let second = integrate_real_line(
        |z| statistic::survival(z, n).powi(2) * statistic::density(z - shift, n),
        &[0.0, shift],
        quad,
    )?;
    let var = (second.value - mean.value * mean.value).max(0.0);
    let std = Estimate {
        value: var.sqrt(),
        abs_error: if var > 0.0 {
            (second.abs_error + 2.0 * mean.value * mean.abs_error) / (2.0 * var.sqrt())
        } else {
            second.abs_error.sqrt()
        },
    };

    let pivot = statistic::inverse_survival(mean.value, n)?;
    let mad = integrate_real_line(
        |z| (statistic::survival(z, n) - mean.value).abs() * statistic::density(z - shift, n),
        &[0.0, shift, pivot],
        quad,
    )?;

    let quantiles = levels
        .iter()
        .map(|&u| quantile(u, params).map(|q| (u, q)))
        .collect::<Result<Vec<_>>>()?;

    Ok(Dispersion {
        mean,
        std,
        mad,
        quantiles,
    })
}
