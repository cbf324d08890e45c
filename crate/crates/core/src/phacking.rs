//! Distribution and expectation of the minimum p-value over `m` independent
//! trials drawn from the same meta-distribution.
//!
//! With `F` the single-trial CDF, `P(min > p) = (1 - F(p))^m`, so the minimum
//! has density `m φ(p) (1 - F(p))^(m-1)`. Expectations are integrated on the
//! statistic line, where `1 - F(g(ζ)) = S(ζ̄ - ζ)` with `S` the survival
//! function of the central statistic.

use rayon::prelude::*;

use crate::error::Result;
use crate::metadist::{self, location_from_median, Density};
use crate::quad::{integrate_real_line, QuadratureConfig};
use crate::specfun::{erfc, inv_erfc_unchecked};
use crate::statistic;
use crate::types::{Estimate, HackingParams, MetaDistParams, PValue};

/// Density of the minimum p-value, `m φ(p) (1 - Φ(p))^(m-1)`.
pub fn pdf_min(p: f64, hp: &HackingParams) -> Result<f64> {
    let m = hp.trials() as i32;
    let phi = metadist::pdf(p, &hp.base)?;
    let survive = 1.0 - metadist::cdf(p, &hp.base)?;
    Ok(m as f64 * phi * survive.powi(m - 1))
}

/// The large-sample density of the minimum in closed form:
/// `m e^{z_M (2 z_p - z_M)} (1 - ½ erfc(z_p - z_M))^(m-1)`, `z = erfc^{-1}(2·)`.
pub fn pdf_min_limit_closed_form(p: f64, median: f64, m: u32) -> Result<f64> {
    PValue::new(p)?;
    PValue::new(median)?;
    let zm = inv_erfc_unchecked(2.0 * median);
    let zp = inv_erfc_unchecked(2.0 * p);
    let m = m.max(1);
    Ok(m as f64 * (zm * (2.0 * zp - zm)).exp() * (1.0 - 0.5 * erfc(zp - zm)).powi(m as i32 - 1))
}

/// `P(min <= p) = 1 - (1 - Φ(p))^m`.
pub fn cdf_min(p: f64, hp: &HackingParams) -> Result<f64> {
    let survive = 1.0 - metadist::cdf(p, &hp.base)?;
    Ok(1.0 - survive.powi(hp.trials() as i32))
}

/// `E[p_min] = ∫_0^1 (1 - F(t))^m dt`, integrated on the statistic line.
pub fn expected_min(hp: &HackingParams, quad: &QuadratureConfig) -> Result<Estimate> {
    let n = hp.base.sample_size();
    let shift = location_from_median(&hp.base)?;
    let m = hp.trials() as i32;
    integrate_real_line(
        |z| statistic::survival(shift - z, n).powi(m) * statistic::density(z, n),
        &[0.0, shift],
        quad,
    )
}

/// `E[p_min] = ∫_0^1 p · m φ(p) (1 - F(p))^(m-1) dp`, the density-weighted form.
pub fn expected_min_density_weighted(hp: &HackingParams, quad: &QuadratureConfig) -> Result<Estimate> {
    let n = hp.base.sample_size();
    let shift = location_from_median(&hp.base)?;
    let m = hp.trials() as i32;
    integrate_real_line(
        |z| {
            statistic::survival(z, n)
                * m as f64
                * statistic::density(z - shift, n)
                * statistic::survival(shift - z, n).powi(m - 1)
        },
        &[0.0, shift],
        quad,
    )
}

/// The naive minimum-p integral `∫_0^1 -m φ(p) (∫_0^p φ(u) du)^(m-1) dp`.
///
/// The integrand is `-d/dp F(p)^m`, so this evaluates to `-1` for every
/// parameter set; it is kept only to show that this integrand is not the
/// expectation of the minimum. Use [`expected_min`].
pub fn expected_min_naive(hp: &HackingParams, quad: &QuadratureConfig) -> Result<Estimate> {
    let n = hp.base.sample_size();
    let density = Density::new(&hp.base)?;
    let shift = location_from_median(&hp.base)?;
    let m = hp.trials() as i32;
    integrate_real_line(
        |z| {
            let p = statistic::survival(z, n);
            if !(p > 0.0 && p < 1.0) {
                return 0.0;
            }
            let phi = density.eval(p).unwrap_or(f64::NAN);
            let below = statistic::survival(z - shift, n);
            -(m as f64) * phi * statistic::density(z, n) * below.powi(m - 1)
        },
        &[0.0, shift],
        quad,
    )
}

/// One row of a hacking curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HackingRow {
    pub trials: u32,
    pub expected_min: Estimate,
}

/// `E[p_min]` for every `m` in `1..=m_max`, ordered by `m`.
pub fn hacking_curve(base: &MetaDistParams, m_max: u32, quad: &QuadratureConfig) -> Result<Vec<HackingRow>> {
    HackingParams::new(*base, m_max)?;
    (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let hp = HackingParams::new(*base, m)?;
            Ok(HackingRow {
                trials: m,
                expected_min: expected_min(&hp, quad)?,
            })
        })
        .collect()
}
