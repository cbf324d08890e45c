//! Sample-size sweep over the headline dispersion figures quoted for the
//! meta-distribution: the fraction of draws below .05 when the mean p-value is
//! .05 or .12, and the mean, standard deviation and mean absolute deviation
//! when the median p-value is .02.
//!
//! None of these depend on a single `n`, so they are tabulated across several.

use rayon::prelude::*;

use crate::error::Result;
use crate::metadist::{cdf, dispersion_stats, solve_median_for_mean};
use crate::quad::QuadratureConfig;
use crate::types::{MetaDistParams, SampleSize};

pub const DEFAULT_SWEEP: [SampleSize; 9] = [
    SampleSize::Finite(2),
    SampleSize::Finite(3),
    SampleSize::Finite(5),
    SampleSize::Finite(10),
    SampleSize::Finite(20),
    SampleSize::Finite(30),
    SampleSize::Finite(100),
    SampleSize::Finite(1000),
    SampleSize::Limit,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimSweepRow {
    pub n: SampleSize,
    /// Median whose distribution has mean .05.
    pub median_for_mean_05: f64,
    /// `P(p < .05)` at that median.
    pub below_05_at_mean_05: f64,
    /// Median whose distribution has mean .12.
    pub median_for_mean_12: f64,
    /// `P(p < .05)` at that median.
    pub below_05_at_mean_12: f64,
    /// Mean, standard deviation and mean absolute deviation at median .02.
    pub mean_at_median_02: f64,
    pub std_at_median_02: f64,
    pub mad_at_median_02: f64,
}

pub fn claims_sweep(ns: &[SampleSize], quad: &QuadratureConfig) -> Result<Vec<ClaimSweepRow>> {
    ns.par_iter()
        .map(|&n| {
            let m05 = solve_median_for_mean(0.05, n, quad)?.get();
            let m12 = solve_median_for_mean(0.12, n, quad)?.get();
            let d = dispersion_stats(&MetaDistParams::new(0.02, n)?, &[], quad)?;
            Ok(ClaimSweepRow {
                n,
                median_for_mean_05: m05,
                below_05_at_mean_05: cdf(0.05, &MetaDistParams::new(m05, n)?)?,
                median_for_mean_12: m12,
                below_05_at_mean_12: cdf(0.05, &MetaDistParams::new(m12, n)?)?,
                mean_at_median_02: d.mean.value,
                std_at_median_02: d.std.value,
                mad_at_median_02: d.mad.value,
            })
        })
        .collect()
}
