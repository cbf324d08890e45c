//! Monte Carlo oracle for the meta-distribution.
//!
//! Samples follow the generative model directly: `P = g(ζ̄ + T)` with `T` a
//! central Student-T(n) draw (a standard normal in the limit), `T` generated
//! as `Z / sqrt(χ²_n / n)`. Draws are split into `stream_count` contiguous
//! blocks; block `i` uses a ChaCha8 generator keyed by `seed` on stream `i`,
//! so the output depends only on `(draws, seed, stream_count)` and not on
//! thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metadist::location_from_median;
use crate::statistic;
use crate::types::{HackingParams, MetaDistParams, SampleSize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MCConfig {
    pub draws: usize,
    pub seed: u64,
    pub stream_count: usize,
}

impl MCConfig {
    pub fn new(draws: usize, seed: u64) -> Self {
        MCConfig {
            draws,
            seed,
            stream_count: 16,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.draws == 0 {
            return Err(Error::domain("Monte Carlo draw count must be at least 1"));
        }
        if self.stream_count == 0 {
            return Err(Error::domain("Monte Carlo stream count must be at least 1"));
        }
        Ok(())
    }

    /// `(stream index, first draw, draw count)` for every non-empty stream.
    fn blocks(&self) -> Vec<(u64, usize)> {
        let base = self.draws / self.stream_count;
        let extra = self.draws % self.stream_count;
        (0..self.stream_count)
            .map(|i| (i as u64, base + usize::from(i < extra)))
            .filter(|&(_, len)| len > 0)
            .collect()
    }
}

/// Sorted Monte Carlo sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    sorted_samples: Vec<f64>,
}

impl EmpiricalDistribution {
    /// Sorts `samples` ascending. NaN values are rejected.
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::domain("empirical sample contains NaN"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(EmpiricalDistribution {
            sorted_samples: samples,
        })
    }

    pub fn sorted_samples(&self) -> &[f64] {
        &self.sorted_samples
    }

    pub fn draw_count(&self) -> usize {
        self.sorted_samples.len()
    }

    pub fn mean(&self) -> f64 {
        self.sorted_samples.iter().sum::<f64>() / self.draw_count() as f64
    }

    /// Standard error of the sample mean.
    pub fn std_error(&self) -> f64 {
        let n = self.draw_count() as f64;
        let mean = self.mean();
        let var = self.sorted_samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        (var / n).sqrt()
    }

    pub fn median(&self) -> f64 {
        let s = &self.sorted_samples;
        let k = s.len();
        if k % 2 == 1 {
            s[k / 2]
        } else {
            0.5 * (s[k / 2 - 1] + s[k / 2])
        }
    }

    /// Fraction of samples `<= x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        let count = self.sorted_samples.partition_point(|&v| v <= x);
        count as f64 / self.draw_count() as f64
    }

    /// Normalized histogram on `bins` equal cells over `[0, 1]`:
    /// `(cell centre, density)`.
    pub fn histogram(&self, bins: usize) -> Vec<(f64, f64)> {
        let bins = bins.max(1);
        let width = 1.0 / bins as f64;
        let mut counts = vec![0usize; bins];
        for &x in &self.sorted_samples {
            let i = ((x / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        let total = self.draw_count() as f64;
        counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| ((i as f64 + 0.5) * width, c as f64 / (total * width)))
            .collect()
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Central reference draw: Student-T(n) or standard normal.
fn draw_statistic<R: Rng>(rng: &mut R, n: SampleSize, chi: Option<&ChiSquared<f64>>) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    match (n, chi) {
        (SampleSize::Finite(k), Some(chi)) => z / (chi.sample(rng) / k as f64).sqrt(),
        _ => z,
    }
}

fn chi_for(n: SampleSize) -> Result<Option<ChiSquared<f64>>> {
    match n {
        SampleSize::Finite(k) => ChiSquared::new(k as f64)
            .map(Some)
            .map_err(|e| Error::domain(format!("chi-square({k}): {e}"))),
        SampleSize::Limit => Ok(None),
    }
}

/// Minimum of `m` p-values per draw; `m = 1` gives the plain meta-distribution.
fn sample_minimum(params: &MetaDistParams, m: u32, cfg: &MCConfig) -> Result<EmpiricalDistribution> {
    cfg.validate()?;
    let n = params.sample_size();
    let shift = location_from_median(params)?;
    let chi = chi_for(n)?;

    let blocks = cfg.blocks();
    let parts: Vec<Vec<f64>> = blocks
        .par_iter()
        .map(|&(stream, len)| {
            let mut rng = stream_rng(cfg.seed, stream);
            (0..len)
                .map(|_| {
                    // g is decreasing: the smallest p-value comes from the largest statistic.
                    let best = (0..m)
                        .map(|_| draw_statistic(&mut rng, n, chi.as_ref()))
                        .fold(f64::NEG_INFINITY, f64::max);
                    statistic::survival(shift + best, n)
                })
                .collect()
        })
        .collect();
    EmpiricalDistribution::from_samples(parts.concat())
}

/// Draw p-values from the meta-distribution.
pub fn sample_pvalues(params: &MetaDistParams, cfg: &MCConfig) -> Result<EmpiricalDistribution> {
    sample_minimum(params, 1, cfg)
}

/// Draw minimum p-values over `hp.trials()` independent trials.
pub fn sample_min_pvalues(hp: &HackingParams, cfg: &MCConfig) -> Result<EmpiricalDistribution> {
    sample_minimum(&hp.base, hp.trials(), cfg)
}

/// Data-level pipeline: `n` unit-variance Gaussian observations with true mean
/// `ζ̄ / sqrt(n)`, statistic `m_v / (s_v / sqrt(n))`, one-tailed p-value from
/// the same reference survival function.
///
/// The statistic here is noncentral-T rather than a shifted central T, so
/// only its median is expected to match [`sample_pvalues`].
pub fn sample_pvalues_data_level(params: &MetaDistParams, cfg: &MCConfig) -> Result<EmpiricalDistribution> {
    cfg.validate()?;
    let n = params
        .sample_size()
        .finite()
        .ok_or_else(|| Error::domain("the data-level pipeline needs a finite sample size"))?;
    let size = SampleSize::Finite(n);
    let shift = location_from_median(params)?;
    let k = n as f64;
    let mu = shift / k.sqrt();

    let parts: Vec<Vec<f64>> = cfg
        .blocks()
        .par_iter()
        .map(|&(stream, len)| {
            let mut rng = stream_rng(cfg.seed, stream);
            let mut obs = vec![0.0; n as usize];
            (0..len)
                .map(|_| {
                    for o in obs.iter_mut() {
                        *o = mu + rng.sample::<f64, _>(StandardNormal);
                    }
                    let mean = obs.iter().sum::<f64>() / k;
                    let var = obs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
                    let t = mean / (var.sqrt() / k.sqrt());
                    statistic::survival(t, size)
                })
                .collect()
        })
        .collect();
    EmpiricalDistribution::from_samples(parts.concat())
}

/// Kolmogorov-Smirnov distance `sup |F_emp - F|`, checking both one-sided
/// gaps at every sample point.
pub fn ks_distance<F>(emp: &EmpiricalDistribution, analytic_cdf: F) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let s = emp.sorted_samples();
    let total = s.len() as f64;
    s.par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = analytic_cdf(x);
            let above = (i as f64 + 1.0) / total - f;
            let below = f - i as f64 / total;
            above.max(below)
        })
        .reduce(|| 0.0, f64::max)
}
