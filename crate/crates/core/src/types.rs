//! Parameter and value types shared by every module.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A probability strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PValue(f64);

impl PValue {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(PValue(p))
        } else {
            Err(Error::domain(format!("p-value {p} is not in (0, 1)")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Sample size of the underlying T-test: a finite number of observations, or
/// the large-sample Gaussian limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleSize {
    Finite(u32),
    Limit,
}

impl SampleSize {
    pub fn finite(self) -> Option<u32> {
        match self {
            SampleSize::Finite(n) => Some(n),
            SampleSize::Limit => None,
        }
    }

    pub fn is_limit(self) -> bool {
        matches!(self, SampleSize::Limit)
    }
}

impl fmt::Display for SampleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSize::Finite(n) => write!(f, "{n}"),
            SampleSize::Limit => f.write_str("limit"),
        }
    }
}

impl FromStr for SampleSize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("limit") || s.eq_ignore_ascii_case("inf") {
            return Ok(SampleSize::Limit);
        }
        s.parse::<u32>()
            .map(SampleSize::Finite)
            .map_err(|_| Error::domain(format!("sample size `{s}` is neither an integer nor `limit`")))
    }
}

/// Parameters of the meta-distribution: the median p-value and the sample size.
///
/// A finite sample size must be at least 2. The median may be exactly 1/2 (the
/// location of the statistic is then zero, which is valid for sampling), but
/// the finite-n density formula itself rejects that value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetaDistParams {
    median: PValue,
    n: SampleSize,
}

impl MetaDistParams {
    pub fn new(median: f64, n: SampleSize) -> Result<Self> {
        let median = PValue::new(median)?;
        if let SampleSize::Finite(k) = n {
            if k < 2 {
                return Err(Error::domain(format!("sample size {k} is below the floor of 2")));
            }
        }
        Ok(MetaDistParams { median, n })
    }

    pub fn limit(median: f64) -> Result<Self> {
        Self::new(median, SampleSize::Limit)
    }

    pub fn finite(median: f64, n: u32) -> Result<Self> {
        Self::new(median, SampleSize::Finite(n))
    }

    #[inline]
    pub fn median(&self) -> f64 {
        self.median.get()
    }

    #[inline]
    pub fn sample_size(&self) -> SampleSize {
        self.n
    }
}

/// Base meta-distribution plus the number of independent trials whose minimum
/// p-value is reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HackingParams {
    pub base: MetaDistParams,
    trials: u32,
}

impl HackingParams {
    pub fn new(base: MetaDistParams, trials: u32) -> Result<Self> {
        if trials == 0 {
            return Err(Error::domain("trial count m must be at least 1"));
        }
        Ok(HackingParams { base, trials })
    }

    #[inline]
    pub fn trials(&self) -> u32 {
        self.trials
    }
}

/// A numerically integrated quantity with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, abs_error: 0.0 }
    }
}
