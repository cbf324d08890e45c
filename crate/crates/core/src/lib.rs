//! Exact distribution of one-tailed p-values across statistically identical
//! repetitions of a paired T-test experiment ("meta-distribution"), the
//! distribution and expectation of the minimum p-value over `m` trials, the
//! projected-power density, and a seeded Monte Carlo oracle for all of them.
//!
//! ```
//! use pvmeta::{metadist, MetaDistParams};
//!
//! let params = MetaDistParams::limit(0.05).unwrap();
//! // Half the realizations fall below the median p-value.
//! let half = metadist::cdf(0.05, &params).unwrap();
//! assert!((half - 0.5).abs() < 1e-12);
//! ```

pub mod diagnostics;
pub mod error;
pub mod mc;
pub mod metadist;
pub mod phacking;
pub mod power;
pub mod quad;
pub mod specfun;
pub mod statistic;
pub mod types;

pub use error::{Error, Result};
pub use mc::{EmpiricalDistribution, MCConfig};
pub use metadist::{Dispersion, MetaPdfIntermediates};
pub use phacking::HackingRow;
pub use power::{PowerEvaluation, PowerIntermediates, PowerParams};
pub use quad::QuadratureConfig;
pub use specfun::BetaArgs;
pub use types::{Estimate, HackingParams, MetaDistParams, PValue, SampleSize};
