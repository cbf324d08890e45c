//! Reference distribution of the test statistic: a central Student-T with `n`
//! degrees of freedom, or the standard Gaussian in the large-sample limit.
//!
//! `survival` is the one-tailed p-value map `g`, `inverse_survival` its
//! inverse and `density` the central kernel `|g'|`.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::error::Result;
use crate::specfun::{erfc, inv_erfc_unchecked, t_isf, t_pdf, t_sf};
use crate::types::SampleSize;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

pub fn survival(z: f64, n: SampleSize) -> f64 {
    match n {
        SampleSize::Finite(k) => t_sf(z, k as f64),
        SampleSize::Limit => 0.5 * erfc(z * FRAC_1_SQRT_2),
    }
}

/// `g^{-1}(p)`; saturates to a large finite magnitude at `p = 0` or `p = 1`.
pub fn inverse_survival(p: f64, n: SampleSize) -> Result<f64> {
    match n {
        SampleSize::Finite(k) => {
            if p <= 0.0 {
                Ok(crate::specfun::T_SATURATION)
            } else if p >= 1.0 {
                Ok(-crate::specfun::T_SATURATION)
            } else {
                t_isf(p, k as f64)
            }
        }
        SampleSize::Limit => Ok(SQRT_2 * inv_erfc_unchecked(2.0 * p)),
    }
}

pub fn density(z: f64, n: SampleSize) -> f64 {
    match n {
        SampleSize::Finite(k) => t_pdf(z, k as f64),
        SampleSize::Limit => (-0.5 * z * z - LN_SQRT_2PI).exp(),
    }
}

/// `ln(density(z - shift) / density(z))` without forming either density.
pub fn log_density_ratio(z: f64, shift: f64, n: SampleSize) -> f64 {
    match n {
        SampleSize::Finite(k) => {
            let k = k as f64;
            let d = z - shift;
            0.5 * (k + 1.0) * ((z * z / k).ln_1p() - (d * d / k).ln_1p())
        }
        SampleSize::Limit => shift * (z - 0.5 * shift),
    }
}
