//! Student-T density, one-tailed survival function and its inverse.

use super::beta::{ibeta_pair, inv_ibeta_pair, ln_beta};
use crate::error::{Error, Result};

/// Magnitude returned by the inverse survival function when the target is
/// below the smallest representable tail (the true quantile overflows).
pub const T_SATURATION: f64 = 1e300;

fn check_dof(n: u32) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::domain("Student-T degrees of freedom must be at least 1"))
    }
}

/// Density at `z` of a Student-T with `n` degrees of freedom centred on `location`:
/// `(n / ((location - z)^2 + n))^((n+1)/2) / (sqrt(n) B(n/2, 1/2))`.
pub fn student_t_pdf(z: f64, location: f64, n: u32) -> Result<f64> {
    check_dof(n)?;
    Ok(t_pdf(z - location, n as f64))
}

/// One-tailed survival `P(T > z)` of the central Student-T.
pub fn student_t_survival(z: f64, n: u32) -> Result<f64> {
    check_dof(n)?;
    Ok(t_sf(z, n as f64))
}

/// The `z` with `P(T > z) = p`; positive exactly when `p < 1/2`.
pub fn student_t_survival_inverse(p: f64, n: u32) -> Result<f64> {
    check_dof(n)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("survival probability {p} is not in (0, 1)")));
    }
    t_isf(p, n as f64)
}

pub(crate) fn t_pdf(d: f64, n: f64) -> f64 {
    let log = -0.5 * (n + 1.0) * (d * d / n).ln_1p() - 0.5 * n.ln() - ln_beta(0.5 * n, 0.5);
    log.exp()
}

pub(crate) fn t_sf(z: f64, n: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    let r = z / n.sqrt();
    let r2 = r * r;
    // x = n / (z^2 + n), y = z^2 / (z^2 + n)
    let (x, y) = if r2.is_finite() {
        (1.0 / (1.0 + r2), r2 / (1.0 + r2))
    } else {
        (0.0, 1.0)
    };
    if z >= 0.0 {
        0.5 * ibeta_pair(x, y, 0.5 * n, 0.5).0
    } else {
        0.5 * (ibeta_pair(y, x, 0.5, 0.5 * n).0 + 1.0)
    }
}

pub(crate) fn t_isf(p: f64, n: f64) -> Result<f64> {
    if p == 0.5 {
        return Ok(0.0);
    }
    let half = 0.5 * n;
    // (x, y) = (n / (z^2 + n), z^2 / (z^2 + n))
    let (x, y, sign) = if p < 0.5 {
        let (x, y) = inv_ibeta_pair(2.0 * p, 1.0 - 2.0 * p, half, 0.5)?;
        (x, y, 1.0)
    } else {
        let (y, x) = inv_ibeta_pair(2.0 * p - 1.0, 2.0 * (1.0 - p), 0.5, half)?;
        (x, y, -1.0)
    };
    if x <= 0.0 {
        return Ok(sign * T_SATURATION);
    }
    let z = n.sqrt() * y.sqrt() / x.sqrt();
    Ok(sign * z.min(T_SATURATION))
}
