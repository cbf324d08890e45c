//! Density of the projected power `β_c` of a paired T-test for a given
//! p-value `p_s` and sample size `n`.
//!
//! The two branches are evaluated term for term in the inverse regularized
//! beta quantities `γ₁ = I^{-1}_{2β_c}(n/2, 1/2)` (`β_c < 1/2`),
//! `γ₂ = I^{-1}_{2β_c-1}(1/2, n/2)` (`β_c > 1/2`) and
//! `γ₃ = I^{-1}_{2p_s-1}(n/2, 1/2)`, with no algebraic simplification, so
//! each factor can be audited against the closed form. In particular the
//! ratio `B(1/2, n/2) / B(n/2, 1/2)`, identically 1, is still computed.

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureConfig};
use crate::specfun::{beta, inv_ibeta_pair};
use crate::types::{Estimate, PValue};

/// Inputs of the projected-power density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerParams {
    p_s: PValue,
    n: u32,
}

impl PowerParams {
    /// `p_s` must lie in `(1/2, 1)` so that the `γ₃` argument `2p_s - 1` is in `(0, 1)`.
    pub fn new(p_s: f64, n: u32) -> Result<Self> {
        let p = PValue::new(p_s)?;
        if n < 2 {
            return Err(Error::domain(format!("sample size {n} is below the floor of 2")));
        }
        let arg = gamma3_argument(p_s);
        if !(arg > 0.0 && arg < 1.0) {
            return Err(Error::domain(format!(
                "γ3 argument 2·p_s - 1 = {arg} is outside (0, 1); p_s must lie in (1/2, 1)"
            )));
        }
        Ok(PowerParams { p_s: p, n })
    }

    pub fn p_s(&self) -> f64 {
        self.p_s.get()
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

/// Subscript of the inverse beta defining `γ₃`.
///
/// A variant with a leading `1,` in the subscript, `(1, 2p_s - 1)`, is treated
/// as a typo. This is the only place that reading lives.
#[inline]
pub fn gamma3_argument(p_s: f64) -> f64 {
    2.0 * p_s - 1.0
}

/// `γ₃ = I^{-1}_{2p_s-1}(n/2, 1/2)`.
pub fn gamma3(params: &PowerParams) -> Result<f64> {
    let arg = gamma3_argument(params.p_s());
    let half_n = 0.5 * params.n as f64;
    Ok(inv_ibeta_pair(arg, 1.0 - arg, half_n, 0.5)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIntermediates {
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub gamma3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerEvaluation {
    pub value: f64,
    pub intermediates: PowerIntermediates,
    /// `B(1/2, n/2) / B(n/2, 1/2)` as computed (upper branch only; 1 otherwise).
    pub beta_ratio: f64,
}

impl PowerEvaluation {
    /// Negative densities are reported, never clipped.
    pub fn is_negative(&self) -> bool {
        self.value < 0.0
    }
}

/// Projected-power density at `beta_c`.
pub fn power_metadensity(beta_c: f64, params: &PowerParams) -> Result<PowerEvaluation> {
    if !(beta_c > 0.0 && beta_c < 1.0) || beta_c == 0.5 {
        return Err(Error::domain(format!(
            "β_c = {beta_c} must lie in (0, 1) and differ from 1/2"
        )));
    }
    let n = params.n as f64;
    let half_n = 0.5 * n;
    let g3 = gamma3(params)?;
    let s3 = (1.0 / g3 - 1.0).sqrt();
    let expo = 0.5 * (n + 1.0);

    let (value, intermediates, beta_ratio) = if beta_c < 0.5 {
        let arg = 2.0 * beta_c;
        let (g1, c1) = inv_ibeta_pair(arg, 1.0 - arg, half_n, 0.5)?;
        if !(g1 > 0.0 && c1 > 0.0) {
            return Err(Error::domain(format!("γ1 = {g1} degenerate at β_c = {beta_c}")));
        }
        // sqrt(-(γ1 - 1) γ1)
        let r = (c1 * g1).sqrt();
        let den = 2.0 * s3 * r - 2.0 * r + g1 * (2.0 * s3 - 1.0 / g3) - 1.0;
        let base = -g1 / den;
        let v = c1.sqrt() * g1.powf(-half_n) * power_of(base, expo, "γ1")? / r;
        (
            v,
            PowerIntermediates {
                gamma1: Some(g1),
                gamma2: None,
                gamma3: g3,
            },
            1.0,
        )
    } else {
        let arg = 2.0 * beta_c - 1.0;
        let (g2, c2) = inv_ibeta_pair(arg, 2.0 * (1.0 - beta_c), 0.5, half_n)?;
        if !(g2 > 0.0 && c2 > 0.0) {
            return Err(Error::domain(format!("γ2 = {g2} degenerate at β_c = {beta_c}")));
        }
        let r = (c2 * g2).sqrt();
        let b_upper = beta(0.5, half_n);
        let b_lower = beta(half_n, 0.5);
        // (γ2 - 1) = -c2
        let frac = (-2.0 * (r + g2) * s3 + 2.0 * s3 + 2.0 * r - 1.0) / (-c2);
        let base = 1.0 / (frac + 1.0 / g3);
        let v = g2.sqrt() * c2.powf(-half_n) * b_upper * power_of(base, expo, "γ2")? / (r * b_lower);
        (
            v,
            PowerIntermediates {
                gamma1: None,
                gamma2: Some(g2),
                gamma3: g3,
            },
            b_upper / b_lower,
        )
    };

    if !value.is_finite() {
        return Err(Error::domain(format!(
            "power density is not finite at β_c = {beta_c} (γ3 = {g3})"
        )));
    }
    Ok(PowerEvaluation {
        value,
        intermediates,
        beta_ratio,
    })
}

/// `base^expo`, refusing a negative base with a fractional exponent.
fn power_of(base: f64, expo: f64, gamma: &str) -> Result<f64> {
    if base < 0.0 && expo.fract() != 0.0 {
        return Err(Error::domain(format!(
            "negative base {base} raised to (n+1)/2 = {expo} in the {gamma} branch"
        )));
    }
    Ok(base.powf(expo))
}

/// `∫_0^1` of the projected-power density, split at `β_c = 1/2`.
///
/// Reported as a diagnostic; it is not forced to equal 1.
pub fn power_metadensity_integral(params: &PowerParams, quad: &QuadratureConfig) -> Result<Estimate> {
    let f = |b: f64| power_metadensity(b, params).map(|e| e.value).unwrap_or(f64::NAN);
    let lower = integrate(f, 0.0, 0.5, quad)?;
    let upper = integrate(f, 0.5, 1.0, quad)?;
    if !(lower.value.is_finite() && upper.value.is_finite()) {
        return Err(Error::domain("projected-power density produced a non-finite value"));
    }
    Ok(Estimate {
        value: lower.value + upper.value,
        abs_error: lower.abs_error + upper.abs_error,
    })
}
