//! Regularized incomplete beta function and its inverse.

use crate::error::{Error, Result};

const CF_MAX_ITER: usize = 10_000;
const CF_EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;

/// Maximum number of safeguarded Halley steps in the inverse.
pub const INVERSE_MAX_ITER: usize = 200;

/// Validated arguments of `I_x(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaArgs {
    x: f64,
    a: f64,
    b: f64,
}

impl BetaArgs {
    pub fn new(x: f64, a: f64, b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain(format!(
                "incomplete beta endpoint x = {x} is not in [0, 1]"
            )));
        }
        check_shapes(a, b)?;
        Ok(BetaArgs { x, a, b })
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
}

fn check_shapes(a: f64, b: f64) -> Result<()> {
    if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "beta shapes must be positive and finite, got a = {a}, b = {b}"
        )))
    }
}

/// `ln Γ(x) - (x - 1/2) ln x + x - ln √(2π)` for `x >= 15`.
fn stirling_tail(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 / 1188.0))))
}

/// `ln B(a, b)`.
///
/// When one shape is large the difference `ln Γ(a) - ln Γ(a + b)` is formed
/// from Stirling's series directly instead of subtracting two large values.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if big < 15.0 {
        return libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b);
    }
    let sum = big + small;
    let diff =
        -(big - 0.5) * (small / big).ln_1p() - small * sum.ln() + small + stirling_tail(big) - stirling_tail(sum);
    libm::lgamma(small) + diff
}

/// Complete beta function `B(a, b)`.
pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

/// Continued fraction for `I_x(a, b)` (modified Lentz), valid for
/// `x < (a + 1) / (a + b + 2)`.
fn beta_cf(x: f64, a: f64, b: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// `x^a (1-x)^b / B(a, b)` with `y = 1 - x` supplied by the caller.
fn power_prefactor(x: f64, y: f64, a: f64, b: f64) -> f64 {
    (a * x.ln() + b * y.ln() - ln_beta(a, b)).exp()
}

/// Returns `(I_x(a, b), 1 - I_x(a, b))`, each to full relative precision.
///
/// `y` must equal `1 - x`; passing it separately keeps digits when `x` is
/// close to 1.
pub(crate) fn ibeta_pair(x: f64, y: f64, a: f64, b: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 1.0);
    }
    if y <= 0.0 {
        return (1.0, 0.0);
    }
    let front = power_prefactor(x, y, a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        let v = front * beta_cf(x, a, b) / a;
        (v, 1.0 - v)
    } else {
        let v = front * beta_cf(y, b, a) / b;
        (1.0 - v, v)
    }
}

#[inline]
pub(crate) fn ibeta(x: f64, a: f64, b: f64) -> f64 {
    ibeta_pair(x, 1.0 - x, a, b).0
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_inc_beta(args: BetaArgs) -> f64 {
    ibeta(args.x, args.a, args.b)
}

/// Derivative of `I_x(a, b)` with respect to `x`.
pub fn reg_inc_beta_derivative(x: f64, a: f64, b: f64) -> f64 {
    let y = 1.0 - x;
    if x <= 0.0 || y <= 0.0 {
        return if (x <= 0.0 && a < 1.0) || (y <= 0.0 && b < 1.0) {
            f64::INFINITY
        } else if (x <= 0.0 && a == 1.0) || (y <= 0.0 && b == 1.0) {
            (-ln_beta(a, b)).exp()
        } else {
            0.0
        };
    }
    ((a - 1.0) * x.ln() + (b - 1.0) * y.ln() - ln_beta(a, b)).exp()
}

/// Inverse of `I_x(a, b)` in `x`: returns `x` with `I_x(a, b) = q`.
pub fn inv_reg_inc_beta(q: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain(format!(
            "inverse incomplete beta target q = {q} is not in [0, 1]"
        )));
    }
    check_shapes(a, b)?;
    Ok(inv_ibeta_pair(q, 1.0 - q, a, b)?.0)
}

/// Solve `I_x(a, b) = q` with `qc = 1 - q` supplied separately.
///
/// Returns `(x, 1 - x)`. The smaller of the two is solved for directly so it
/// keeps full relative precision.
pub(crate) fn inv_ibeta_pair(q: f64, qc: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    if q <= 0.0 {
        return Ok((0.0, 1.0));
    }
    if qc <= 0.0 {
        return Ok((1.0, 0.0));
    }
    let (at_half, _) = ibeta_pair(0.5, 0.5, a, b);
    if q <= at_half {
        let x = solve_lower(q, qc, a, b)?;
        Ok((x, 1.0 - x))
    } else {
        // 1 - I_x(a, b) = I_{1-x}(b, a)
        let y = solve_lower(qc, q, b, a)?;
        Ok((1.0 - y, y))
    }
}

/// Initial estimate for the root of `I_x(a, b) = q`.
fn initial_guess(q: f64, a: f64, b: f64) -> f64 {
    if a >= 1.0 && b >= 1.0 {
        let pp = if q < 0.5 { q } else { 1.0 - q };
        let t = (-2.0 * pp.ln()).sqrt();
        let mut x = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if q < 0.5 {
            x = -x;
        }
        let al = (x * x - 3.0) / 6.0;
        let h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
        let w = x * (al + h).sqrt() / h
            - (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
        a / (a + b * (2.0 * w).exp())
    } else {
        let lna = (a / (a + b)).ln();
        let lnb = (b / (a + b)).ln();
        let t = (a * lna).exp() / a;
        let u = (b * lnb).exp() / b;
        let w = t + u;
        if q < t / w {
            (a * w * q).powf(1.0 / a)
        } else {
            1.0 - (b * w * (1.0 - q)).powf(1.0 / b)
        }
    }
}

/// Root of `I_x(a, b) = q` known to lie in `(0, 1/2]`. When `q` is close to 1
/// the residual is taken on the complement side, `(1 - q) - (1 - I_x)`.
fn solve_lower(q: f64, qc: f64, a: f64, b: f64) -> Result<f64> {
    let mut lo = 0.0_f64;
    let mut hi = 0.5_f64;
    let mut x = initial_guess(q, a, b);
    if !(x > lo && x < hi) {
        // Leading-order power law near the origin.
        let power = (q.ln() + a.ln() + ln_beta(a, b)) / a;
        x = power.exp().clamp(f64::MIN_POSITIVE, 0.25);
    }

    let curvature = |x: f64| (a - 1.0) / x - (b - 1.0) / (1.0 - x);

    for _ in 0..INVERSE_MAX_ITER {
        let (ix, icx) = ibeta_pair(x, 1.0 - x, a, b);
        let f = if q <= 0.5 { ix - q } else { qc - icx };
        if f == 0.0 {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }

        let slope = reg_inc_beta_derivative(x, a, b);
        let mut next = f64::NAN;
        if slope.is_finite() && slope > 0.0 {
            let newton = f / slope;
            let correction = (0.5 * newton * curvature(x)).clamp(-0.5, 0.5);
            next = x - newton / (1.0 - correction);
        }
        if !(next > lo && next < hi) {
            next = if lo > 0.0 && hi / lo > 8.0 {
                (lo * hi).sqrt()
            } else if lo == 0.0 {
                0.125 * hi
            } else {
                0.5 * (lo + hi)
            };
        }

        let step = (next - x).abs();
        x = next;
        if step <= 2.0 * f64::EPSILON * x || hi - lo <= 2.0 * f64::EPSILON * hi {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        what: "inverse incomplete beta",
        value: x,
        abs_error: hi - lo,
    })
}
