//! The regularized incomplete beta function in the log domain, so that
//! tails far below `f64::MIN_POSITIVE` keep their digits.

use crate::error::{Error, Result};

pub use statrs::function::beta::ln_beta;
pub use statrs::function::gamma::ln_gamma;

const CF_MAX_ITERATIONS: u32 = 200_000;

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_fraction(a: f64, b: f64, x: f64) -> Result<f64> {
    let tiny = 1e-300;
    let eps = f64::EPSILON / 2.0;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITERATIONS {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= eps {
            return Ok(h);
        }
    }
    Err(Error::domain(format!(
        "incomplete beta fraction did not converge for a={a}, b={b}, x={x}"
    )))
}

/// `ln I_x(a, b)`, with `x` and `1 - x` passed separately so that neither
/// loses digits when the caller knows both exactly.
pub fn ln_incomplete_beta(a: f64, b: f64, x: f64, one_minus_x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(format!("beta parameters must be positive, got a={a}, b={b}")));
    }
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&one_minus_x) {
        return Err(Error::domain(format!("beta argument {x} outside [0, 1]")));
    }
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if one_minus_x == 0.0 {
        return Ok(0.0);
    }
    let front = a * x.ln() + b * one_minus_x.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(front + beta_fraction(a, b, x)?.ln() - a.ln())
    } else {
        let rest = (front + beta_fraction(b, a, one_minus_x)?.ln() - b.ln()).exp();
        Ok((-rest).ln_1p())
    }
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    Ok(ln_incomplete_beta(a, b, x, 1.0 - x)?.exp())
}
