//! Student-t upper tails, as a heavy-tailed alternative to the Gaussian.
//!
//! A standardized t with `nu` degrees of freedom is rescaled to unit
//! variance, so `k` means the same number of standard deviations under both
//! models.

use std::f64::consts::PI;

use serde::Serialize;

use crate::context::order_gap;
use crate::error::{Error, Result};
use crate::magnum::Magnitude;
use crate::special::{ln_gamma, ln_incomplete_beta};
use crate::tailprob::{self, ASYMPTOTIC_MIN_K};

/// The asymptote replaces the beta formulation once its leading relative
/// correction drops below this.
pub const ASYMPTOTE_SWITCH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TDistSpec {
    pub nu: f64,
    pub standardized: bool,
}

impl TDistSpec {
    pub fn new(nu: f64, standardized: bool) -> Result<Self> {
        let spec = TDistSpec { nu, standardized };
        spec.validate()?;
        Ok(spec)
    }

    pub fn standardized(nu: f64) -> Result<Self> {
        Self::new(nu, true)
    }

    pub fn raw(nu: f64) -> Result<Self> {
        Self::new(nu, false)
    }

    fn validate(&self) -> Result<()> {
        if !self.nu.is_finite() || self.nu <= 0.0 {
            return Err(Error::domain(format!(
                "degrees of freedom must be finite and positive, got {}",
                self.nu
            )));
        }
        if self.standardized && self.nu <= 2.0 {
            return Err(Error::domain(format!(
                "a standardized t needs nu > 2 for a finite variance, got {}",
                self.nu
            )));
        }
        Ok(())
    }

    /// The raw t statistic corresponding to `k`.
    pub fn t_of(&self, k: f64) -> f64 {
        if self.standardized {
            k * (self.nu / (self.nu - 2.0)).sqrt()
        } else {
            k
        }
    }
}

/// `log10 P(T > t)` for the raw t, `t > 0`, from the incomplete beta
/// function: `P(T > t) = I_x(nu/2, 1/2) / 2` with `x = nu / (nu + t^2)`.
pub fn log10_tail_beta(t: f64, nu: f64) -> Result<f64> {
    let t2 = t * t;
    let x = nu / (nu + t2);
    let one_minus_x = t2 / (nu + t2);
    let ln_i = ln_incomplete_beta(nu / 2.0, 0.5, x, one_minus_x)?;
    Ok((ln_i - std::f64::consts::LN_2) / std::f64::consts::LN_10)
}

/// `log10(C(nu) t^-nu)`, the leading power-law term of the raw t tail, with
/// `C(nu) = Gamma((nu+1)/2) nu^(nu/2 - 1) / (Gamma(nu/2) sqrt(pi))`.
pub fn log10_tail_asymptote(t: f64, nu: f64) -> f64 {
    let ln_c = ln_gamma((nu + 1.0) / 2.0) - ln_gamma(nu / 2.0) + (nu / 2.0 - 1.0) * nu.ln()
        - 0.5 * PI.ln();
    (ln_c - nu * t.ln()) / std::f64::consts::LN_10
}

/// Relative size of the first correction to the power-law term at `t`.
pub fn asymptote_correction(t: f64, nu: f64) -> f64 {
    nu * nu * (nu + 1.0) / (2.0 * (nu + 2.0) * t * t)
}

/// `P(X > k)` for `X` distributed as described by `spec`.
pub fn student_t_tail(k: f64, spec: &TDistSpec) -> Result<Magnitude<f64>> {
    spec.validate()?;
    if !k.is_finite() || k < 0.0 {
        return Err(Error::domain(format!("k must be finite and >= 0, got {k}")));
    }
    if k == 0.0 {
        return Magnitude::from_real(0.5);
    }
    let t = spec.t_of(k);
    let log10_p = if asymptote_correction(t, spec.nu) < ASYMPTOTE_SWITCH {
        log10_tail_asymptote(t, spec.nu)
    } else {
        log10_tail_beta(t, spec.nu)?
    };
    Magnitude::from_log10(log10_p)
}

/// Orders of magnitude by which the t tail exceeds the Gaussian tail at `k`.
pub fn gap_vs_gaussian(k: f64, spec: &TDistSpec) -> Result<i64> {
    if k.is_nan() || k < ASYMPTOTIC_MIN_K {
        return Err(Error::domain(format!(
            "gap comparison is meant for k >= {ASYMPTOTIC_MIN_K}, got {k}"
        )));
    }
    let heavy = student_t_tail(k, spec)?;
    let gauss = tailprob::tail_probability(k)?;
    order_gap(&heavy, &gauss)
}
