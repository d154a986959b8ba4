//! Slow, high-precision reference computations for the `hisigma` test suites.
//!
//! Nothing in here shares code with the library under test. The Gaussian
//! tail is evaluated with big fixed-point integers (several hundred decimal
//! digits), binomial tails with exact integer arithmetic, and Student-t tails
//! by adaptive quadrature of the density.

mod fixed;
pub mod binomial;
pub mod gauss;
pub mod quad;

pub use fixed::Fixed;

/// A positive real split as `10^(exponent + fraction)`, `fraction` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sci {
    pub exponent: i64,
    pub fraction: f64,
}

impl Sci {
    pub fn log10(&self) -> f64 {
        self.exponent as f64 + self.fraction
    }

    pub fn mantissa(&self) -> f64 {
        10f64.powf(self.fraction)
    }

    /// `|self / other - 1|`, evaluated without forming either value.
    pub fn rel_diff(&self, exponent: i64, fraction: f64) -> f64 {
        let d = (self.exponent - exponent) as f64 + (self.fraction - fraction);
        (d * std::f64::consts::LN_10).exp_m1().abs()
    }

    /// Value as an ordinary float (underflows to zero for tiny values).
    pub fn to_f64(&self) -> f64 {
        10f64.powf(self.log10())
    }
}
