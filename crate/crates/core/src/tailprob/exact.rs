//! Upper tail of the standard normal for moderate `k` without forming
//! `1 - Phi(k)`.
//!
//! Below [`SERIES_MAX_K`] the tail is `1/2 - phi(k) * sum k^(2n+1)/(2n+1)!!`;
//! the subtraction there costs at most two decimal digits. Above it the
//! Mills ratio `R(k) = p(k)/phi(k)` comes from its Laplace continued fraction
//! `1/(k + 1/(k + 2/(k + 3/(k + ...))))` and the result is assembled as a
//! logarithm, so nothing underflows.

use crate::error::{Error, Result};
use crate::magnum::Magnitude;
use crate::scalar::Scalar;

use super::{gaussian_log10_kernel, log10_sqrt_two_pi};

/// Switch from the power series to the continued fraction.
pub const SERIES_MAX_K: f64 = 2.5;

const MAX_ITERATIONS: u32 = 20_000;

pub(crate) struct Evaluation<T> {
    pub probability: Magnitude<T>,
    pub terms: u32,
    pub bound: T,
    /// Decimal digits given up to the `1/2 - x` subtraction.
    pub digits_cancelled: T,
}

pub(crate) fn upper_tail<T: Scalar>(k: T) -> Result<Evaluation<T>> {
    if k == T::zero() {
        return Ok(Evaluation {
            probability: Magnitude::from_real(T::lit(0.5))?,
            terms: 0,
            bound: T::zero(),
            digits_cancelled: T::zero(),
        });
    }
    if k < T::lit(SERIES_MAX_K) {
        series(k)
    } else {
        continued_fraction(k)
    }
}

fn series<T: Scalar>(k: T) -> Result<Evaluation<T>> {
    let u = T::unit_roundoff();
    let k2 = k * k;
    let mut term = k;
    let mut sum = k;
    let mut n = 1u32;
    loop {
        term = term * k2 / T::from_u32(2 * n + 1).expect("small");
        sum = sum + term;
        n += 1;
        if term <= u * sum || n >= MAX_ITERATIONS {
            break;
        }
    }
    let pdf = (-(k2 * T::lit(0.5))).exp() / (T::PI() + T::PI()).sqrt();
    let body = pdf * sum;
    let p = T::lit(0.5) - body;
    if p <= T::zero() {
        return Err(Error::domain("series lost all precision"));
    }
    Ok(Evaluation {
        probability: Magnitude::from_real(p)?,
        terms: n,
        bound: term / sum,
        digits_cancelled: (T::lit(0.5) / p).log10(),
    })
}

/// Mills ratio continued fraction, evaluated by the modified Lentz method.
fn mills_denominator<T: Scalar>(k: T) -> (T, u32, T) {
    let u = T::unit_roundoff();
    let tiny = T::min_positive_value().sqrt();
    let mut f = k;
    let mut c = f;
    let mut d = T::zero();
    let mut n = 1u32;
    let mut delta;
    loop {
        let a = T::from_u32(n).expect("small");
        d = k + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = k + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= u || n >= MAX_ITERATIONS {
            break;
        }
        n += 1;
    }
    (f, n, (delta - T::one()).abs())
}

fn continued_fraction<T: Scalar>(k: T) -> Result<Evaluation<T>> {
    let (denominator, terms, bound) = mills_denominator(k);
    let (hi, lo) = gaussian_log10_kernel(k);
    let small = -log10_sqrt_two_pi::<T>() - denominator.precise_log10();
    Ok(Evaluation {
        probability: Magnitude::from_log10_parts(hi, lo + small)?,
        terms,
        bound,
        digits_cancelled: T::zero(),
    })
}
