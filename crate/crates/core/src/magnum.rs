//! Extended-range positive reals held as base-10 logarithms.
//!
//! A [`Magnitude`] stores `log10(v)` split into an integer decade and a
//! fractional part in `[0, 1)`. Multiplication, division and integer powers
//! are additions and scalings of logarithms, so values such as `1e-276` or
//! `1e+272` behave like ordinary numbers. The integer decade is exact; only
//! the fraction carries rounding error, which keeps the relative accuracy of
//! the represented value independent of how far it sits from 1.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest admissible `|log10 v|`.
pub const MAX_DECADES: i64 = 1_000_000_000_000_000;

/// A nonnegative real of almost unlimited range.
#[derive(Clone, Copy, Debug)]
pub struct Magnitude<T> {
    decade: i64,
    fraction: T,
    zero: bool,
}

impl<T: Scalar> Magnitude<T> {
    pub fn zero() -> Self {
        Magnitude {
            decade: 0,
            fraction: T::zero(),
            zero: true,
        }
    }

    pub fn one() -> Self {
        Self::pow10(0)
    }

    /// Exactly `10^e`.
    pub fn pow10(e: i64) -> Self {
        Magnitude {
            decade: e,
            fraction: T::zero(),
            zero: false,
        }
    }

    /// Builds a value from `log10(v) = decade + hi + lo`, where `hi` need not
    /// be reduced and `lo` is a small correction to it.
    pub(crate) fn normalized(decade: i128, hi: T, lo: T) -> Result<Self> {
        if !(hi.is_finite() && lo.is_finite()) {
            return Err(Error::domain("logarithm is not finite"));
        }
        let cap = T::lit(2.0 * MAX_DECADES as f64);
        if hi.abs() > cap || lo.abs() > cap {
            return Err(Error::domain("magnitude exceeds 10^(+/-1e15)"));
        }
        let whole = hi.floor();
        let mut decade = decade + whole.to_i128().expect("bounded above");
        let mut fraction = (hi - whole) + lo;
        let carry = fraction.floor();
        if carry != T::zero() {
            fraction = fraction - carry;
            decade += carry.to_i128().expect("small carry");
        }
        if fraction >= T::one() {
            // -tiny + 1 rounds up to exactly 1
            fraction = T::zero();
            decade += 1;
        }
        let max = MAX_DECADES as i128;
        if decade < -max || decade > max || (decade == max && fraction > T::zero()) {
            return Err(Error::domain("magnitude exceeds 10^(+/-1e15)"));
        }
        Ok(Magnitude {
            decade: decade as i64,
            fraction,
            zero: false,
        })
    }

    /// The value whose base-10 logarithm is `l`.
    pub fn from_log10(l: T) -> Result<Self> {
        Self::normalized(0, l, T::zero())
    }

    /// `10^(hi + lo)` for a logarithm carried in two pieces.
    pub fn from_log10_parts(hi: T, lo: T) -> Result<Self> {
        Self::normalized(0, hi, lo)
    }

    pub fn from_real(v: T) -> Result<Self> {
        if !v.is_finite() || v < T::zero() {
            return Err(Error::domain(format!(
                "expected a finite nonnegative real, got {v:?}"
            )));
        }
        if v == T::zero() {
            return Ok(Self::zero());
        }
        // v = m * 2^e: the binary exponent enters through an exact product,
        // so large or tiny inputs keep full mantissa accuracy.
        let (m, e) = v.frexp();
        let (l2_hi, l2_lo) = T::log10_2_split();
        let e_t = T::from_i64(e).expect("binary exponent fits");
        let (p_hi, p_lo) = T::two_prod(e_t, l2_hi);
        let whole = p_hi.floor();
        let head = (p_hi - whole) + m.precise_log10();
        let tail = p_lo + e_t * l2_lo;
        Self::normalized(whole.to_i128().expect("bounded"), head, tail)
    }

    /// `mantissa * 10^exponent` with `mantissa` in `[1, 10)`.
    pub fn from_sci(mantissa: T, exponent: i64) -> Result<Self> {
        if !(mantissa >= T::one() && mantissa < T::lit(10.0)) {
            return Err(Error::domain(format!(
                "mantissa {mantissa:?} outside [1, 10)"
            )));
        }
        if exponent.abs() > MAX_DECADES {
            return Err(Error::domain(format!("exponent {exponent} out of range")));
        }
        Self::normalized(exponent as i128, mantissa.precise_log10(), T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// `floor(log10 v)`; zero for the zero value.
    pub fn decade(&self) -> i64 {
        self.decade
    }

    /// `log10 v - floor(log10 v)`, in `[0, 1)`.
    pub fn fraction(&self) -> T {
        self.fraction
    }

    /// `log10 v`, or negative infinity for zero. Loses the exactness of the
    /// decade once it exceeds the scalar's integer range.
    pub fn log10_value(&self) -> T {
        if self.zero {
            return T::neg_infinity();
        }
        T::from_i64(self.decade).expect("decade fits") + self.fraction
    }

    /// Decimal significand in `[1, 10)`.
    pub fn mantissa(&self) -> T {
        if self.zero {
            return T::zero();
        }
        T::lit(10.0).powf(self.fraction)
    }

    /// The value as an ordinary real; overflows to infinity or underflows
    /// to zero outside the scalar's range.
    pub fn to_real(&self) -> T {
        if self.zero {
            return T::zero();
        }
        let v = T::lit(10.0).powf(self.log10_value());
        if v == T::zero() || !v.is_finite() {
            return v;
        }
        // powf can land an ulp off; keep whichever neighbour maps back
        // closest. Neighbours the stored fraction cannot tell apart go to
        // the one with the shorter binary expansion, so 0.5 stays 0.5.
        let step = T::unit_roundoff() + T::unit_roundoff();
        let mut best = v;
        let mut best_err = self.log_distance(v);
        for c in [v * (T::one() + step), v * (T::one() - step)] {
            let err = self.log_distance(c);
            if err < best_err || (err == best_err && trailing_zeros(c) > trailing_zeros(best)) {
                best = c;
                best_err = err;
            }
        }
        best
    }

    fn log_distance(&self, v: T) -> T {
        match Self::from_real(v) {
            Ok(m) if !m.is_zero() => {
                let d = T::from_i64(m.decade - self.decade).expect("small");
                (d + (m.fraction - self.fraction)).abs()
            }
            _ => T::infinity(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.zero || other.zero {
            return Ok(Self::zero());
        }
        Self::normalized(
            self.decade as i128 + other.decade as i128,
            self.fraction + other.fraction,
            T::zero(),
        )
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.zero {
            return Err(Error::domain("division by a zero magnitude"));
        }
        if self.zero {
            return Ok(Self::zero());
        }
        Self::normalized(
            self.decade as i128 - other.decade as i128,
            self.fraction - other.fraction,
            T::zero(),
        )
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().div(self)
    }

    /// Multiplies by an ordinary nonnegative real.
    pub fn scale(&self, factor: T) -> Result<Self> {
        self.mul(&Self::from_real(factor)?)
    }

    pub fn pow_int(&self, n: i64) -> Result<Self> {
        if self.zero {
            return if n > 0 {
                Ok(Self::zero())
            } else {
                Err(Error::domain("zero raised to a nonpositive power"))
            };
        }
        let n_t = T::from_i64(n).expect("integer power fits the scalar");
        let (hi, lo) = T::two_prod(self.fraction, n_t);
        Self::normalized(self.decade as i128 * n as i128, hi, lo)
    }

    /// Total order consistent with the represented reals.
    pub fn compare(&self, other: &Self) -> Ordering {
        match (self.zero, other.zero) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self.decade.cmp(&other.decade).then_with(|| {
                self.fraction
                    .partial_cmp(&other.fraction)
                    .expect("fractions are finite")
            }),
        }
    }

    /// Scientific notation `M.MMMe±E` with `sig_digits` significant digits,
    /// rounded half to even, lowercase `e`, no exponent padding.
    pub fn format_sci(&self, sig_digits: usize) -> Result<String> {
        if !(1..=17).contains(&sig_digits) {
            return Err(Error::domain(format!(
                "significant digits must be in 1..=17, got {sig_digits}"
            )));
        }
        if self.zero {
            let mant = format!("{:.*}", sig_digits - 1, 0.0);
            return Ok(format!("{mant}e+0"));
        }
        let m = 10f64.powf(self.fraction.to_f64().expect("fraction is finite"));
        // `{:e}` rounds the exact binary value half to even and renormalises
        // 9.9999.. to 1.000e1, so only the exponent needs adjusting.
        let raw = format!("{:.*e}", sig_digits - 1, m);
        let (mant, shift) = raw.split_once('e').expect("exponent marker");
        let exp = self.decade + shift.parse::<i64>().expect("small exponent");
        let sign = if exp < 0 { '-' } else { '+' };
        Ok(format!("{mant}e{sign}{}", exp.unsigned_abs()))
    }

    /// Rounded `(mantissa, exponent)` pair matching [`Self::format_sci`].
    pub fn sci_parts(&self, sig_digits: usize) -> Result<(f64, i64)> {
        let text = self.format_sci(sig_digits)?;
        let (mant, exp) = text.split_once('e').expect("exponent marker");
        Ok((
            mant.parse().expect("formatted mantissa"),
            exp.parse().expect("formatted exponent"),
        ))
    }

    /// Parses scientific (`3.057e-138`, `1E5`) or plain decimal (`0.0000004`)
    /// text. The exponent may exceed the range of ordinary floats.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: text.to_string(),
            reason: reason.to_string(),
        };
        let t = text.trim();
        let (mant_text, exp_text) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], Some(&t[i + 1..])),
            None => (t, None),
        };
        if mant_text.is_empty()
            || !mant_text
                .chars()
                .all(|c| c.is_ascii_digit() || c == '.' || c == '+' || c == '-')
        {
            return Err(err("expected a decimal number"));
        }
        let mant: f64 = mant_text
            .parse()
            .map_err(|_| err("malformed mantissa"))?;
        let exp: i64 = match exp_text {
            Some(e) => e.parse().map_err(|_| err("malformed exponent"))?,
            None => 0,
        };
        if mant < 0.0 {
            return Err(err("negative values are not representable"));
        }
        if exp.abs() > MAX_DECADES {
            return Err(err("exponent out of range"));
        }
        let mant = T::lit(mant);
        let base = Self::from_real(mant).map_err(|e| err(&e.to_string()))?;
        if base.zero {
            return Ok(base);
        }
        base.mul(&Self::pow10(exp)).map_err(|e| err(&e.to_string()))
    }
}

impl<T: Scalar> PartialEq for Magnitude<T> {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Magnitude<T> {}

impl<T: Scalar> PartialOrd for Magnitude<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Magnitude<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl<T: Scalar> FromStr for Magnitude<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// `{}` prints four significant digits; `{:.N}` prints `N`.
impl<T: Scalar> fmt::Display for Magnitude<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(4).clamp(1, 17);
        let text = self.format_sci(digits).map_err(|_| fmt::Error)?;
        let width = f.width().unwrap_or(0);
        match f.align() {
            Some(fmt::Alignment::Left) => write!(f, "{text:<width$}"),
            Some(fmt::Alignment::Center) => write!(f, "{text:^width$}"),
            _ => write!(f, "{text:>width$}"),
        }
    }
}

/// Serialised as `{"mantissa": m, "exponent10": e}` so that values far
/// outside the double range survive JSON consumers.
impl<T: Scalar> Serialize for Magnitude<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (mantissa, exponent10) = if self.zero {
            (0.0, 0)
        } else {
            self.sci_parts(15).map_err(serde::ser::Error::custom)?
        };
        let mut st = serializer.serialize_struct("Magnitude", 2)?;
        st.serialize_field("mantissa", &mantissa)?;
        st.serialize_field("exponent10", &exponent10)?;
        st.end()
    }
}

fn trailing_zeros<T: Scalar>(v: T) -> u32 {
    v.to_f64().map_or(0, |x| (x.to_bits() & ((1u64 << 52) - 1)).trailing_zeros())
}
