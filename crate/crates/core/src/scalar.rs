//! The floating-point abstraction every numeric routine is written against.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// A real scalar usable by the tail-probability machinery.
///
/// On top of `num_traits::Float`, implementors provide the handful of
/// extra-precision primitives needed to keep `k^2/2 * log10(e)` accurate when
/// the product runs to hundreds of billions.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    /// Half the gap between 1 and the next representable value.
    fn unit_roundoff() -> Self;

    /// Error-free product: `a * b == hi + lo` exactly (or to the working
    /// precision of types with no spare bits).
    fn two_prod(a: Self, b: Self) -> (Self, Self);

    /// `log10(e)` as an unevaluated sum `hi + lo`.
    fn log10_e_split() -> (Self, Self);

    /// `log10(2)` as an unevaluated sum `hi + lo`.
    fn log10_2_split() -> (Self, Self);

    /// Splits a positive finite value into `m * 2^e` with `m` in `[1, 2)`.
    fn frexp(self) -> (Self, i64);

    /// `log10` to full working precision. Defaults to `Float::log10`.
    fn precise_log10(self) -> Self {
        self.log10()
    }

    /// Converts an `f64` literal. Infallible for every implementor.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal converts to every scalar")
    }
}

impl Scalar for f64 {
    fn unit_roundoff() -> Self {
        f64::EPSILON / 2.0
    }

    fn two_prod(a: Self, b: Self) -> (Self, Self) {
        let hi = a * b;
        (hi, a.mul_add(b, -hi))
    }

    fn log10_e_split() -> (Self, Self) {
        (std::f64::consts::LOG10_E, 1.098_319_650_216_765e-17)
    }

    fn log10_2_split() -> (Self, Self) {
        (std::f64::consts::LOG10_2, -2.803_728_127_785_170_3e-18)
    }

    fn frexp(self) -> (Self, i64) {
        let bits = self.to_bits();
        let raw = ((bits >> 52) & 0x7ff) as i64;
        if raw == 0 {
            // subnormal: scale into the normal range first
            let (m, e) = (self * 2f64.powi(64)).frexp();
            return (m, e - 64);
        }
        let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
        (m, raw - 1023)
    }
}

impl Scalar for f32 {
    fn unit_roundoff() -> Self {
        f32::EPSILON / 2.0
    }

    fn two_prod(a: Self, b: Self) -> (Self, Self) {
        // 24 x 24 mantissa bits fit in an f64 without rounding
        let wide = a as f64 * b as f64;
        let hi = wide as f32;
        (hi, (wide - hi as f64) as f32)
    }

    fn log10_e_split() -> (Self, Self) {
        let hi = std::f32::consts::LOG10_E;
        (hi, (std::f64::consts::LOG10_E - hi as f64) as f32)
    }

    fn log10_2_split() -> (Self, Self) {
        let hi = std::f32::consts::LOG10_2;
        (hi, (std::f64::consts::LOG10_2 - hi as f64) as f32)
    }

    fn frexp(self) -> (Self, i64) {
        let (m, e) = (self as f64).frexp();
        (m as f32, e)
    }
}

#[cfg(feature = "double-double")]
impl Scalar for twofloat::TwoFloat {
    fn unit_roundoff() -> Self {
        // 2^-104; the crate's own `epsilon()` reports f64::MIN_POSITIVE
        twofloat::TwoFloat::from(2f64.powi(-104))
    }

    fn lit(v: f64) -> Self {
        // the crate's FromPrimitive::from_f64 truncates through i64
        twofloat::TwoFloat::from(v)
    }

    // TwoFloat::ln is only good to about 1e-12; use ln m = 2 atanh((m-1)/(m+1))
    // on the reduced mantissa instead.
    fn precise_log10(self) -> Self {
        use twofloat::consts::{LN_10, LN_2, SQRT_2};
        use twofloat::TwoFloat;
        if !self.is_finite() || self <= TwoFloat::from(0.0) {
            return self.log10();
        }
        let (mut m, mut e) = Scalar::frexp(self);
        if m > SQRT_2 {
            m /= 2.0;
            e += 1;
        }
        let s = dd_div(m - 1.0, m + 1.0);
        let s2 = s * s;
        let mut power = s;
        let mut sum = s;
        let mut n = 1.0;
        loop {
            power *= s2;
            let add = power / (2.0 * n + 1.0);
            sum += add;
            if add.abs() <= TwoFloat::from(1e-34) * sum.abs() {
                break;
            }
            n += 1.0;
        }
        dd_div(sum * 2.0 + LN_2 * e as f64, LN_10)
    }

    fn two_prod(a: Self, b: Self) -> (Self, Self) {
        (a * b, twofloat::TwoFloat::from(0.0))
    }

    fn log10_e_split() -> (Self, Self) {
        (
            <twofloat::TwoFloat as FloatConst>::LOG10_E(),
            twofloat::TwoFloat::from(0.0),
        )
    }

    fn log10_2_split() -> (Self, Self) {
        (
            <twofloat::TwoFloat as FloatConst>::LOG10_2(),
            twofloat::TwoFloat::from(0.0),
        )
    }

    fn frexp(self) -> (Self, i64) {
        let (_, e) = self.hi().frexp();
        // scaling by a power of two is exact on both halves
        let m = self * twofloat::TwoFloat::from(2f64.powi(-e as i32));
        (m, e)
    }
}

/// `x / y` to double-double precision. TwoFloat's own quotient computes
/// its correction term without a fused multiply-add and keeps only about
/// 53 bits; one residual step restores the rest.
#[cfg(feature = "double-double")]
fn dd_div(x: twofloat::TwoFloat, y: twofloat::TwoFloat) -> twofloat::TwoFloat {
    let q = x / y;
    q + (x - q * y) / y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_prod_is_exact_for_f64() {
        let a = 1.0 + f64::EPSILON;
        let (hi, lo) = f64::two_prod(a, a);
        // (1 + e)^2 = 1 + 2e + e^2; the e^2 part lands in lo
        assert_eq!(hi, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(lo, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn two_prod_is_exact_for_f32() {
        let a = 1.0f32 + f32::EPSILON;
        let (hi, lo) = f32::two_prod(a, a);
        assert_eq!(hi, 1.0 + 2.0 * f32::EPSILON);
        assert_eq!(lo, f32::EPSILON * f32::EPSILON);
    }

    #[test]
    fn frexp_splits_exactly() {
        assert_eq!(6.0f64.frexp(), (1.5, 2));
        assert_eq!(0.375f64.frexp(), (1.5, -2));
        let tiny = f64::from_bits(3); // subnormal
        let (m, e) = tiny.frexp();
        assert_eq!(m * 2f64.powi(e as i32 + 1074), 3.0);
        assert_eq!(96.0f32.frexp(), (1.5, 6));
    }

    #[test]
    fn log10_e_split_sums_to_more_digits() {
        let (hi, lo) = f32::log10_e_split();
        let sum = hi as f64 + lo as f64;
        assert!((sum - std::f64::consts::LOG10_E).abs() < 1e-14);
        let (hi, lo) = f64::log10_e_split();
        assert!(lo.abs() < hi * f64::EPSILON);
    }

    #[cfg(feature = "double-double")]
    #[test]
    fn double_double_log_is_precise() {
        use twofloat::TwoFloat;
        // log10(sqrt(2 pi)) = 0.39908993417905752478250359150769595
        let v = (TwoFloat::from(2.0) * twofloat::consts::PI).precise_log10() / 2.0;
        let want = TwoFloat::new_add(0.399_089_934_179_057_5, -1.315_474_278_941_844_2e-18);
        assert!((v - want).abs() < 1e-30, "{v:?}");
        let l = TwoFloat::from(1000.0).precise_log10();
        assert!((l - 3.0).abs() < 1e-30, "{l:?}");
        let l = TwoFloat::from(2f64.powi(-1000)).precise_log10();
        // -1000 log10(2) = -301.0299956639811952137388947244930267682
        let want = TwoFloat::new_add(-301.029_995_663_981_2, 1.471_460_498_234_982_5e-15);
        assert!((l - want).abs() < 1e-27, "{l:?}");
    }

    #[cfg(feature = "double-double")]
    #[test]
    fn double_double_quotient_is_precise() {
        use twofloat::TwoFloat;
        let third = dd_div(TwoFloat::from(1.0), TwoFloat::from(3.0));
        assert!((third * 3.0 - 1.0).abs() < 1e-31, "{third:?}");
    }

    #[cfg(feature = "double-double")]
    #[test]
    fn double_double_literals_keep_fractions() {
        let half = twofloat::TwoFloat::lit(0.5);
        assert_eq!(half.hi(), 0.5);
        assert_eq!(twofloat::TwoFloat::lit(1e-18).hi(), 1e-18);
    }
}
