use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::Sci;

/// Decimal fixed-point arithmetic: a value `v` is stored as the integer
/// `round(v * 10^digits)`.
#[derive(Debug, Clone)]
pub struct Fixed {
    digits: u32,
    one: BigInt,
}

impl Fixed {
    pub fn new(digits: u32) -> Self {
        Fixed {
            digits,
            one: BigInt::from(10u32).pow(digits),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn one(&self) -> BigInt {
        self.one.clone()
    }

    pub fn int(&self, n: i64) -> BigInt {
        BigInt::from(n) * &self.one
    }

    /// The exact binary value of `v`, scaled. Exact whenever the binary
    /// exponent of `v` is no smaller than `-digits`.
    pub fn from_f64(&self, v: f64) -> BigInt {
        assert!(v.is_finite());
        if v == 0.0 {
            return BigInt::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let scaled = BigInt::from(mant) * &self.one;
        let out = if exp >= 0 {
            scaled << exp as usize
        } else {
            scaled >> (-exp) as usize
        };
        out * sign
    }

    /// `num / den` as a fixed-point value.
    pub fn ratio(&self, num: i64, den: i64) -> BigInt {
        self.div(&self.int(num), &self.int(den))
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) / &self.one
    }

    pub fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * &self.one) / b
    }

    pub fn sqrt(&self, a: &BigInt) -> BigInt {
        assert!(!a.is_negative());
        (a * &self.one).sqrt()
    }

    fn atan_inv(&self, n: i64) -> BigInt {
        // atan(1/n) = sum (-1)^i / ((2i+1) n^(2i+1))
        let n2 = BigInt::from(n * n);
        let mut power = self.one.clone() / n;
        let mut sum = BigInt::zero();
        let mut i: i64 = 0;
        while !power.is_zero() {
            let term = &power / (2 * i + 1);
            if i % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &n2;
            i += 1;
        }
        sum
    }

    pub fn pi(&self) -> BigInt {
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
        self.atan_inv(5) * 16 - self.atan_inv(239) * 4
    }

    fn atanh(&self, z: &BigInt) -> BigInt {
        let z2 = self.mul(z, z);
        let mut power = z.clone();
        let mut sum = BigInt::zero();
        let mut i: i64 = 0;
        while !power.is_zero() {
            sum += &power / (2 * i + 1);
            power = self.mul(&power, &z2);
            i += 1;
        }
        sum
    }

    pub fn ln2(&self) -> BigInt {
        // ln 2 = 2 atanh(1/3)
        self.atanh(&(self.one.clone() / 3)) * 2
    }

    pub fn ln(&self, a: &BigInt) -> BigInt {
        assert!(a.is_positive());
        let shift = a.bits() as i64 - self.one.bits() as i64;
        let m = if shift >= 0 {
            a >> shift as usize
        } else {
            a << (-shift) as usize
        };
        let z = self.div(&(&m - &self.one), &(&m + &self.one));
        self.atanh(&z) * 2 + self.ln2() * shift
    }

    pub fn ln10(&self) -> BigInt {
        self.ln(&self.int(10))
    }

    /// Decimal exponent and log10 fraction of a positive fixed-point value.
    pub fn to_sci(&self, a: &BigInt) -> Sci {
        assert!(a.is_positive(), "to_sci needs a positive value");
        let s = a.to_str_radix(10);
        let exponent = s.len() as i64 - 1 - self.digits as i64;
        let lead: String = s.chars().take(30).collect();
        let mantissa: f64 = format!("{}.{}", &lead[..1], &lead[1..]).parse().unwrap();
        let mut fraction = mantissa.log10();
        if fraction >= 1.0 {
            fraction = 0.0;
        }
        Sci { exponent, fraction }
    }

    /// Splits a fixed-point base-10 logarithm into integer and fraction.
    pub fn log10_to_sci(&self, l: &BigInt) -> Sci {
        let (q, r) = l.div_mod_floor(&self.one);
        let r_digits = format!("{:0>width$}", r.to_str_radix(10), width = self.digits as usize);
        let fraction: f64 = format!("0.{}", &r_digits[..self.digits.min(30) as usize])
            .parse()
            .unwrap();
        Sci {
            exponent: q.to_i64().unwrap(),
            fraction,
        }
    }

    pub fn to_f64(&self, a: &BigInt) -> f64 {
        let neg = a.sign() == Sign::Minus;
        let abs = a.abs();
        let (q, r) = abs.div_rem(&self.one);
        let r_digits = format!("{:0>width$}", r.to_str_radix(10), width = self.digits as usize);
        let v: f64 = format!("{}.{}", q, &r_digits[..self.digits.min(30) as usize])
            .parse()
            .unwrap();
        if neg {
            -v
        } else {
            v
        }
    }
}
