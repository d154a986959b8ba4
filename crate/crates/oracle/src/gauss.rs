//! Standard normal upper tail `P(Z > k)` to well over 50 significant digits.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::{Fixed, Sci};

/// Above this `k` the Maclaurin route gets expensive; the asymptotic
/// expansion is then exact to far more digits than we keep.
const TAYLOR_LIMIT: f64 = 40.0;

/// Upper tail probability at the exact binary value of `k`.
pub fn gauss_tail(k: f64) -> Sci {
    assert!(k >= 0.0 && k.is_finite());
    if k <= TAYLOR_LIMIT {
        taylor(k)
    } else {
        asymptotic(k)
    }
}

/// `0.5 * erfc(k / sqrt 2)` from the alternating Maclaurin series of erf,
/// carried with enough guard digits to absorb the cancellation.
fn taylor(k: f64) -> Sci {
    let x2_approx = k * k / 2.0;
    let digits = (2.0 * x2_approx * std::f64::consts::LOG10_E).ceil() as u32 + 90;
    let f = Fixed::new(digits);
    let kk = f.from_f64(k);
    let x2 = f.mul(&kk, &kk) / 2;
    let x = f.sqrt(&x2);

    let mut term = x;
    let mut sum = BigInt::zero();
    let mut n: i64 = 0;
    loop {
        let t = &term / (2 * n + 1);
        if n % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        n += 1;
        term = f.mul(&term, &x2) / n;
        if term.is_zero() {
            break;
        }
    }
    let sqrt_pi = f.sqrt(&f.pi());
    let erf = f.div(&(sum * 2), &sqrt_pi);
    let p = (f.one() - erf) / 2;
    f.to_sci(&p)
}

/// log10 p = -(k^2/2) log10 e - log10(k sqrt(2 pi)) + log10 S, with the
/// correction sum S truncated at its smallest term.
fn asymptotic(k: f64) -> Sci {
    let digits = 80 + (k * k).log10().ceil() as u32;
    let f = Fixed::new(digits);
    let kk = f.from_f64(k);
    let z = f.mul(&kk, &kk);

    let mut s = f.one();
    let mut term = f.one();
    let mut n: i64 = 1;
    loop {
        let next = f.div(&(&term * (2 * n - 1)), &z);
        if next.is_zero() || next.abs() >= term.abs() {
            break;
        }
        term = -next;
        s += &term;
        n += 1;
    }

    let ln10 = f.ln10();
    let two_pi = f.pi() * 2;
    let prefactor = f.mul(&kk, &f.sqrt(&two_pi));
    let half_z: BigInt = &z / 2;
    let ln_p = -half_z - f.ln(&prefactor) + f.ln(&s);
    let log10_p = f.div(&ln_p, &ln10);
    f.log10_to_sci(&log10_p)
}
