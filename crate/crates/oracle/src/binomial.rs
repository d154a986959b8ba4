//! Exact binomial upper tails for decimal success probabilities.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::Sci;

/// Splits a decimal literal such as `"3.057e-138"` or `"0.02275"` into an
/// integer numerator and a power-of-ten denominator exponent.
fn decimal_parts(text: &str) -> (BigInt, u64) {
    let (mant, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i64>().unwrap()),
        None => (text, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let digits: BigInt = format!("{int_part}{frac_part}").parse().unwrap();
    let scale = frac_part.len() as i64 - exp;
    if scale >= 0 {
        (digits, scale as u64)
    } else {
        (digits * BigInt::from(10u32).pow((-scale) as u32), 0)
    }
}

/// `P(X >= m)` for `X ~ Binomial(n, p)`, with `p` given as decimal text.
/// Exact integer arithmetic; intended for `n` up to a few thousand.
pub fn tail_at_least(n: u64, m: u64, p: &str) -> Sci {
    assert!(m <= n);
    if m == 0 {
        return Sci {
            exponent: 0,
            fraction: 0.0,
        };
    }
    let (a, q) = decimal_parts(p);
    let b = BigInt::from(10u32).pow(q as u32);
    assert!(a > BigInt::zero() && a < b, "p must lie in (0, 1)");
    let c = &b - &a;

    // sum_{j=m}^{n} C(n,j) a^j c^(n-j), accumulated from j = n downwards so
    // that powers of c grow incrementally.
    let mut a_pow = vec![BigInt::one()];
    for j in 1..=n as usize {
        let next = &a_pow[j - 1] * &a;
        a_pow.push(next);
    }
    let mut binom = BigInt::one(); // C(n, n)
    let mut c_pow = BigInt::one();
    let mut total = BigInt::zero();
    let mut j = n;
    loop {
        total += &binom * &a_pow[j as usize] * &c_pow;
        if j == m {
            break;
        }
        // C(n, j-1) = C(n, j) * j / (n - j + 1)
        binom = binom * j / (n - j + 1);
        c_pow *= &c;
        j -= 1;
    }
    let s = total.to_str_radix(10);
    let exponent = s.len() as i64 - 1 - (q * n) as i64;
    let lead: String = s.chars().take(30).collect();
    let mantissa: f64 = format!("{}.{}", &lead[..1], &lead[1..]).parse().unwrap();
    Sci {
        exponent,
        fraction: mantissa.log10(),
    }
}
