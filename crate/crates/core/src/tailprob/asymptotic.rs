//! Large-`k` expansion of the Gaussian tail,
//!
//! ```text
//! p(k) = exp(-y^2) / (2 y sqrt(pi)) * S,   y = k / sqrt(2),
//! S    = sum_n (-1)^n (2n-1)!! / (2 y^2)^n
//! ```
//!
//! The series diverges for every `y`, but its terms shrink until
//! `n ~ y^2` and it alternates, so stopping at the smallest term leaves an
//! error no larger than the first term left out.

use crate::scalar::Scalar;

/// Relative size below which further terms are not added.
pub const TERM_FLOOR: f64 = 1e-18;

#[derive(Debug, Clone, Copy)]
pub(crate) struct CorrectionSum<T> {
    pub sum: T,
    pub terms: u32,
    pub first_omitted: T,
}

/// The alternating correction sum for `z = 2 y^2 = k^2`.
///
/// Terms are accepted while they strictly decrease in magnitude and stay
/// above `TERM_FLOOR` (or the scalar's unit roundoff, if smaller) relative
/// to the running sum. `max_terms` caps the count, leading term included.
pub(crate) fn correction_sum<T: Scalar>(z: T, max_terms: Option<u32>) -> CorrectionSum<T> {
    let floor = T::lit(TERM_FLOOR).min(T::unit_roundoff());
    let cap = max_terms.unwrap_or(u32::MAX).max(1);
    let mut sum = T::one();
    let mut term = T::one();
    let mut n = 1u32;
    loop {
        let next = -term * T::from_u32(2 * n - 1).expect("small") / z;
        let done = next.abs() >= term.abs() || next.abs() < floor * sum.abs() || n >= cap;
        if done {
            return CorrectionSum {
                sum,
                terms: n,
                first_omitted: next,
            };
        }
        sum = sum + next;
        term = next;
        n += 1;
    }
}

/// The appendix variant: four fixed terms with the cubic term's sign as
/// printed, `1 - 1/z + 3/z^2 + 15/z^3`.
pub(crate) fn printed_sum<T: Scalar>(z: T) -> CorrectionSum<T> {
    let inv = z.recip();
    let sum = T::one() - inv + T::lit(3.0) * inv * inv + T::lit(15.0) * inv * inv * inv;
    CorrectionSum {
        sum,
        terms: 4,
        first_omitted: T::lit(105.0) * inv * inv * inv * inv,
    }
}
