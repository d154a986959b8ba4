//! Gaussian upper-tail probabilities `p(k) = P(Z > k)` and the quantities
//! derived from them: expected waiting times, yearly frequencies and streak
//! odds.
//!
//! Two independent evaluations exist. The exact path (`k <= 9.5`) never
//! subtracts from one; the asymptotic path (`k >= 8`) works entirely with
//! logarithms and is good to roughly `1e-15` relative out to `k = 1e6`. Auto
//! mode switches between them at `k = 9`, where both are trustworthy.

mod asymptotic;
mod exact;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::magnum::Magnitude;
use crate::scalar::Scalar;

pub use asymptotic::TERM_FLOOR;
pub use exact::SERIES_MAX_K;

/// Trading days per year.
pub const DEFAULT_DAYS_PER_YEAR: u32 = 250;
/// Auto mode uses the exact path up to and including this `k`.
pub const AUTO_SWITCH_K: f64 = 9.0;
pub const EXACT_MAX_K: f64 = 9.5;
pub const ASYMPTOTIC_MIN_K: f64 = 8.0;
/// Upper end of the bracket searched by [`sigma_for_period`].
pub const SIGMA_SEARCH_MAX_K: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMode {
    Exact,
    Asymptotic,
    PaperAppendix,
    Auto,
}

impl FromStr for TailMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "exact" => Ok(TailMode::Exact),
            "asymptotic" => Ok(TailMode::Asymptotic),
            "paper_appendix" | "appendix" => Ok(TailMode::PaperAppendix),
            "auto" => Ok(TailMode::Auto),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "expected exact, asymptotic, paper-appendix or auto".into(),
            }),
        }
    }
}

impl fmt::Display for TailMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailMode::Exact => "exact",
            TailMode::Asymptotic => "asymptotic",
            TailMode::PaperAppendix => "paper_appendix",
            TailMode::Auto => "auto",
        })
    }
}

/// The evaluation actually used for a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesPath {
    Exact,
    Asymptotic,
    PaperAppendix,
}

impl fmt::Display for SeriesPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesPath::Exact => "exact",
            SeriesPath::Asymptotic => "asymptotic",
            SeriesPath::PaperAppendix => "paper_appendix",
        })
    }
}

/// A request for `P(Z > k)`; the standard deviation is fixed at one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailQuery<T> {
    pub k: T,
    pub days_per_year: u32,
    pub mode: TailMode,
}

impl<T: Scalar> TailQuery<T> {
    pub fn new(k: T) -> Self {
        TailQuery {
            k,
            days_per_year: DEFAULT_DAYS_PER_YEAR,
            mode: TailMode::Auto,
        }
    }

    pub fn days_per_year(mut self, days: u32) -> Self {
        self.days_per_year = days;
        self
    }

    pub fn mode(mut self, mode: TailMode) -> Self {
        self.mode = mode;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesDiagnostics<T: Scalar> {
    pub path: SeriesPath,
    /// `k / sqrt(2)`, the argument of erfc.
    #[serde(serialize_with = "ser_scalar")]
    pub y: T,
    pub terms_used: u32,
    /// Relative size of the first neglected term (asymptotic paths) or of the
    /// last correction applied (exact path).
    #[serde(serialize_with = "ser_scalar")]
    pub truncation_bound: T,
    pub cancellation_safe: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailResult<T: Scalar> {
    #[serde(serialize_with = "ser_scalar")]
    pub k: T,
    pub probability: Magnitude<T>,
    pub percent: Magnitude<T>,
    pub occurrence_days: Magnitude<T>,
    pub occurrence_years: Magnitude<T>,
    pub days_per_year: u32,
    pub diagnostics: SeriesDiagnostics<T>,
}

fn ser_scalar<T: Scalar, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(v.to_f64().unwrap_or(f64::NAN))
}

impl<T: Scalar> TailResult<T> {
    fn assemble(
        k: T,
        probability: Magnitude<T>,
        days_per_year: u32,
        diagnostics: SeriesDiagnostics<T>,
    ) -> Result<Self> {
        let occurrence_days = occurrence_days(&probability)?;
        Ok(TailResult {
            k,
            percent: probability.scale(T::lit(100.0))?,
            occurrence_years: occurrence_years(&probability, days_per_year)?,
            occurrence_days,
            probability,
            days_per_year,
            diagnostics,
        })
    }

    /// Same probability, periods re-expressed for another trading calendar.
    pub fn with_days_per_year(&self, days_per_year: u32) -> Result<Self> {
        Self::assemble(self.k, self.probability, days_per_year, self.diagnostics)
    }
}

/// `-(k^2 / 2) log10(e)` as an unevaluated pair, accurate to the scalar's
/// precision relative to the *fractional* part even when the product is huge.
pub(crate) fn gaussian_log10_kernel<T: Scalar>(k: T) -> (T, T) {
    let half = T::lit(0.5);
    let (sq, sq_err) = T::two_prod(k, k);
    let (sq, sq_err) = (sq * half, sq_err * half);
    let (c_hi, c_lo) = T::log10_e_split();
    let (p, e) = T::two_prod(sq, c_hi);
    (-p, -(e + sq * c_lo + sq_err * c_hi))
}

pub(crate) fn log10_sqrt_two_pi<T: Scalar>() -> T {
    (T::PI() + T::PI()).precise_log10() * T::lit(0.5)
}

fn check_k<T: Scalar>(k: T) -> Result<()> {
    if !k.is_finite() || k < T::zero() {
        return Err(Error::domain(format!("k must be finite and >= 0, got {k:?}")));
    }
    Ok(())
}

fn y_of<T: Scalar>(k: T) -> T {
    k / T::SQRT_2()
}

/// `0.5 * erfc(k / sqrt 2)` for `0 <= k <= 9.5`, relative error below `1e-12`.
pub fn gauss_tail_exact<T: Scalar>(k: T) -> Result<TailResult<T>> {
    exact_with(k, DEFAULT_DAYS_PER_YEAR)
}

fn exact_with<T: Scalar>(k: T, days_per_year: u32) -> Result<TailResult<T>> {
    check_k(k)?;
    if k > T::lit(EXACT_MAX_K) {
        return Err(Error::domain(format!(
            "exact path covers k <= {EXACT_MAX_K}, got {k:?}; use auto mode"
        )));
    }
    let ev = exact::upper_tail(k)?;
    let diagnostics = SeriesDiagnostics {
        path: SeriesPath::Exact,
        y: y_of(k),
        terms_used: ev.terms,
        truncation_bound: ev.bound,
        cancellation_safe: ev.digits_cancelled < T::lit(3.0),
    };
    TailResult::assemble(k, ev.probability, days_per_year, diagnostics)
}

/// Optimally truncated asymptotic expansion, evaluated in the log domain.
/// Defined for `k >= 8`.
pub fn gauss_tail_asymptotic<T: Scalar>(k: T) -> Result<TailResult<T>> {
    asymptotic_with(k, None, DEFAULT_DAYS_PER_YEAR)
}

/// As [`gauss_tail_asymptotic`] with at most `max_terms` series terms.
pub fn gauss_tail_asymptotic_terms<T: Scalar>(k: T, max_terms: u32) -> Result<TailResult<T>> {
    asymptotic_with(k, Some(max_terms), DEFAULT_DAYS_PER_YEAR)
}

fn check_asymptotic_k<T: Scalar>(k: T) -> Result<()> {
    check_k(k)?;
    if k < T::lit(ASYMPTOTIC_MIN_K) {
        return Err(Error::domain(format!(
            "asymptotic expansion needs k >= {ASYMPTOTIC_MIN_K}, got {k:?}"
        )));
    }
    Ok(())
}

fn from_correction<T: Scalar>(k: T, sum: T) -> Result<Magnitude<T>> {
    // log10 p = -y^2 log10 e - log10(2 y sqrt(pi)) + log10 S, and
    // 2 y sqrt(pi) = k sqrt(2 pi)
    let (hi, lo) = gaussian_log10_kernel(k);
    let small = sum.precise_log10() - k.precise_log10() - log10_sqrt_two_pi::<T>();
    Magnitude::from_log10_parts(hi, lo + small)
}

fn asymptotic_with<T: Scalar>(
    k: T,
    max_terms: Option<u32>,
    days_per_year: u32,
) -> Result<TailResult<T>> {
    check_asymptotic_k(k)?;
    let s = asymptotic::correction_sum(k * k, max_terms);
    let diagnostics = SeriesDiagnostics {
        path: SeriesPath::Asymptotic,
        y: y_of(k),
        terms_used: s.terms,
        truncation_bound: s.first_omitted.abs() / s.sum.abs(),
        cancellation_safe: true,
    };
    TailResult::assemble(k, from_correction(k, s.sum)?, days_per_year, diagnostics)
}

/// The four-term appendix formula reproduced literally, including the `+`
/// on its cubic term. For comparison with published figures only.
pub fn gauss_tail_paper_appendix<T: Scalar>(k: T) -> Result<TailResult<T>> {
    appendix_with(k, DEFAULT_DAYS_PER_YEAR)
}

fn appendix_with<T: Scalar>(k: T, days_per_year: u32) -> Result<TailResult<T>> {
    check_asymptotic_k(k)?;
    let s = asymptotic::printed_sum(k * k);
    let diagnostics = SeriesDiagnostics {
        path: SeriesPath::PaperAppendix,
        y: y_of(k),
        terms_used: s.terms,
        truncation_bound: s.first_omitted.abs() / s.sum.abs(),
        cancellation_safe: true,
    };
    TailResult::assemble(k, from_correction(k, s.sum)?, days_per_year, diagnostics)
}

pub fn gauss_tail<T: Scalar>(q: &TailQuery<T>) -> Result<TailResult<T>> {
    check_days(q.days_per_year)?;
    match q.mode {
        TailMode::Exact => exact_with(q.k, q.days_per_year),
        TailMode::Asymptotic => asymptotic_with(q.k, None, q.days_per_year),
        TailMode::PaperAppendix => appendix_with(q.k, q.days_per_year),
        TailMode::Auto => {
            check_k(q.k)?;
            if q.k <= T::lit(AUTO_SWITCH_K) {
                exact_with(q.k, q.days_per_year)
            } else {
                asymptotic_with(q.k, None, q.days_per_year)
            }
        }
    }
}

/// Auto-mode probability alone.
pub fn tail_probability<T: Scalar>(k: T) -> Result<Magnitude<T>> {
    Ok(gauss_tail(&TailQuery::new(k))?.probability)
}

fn check_days(days_per_year: u32) -> Result<()> {
    if days_per_year == 0 {
        return Err(Error::domain("days_per_year must be at least 1"));
    }
    Ok(())
}

/// Expected number of trading days between events of daily probability `p`.
pub fn occurrence_days<T: Scalar>(p: &Magnitude<T>) -> Result<Magnitude<T>> {
    if p.is_zero() {
        return Err(Error::domain("zero probability has no occurrence period"));
    }
    p.recip()
}

pub fn occurrence_years<T: Scalar>(p: &Magnitude<T>, days_per_year: u32) -> Result<Magnitude<T>> {
    check_days(days_per_year)?;
    occurrence_days(p)?.div(&Magnitude::from_real(T::from_u32(days_per_year).expect("u32"))?)
}

/// `days_per_year * p`, when that is an ordinary (normal) real.
pub fn events_per_year<T: Scalar>(p: &Magnitude<T>, days_per_year: u32) -> Result<T> {
    check_days(days_per_year)?;
    let rate = p.scale(T::from_u32(days_per_year).expect("u32"))?;
    if rate.is_zero() {
        return Ok(T::zero());
    }
    let smallest = Magnitude::from_real(T::min_positive_value())?;
    if rate < smallest || rate.log10_value() > T::max_value().log10() {
        return Err(Error::domain(format!(
            "{rate} events per year is outside the ordinary real range; use occurrence_years"
        )));
    }
    Ok(rate.to_real())
}

/// Probability of `m` events on consecutive days, treating days as
/// independent.
pub fn streak_probability<T: Scalar>(p: &Magnitude<T>, m: u32) -> Result<Magnitude<T>> {
    if m == 0 {
        return Err(Error::domain("streak length must be at least 1"));
    }
    p.pow_int(m as i64)
}

/// The `k` whose expected occurrence period is `years`, by bisection on
/// `[0, 1e6]` to `|dk| <= 1e-9` (or the scalar's resolution, if coarser).
pub fn sigma_for_period<T: Scalar>(years: &Magnitude<T>, days_per_year: u32) -> Result<T> {
    check_days(days_per_year)?;
    if years.is_zero() {
        return Err(Error::domain("period must be positive"));
    }
    let days = years.scale(T::from_u32(days_per_year).expect("u32"))?;
    let target = days.recip()?;
    let half = Magnitude::from_real(T::lit(0.5))?;
    if target > half {
        return Err(Error::domain(format!(
            "a period of {years} years is shorter than the 2-day wait of a 0-sigma event"
        )));
    }
    let mut lo = T::zero();
    let mut hi = T::lit(SIGMA_SEARCH_MAX_K);
    if tail_probability(hi)? > target {
        return Err(Error::domain(format!(
            "a period of {years} years needs k beyond {SIGMA_SEARCH_MAX_K}"
        )));
    }
    let tol = T::lit(1e-9);
    for _ in 0..256 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + (hi - lo) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if tail_probability(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + (hi - lo) * T::lit(0.5))
}
