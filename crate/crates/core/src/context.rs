//! Human-scale yardsticks for astronomically small probabilities and
//! astronomically long waiting times.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::magnum::Magnitude;
use crate::scalar::Scalar;

/// Fair-bet chance of a £1 ticket winning a £2.5m prize.
pub const DEFAULT_WIN_PROBABILITY: f64 = 4e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleKind {
    Years,
    Count,
    Probability,
}

impl FromStr for ScaleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "years" | "year" => Ok(ScaleKind::Years),
            "count" => Ok(ScaleKind::Count),
            "probability" => Ok(ScaleKind::Probability),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "kind must be years, count or probability".into(),
            }),
        }
    }
}

impl fmt::Display for ScaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScaleKind::Years => "years",
            ScaleKind::Count => "count",
            ScaleKind::Probability => "probability",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceScale<T: Scalar> {
    pub name: String,
    pub kind: ScaleKind,
    pub low: Magnitude<T>,
    pub high: Magnitude<T>,
}

impl<T: Scalar> ReferenceScale<T> {
    pub fn new(
        name: impl Into<String>,
        kind: ScaleKind,
        low: Magnitude<T>,
        high: Magnitude<T>,
    ) -> Result<Self> {
        let name = name.into();
        if low.is_zero() || high.is_zero() {
            return Err(Error::domain(format!("reference {name:?} has a zero bound")));
        }
        if low > high {
            return Err(Error::domain(format!("reference {name:?} has low > high")));
        }
        Ok(ReferenceScale { name, kind, low, high })
    }

    fn point(name: &str, kind: ScaleKind, m: f64, e: i64) -> Self {
        let v = Magnitude::from_sci(T::lit(m), e).expect("valid constant");
        ReferenceScale::new(name, kind, v, v).expect("valid constant")
    }

    fn range(name: &str, kind: ScaleKind, lo: (f64, i64), hi: (f64, i64)) -> Self {
        let low = Magnitude::from_sci(T::lit(lo.0), lo.1).expect("valid constant");
        let high = Magnitude::from_sci(T::lit(hi.0), hi.1).expect("valid constant");
        ReferenceScale::new(name, kind, low, high).expect("valid constant")
    }
}

/// The built-in yardsticks: elapsed times in years, the particle count of
/// the observable universe, and a single lottery win.
pub fn builtin_references<T: Scalar>() -> Vec<ReferenceScale<T>> {
    use ScaleKind::*;
    vec![
        ReferenceScale::point("last Ice Age", Years, 1.0, 4),
        ReferenceScale::point("Homo sapiens", Years, 1.0, 6),
        ReferenceScale::point("multicellular life", Years, 6.0, 8),
        ReferenceScale::range("Big Bang", Years, (1.2, 10), (1.4, 10)),
        ReferenceScale::range("particles in the Universe", Count, (1.0, 73), (1.0, 85)),
        ReferenceScale::point("lottery win", Probability, 4.0, -7),
    ]
}

/// Parses `name,kind,low,high` records. Blank lines and lines starting with
/// `#` are skipped.
pub fn parse_references<T: Scalar>(text: &str) -> Result<Vec<ReferenceScale<T>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Row {
            row: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let bad = |reason: String| Error::Row { row, reason };
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 4 {
            return Err(bad(format!("expected 4 fields, found {}", record.len())));
        }
        let kind: ScaleKind = record[1].parse().map_err(|e: Error| bad(e.to_string()))?;
        let low: Magnitude<T> = record[2].parse().map_err(|e: Error| bad(e.to_string()))?;
        let high: Magnitude<T> = record[3].parse().map_err(|e: Error| bad(e.to_string()))?;
        out.push(ReferenceScale::new(&record[0], kind, low, high).map_err(|e| bad(e.to_string()))?);
    }
    if out.is_empty() {
        return Err(Error::domain("reference file holds no records"));
    }
    Ok(out)
}

pub fn load_references<T: Scalar>(path: impl AsRef<Path>) -> Result<Vec<ReferenceScale<T>>> {
    parse_references(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LotteryModel<T: Scalar> {
    pub win_probability: Magnitude<T>,
}

impl<T: Scalar> LotteryModel<T> {
    pub fn new(win_probability: Magnitude<T>) -> Result<Self> {
        if win_probability.is_zero() || win_probability >= Magnitude::one() {
            return Err(Error::domain(format!(
                "win probability must lie in (0, 1), got {win_probability}"
            )));
        }
        Ok(LotteryModel { win_probability })
    }
}

impl<T: Scalar> Default for LotteryModel<T> {
    fn default() -> Self {
        let q = Magnitude::from_real(T::lit(DEFAULT_WIN_PROBABILITY)).expect("valid constant");
        LotteryModel { win_probability: q }
    }
}

/// Number of consecutive lottery wins whose probability brackets `p`:
/// returns `(n, n + 1)` with `q^n >= p > q^(n+1)`.
pub fn lottery_equivalent<T: Scalar>(p: &Magnitude<T>, model: &LotteryModel<T>) -> Result<(i64, i64)> {
    if p.is_zero() || *p > Magnitude::one() {
        return Err(Error::domain(format!("probability must lie in (0, 1], got {p}")));
    }
    let ratio = p.log10_value() / model.win_probability.log10_value();
    // exact powers of q come back a hair under the integer
    let n = (ratio * (T::one() + T::lit(1e-12))).floor();
    let n = n.to_i64().ok_or_else(|| Error::domain("streak length out of range"))?;
    Ok((n, n + 1))
}

/// `floor(log10(a / b))`.
pub fn order_gap<T: Scalar>(a: &Magnitude<T>, b: &Magnitude<T>) -> Result<i64> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::domain("order gap needs nonzero magnitudes"));
    }
    Ok(a.div(b)?.decade())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison<T: Scalar> {
    pub name: String,
    pub kind: ScaleKind,
    pub ratio_low: Magnitude<T>,
    pub ratio_high: Magnitude<T>,
    /// Set when the reference is not measured in years; the ratio is then a
    /// comparison of bare numbers.
    pub unit_mismatch: bool,
}

pub fn compare_to_references<T: Scalar>(
    years: &Magnitude<T>,
    refs: &[ReferenceScale<T>],
) -> Result<Vec<Comparison<T>>> {
    if years.is_zero() {
        return Err(Error::domain("period must be nonzero"));
    }
    if refs.is_empty() {
        return Err(Error::domain("no reference scales given"));
    }
    refs.iter()
        .map(|r| {
            Ok(Comparison {
                name: r.name.clone(),
                kind: r.kind,
                ratio_low: years.div(&r.low)?,
                ratio_high: years.div(&r.high)?,
                unit_mismatch: r.kind != ScaleKind::Years,
            })
        })
        .collect()
}
