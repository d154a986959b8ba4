//! Sigma-scoring of a daily P&L or return series, and how surprising the
//! number of k-sigma days is if days were independent Gaussian draws.

mod binomial;
mod series;

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::magnum::Magnitude;
use crate::tailprob::{self, DEFAULT_DAYS_PER_YEAR};

pub use binomial::binomial_tail_at_least;
pub use series::{load_series, read_series, Observation, Series};

/// Fewest observations accepted for full-sample scoring in a report.
pub const MIN_FULL_SAMPLE: usize = 30;
pub const MIN_ROLLING_WINDOW: usize = 20;

pub const INDEPENDENCE_NOTE: &str =
    "expected counts and p-values assume independent days; volatility clustering is ignored";

/// How the mean and standard deviation used to score a day are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// One estimate from every observation, used for every day.
    Full,
    /// The `n` days strictly before the scored day.
    Rolling(usize),
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Window::Full => s.serialize_str("full_sample"),
            Window::Rolling(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Full => f.write_str("full sample"),
            Window::Rolling(n) => write!(f, "rolling {n} days"),
        }
    }
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "full" | "full_sample" | "full-sample" => Ok(Window::Full),
            t => t.parse().map(Window::Rolling).map_err(|_| Error::Parse {
                input: s.to_string(),
                reason: "expected `full` or a window length in days".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Only losses: scores at or below `-k`.
    Loss,
    /// Either direction: `|score| >= k`; the model probability doubles.
    Both,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "loss" => Ok(Side::Loss),
            "both" => Ok(Side::Both),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "expected loss or both".into(),
            }),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Loss => "loss",
            Side::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DayMoments {
    pub mean: f64,
    pub stdev: f64,
}

/// Per-day estimates; `None` marks an unscored day.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub per_day: Vec<Option<DayMoments>>,
    pub warnings: Vec<String>,
}

impl Moments {
    pub fn n_scored(&self) -> usize {
        self.per_day.iter().filter(|m| m.is_some()).count()
    }
}

/// Mean and Bessel-corrected standard deviation, two-pass.
fn mean_stdev(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

pub fn estimate_moments(s: &Series, window: Window) -> Result<Moments> {
    let values = s.values();
    let mut warnings = Vec::new();
    let per_day = match window {
        Window::Full => {
            if values.len() < 2 {
                return Err(Error::domain("full-sample moments need at least 2 observations"));
            }
            let (mean, stdev) = mean_stdev(&values);
            if stdev == 0.0 {
                warnings.push(format!(
                    "standard deviation is zero; all {} days unscored",
                    values.len()
                ));
                vec![None; values.len()]
            } else {
                vec![Some(DayMoments { mean, stdev }); values.len()]
            }
        }
        Window::Rolling(w) => {
            if w < MIN_ROLLING_WINDOW {
                return Err(Error::domain(format!(
                    "rolling window must be at least {MIN_ROLLING_WINDOW} days, got {w}"
                )));
            }
            let mut flat = Vec::new();
            let per_day: Vec<_> = (0..values.len())
                .map(|t| {
                    if t < w {
                        return None;
                    }
                    let (mean, stdev) = mean_stdev(&values[t - w..t]);
                    if stdev == 0.0 {
                        flat.push(s.observations()[t].date);
                        None
                    } else {
                        Some(DayMoments { mean, stdev })
                    }
                })
                .collect();
            if values.len() <= w {
                warnings.push(format!(
                    "series has {} days, no more than the {w}-day window; nothing scored",
                    values.len()
                ));
            }
            if let Some(first) = flat.first() {
                warnings.push(format!(
                    "{} days unscored because the trailing window had zero standard deviation (first: {first})",
                    flat.len()
                ));
            }
            per_day
        }
    };
    Ok(Moments { per_day, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlaggedDay {
    pub date: NaiveDate,
    /// Rounded to 4 decimals.
    pub sigma_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flags {
    pub flagged: Vec<FlaggedDay>,
    pub observed_count: u64,
    pub n_scored: u64,
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

/// `(value - mean) / stdev` for every scored day.
pub fn sigma_scores(s: &Series, moments: &Moments) -> Vec<Option<f64>> {
    s.observations()
        .iter()
        .zip(&moments.per_day)
        .map(|(o, m)| m.map(|m| (o.value - m.mean) / m.stdev))
        .collect()
}

pub fn flag_events(s: &Series, moments: &Moments, threshold_k: f64, side: Side) -> Result<Flags> {
    if !(threshold_k > 0.0 && threshold_k.is_finite()) {
        return Err(Error::domain(format!("threshold must be positive, got {threshold_k}")));
    }
    if moments.per_day.len() != s.len() {
        return Err(Error::domain("moments do not match the series length"));
    }
    let mut flagged = Vec::new();
    let mut n_scored = 0;
    for (o, score) in s.observations().iter().zip(sigma_scores(s, moments)) {
        let Some(z) = score else { continue };
        n_scored += 1;
        let hit = match side {
            Side::Loss => z <= -threshold_k,
            Side::Both => z.abs() >= threshold_k,
        };
        if hit {
            flagged.push(FlaggedDay {
                date: o.date,
                sigma_score: round4(z),
            });
        }
    }
    Ok(Flags {
        observed_count: flagged.len() as u64,
        flagged,
        n_scored,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditConfig {
    pub window: Window,
    pub threshold_k: f64,
    pub side: Side,
    pub days_per_year: u32,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            window: Window::Full,
            threshold_k: 2.0,
            side: Side::Loss,
            days_per_year: DEFAULT_DAYS_PER_YEAR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub source_label: String,
    pub n_days: usize,
    pub n_scored: u64,
    /// Descriptive moments of the whole series.
    pub mean: f64,
    pub stdev: f64,
    pub window: Window,
    pub threshold_k: f64,
    pub side: Side,
    pub days_per_year: u32,
    /// Gaussian probability that one day is flagged.
    pub model_probability: Magnitude<f64>,
    pub flagged: Vec<FlaggedDay>,
    pub expected_count: f64,
    pub observed_count: u64,
    pub p_value_at_least_observed: Magnitude<f64>,
    pub assumption: &'static str,
    pub warnings: Vec<String>,
}

pub fn build_report(s: &Series, config: &AuditConfig) -> Result<AuditReport> {
    if config.window == Window::Full && s.len() < MIN_FULL_SAMPLE {
        return Err(Error::domain(format!(
            "full-sample scoring needs at least {MIN_FULL_SAMPLE} observations, got {}",
            s.len()
        )));
    }
    if s.len() < 2 {
        return Err(Error::domain("series needs at least 2 observations"));
    }
    let moments = estimate_moments(s, config.window)?;
    let flags = flag_events(s, &moments, config.threshold_k, config.side)?;
    let one_side = tailprob::gauss_tail(
        &tailprob::TailQuery::new(config.threshold_k).days_per_year(config.days_per_year),
    )?
    .probability;
    let model_probability = match config.side {
        Side::Loss => one_side,
        Side::Both => one_side.scale(2.0)?,
    };
    let expected_count = model_probability.scale(flags.n_scored as f64)?.to_real();
    let p_value = if flags.observed_count == 0 {
        Magnitude::one()
    } else {
        binomial_tail_at_least(flags.n_scored, flags.observed_count, &model_probability)?
    };
    let (mean, stdev) = mean_stdev(&s.values());
    Ok(AuditReport {
        source_label: s.source_label().to_string(),
        n_days: s.len(),
        n_scored: flags.n_scored,
        mean,
        stdev,
        window: config.window,
        threshold_k: config.threshold_k,
        side: config.side,
        days_per_year: config.days_per_year,
        model_probability,
        flagged: flags.flagged,
        expected_count,
        observed_count: flags.observed_count,
        p_value_at_least_observed: p_value,
        assumption: INDEPENDENCE_NOTE,
        warnings: moments.warnings,
    })
}
