use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observation {
    pub date: NaiveDate,
    pub value: f64,
}

/// A daily series with strictly increasing dates and finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    observations: Vec<Observation>,
    source_label: String,
}

impl Series {
    pub fn new(observations: Vec<Observation>, source_label: impl Into<String>) -> Result<Self> {
        for (i, o) in observations.iter().enumerate() {
            if !o.value.is_finite() {
                return Err(Error::domain(format!("value on {} is not finite", o.date)));
            }
            if i > 0 && o.date <= observations[i - 1].date {
                return Err(Error::domain(format!(
                    "date {} does not follow {}",
                    o.date,
                    observations[i - 1].date
                )));
            }
        }
        Ok(Series {
            observations,
            source_label: source_label.into(),
        })
    }

    /// Consecutive calendar days starting at `start`; handy for synthetic data.
    pub fn from_values(start: NaiveDate, values: &[f64], source_label: &str) -> Result<Self> {
        let obs = values
            .iter()
            .zip(start.iter_days())
            .map(|(&value, date)| Observation { date, value })
            .collect();
        Series::new(obs, source_label)
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.observations.iter().map(|o| o.value).collect()
    }
}

/// Reads a `date,value` CSV with ISO-8601 dates. Errors carry the 1-based
/// line number of the offending record.
pub fn read_series<R: Read>(reader: R, source_label: &str) -> Result<Series> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Row {
        row: 1,
        reason: e.to_string(),
    })?;
    if headers.len() != 2 || &headers[0] != "date" || &headers[1] != "value" {
        return Err(Error::Row {
            row: 1,
            reason: format!("expected header `date,value`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut observations: Vec<Observation> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Row {
            row: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let bad = |reason: String| Error::Row { row, reason };
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d")
            .map_err(|e| bad(format!("bad date {:?}: {e}", &record[0])))?;
        let value: f64 = record[1]
            .parse()
            .map_err(|e| bad(format!("bad value {:?}: {e}", &record[1])))?;
        if !value.is_finite() {
            return Err(bad(format!("value {:?} is not finite", &record[1])));
        }
        if let Some(prev) = observations.last() {
            if date == prev.date {
                return Err(bad(format!("duplicate date {date}")));
            }
            if date < prev.date {
                return Err(bad(format!("date {date} is earlier than {}", prev.date)));
            }
        }
        observations.push(Observation { date, value });
    }
    Series::new(observations, source_label)
}

pub fn load_series(path: impl AsRef<Path>) -> Result<Series> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    read_series(file, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str) -> Result<Series> {
        read_series(text.as_bytes(), "test")
    }

    #[test]
    fn parses_rows() {
        let s = read("date,value\n2007-08-08,0.004\n2007-08-09,-0.031\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.observations()[1].value, -0.031);
        assert_eq!(s.observations()[1].date, NaiveDate::from_ymd_opt(2007, 8, 9).unwrap());
        assert_eq!(s.source_label(), "test");
    }

    #[test]
    fn reports_offending_line() {
        let err = read("date,value\n2007-08-08,0.1\n2007-08-08,0.2\n").unwrap_err();
        assert!(matches!(err, Error::Row { row: 3, ref reason } if reason.contains("duplicate")), "{err}");
        let err = read("date,value\n2007-08-09,0.1\n2007-08-08,0.2\n").unwrap_err();
        assert!(matches!(err, Error::Row { row: 3, .. }));
        let err = read("date,value\n2007-08-09,abc\n").unwrap_err();
        assert!(matches!(err, Error::Row { row: 2, .. }));
        let err = read("date,value\n2007-08-09,NaN\n").unwrap_err();
        assert!(matches!(err, Error::Row { row: 2, .. }));
        let err = read("date,value\n09/08/2007,0.1\n").unwrap_err();
        assert!(matches!(err, Error::Row { row: 2, .. }));
        let err = read("date,value\n2007-08-09,0.1,7\n").unwrap_err();
        assert!(matches!(err, Error::Row { row: 2, .. }));
        let err = read("day,ret\n2007-08-09,0.1\n").unwrap_err();
        assert!(matches!(err, Error::Row { row: 1, .. }));
    }

    #[test]
    fn constructor_validates() {
        let d = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        assert!(Series::from_values(d, &[1.0, f64::INFINITY], "x").is_err());
        let obs = vec![Observation { date: d, value: 1.0 }, Observation { date: d, value: 2.0 }];
        assert!(Series::new(obs, "x").is_err());
        assert_eq!(Series::from_values(d, &[1.0, 2.0, 3.0], "x").unwrap().len(), 3);
    }
}
