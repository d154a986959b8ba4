//! Plain-text, CSV, Markdown and JSON rendering. Everything here is
//! locale-free so identical invocations print identical bytes.

use std::fmt::Write as _;

use clap::ValueEnum;
use hisigma::Magnitude;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Md,
    Json,
}

/// `M.MMMe±E` at `digits` significant digits.
pub fn sci(m: &Magnitude, digits: usize) -> String {
    m.format_sci(digits).expect("digits checked at parse time")
}

/// [`sci`] for an ordinary signed real.
pub fn real_sci(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return sci(&Magnitude::zero(), digits);
    }
    let abs = Magnitude::from_real(x.abs()).expect("finite");
    let sign = if x < 0.0 { "-" } else { "" };
    format!("{sign}{}", sci(&abs, digits))
}

#[derive(Debug, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn text(&self, out: &mut String) {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &mut dyn Iterator<Item = &str>, out: &mut String| {
            let mut s = String::new();
            for (cell, w) in cells.zip(&widths) {
                let pad = w - cell.chars().count();
                let _ = write!(s, "{cell}{:pad$}  ", "");
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(&mut self.headers.iter().copied(), out);
        for row in &self.rows {
            line(&mut row.iter().map(String::as_str), out);
        }
    }

    fn csv(&self, out: &mut String) {
        let quote = |c: &str| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.to_string()
            }
        };
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<_> = row.iter().map(|c| quote(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }

    fn md(&self, out: &mut String) {
        let esc = |c: &str| c.replace('|', "\\|");
        let _ = writeln!(out, "| {} |", self.headers.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(self.headers.len()));
        for row in &self.rows {
            let cells: Vec<_> = row.iter().map(|c| esc(c)).collect();
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
    }
}

/// What a command produces: labelled values, an optional table, free-form
/// notes, and the structured form used for JSON.
pub struct Output {
    pub fields: Vec<(&'static str, String)>,
    pub table: Option<Table>,
    pub notes: Vec<String>,
    pub json: serde_json::Value,
}

impl Output {
    pub fn new(json: impl serde::Serialize) -> Self {
        Output {
            fields: Vec::new(),
            table: None,
            notes: Vec::new(),
            json: serde_json::to_value(json).expect("serializable"),
        }
    }

    pub fn field(&mut self, name: &'static str, value: impl Into<String>) -> &mut Self {
        self.fields.push((name, value.into()));
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Json => {
                out = serde_json::to_string_pretty(&self.json).expect("serializable");
                out.push('\n');
            }
            Format::Text => {
                let w = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "{k:w$}  {v}");
                }
                if let Some(t) = &self.table {
                    if !self.fields.is_empty() {
                        out.push('\n');
                    }
                    t.text(&mut out);
                }
                if !self.notes.is_empty() {
                    out.push('\n');
                    for n in &self.notes {
                        let _ = writeln!(out, "{n}");
                    }
                }
            }
            // one CSV table per output: the row table when there is one
            Format::Csv => match &self.table {
                Some(t) => t.csv(&mut out),
                None => self.fields_table().csv(&mut out),
            },
            Format::Md => {
                if !self.fields.is_empty() {
                    self.fields_table().md(&mut out);
                }
                if let Some(t) = &self.table {
                    if !self.fields.is_empty() {
                        out.push('\n');
                    }
                    t.md(&mut out);
                }
                for n in &self.notes {
                    let _ = write!(out, "\n{n}\n");
                }
            }
        }
        out
    }

    fn fields_table(&self) -> Table {
        let mut t = Table::new(&["field", "value"]);
        for (k, v) in &self.fields {
            t.push(vec![k.to_string(), v.clone()]);
        }
        t
    }
}
