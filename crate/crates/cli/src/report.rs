//! Run reports: `key: value` text and two-column CSV, plus plain tables for
//! sweeps. Floats are written at 12 significant digits.

use std::io::Write;

use qcap::linalg::{CMatrix, CVector};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits, printed without exponent noise.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    let plain = rounded.to_string();
    // Very small or large magnitudes read better in scientific form.
    if rounded.abs() < 1e-5 || rounded.abs() >= 1e15 {
        let sci = format!("{rounded:e}");
        if sci.len() < plain.len() {
            return sci;
        }
    }
    plain
}

/// Complex entries as space-separated `re,im` pairs.
pub fn fmt_vector(v: &CVector) -> String {
    v.iter()
        .map(|z| format!("{},{}", fmt_float(z.re), fmt_float(z.im)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Row-major entries, rows separated by ` | `.
pub fn fmt_matrix(m: &CMatrix) -> String {
    (0..m.nrows())
        .map(|i| fmt_vector(&m.row(i).transpose()))
        .collect::<Vec<_>>()
        .join(" | ")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Float(x) => fmt_float(*x),
            Field::Int(n) => n.to_string(),
            Field::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Float(x)
    }
}

impl From<usize> for Field {
    fn from(n: usize) -> Self {
        Field::Int(n as i64)
    }
}

impl From<u64> for Field {
    fn from(n: u64) -> Self {
        Field::Int(n as i64)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.into())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

/// Ordered key/value report. `wall_time_s` is kept apart because it is the
/// only field that changes between identical runs; CSV output omits it.
#[derive(Debug, Clone, Default)]
pub struct Report {
    fields: Vec<(String, Field)>,
    pub wall_time_s: Option<f64>,
    /// False when an engine stopped on its round limit.
    pub converged: bool,
}

impl Report {
    pub fn new() -> Self {
        Self {
            fields: Vec::new(),
            wall_time_s: None,
            converged: true,
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Field>) -> &mut Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn write_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for (k, v) in &self.fields {
            writeln!(out, "{k}: {}", v.render())?;
        }
        if let Some(t) = self.wall_time_s {
            writeln!(out, "wall_time_s: {t:.3}")?;
        }
        Ok(())
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["key", "value"])?;
        for (k, v) in &self.fields {
            w.write_record([k.as_str(), v.render().as_str()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Numeric table with a header row, used for sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn write_csv(&self, out: &mut dyn Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| fmt_float(*x)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.header.join(" "))?;
        for row in &self.rows {
            writeln!(out, "{}", row.iter().map(|x| fmt_float(*x)).collect::<Vec<_>>().join(" "))?;
        }
        Ok(())
    }
}
