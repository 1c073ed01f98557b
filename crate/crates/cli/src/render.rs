//! Report formats and number rendering.
//!
//! Every report becomes a list of flat records for CSV and JSON Lines; the
//! human tables are written per report in `cli`.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    #[value(name = "human")]
    HumanTable,
    #[value(name = "csv")]
    Csv,
    #[value(name = "jsonl")]
    JsonLines,
}

/// 12 significant digits, scientific notation at or above 1e6 and below 1e-4.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let ax = x.abs();
    if !(1e-4..1e6).contains(&ax) {
        let s = format!("{x:.11e}");
        let (mantissa, exp) = s.split_once('e').expect("exponent");
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let magnitude = ax.log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = trim_zeros(&s);
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| fmt_num(*x)).collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Str(String),
    Int(i64),
    Num(f64),
    Bool(bool),
    Vec(Vec<f64>),
}

impl Field {
    fn text(&self) -> String {
        match self {
            Field::Str(s) => s.clone(),
            Field::Int(i) => i.to_string(),
            Field::Num(x) => fmt_num(*x),
            Field::Bool(b) => b.to_string(),
            Field::Vec(v) => v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" "),
        }
    }

    fn json(&self) -> Value {
        // go through the rendered text so JSON carries the same 12 digits
        let num = |x: f64| {
            fmt_num(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or_else(|| Value::String(fmt_num(x)), Value::Number)
        };
        match self {
            Field::Str(s) => Value::String(s.clone()),
            Field::Int(i) => Value::from(*i),
            Field::Num(x) => num(*x),
            Field::Bool(b) => Value::Bool(*b),
            Field::Vec(v) => Value::Array(v.iter().map(|x| num(*x)).collect()),
        }
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Str(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Str(s)
    }
}

impl From<usize> for Field {
    fn from(i: usize) -> Self {
        Field::Int(i as i64)
    }
}

impl From<u64> for Field {
    fn from(i: u64) -> Self {
        Field::Int(i as i64)
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Self {
        Field::Bool(b)
    }
}

/// Ordered key/value pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(&'static str, Field)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Field>) -> Self {
        self.0.push((key, value.into()));
        self
    }
}

/// One CSV table whose columns are the union of all record keys in
/// first-seen order; missing cells are empty.
pub fn to_csv(records: &[Record]) -> String {
    let mut columns: Vec<&'static str> = Vec::new();
    for r in records {
        for (k, _) in &r.0 {
            if !columns.contains(k) {
                columns.push(k);
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns).expect("in-memory write");
    for r in records {
        let row = columns.iter().map(|c| {
            r.0.iter()
                .find(|(k, _)| k == c)
                .map_or(String::new(), |(_, v)| v.text())
        });
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn to_jsonl(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        let obj: Map<String, Value> = r.0.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
        out.push_str(&Value::Object(obj).to_string());
        out.push('\n');
    }
    out
}

/// Left-aligned text table.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(c);
            s.extend(std::iter::repeat_n(' ', w - c.chars().count()));
        }
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(&mut header.iter().copied());
    for row in rows {
        out.push_str(&line(&mut row.iter().map(String::as_str)));
    }
    out
}
