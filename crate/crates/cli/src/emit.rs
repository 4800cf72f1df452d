//! Deterministic CSV / JSONL table emission.
//!
//! Reals are rendered in scientific notation at 25 significant digits;
//! log-scale columns carry a `log_` prefix. CSV uses a header row, comma
//! separators, LF line endings and minimal RFC-style quoting. JSONL emits
//! one self-describing object per row. Identical inputs produce
//! byte-identical output.

use std::io::{self, Write};

use rug::Float;
use serde_json::{Map, Number, Value};

use crate::config::OutputFormat;
use regpart_core::numerics::LogValue;

/// 25 significant digits, scientific notation.
pub fn format_real(x: &Float) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf" } else { "inf" }.to_string();
    }
    // rug counts the precision spec as total significant digits
    format!("{x:.25e}")
}

/// Log-magnitude column value: `-inf` is the sign-0 marker, negative
/// values are prefixed normally.
pub fn format_log_value(v: &LogValue) -> String {
    match v.sign() {
        0 => "-inf".to_string(),
        1 => format_real(v.ln_abs()),
        _ => format!("neg:{}", format_real(v.ln_abs())),
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(u64),
    /// Preformatted decimal/scientific value (kept as a string so CSV and
    /// JSONL render identically).
    Real(String),
    Str(String),
    Bool(bool),
    Null,
}

impl Field {
    pub fn real(x: &Float) -> Field {
        Field::Real(format_real(x))
    }

    pub fn log_value(v: &LogValue) -> Field {
        Field::Real(format_log_value(v))
    }

    fn csv(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Real(s) => s.clone(),
            Field::Str(s) => csv_quote(s),
            Field::Bool(b) => b.to_string(),
            Field::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(v) => Value::Number(Number::from(*v)),
            Field::Real(s) => Value::String(s.clone()),
            Field::Str(s) => Value::String(s.clone()),
            Field::Bool(b) => Value::Bool(*b),
            Field::Null => Value::Null,
        }
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Column-ordered table writer.
pub struct TableSink<W: Write> {
    format: OutputFormat,
    columns: Vec<String>,
    out: W,
    header_written: bool,
}

impl<W: Write> TableSink<W> {
    pub fn new(format: OutputFormat, columns: &[&str], out: W) -> Self {
        TableSink {
            format,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            out,
            header_written: false,
        }
    }

    pub fn row(&mut self, fields: &[Field]) -> io::Result<()> {
        assert_eq!(fields.len(), self.columns.len(), "column count mismatch");
        match self.format {
            OutputFormat::Csv => {
                if !self.header_written {
                    writeln!(self.out, "{}", self.columns.join(","))?;
                    self.header_written = true;
                }
                let cells: Vec<String> = fields.iter().map(Field::csv).collect();
                writeln!(self.out, "{}", cells.join(","))
            }
            OutputFormat::Jsonl => {
                let mut obj = Map::new();
                for (name, field) in self.columns.iter().zip(fields) {
                    obj.insert(name.clone(), field.json());
                }
                writeln!(self.out, "{}", Value::Object(obj))
            }
        }
    }

    pub fn finish(mut self) -> io::Result<W> {
        // An empty CSV table still gets its header.
        if matches!(self.format, OutputFormat::Csv) && !self.header_written {
            writeln!(self.out, "{}", self.columns.join(","))?;
            self.header_written = true;
        }
        self.out.flush()?;
        Ok(self.out)
    }
}
