use serde_json::{json, Map, Value};

use super::args::Format;
use super::CliError;
use crate::linalg::SpinParams;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => sci(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            // Round through the printed form so CSV and JSON carry the same digits.
            Cell::Float(v) => json!(sci(*v).parse::<f64>().unwrap_or(*v)),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u8> for Cell {
    fn from(v: u8) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// `%.12e` as printed by C: mantissa with 12 decimals, signed exponent of at
/// least two digits. Negative zero prints as zero.
pub fn sci(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    let raw = format!("{v:.12e}");
    match raw.split_once('e') {
        Some((mantissa, exp)) => {
            let exp: i32 = exp.parse().unwrap_or(0);
            let sign = if exp < 0 { '-' } else { '+' };
            format!("{mantissa}e{sign}{:02}", exp.abs())
        }
        None => raw,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub command: String,
    pub params: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Table {
            command: command.to_string(),
            params: Map::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn echo_params(&mut self, p: &SpinParams) {
        for (key, value) in [
            ("omega_a0", p.omega_a0),
            ("omega_b0", p.omega_b0),
            ("gamma_a", p.gamma_a),
            ("gamma_b", p.gamma_b),
            ("J", p.j),
            ("omega1", p.omega1),
        ] {
            self.echo(key, Cell::Float(value));
        }
    }

    pub fn echo(&mut self, key: &str, value: Cell) {
        self.params.insert(key.to_string(), value.json());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Every float cell must be finite before anything is written.
    pub fn check_finite(&self) -> Result<(), CliError> {
        for (r, row) in self.rows.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                if let Cell::Float(v) = cell {
                    if !v.is_finite() {
                        return Err(CliError::Numeric(format!(
                            "non-finite value in row {r}, column {}",
                            self.columns[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    let line: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&line.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| Value::Array(row.iter().map(Cell::json).collect()))
                    .collect();
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": self.command,
                    "params": self.params,
                    "columns": self.columns,
                    "rows": rows,
                });
                let mut out = serde_json::to_string_pretty(&doc).expect("table serializes");
                out.push('\n');
                out
            }
        }
    }
}
