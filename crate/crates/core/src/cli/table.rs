use serde_json::{json, Map, Value};

use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Rat(Rational),
    Float(f64),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<Rational> for Cell {
    fn from(r: Rational) -> Self {
        Cell::Rat(r)
    }
}

impl From<&Rational> for Cell {
    fn from(r: &Rational) -> Self {
        Cell::Rat(r.clone())
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl Cell {
    fn tsv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Rat(r) => format_rational(r),
            Cell::Float(x) => format!("{x:e}"),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(n) => json!(n),
            Cell::Rat(r) => {
                let part = |b: &num::BigInt| match i64::try_from(b) {
                    Ok(n) => json!(n),
                    Err(_) => Value::String(b.to_string()),
                };
                json!({"num": part(r.numer()), "den": part(r.denom())})
            }
            Cell::Float(x) => json!(x),
        }
    }
}

/// A result table with trailing status notes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Self::default()
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => {
                let mut out = self.columns.join("\t");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::tsv).collect();
                    out.push_str(&cells.join("\t"));
                    out.push('\n');
                }
                for note in &self.notes {
                    out.push_str(note);
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, cell)| (c.to_string(), cell.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({"columns": self.columns, "rows": rows, "notes": self.notes});
                let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
                out.push('\n');
                out
            }
        }
    }
}
