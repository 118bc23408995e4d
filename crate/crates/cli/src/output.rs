//! Tables and their CSV and JSON renderings.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::Scenario;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Column {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_num(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// Shortest round-trip form, in exponent notation outside [1e-4, 1e15).
/// Independent of locale and platform.
pub fn format_num(x: f64) -> String {
    // folds -0 into 0
    let x = x + 0.0;
    let m = x.abs();
    if m == 0.0 || !m.is_finite() || (1e-4..1e15).contains(&m) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Column names, then units.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, cells: Vec<String>| {
            let _ = writeln!(out, "{}", cells.join(","));
        };
        line(&mut out, self.columns.iter().map(|c| c.name.clone()).collect());
        line(&mut out, self.columns.iter().map(|c| c.unit.clone()).collect());
        for row in &self.rows {
            line(&mut out, row.iter().map(Cell::csv).collect());
        }
        out
    }

    /// Units and column names side by side with the rows, plus the scenario
    /// that produced them.
    pub fn to_json(&self, scenario: &Scenario) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            scenario: &'a Scenario,
            columns: &'a [Column],
            rows: &'a [Vec<Cell>],
        }
        let mut s = serde_json::to_string_pretty(&Doc {
            scenario,
            columns: &self.columns,
            rows: &self.rows,
        })
        .expect("tables serialize");
        s.push('\n');
        s
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path.display(), e))
}
