//! Result tables and their CSV/JSON serialization.

use std::fs;
use std::io;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::scenario::{Scenario, Task};

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    /// Not available (e.g. a decay fit without enough data).
    Missing,
}

/// Floats are written with 17 significant digits; non-finite values as `inf`, `-inf`, `nan`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    pub fn to_csv(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => json!(format_float(*x)),
            Cell::Int(i) => json!(i),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
            Cell::Missing => Value::Null,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv)).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("CSV is UTF-8")
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Value> =
                        self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.to_json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

pub fn csv_file_name(task: Task) -> String {
    format!("{}.csv", task.name())
}

/// Summary document: scenario echo, tool version and every task's rows.
pub fn summary_json(scenario: &Scenario, results: &[(Task, Table)]) -> Value {
    let weights: Vec<Value> = scenario
        .weights
        .iter()
        .map(|w| json!({ "p": w.p_label(), "weight": w.weight().label() }))
        .collect();
    let mut tasks = Map::new();
    for (task, table) in results {
        tasks.insert(task.name().to_string(), json!({ "csv": csv_file_name(*task), "rows": table.to_json() }));
    }
    json!({
        "tool": "gframe",
        "version": crate::VERSION,
        "scenario": {
            "name": scenario.name,
            "model": scenario.model.describe(),
            "algebra": scenario.algebra.label(),
            "weights": weights,
            "tasks": scenario.tasks.iter().map(|t| t.name()).collect::<Vec<_>>(),
            "seed": scenario.seed,
            "samples": scenario.samples,
        },
        "tasks": tasks,
    })
}

/// Writes `<task>.csv` for each result and `summary.json` into `dir`.
pub fn write_outputs(dir: &Path, scenario: &Scenario, results: &[(Task, Table)]) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for (task, table) in results {
        fs::write(dir.join(csv_file_name(*task)), table.to_csv())?;
    }
    let mut text = serde_json::to_string_pretty(&summary_json(scenario, results)).expect("JSON values serialize");
    text.push('\n');
    fs::write(dir.join("summary.json"), text)
}
