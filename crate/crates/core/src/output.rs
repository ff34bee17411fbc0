//! Tabular output documents, rendered as CSV with `#` metadata lines or as a
//! single JSON document.

use std::fmt;
use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
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

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

/// Seventeen significant digits, enough to round-trip any f64.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(n) => write!(f, "{n}"),
            Cell::Real(x) => f.write_str(&format_real(*x)),
            Cell::Text(s) => f.write_str(s),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Missing => Ok(()),
        }
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(n) => json!(n),
            Cell::Real(x) => json!(x),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Missing => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> (Value, Value) {
        let columns = json!(self.columns);
        let rows = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::to_json).collect())).collect();
        (columns, Value::Array(rows))
    }
}

/// One command's output: metadata, a main table and optional named sections.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub metadata: Vec<(String, Cell)>,
    pub table: Table,
    pub sections: Vec<(String, Table)>,
}

impl Document {
    pub fn new(table: Table) -> Self {
        Document { table, ..Default::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.metadata.push((key.to_string(), value.into()));
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }

    pub fn to_json(&self) -> String {
        let mut metadata = Map::new();
        for (k, v) in &self.metadata {
            metadata.insert(k.clone(), v.to_json());
        }
        let (columns, rows) = self.table.to_json();
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(metadata));
        doc.insert("columns".into(), columns);
        doc.insert("rows".into(), rows);
        if !self.sections.is_empty() {
            let mut sections = Map::new();
            for (name, table) in &self.sections {
                let (columns, rows) = table.to_json();
                sections.insert(name.clone(), json!({ "columns": columns, "rows": rows }));
            }
            doc.insert("sections".into(), Value::Object(sections));
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = Vec::new();
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}").map_err(io_error)?;
        }
        write_table(&mut out, &self.table)?;
        for (name, table) in &self.sections {
            writeln!(out, "#\n# section: {name}").map_err(io_error)?;
            write_table(&mut out, table)?;
        }
        String::from_utf8(out).map_err(|e| Error::Output(e.to_string()))
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::Output(e.to_string())
}

fn write_table(out: &mut Vec<u8>, table: &Table) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Output(e.to_string());
    writer.write_record(&table.columns).map_err(csv_err)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(|c| c.to_string())).map_err(csv_err)?;
    }
    writer.flush().map_err(io_error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Document {
        let mut table = Table::new(&["n", "E", "label"]);
        table.push(vec![0usize.into(), 0.1f64.into(), "a,b".into()]);
        table.push(vec![1usize.into(), Cell::Missing, "c".into()]);
        let mut doc = Document::new(table);
        doc.meta("model", "exp2").meta("v0", 5.0);
        doc
    }

    #[test]
    fn reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, 8.875_980_123_456_78, 1e-300, -2.5e17] {
            let text = format_real(x);
            assert_eq!(text.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let text = sample().to_csv().unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# model: exp2");
        assert_eq!(lines[1], "# v0: 5.0000000000000000e0");
        assert_eq!(lines[2], "n,E,label");
        assert_eq!(lines[3], "0,1.0000000000000001e-1,\"a,b\"");
        assert_eq!(lines[4], "1,,c");
    }

    #[test]
    fn json_is_one_document() {
        let value: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(value["metadata"]["model"], "exp2");
        assert_eq!(value["columns"][1], "E");
        assert_eq!(value["rows"][0][1], 0.1);
        assert!(value["rows"][1][1].is_null());
        assert!(value.get("sections").is_none());
    }
}
