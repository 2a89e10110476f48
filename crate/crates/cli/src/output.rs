//! Tabular results, their CSV/JSON renderings and atomic file output.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::{Command, RunConfig};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => json!(x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Rows with a fixed column set.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    /// One JSON object per row, keyed by column name.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let map: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(map)
                })
                .collect(),
        )
    }
}

/// What a subcommand produced: the table for CSV and a richer JSON body.
pub struct Report {
    pub table: Table,
    /// Extra JSON fields merged next to `rows`.
    pub details: Map<String, Value>,
}

pub fn render_json(command: Command, config: &RunConfig, report: &Report, runtime_s: Option<f64>) -> String {
    let mut results = report.details.clone();
    results.insert("columns".into(), json!(report.table.columns));
    results.insert("rows".into(), report.table.to_json());
    let document = json!({
        "config": { "command": command.name(), "options": config },
        "results": results,
        "meta": { "version": env!("CARGO_PKG_VERSION"), "runtime_s": runtime_s },
    });
    let mut text = serde_json::to_string_pretty(&document).expect("JSON values always serialize");
    text.push('\n');
    text
}

/// Writes through a temporary file in the target directory, then renames, so
/// a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |context: String| move |source| CliError::Io { context, source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut file = tempfile::NamedTempFile::new_in(dir).map_err(io(format!("creating file in {}", dir.display())))?;
    file.write_all(contents.as_bytes())
        .map_err(io(format!("writing {}", path.display())))?;
    file.persist(path)
        .map_err(|e| CliError::Io {
            context: format!("renaming onto {}", path.display()),
            source: e.error,
        })?;
    Ok(())
}

/// A gnuplot script plotting the last column against the first.
pub fn gnuplot_stub(data_file: &Path, table: &Table) -> String {
    let name = data_file
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let y = table.columns.len().max(2);
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel '{x}'\n\
         set ylabel '{yl}'\n\
         plot '{name}' using 1:{y} with linespoints\n",
        x = table.columns.first().copied().unwrap_or("x"),
        yl = table.columns.get(y - 1).copied().unwrap_or("y"),
    )
}
