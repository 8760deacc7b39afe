//! Data tables, CSV/JSON emission, plot stubs and run manifests.

use crate::args::Format;
use crate::error::CliError;
use serde::Serialize;
use std::path::{Path, PathBuf};

/// One cell of an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Float)
    }
}

/// 12 significant digits, '.' separator, no locale.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        format!("{}e{exp}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_sig(*x),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(i) => (*i).into(),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(serde_json::Value::Null, serde_json::Value::Number),
            Cell::Text(s) => s.clone().into(),
            Cell::Missing => serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Compute(format!("csv encoding failed: {e}"));
        w.write_record(&self.columns).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Compute(format!("csv encoding failed: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| serde_json::Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = serde_json::json!({ "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("json encoding");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }
}

/// Collects written files for the manifest.
#[derive(Debug)]
pub struct Emitter {
    pub primary: PathBuf,
    pub format: Format,
    pub written: Vec<PathBuf>,
}

impl Emitter {
    pub fn new(out: Option<&Path>, command: &str, format: Format) -> Self {
        let primary = out
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from(format!("{command}.{}", format.extension())));
        Emitter {
            primary,
            format,
            written: Vec::new(),
        }
    }

    /// `<dir>/<stem><suffix>` next to the primary output.
    pub fn sibling(&self, suffix: &str) -> PathBuf {
        let stem = self.primary.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        self.primary.with_file_name(format!("{stem}{suffix}"))
    }

    pub fn write_text(&mut self, path: PathBuf, text: &str) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Compute(format!("cannot create {}: {e}", dir.display())))?;
        }
        std::fs::write(&path, text).map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    /// Writes the primary table, plus a plotting stub for CSV output.
    pub fn primary_table(&mut self, table: &Table) -> Result<(), CliError> {
        let text = table.render(self.format)?;
        let path = self.primary.clone();
        self.write_text(path.clone(), &text)?;
        if self.format == Format::Csv {
            self.plot_stub(&path)?;
        }
        Ok(())
    }

    /// Writes an auxiliary table `<stem>-<name>.<ext>`.
    pub fn extra_table(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        let text = table.render(self.format)?;
        let path = self.sibling(&format!("-{name}.{}", self.format.extension()));
        self.write_text(path.clone(), &text)?;
        if self.format == Format::Csv {
            self.plot_stub(&path)?;
        }
        Ok(())
    }

    pub fn plot_stub(&mut self, data: &Path) -> Result<(), CliError> {
        let name = data.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let stem = data.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let script = PLOT_STUB.replace("{DATA}", &name).replace("{STEM}", &stem);
        self.write_text(data.with_file_name(format!("{stem}.plot.py")), &script)
    }
}

const PLOT_STUB: &str = r#"# Plots {DATA}: first column on the x axis, every other numeric column as a line.
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "{DATA}"
with open(path, newline="") as f:
    rows = list(csv.reader(f))
header, body = rows[0], rows[1:]


def column(i):
    out = []
    for r in body:
        try:
            out.append(float(r[i]))
        except ValueError:
            out.append(float("nan"))
    return out


x = column(0)
for i, name in enumerate(header[1:], start=1):
    plt.plot(x, column(i), label=name)
plt.xlabel(header[0])
plt.legend()
plt.savefig("{STEM}.png", dpi=150)
"#;

#[derive(Serialize)]
pub struct Manifest<'a, P: Serialize> {
    pub command: &'a str,
    pub params: &'a P,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub config: Option<&'a Path>,
    pub versions: serde_json::Value,
    pub outputs: Vec<String>,
    pub timestamp: u64,
}
