//! JSON summaries and CSV tables.
//!
//! JSON numbers use the shortest representation that parses back to the same
//! `f64`. CSV reals are written with 17 significant digits in scientific
//! notation. Column order is fixed per table.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Both,
}

pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

pub struct Report {
    /// File stem under the output directory.
    pub name: String,
    pub json: Value,
    pub table: Option<Table>,
}

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn render_json(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Compute(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn emit(report: &Report, format: Format, out_dir: Option<&Path>) -> Result<(), CliError> {
    let want_json = matches!(format, Format::Json | Format::Both);
    let want_csv = matches!(format, Format::Csv | Format::Both);
    if want_csv && report.table.is_none() && format == Format::Csv {
        return Err(CliError::Schema(format!("{} has no table output; use --format json", report.name)));
    }
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            if want_json {
                std::fs::write(dir.join(format!("{}.json", report.name)), render_json(&report.json)?)?;
            }
            if let (true, Some(t)) = (want_csv, &report.table) {
                std::fs::write(dir.join(format!("{}.csv", report.name)), t.render())?;
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            if want_json {
                out.write_all(render_json(&report.json)?.as_bytes())?;
            }
            if let (true, Some(t)) = (want_csv, &report.table) {
                out.write_all(t.render().as_bytes())?;
            }
        }
    }
    Ok(())
}
