//! Machine-readable report envelopes and the JSON/CSV/gnuplot writers.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "schrate";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Every report carries the tool identity and the configuration that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: serde_json::Value,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new<C: Serialize>(command: &str, config: &C, result: T) -> Result<Self> {
        Ok(Envelope {
            schema_version: SCHEMA_VERSION,
            tool: TOOL,
            version: TOOL_VERSION,
            command: command.to_string(),
            config: serde_json::to_value(config)?,
            result,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// A numeric table rendered as CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table {
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// A gnuplot script plotting column `y` against column `x` of the CSV.
pub fn gnuplot_script(csv_name: &str, title: &str, x: usize, ys: &[(usize, &str)], log_axes: bool) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set title '{}'\n", title.replace('\'', "")));
    if log_axes {
        s.push_str("set logscale xy\n");
    }
    let plots: Vec<String> = ys
        .iter()
        .map(|(col, style)| format!("'{csv_name}' using {}:{} with {style}", x + 1, col + 1))
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    s
}

/// Paths written by [`write_outputs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outputs {
    pub json: PathBuf,
    pub csv: PathBuf,
    pub gnuplot: PathBuf,
}

pub fn output_paths(stem: &Path) -> Outputs {
    let with = |ext: &str| {
        let mut p = stem.as_os_str().to_owned();
        p.push(".");
        p.push(ext);
        PathBuf::from(p)
    };
    Outputs {
        json: with("json"),
        csv: with("csv"),
        gnuplot: with("gp"),
    }
}

/// Writes `<stem>.json`, `<stem>.csv` and `<stem>.gp`.
pub fn write_outputs(stem: &Path, json: &str, table: &Table, script: impl FnOnce(&str) -> String) -> Result<Outputs> {
    let out = output_paths(stem);
    if let Some(dir) = stem.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(&out.json, json)?;
    fs::write(&out.csv, table.to_csv())?;
    let csv_name = out
        .csv
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    fs::write(&out.gnuplot, script(&csv_name))?;
    Ok(out)
}
