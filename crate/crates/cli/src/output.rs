// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// A header plus rows, written as CSV or as a JSON array of records.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, w: &mut W, format: Format) -> CliResult<()> {
        match format {
            Format::Csv => {
                writeln!(w, "{}", self.header.join(","))?;
                for row in &self.rows {
                    let line: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Int(v) => v.to_string(),
                            Cell::Float(v) => fmt_f64(*v),
                            Cell::Text(s) => s.clone(),
                        })
                        .collect();
                    writeln!(w, "{}", line.join(","))?;
                }
            }
            Format::Json => {
                let records: Vec<serde_json::Map<String, serde_json::Value>> = self
                    .rows
                    .iter()
                    .map(|row| {
                        self.header
                            .iter()
                            .zip(row)
                            .map(|(h, c)| {
                                let v = match c {
                                    Cell::Int(v) => serde_json::Value::from(*v),
                                    Cell::Float(v) => serde_json::Value::from(*v),
                                    Cell::Text(s) => serde_json::Value::from(s.clone()),
                                };
                                (h.to_string(), v)
                            })
                            .collect()
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *w, &records)?;
                writeln!(w)?;
            }
        }
        Ok(())
    }

    /// Writes to `dir/stem.{csv,json}` and returns the path.
    pub fn save(&self, dir: &Path, stem: &str, format: Format) -> CliResult<String> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{stem}.{}", format.ext()));
        let mut w = BufWriter::new(File::create(&path)?);
        self.write(&mut w, format)?;
        w.flush()?;
        Ok(path.display().to_string())
    }
}
