//! Income data ingestion and empirical Lorenz curves.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sample::{point_estimate, OrdinateQuery, Sample};

#[derive(Debug, Clone, PartialEq)]
pub struct IncomeRow {
    pub group: Option<String>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IncomeTable {
    pub rows: Vec<IncomeRow>,
    /// Rows skipped because the value cell was empty or not a finite number.
    pub dropped: usize,
}

/// Group token that selects every row.
pub const ALL_GROUPS: &str = "ALL";

impl IncomeTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values whose group key equals `group` exactly; `None` or [`ALL_GROUPS`] keeps all rows.
    pub fn values(&self, group: Option<&str>) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| match group {
                None | Some(ALL_GROUPS) => true,
                Some(g) => r.group.as_deref() == Some(g),
            })
            .map(|r| r.value)
            .collect()
    }

    pub fn sample(&self, group: Option<&str>) -> Result<Sample> {
        Sample::new(self.values(group))
    }
}

/// Parses a numeric cell, accepting thousands separators and a leading `$`.
fn parse_value(cell: &str) -> Option<f64> {
    let cleaned: String = cell
        .trim()
        .trim_start_matches('$')
        .chars()
        .filter(|&c| c != ',')
        .collect();
    cleaned.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn file_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub fn read_csv<R: Read>(
    reader: R,
    value_column: &str,
    group_column: Option<&str>,
    source: &Path,
) -> Result<IncomeTable> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers().map_err(|e| file_error(source, e))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Schema(name.to_string()))
    };
    let value_idx = find(value_column)?;
    let group_idx = group_column.map(find).transpose()?;

    let mut table = IncomeTable::default();
    for record in rdr.records() {
        let record = record.map_err(|e| file_error(source, e))?;
        match record.get(value_idx).and_then(parse_value) {
            Some(value) => table.rows.push(IncomeRow {
                group: group_idx.and_then(|i| record.get(i)).map(|g| g.trim().to_string()),
                value,
            }),
            None => table.dropped += 1,
        }
    }
    Ok(table)
}

/// Loads a header-row CSV file, keeping the value column and optionally a group column.
pub fn load_csv(path: &Path, value_column: &str, group_column: Option<&str>) -> Result<IncomeTable> {
    let file = File::open(path).map_err(|e| file_error(path, e))?;
    read_csv(file, value_column, group_column, path)
}

/// Empirical Lorenz and generalized Lorenz ordinates on a grid of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoints {
    pub grid: Vec<f64>,
    pub lorenz: Vec<f64>,
    pub generalized: Vec<f64>,
    pub mu_hat: f64,
}

pub fn curve(sample: &Sample, grid: &[f64]) -> Result<CurvePoints> {
    let mu_hat = sample.mean();
    let mut generalized = Vec::with_capacity(grid.len());
    for &t in grid {
        generalized.push(point_estimate(sample, OrdinateQuery::new(t)?));
    }
    let lorenz = generalized.iter().map(|g| g / mu_hat).collect();
    Ok(CurvePoints {
        grid: grid.to_vec(),
        lorenz,
        generalized,
        mu_hat,
    })
}

/// `t,lorenz,generalized,diagonal` rows.
pub fn write_curve_csv<W: Write>(points: &CurvePoints, writer: W) -> Result<()> {
    let out = Path::new("<output>");
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["t", "lorenz", "generalized", "diagonal"])
        .map_err(|e| file_error(out, e))?;
    for ((t, l), g) in points.grid.iter().zip(&points.lorenz).zip(&points.generalized) {
        w.write_record([t.to_string(), l.to_string(), g.to_string(), t.to_string()])
            .map_err(|e| file_error(out, e))?;
    }
    w.flush().map_err(|e| file_error(out, e))?;
    Ok(())
}
