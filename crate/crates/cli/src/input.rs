//! Input files: histogram CSV, weight CSV and Gaussian JSON.

use std::fs::File;
use std::path::Path;

use centers_core::categorical::SimplexPoint;
use centers_core::gaussian::GaussianParam;
use centers_core::legendre::Weights;
use centers_core::spd::SpdMatrix;
use nalgebra::DVector;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Rows whose sum is within this distance of 1 are rescaled; others are rejected.
pub const RENORMALIZE_TOL: f64 = 1e-6;

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn renormalize(values: Vec<f64>, what: &str) -> CliResult<Vec<f64>> {
    let s: f64 = values.iter().sum();
    if (s - 1.0).abs() > RENORMALIZE_TOL {
        return Err(CliError::Validation(format!("{what} sums to {s}, not 1")));
    }
    Ok(values.into_iter().map(|v| v / s).collect())
}

/// Parses comma-separated rows of positive reals, one histogram per line.
/// Blank lines are skipped.
pub fn read_csv_rows(path: &Path) -> CliResult<Vec<(u64, Vec<f64>)>> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(open(path)?);
    let mut rows = Vec::new();
    let mut width = None;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Parse { path: path.to_path_buf(), line, column: 1, msg: e.to_string() }
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let parse_err = |column: usize, msg: String| CliError::Parse { path: path.to_path_buf(), line, column, msg };
        let mut row = Vec::with_capacity(record.len());
        for (k, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| parse_err(k + 1, format!("'{field}' is not a number")))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(parse_err(k + 1, format!("{v} is not a positive finite value")));
            }
            row.push(v);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(row.len().min(w) + 1, format!("expected {w} values, found {}", row.len())));
            }
            _ => {}
        }
        rows.push((line, row));
    }
    if rows.is_empty() {
        return Err(CliError::Validation(format!("{}: no rows", path.display())));
    }
    Ok(rows)
}

pub fn read_histograms(path: &Path) -> CliResult<Vec<SimplexPoint>> {
    let rows = read_csv_rows(path)?;
    if rows[0].1.len() < 2 {
        return Err(CliError::Validation(format!("{}: histograms need at least 2 bins", path.display())));
    }
    rows.into_iter()
        .enumerate()
        .map(|(i, (line, r))| {
            let what = format!("{}: row {} (line {line})", path.display(), i + 1);
            let r = renormalize(r, &what)?;
            SimplexPoint::new(r).map_err(|e| CliError::Validation(format!("{what}: {e}")))
        })
        .collect()
}

pub fn read_weights(path: &Path) -> CliResult<Weights> {
    let rows = read_csv_rows(path)?;
    if rows.len() != 1 {
        return Err(CliError::Validation(format!("{}: expected a single row of weights", path.display())));
    }
    let w = renormalize(rows.into_iter().next().unwrap().1, &format!("{}: weights", path.display()))?;
    Weights::new(w).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianEntry {
    mean: Vec<f64>,
    cov: Vec<Vec<f64>>,
    weight: Option<f64>,
}

/// Parses a JSON list of `{"mean": [...], "cov": [[...]], "weight": w?}`.
/// Weights must be given for all entries or for none.
pub fn read_gaussians(path: &Path) -> CliResult<(Vec<GaussianParam>, Option<Weights>)> {
    let entries: Vec<GaussianEntry> = serde_json::from_reader(std::io::BufReader::new(open(path)?)).map_err(|e| {
        CliError::Parse { path: path.to_path_buf(), line: e.line() as u64, column: e.column(), msg: e.to_string() }
    })?;
    if entries.is_empty() {
        return Err(CliError::Validation(format!("{}: empty list", path.display())));
    }
    let given = entries.iter().filter(|e| e.weight.is_some()).count();
    if given != 0 && given != entries.len() {
        return Err(CliError::Validation(format!("{}: weight given for some entries only", path.display())));
    }
    let mut params = Vec::with_capacity(entries.len());
    let mut weights = Vec::with_capacity(given);
    for (i, e) in entries.into_iter().enumerate() {
        let what = format!("{}: entry {}", path.display(), i + 1);
        let cov = SpdMatrix::from_rows(&e.cov).map_err(|err| CliError::Validation(format!("{what}: {err}")))?;
        let p = GaussianParam::new(DVector::from_vec(e.mean), cov)
            .map_err(|err| CliError::Validation(format!("{what}: {err}")))?;
        if let Some(d) = params.first().map(GaussianParam::dim) {
            if p.dim() != d {
                return Err(CliError::Validation(format!("{what}: dimension {} differs from {d}", p.dim())));
            }
        }
        params.push(p);
        weights.extend(e.weight);
    }
    let weights = if given == 0 {
        None
    } else {
        let w = renormalize(weights, &format!("{}: weights", path.display()))?;
        Some(Weights::new(w).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?)
    };
    Ok((params, weights))
}
