//! Interchange formats.
//!
//! Matrices travel as `{"n": <half-order>, "rows": [[...], ...]}` with `2n`
//! rows. Square matrices have `2n` columns; symplectic frames reuse the same
//! layout with `2k` columns. A whitespace-separated text form (one row per
//! line) is accepted on input. Vectors are plain JSON arrays of floats, or
//! whitespace-separated numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{even_half, Matrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixJson {
            n: m.nrows() / 2,
            rows: (0..m.nrows())
                .map(|i| m.row(i).iter().copied().collect())
                .collect(),
        }
    }

    /// Validates the shape (`2n` rows of equal, even length) and converts.
    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.rows.len() != 2 * self.n || self.n == 0 {
            return Err(Error::Parse(format!(
                "matrix declares n = {} but has {} rows",
                self.n,
                self.rows.len()
            )));
        }
        rows_to_matrix(&self.rows)
    }
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<Matrix> {
    let ncols = rows.first().map_or(0, Vec::len);
    if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse("matrix rows are empty or ragged".into()));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Parse("matrix has non-finite entries".into()));
    }
    even_half(rows.len()).map_err(|e| Error::Parse(e.to_string()))?;
    even_half(ncols).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Matrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

pub fn matrix_to_json(m: &Matrix) -> serde_json::Value {
    serde_json::to_value(MatrixJson::from_matrix(m)).expect("matrix serializes")
}

pub fn matrix_from_value(v: &serde_json::Value) -> Result<Matrix> {
    let mj: MatrixJson =
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    mj.to_matrix()
}

/// Parses a matrix from JSON or, failing that, from whitespace-separated rows.
pub fn parse_matrix(input: &str) -> Result<Matrix> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(input).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
        return matrix_from_value(&v);
    }
    let rows = input
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix input".into()));
    }
    rows_to_matrix(&rows)
}

/// Parses a list of matrices given as a JSON array of matrix objects.
pub fn parse_matrix_list(input: &str) -> Result<Vec<Matrix>> {
    let v: serde_json::Value =
        serde_json::from_str(input).map_err(|e| Error::Parse(format!("matrix list JSON: {e}")))?;
    match v {
        serde_json::Value::Array(items) => items.iter().map(matrix_from_value).collect(),
        other => Ok(vec![matrix_from_value(&other)?]),
    }
}

pub fn parse_vector(input: &str) -> Result<Vec<f64>> {
    let trimmed = input.trim();
    let values: Vec<f64> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("vector JSON: {e}")))?
    } else {
        trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}"))))
            .collect::<Result<_>>()?
    };
    if values.is_empty() {
        return Err(Error::Parse("empty vector".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parse("vector has non-finite entries".into()));
    }
    Ok(values)
}

/// Whitespace-separated rows, one per line.
pub fn matrix_to_text(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
