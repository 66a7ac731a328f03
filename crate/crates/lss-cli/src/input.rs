//! Matrix-set files.
//!
//! A file is a JSON list. Each entry is either a matrix given as a list of rows,
//! or an object `{"label": "...", "rows": [[...], ...]}`.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use lss_core::linalg::{Matrix, MatrixSet};
use serde::{Deserialize, Serialize};

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum Entry {
    Bare(Vec<Vec<f64>>),
    Labelled {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        rows: Vec<Vec<f64>>,
    },
}

pub fn load_matrix_set(path: &Path) -> Result<MatrixSet> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_matrix_set(&text).with_context(|| format!("in {}", path.display()))
}

pub fn parse_matrix_set(text: &str) -> Result<MatrixSet> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| anyhow!("parse error: {e}"))?;
    let serde_json::Value::Array(items) = value else {
        bail!("parse error: expected a top-level list of matrices");
    };
    if items.is_empty() {
        bail!("empty matrix set");
    }
    let mut matrices = Vec::with_capacity(items.len());
    let mut labels = Vec::with_capacity(items.len());
    let mut dim = None;
    for (i, item) in items.into_iter().enumerate() {
        let entry: Entry = serde_json::from_value(item).map_err(|_| {
            anyhow!(
                "matrix at index {i}: expected a list of numeric rows or an object with \"rows\""
            )
        })?;
        let (label, rows) = match entry {
            Entry::Bare(rows) => (None, rows),
            Entry::Labelled { label, rows } => (label, rows),
        };
        let n = rows.len();
        if n == 0 {
            bail!("empty matrix at index {i}");
        }
        for (j, row) in rows.iter().enumerate() {
            if row.len() != rows[0].len() {
                bail!(
                    "ragged rows in matrix at index {i}: row {j} has {} entries, row 0 has {}",
                    row.len(),
                    rows[0].len()
                );
            }
        }
        if rows[0].len() != n {
            bail!("non-square matrix at index {i}: {n}x{}", rows[0].len());
        }
        match dim {
            None => dim = Some(n),
            Some(d) if d != n => {
                bail!("dimension mismatch: matrix at index {i} is {n}x{n}, expected {d}x{d}")
            }
            _ => {}
        }
        matrices.push(Matrix::from_rows(&rows).with_context(|| format!("matrix at index {i}"))?);
        labels.push(label);
    }
    Ok(MatrixSet::with_labels(matrices, labels)?)
}

/// Serializes a set in the input format; floats are written in shortest
/// round-trip form.
pub fn write_matrix_set(set: &MatrixSet) -> String {
    let entries: Vec<Entry> = set
        .matrices()
        .iter()
        .zip(set.labels())
        .map(|(m, l)| match l {
            Some(label) => Entry::Labelled {
                label: Some(label.clone()),
                rows: m.rows(),
            },
            None => Entry::Bare(m.rows()),
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("finite matrices serialize")
}
