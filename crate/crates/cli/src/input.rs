//! The JSON input document `{"dim": n, "points": [[...], ...]}`.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sumset_core::{IntVector, LatticePointSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub dim: usize,
    pub points: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct Parsed {
    /// The input with repeated points removed (first occurrences kept).
    pub spec: InputSpec,
    pub duplicates: Vec<Vec<i64>>,
    pub set: LatticePointSet,
}

/// Reads the document from `path`, or from standard input for `None` or `-`.
pub fn read_source(path: Option<&Path>) -> Result<String> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).context("cannot read standard input")?;
        }
    }
    Ok(text)
}

pub fn parse_input(text: &str, max_coord: i64) -> Result<Parsed> {
    let spec: InputSpec = serde_json::from_str(text).context("malformed input document")?;
    if spec.dim == 0 {
        bail!("dim must be positive");
    }
    if spec.points.is_empty() {
        bail!("empty point list");
    }
    if spec.points.iter().any(|p| p.len() != spec.dim) {
        bail!("ragged coordinates: every point needs {} coordinates", spec.dim);
    }
    if let Some(p) = spec.points.iter().find(|p| p.iter().any(|c| c.unsigned_abs() > max_coord.unsigned_abs())) {
        bail!("coordinate magnitude above --max-coord {max_coord} in {p:?}");
    }
    let mut seen = BTreeSet::new();
    let mut kept = Vec::new();
    let mut duplicates = Vec::new();
    for p in spec.points {
        if seen.insert(p.clone()) {
            kept.push(p);
        } else {
            duplicates.push(p);
        }
    }
    let set = LatticePointSet::from_points(spec.dim, kept.iter().map(|p| IntVector::from_i64(p)))?;
    Ok(Parsed { spec: InputSpec { dim: spec.dim, points: kept }, duplicates, set })
}
