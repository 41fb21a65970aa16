//! File formats: CSV path input, rough-path / tangent / area JSON.
//!
//! Rough paths are serialized through their running signatures:
//!
//! ```json
//! { "dim": m, "times": [...],
//!   "level1": [[m floats] per time],
//!   "level2": [[m·m floats, row-major] per time] }
//! ```
//!
//! serde_json emits shortest round-trip float representations, so a dump
//! re-ingests bit-exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::DyadicArea;
use crate::roughpath::{GridRoughPath, PairRoughPath, Phi};
use crate::tangent::TangentRep;
use crate::tensor::Tensor2;

/// Read a piecewise-linear path from CSV with header `t,x1,...,xd`.
pub fn read_path_csv(path: &Path) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    {
        let headers = reader.headers()?;
        if headers.len() < 2 || headers.get(0) != Some("t") {
            return Err(Error::InvalidInput(
                "CSV header must be t,x1,...,xd".into(),
            ));
        }
    }
    let mut times = Vec::new();
    let mut points = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row: Vec<f64> = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    Error::InvalidInput(format!(
                        "line {}: cannot parse '{field}' as a number",
                        line + 2
                    ))
                })
            })
            .collect::<Result<_>>()?;
        if row.len() < 2 {
            return Err(Error::InvalidInput(format!("line {}: too few columns", line + 2)));
        }
        times.push(row[0]);
        points.push(row[1..].to_vec());
    }
    if times.len() < 2 {
        return Err(Error::InvalidInput("CSV must contain at least 2 rows".into()));
    }
    if !times.windows(2).all(|w| w[0] < w[1]) {
        let bad = times.windows(2).position(|w| w[0] >= w[1]).unwrap_or(0);
        return Err(Error::InvalidInput(format!(
            "line {}: times must be strictly increasing",
            bad + 3
        )));
    }
    Ok((times, points))
}

#[derive(Serialize, Deserialize)]
struct RoughPathJson {
    dim: usize,
    times: Vec<f64>,
    level1: Vec<Vec<f64>>,
    level2: Vec<Vec<f64>>,
}

pub fn roughpath_to_json(x: &GridRoughPath) -> String {
    let doc = RoughPathJson {
        dim: x.dim(),
        times: x.times().to_vec(),
        level1: x.signatures().iter().map(|s| s.level1.clone()).collect(),
        level2: x.signatures().iter().map(|s| s.level2.clone()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn roughpath_from_json(text: &str) -> Result<GridRoughPath> {
    let doc: RoughPathJson = serde_json::from_str(text)?;
    if doc.level1.len() != doc.times.len() || doc.level2.len() != doc.times.len() {
        return Err(Error::InvalidInput(
            "level1/level2 must have one entry per time".into(),
        ));
    }
    let sig = doc
        .level1
        .into_iter()
        .zip(doc.level2)
        .map(|(l1, l2)| Tensor2::new(doc.dim, l1, l2))
        .collect::<Result<Vec<_>>>()?;
    GridRoughPath::from_signatures(doc.dim, doc.times, sig)
}

pub fn read_roughpath(path: &Path) -> Result<GridRoughPath> {
    roughpath_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_roughpath(path: &Path, x: &GridRoughPath) -> Result<()> {
    Ok(std::fs::write(path, roughpath_to_json(x))?)
}

#[derive(Serialize, Deserialize)]
struct TangentJson {
    base: RoughPathJson,
    z: RoughPathJson,
    phi: Vec<Vec<f64>>,
}

pub fn tangent_to_json(rep: &TangentRep) -> String {
    let base = serde_json::from_str(&roughpath_to_json(rep.base())).expect("round trip");
    let z = serde_json::from_str(&roughpath_to_json(rep.z().as_path())).expect("round trip");
    let phi = (0..rep.base().times().len())
        .map(|k| rep.phi().running(k).to_vec())
        .collect();
    serde_json::to_string_pretty(&TangentJson { base, z, phi }).expect("plain data serializes")
}

pub fn tangent_from_json(text: &str) -> Result<TangentRep> {
    let doc: TangentJson = serde_json::from_str(text)?;
    let base = roughpath_from_json(&serde_json::to_string(&doc.base)?)?;
    let z = PairRoughPath::new(roughpath_from_json(&serde_json::to_string(&doc.z)?)?)?;
    let phi = Phi::new(base.dim(), doc.phi)?;
    TangentRep::new(base, z, phi)
}

#[derive(Serialize)]
struct AreaJson<'a> {
    depth: usize,
    eps: f64,
    delta: f64,
    /// Per level n, the k-indexed d×d cross blocks A(ε, δ) on
    /// [k/2^n, (k+1)/2^n].
    levels: Vec<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

pub fn area_to_json(area: &DyadicArea) -> Result<String> {
    let mut levels = Vec::with_capacity(area.depth() + 1);
    for n in 0..=area.depth() {
        let row: Result<Vec<Vec<f64>>> =
            (0..(1usize << n)).map(|k| area.cross_block(n, k)).collect();
        levels.push(row?);
    }
    Ok(serde_json::to_string_pretty(&AreaJson {
        depth: area.depth(),
        eps: area.eps(),
        delta: area.delta(),
        levels,
        note: None,
    })
    .expect("plain data serializes"))
}
