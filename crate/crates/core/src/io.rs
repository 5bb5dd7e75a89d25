//! CSV and JSON persistence.
//!
//! An instance is stored as four files: `edges.csv` (`u,v`),
//! `positions.csv` (`v,x1,..,xd`), `weights.csv` (`v,w`) and the
//! `params.json` sidecar with the parameters, seed and BDF text. Floats are
//! written in shortest round-trip form, so reading back is exact and
//! writing the same instance twice gives identical bytes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bdf::TorusPoint;
use crate::error::{Error, Result};
use crate::parser::{format, parse};
use crate::sampler::{GirgInstance, GirgParams, Positions, WeightSequence};
use crate::two_round::PhaseRow;

pub const EDGES_FILE: &str = "edges.csv";
pub const POSITIONS_FILE: &str = "positions.csv";
pub const WEIGHTS_FILE: &str = "weights.csv";
pub const SIDECAR_FILE: &str = "params.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub bdf: String,
    pub dim: usize,
    pub params: GirgParams,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstancePaths {
    pub edges: PathBuf,
    pub positions: PathBuf,
    pub weights: PathBuf,
    pub sidecar: PathBuf,
}

impl InstancePaths {
    pub fn in_dir(dir: &Path) -> Self {
        InstancePaths {
            edges: dir.join(EDGES_FILE),
            positions: dir.join(POSITIONS_FILE),
            weights: dir.join(WEIGHTS_FILE),
            sidecar: dir.join(SIDECAR_FILE),
        }
    }

    pub fn all(&self) -> [&Path; 4] {
        [&self.edges, &self.positions, &self.weights, &self.sidecar]
    }
}

/// Writes `bytes` to a temporary sibling and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Format(format!("{} has no file name", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn csv_bytes<F>(header: &[String], fill: F) -> Result<Vec<u8>>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    fill(&mut w)?;
    w.into_inner()
        .map_err(|e| Error::Format(format!("csv buffer: {e}")))
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

pub fn edges_csv(edges: &[(u32, u32)]) -> Result<Vec<u8>> {
    csv_bytes(&header(&["u", "v"]), |w| {
        for &(u, v) in edges {
            w.write_record([u.to_string(), v.to_string()])?;
        }
        Ok(())
    })
}

pub fn positions_csv(p: &Positions) -> Result<Vec<u8>> {
    let mut h = vec!["v".to_string()];
    h.extend((1..=p.dim()).map(|i| format!("x{i}")));
    csv_bytes(&h, |w| {
        for v in 0..p.len() {
            let mut row = vec![v.to_string()];
            row.extend((0..p.dim()).map(|i| p.get(v, i).to_string()));
            w.write_record(&row)?;
        }
        Ok(())
    })
}

pub fn weights_csv(ws: &WeightSequence) -> Result<Vec<u8>> {
    csv_bytes(&header(&["v", "w"]), |w| {
        for (v, x) in ws.as_slice().iter().enumerate() {
            w.write_record([v.to_string(), x.to_string()])?;
        }
        Ok(())
    })
}

pub fn sidecar_json(g: &GirgInstance) -> Result<Vec<u8>> {
    let s = Sidecar {
        bdf: format(&g.bdf),
        dim: g.dim(),
        params: g.params,
        edges: g.edges.len(),
    };
    let mut bytes = serde_json::to_vec_pretty(&s)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes the four instance files into `dir` (created if missing).
pub fn write_instance(dir: &Path, g: &GirgInstance) -> Result<InstancePaths> {
    fs::create_dir_all(dir)?;
    let paths = InstancePaths::in_dir(dir);
    write_atomic(&paths.edges, &edges_csv(&g.edges)?)?;
    write_atomic(&paths.positions, &positions_csv(&g.positions)?)?;
    write_atomic(&paths.weights, &weights_csv(&g.weights)?)?;
    write_atomic(&paths.sidecar, &sidecar_json(g)?)?;
    Ok(paths)
}

fn reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    Ok(csv::Reader::from_path(path)?)
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, path: &Path) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| {
            Error::Format(format!(
                "{}: bad field {i} on line {}",
                path.display(),
                rec.position().map_or(0, |p| p.line())
            ))
        })
}

pub fn read_edges(path: &Path) -> Result<Vec<(u32, u32)>> {
    let mut r = reader(path)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        out.push((field(&rec, 0, path)?, field(&rec, 1, path)?));
    }
    Ok(out)
}

pub fn read_positions(path: &Path, dim: usize) -> Result<Positions> {
    let mut r = reader(path)?;
    let mut pts = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != dim + 1 {
            return Err(Error::Format(format!(
                "{}: expected {} columns, found {}",
                path.display(),
                dim + 1,
                rec.len()
            )));
        }
        let v: usize = field(&rec, 0, path)?;
        if v != line {
            return Err(Error::Format(format!("{}: vertex {v} out of order", path.display())));
        }
        let coords = (1..=dim).map(|i| field(&rec, i, path)).collect::<Result<Vec<f64>>>()?;
        pts.push(TorusPoint::new(coords)?);
    }
    Positions::from_points(dim, &pts)
}

pub fn read_weights(path: &Path) -> Result<WeightSequence> {
    let mut r = reader(path)?;
    let mut ws = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let v: usize = field(&rec, 0, path)?;
        if v != line {
            return Err(Error::Format(format!("{}: vertex {v} out of order", path.display())));
        }
        ws.push(field(&rec, 1, path)?);
    }
    WeightSequence::new(ws)
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}

/// Loads and validates an instance written by [`write_instance`].
pub fn read_instance(paths: &InstancePaths) -> Result<GirgInstance> {
    let side = read_sidecar(&paths.sidecar)?;
    let bdf = parse(&side.bdf)?;
    let instance = GirgInstance::from_parts(
        side.params,
        bdf,
        read_weights(&paths.weights)?,
        read_positions(&paths.positions, side.dim)?,
        read_edges(&paths.edges)?,
    )?;
    if instance.edges.len() != side.edges {
        return Err(Error::Format(format!(
            "sidecar records {} edges, edge list has {}",
            side.edges,
            instance.edges.len()
        )));
    }
    Ok(instance)
}

pub fn phase_csv(rows: &[PhaseRow]) -> Result<Vec<u8>> {
    csv_bytes(&header(&["phase", "edges", "giant_size"]), |w| {
        for r in rows {
            w.write_record([r.phase.to_string(), r.edges.to_string(), r.giant_size.to_string()])?;
        }
        Ok(())
    })
}

pub fn metrics_csv(metrics: &[(String, f64)]) -> Result<Vec<u8>> {
    csv_bytes(&header(&["metric", "value"]), |w| {
        for (k, v) in metrics {
            w.write_record([k.clone(), v.to_string()])?;
        }
        Ok(())
    })
}

/// One row of the long-format scaling table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub seed: u64,
    pub metric: String,
    pub value: f64,
}

pub fn scaling_csv(rows: &[ScalingRow]) -> Result<Vec<u8>> {
    csv_bytes(&header(&["n", "seed", "metric", "value"]), |w| {
        for r in rows {
            w.write_record([r.n.to_string(), r.seed.to_string(), r.metric.clone(), r.value.to_string()])?;
        }
        Ok(())
    })
}
