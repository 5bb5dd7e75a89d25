//! Geometric edge cuts: coordinate hyperplanes and shifted slabs.

use serde::{Deserialize, Serialize};

use super::{connected_components, SimpleGraph};
use crate::bdf::wrap_unit;
use crate::error::{Error, Result};
use crate::sampler::GirgInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    /// (inside, outside) vertex counts.
    pub side_sizes: (usize, usize),
    pub cross_edges: usize,
    pub family: String,
    /// 1-based coordinate the cut is taken along.
    pub coordinate: usize,
    pub offset: f64,
    pub width: f64,
}

impl CutReport {
    pub fn normalized(&self) -> f64 {
        self.cross_edges as f64 / (self.side_sizes.0 + self.side_sizes.1) as f64
    }
}

/// `inside(v)` iff `(x_{v,k} + offset) mod 1 < width`.
fn side_of(x: f64, offset: f64, width: f64) -> bool {
    wrap_unit(x + offset) < width
}

fn check_coordinate(g: &GirgInstance, k: usize) -> Result<()> {
    if k == 0 || k > g.dim() {
        return Err(Error::InvalidParameter(format!(
            "coordinate {k} outside 1..={}",
            g.dim()
        )));
    }
    Ok(())
}

/// Slab cut along coordinate `k`: the bounding hyperplanes sit at
/// `x_k = -offset` and `x_k = width - offset`.
pub fn hyperplane_cut(g: &GirgInstance, k: usize, offset: f64, width: f64) -> Result<CutReport> {
    check_coordinate(g, k)?;
    let axis = g.positions.axis(k - 1);
    let inside: Vec<bool> = axis.iter().map(|&x| side_of(x, offset, width)).collect();
    let n_in = inside.iter().filter(|&&s| s).count();
    let cross = g
        .edges
        .iter()
        .filter(|&&(u, v)| inside[u as usize] != inside[v as usize])
        .count();
    Ok(CutReport {
        side_sizes: (n_in, g.n() - n_in),
        cross_edges: cross,
        family: format!("slab x{k} + {offset} mod 1 < {width}"),
        coordinate: k,
        offset,
        width,
    })
}

/// The two hyperplanes `x_k = 0` and `x_k = 1/2`.
pub fn hyperplane_separator(g: &GirgInstance, k: usize) -> Result<CutReport> {
    hyperplane_cut(g, k, 0.0, 0.5)
}

/// Every coordinate, offsets `j / offsets` and the given slab widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeFamily {
    pub offsets: usize,
    pub widths: &'static [f64],
}

impl Default for ProbeFamily {
    fn default() -> Self {
        ProbeFamily {
            offsets: 16,
            widths: &[0.5],
        }
    }
}

impl ProbeFamily {
    /// Half-spaces plus narrower slabs.
    pub fn with_slabs(offsets: usize) -> Self {
        ProbeFamily {
            offsets,
            widths: &[0.1, 0.2, 0.3, 0.4, 0.5],
        }
    }
}

/// All cuts of the family.
pub fn probe_cuts(g: &GirgInstance, family: &ProbeFamily) -> Vec<CutReport> {
    let mut out = Vec::new();
    for k in 1..=g.dim() {
        for j in 0..family.offsets.max(1) {
            let offset = j as f64 / family.offsets.max(1) as f64;
            for &width in family.widths {
                out.push(hyperplane_cut(g, k, offset, width).expect("coordinate in range"));
            }
        }
    }
    out
}

/// The probed cut with fewest crossing edges among those with both sides
/// holding at least `min_side * n` vertices.
pub fn sparse_cut_probe(g: &GirgInstance, family: &ProbeFamily, min_side: f64) -> Option<CutReport> {
    let bound = min_side * g.n() as f64;
    probe_cuts(g, family)
        .into_iter()
        .filter(|c| c.side_sizes.0 as f64 >= bound && c.side_sizes.1 as f64 >= bound)
        .min_by_key(|c| c.cross_edges)
}

/// Components left on each side once the separator edges are removed.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatorSplit {
    pub report: CutReport,
    /// Two largest component sizes on the (inside, outside) side.
    pub inside_largest: (usize, usize),
    pub outside_largest: (usize, usize),
    /// Edges of the graph without the separator.
    pub remaining: SimpleGraph,
    /// Either side's largest component is below `min_side * n`.
    pub flagged: bool,
}

impl SeparatorSplit {
    pub fn min_side_largest(&self) -> usize {
        self.inside_largest.0.min(self.outside_largest.0)
    }
}

pub fn separator_split(g: &GirgInstance, k: usize, min_side: f64) -> Result<SeparatorSplit> {
    let report = hyperplane_separator(g, k)?;
    let axis = g.positions.axis(k - 1);
    let inside: Vec<bool> = axis.iter().map(|&x| side_of(x, 0.0, 0.5)).collect();
    let remaining = SimpleGraph::new(
        g.n(),
        g.edges
            .iter()
            .copied()
            .filter(|&(u, v)| inside[u as usize] == inside[v as usize])
            .collect(),
    );
    let comps = connected_components(&remaining);
    let mut size = vec![0usize; g.n()];
    for &l in &comps.labels {
        size[l as usize] += 1;
    }
    let top_two = |want: bool| {
        let mut s: Vec<usize> = (0..g.n())
            .filter(|&v| comps.labels[v] as usize == v && inside[v] == want)
            .map(|v| size[v])
            .collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        (s.first().copied().unwrap_or(0), s.get(1).copied().unwrap_or(0))
    };
    let inside_largest = top_two(true);
    let outside_largest = top_two(false);
    let bound = min_side * g.n() as f64;
    Ok(SeparatorSplit {
        flagged: (inside_largest.0 as f64) < bound || (outside_largest.0 as f64) < bound,
        report,
        inside_largest,
        outside_largest,
        remaining,
    })
}
