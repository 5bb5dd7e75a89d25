//! Structural analyses of sampled graphs.

pub mod clustering;
pub mod components;
pub mod cuts;
pub mod degree;
pub mod triangle;

pub use clustering::{clustering_coefficient, local_clustering, triangles_per_vertex};
pub use components::{connected_components, ComponentDecomposition, DisjointSets};
pub use cuts::{
    hyperplane_cut, hyperplane_separator, probe_cuts, separator_split, sparse_cut_probe, CutReport,
    ProbeFamily, SeparatorSplit,
};
pub use degree::{degree_tail_table, degrees, tail_counts, DegreeTail};
pub use triangle::{stochastic_triangle_check, TriangleRow};

use crate::bdf::is_scom;
use crate::error::Result;
use crate::sampler::GirgInstance;

/// Anything with a vertex count and a simple undirected edge list.
pub trait GraphView {
    fn vertex_count(&self) -> usize;
    /// Each undirected edge once; no self-loops.
    fn edge_list(&self) -> &[(u32, u32)];
}

/// A bare graph, used for test corpora and phase snapshots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Self {
        SimpleGraph { n, edges }
    }
}

impl GraphView for SimpleGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn edge_list(&self) -> &[(u32, u32)] {
        &self.edges
    }
}

/// Compressed adjacency lists, neighbours sorted ascending.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn new<G: GraphView + ?Sized>(g: &G) -> Self {
        let n = g.vertex_count();
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in g.edge_list() {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n]];
        for &(u, v) in g.edge_list() {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Adjacency { offsets, targets }
    }

    /// Lists holding each `(u, v)` under `u` only.
    pub fn directed(n: usize, arcs: &[(u32, u32)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in arcs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; arcs.len()];
        for &(u, v) in arcs {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Adjacency { offsets, targets }
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Options of [`analyze`].
#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    /// Minimum side fraction for probed cuts and separator sides.
    pub delta: f64,
    pub probe: ProbeFamily,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            delta: 0.1,
            probe: ProbeFamily::default(),
        }
    }
}

/// Named metrics of one instance, in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub metrics: Vec<(String, f64)>,
}

impl AnalysisReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

/// Components, degree tail, clustering, the coordinate separator (SCOM
/// witness coordinate, else `x1`) and the probe minimum.
pub fn analyze(g: &GirgInstance, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let n = g.n() as f64;
    let comps = connected_components(g);
    let tail = degree_tail_table(g);
    let k = is_scom(&g.bdf).1.unwrap_or(1);
    let split = separator_split(g, k, opts.delta)?;
    let probe = sparse_cut_probe(g, &opts.probe, opts.delta);
    let mut m = vec![
        ("n".to_string(), n),
        ("edges".to_string(), g.edges.len() as f64),
        ("mean_degree".to_string(), 2.0 * g.edges.len() as f64 / n),
        ("giant_size".to_string(), comps.largest() as f64),
        ("giant_fraction".to_string(), comps.largest() as f64 / n),
        ("second_component".to_string(), comps.second_largest() as f64),
        ("components".to_string(), comps.sizes.len() as f64),
        ("tail_slope".to_string(), tail.slope.unwrap_or(f64::NAN)),
        ("clustering".to_string(), clustering_coefficient(g)),
        ("separator_coordinate".to_string(), k as f64),
        ("separator_cross_edges".to_string(), split.report.cross_edges as f64),
        ("separator_side_min_largest".to_string(), split.min_side_largest() as f64),
        ("separator_flagged".to_string(), if split.flagged { 1.0 } else { 0.0 }),
    ];
    match probe {
        Some(p) => {
            m.push(("probe_min_cross_edges".to_string(), p.cross_edges as f64));
            m.push(("probe_min_normalized".to_string(), p.cross_edges as f64 / n));
        }
        None => {
            m.push(("probe_min_cross_edges".to_string(), f64::NAN));
            m.push(("probe_min_normalized".to_string(), f64::NAN));
        }
    }
    Ok(AnalysisReport { metrics: m })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let g = SimpleGraph::new(4, vec![(0, 2), (0, 1), (2, 3)]);
        let a = Adjacency::new(&g);
        assert_eq!(a.neighbors(0), &[1, 2]);
        assert_eq!(a.neighbors(2), &[0, 3]);
        assert_eq!(a.degree(3), 1);
        assert_eq!(a.len(), 4);
    }
}
