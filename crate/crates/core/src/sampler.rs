//! One-round GIRG sampling.
//!
//! Vertex `v` (0-based) gets the deterministic weight
//! `w_v = (n / (v + 1))^(1 / (beta - 1))` and a uniform torus position; each
//! pair `{u, v}` is joined iff its keyed uniform `U_uv` is below
//! `c * min(w_u w_v / (n V(kappa(x_u - x_v))), 1)^alpha`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::GraphView;
use crate::bdf::{evaluate, torus_norm, volume, BdfExpr, CompiledBdf, TorusPoint};
use crate::error::{Error, Result};
use crate::rng::{cell_uniform, row_key, stream_key, Stream};

pub const DEFAULT_C: f64 = 0.5;
pub const DEFAULT_BETA: f64 = 2.5;
pub const DEFAULT_ALPHA: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GirgParams {
    pub n: usize,
    pub beta: f64,
    pub alpha: f64,
    /// Connection constant; lower and upper constants coincide.
    pub c: f64,
    pub seed: u64,
}

impl GirgParams {
    pub fn new(n: usize, beta: f64, alpha: f64, c: f64, seed: u64) -> Result<Self> {
        let p = GirgParams {
            n,
            beta,
            alpha,
            c,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    /// `n` vertices with the default exponents and constant.
    pub fn with_defaults(n: usize, seed: u64) -> Self {
        GirgParams {
            n,
            beta: DEFAULT_BETA,
            alpha: DEFAULT_ALPHA,
            c: DEFAULT_C,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("n = {} out of range", self.n)));
        }
        check_beta(self.beta)?;
        if !(self.alpha > 1.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {} must be a finite number > 1",
                self.alpha
            )));
        }
        if !(self.c > 0.0 && self.c <= 1.0) {
            return Err(Error::InvalidParameter(format!("c = {} must lie in (0, 1]", self.c)));
        }
        Ok(())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 2.0 && beta < 3.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("beta = {beta} must lie in (2, 3)")))
    }
}

/// Vertex weights, all `>= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSequence(Vec<f64>);

impl WeightSequence {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(**w >= 1.0 && w.is_finite())) {
            return Err(Error::InvalidParameter(format!("weight {w} is not a finite value >= 1")));
        }
        Ok(WeightSequence(weights))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|{v : w_v >= w}|`.
    pub fn tail_count(&self, w: f64) -> usize {
        self.0.iter().filter(|&&x| x >= w).count()
    }

    pub fn mean(&self) -> f64 {
        self.0.iter().sum::<f64>() / self.0.len() as f64
    }
}

/// `w_v = (n / v)^(1 / (beta - 1))` for `v = 1..=n`.
pub fn power_law_weights(n: usize, beta: f64) -> Result<WeightSequence> {
    check_beta(beta)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let exponent = 1.0 / (beta - 1.0);
    let nf = n as f64;
    Ok(WeightSequence(
        (1..=n).map(|v| (nf / v as f64).powf(exponent).max(1.0)).collect(),
    ))
}

/// Vertex positions stored coordinate-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Positions {
    n: usize,
    coords: Vec<Vec<f64>>,
}

impl Positions {
    pub fn from_points(dim: usize, points: &[TorusPoint]) -> Result<Self> {
        let mut coords = vec![Vec::with_capacity(points.len()); dim];
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            for (i, c) in p.coords().iter().enumerate() {
                coords[i].push(*c);
            }
        }
        Ok(Positions {
            n: points.len(),
            coords,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinate `i` (0-based) of every vertex.
    pub fn axis(&self, i: usize) -> &[f64] {
        &self.coords[i]
    }

    pub fn get(&self, v: usize, i: usize) -> f64 {
        self.coords[i][v]
    }

    pub fn point(&self, v: usize) -> TorusPoint {
        TorusPoint::wrapping(self.coords.iter().map(|c| c[v]))
    }

    /// Torus difference `x_u - x_v`.
    pub fn difference(&self, u: usize, v: usize) -> TorusPoint {
        TorusPoint::wrapping(self.coords.iter().map(|c| c[u] - c[v]))
    }

    /// `x_u - x_v` without reduction mod 1; its torus norms are bit-identical
    /// to the ones the samplers use.
    pub fn raw_difference(&self, u: usize, v: usize) -> Vec<f64> {
        self.coords.iter().map(|c| c[u] - c[v]).collect()
    }

    pub(crate) fn from_axes(coords: Vec<Vec<f64>>) -> Self {
        let n = coords.first().map_or(0, Vec::len);
        Positions { n, coords }
    }
}

/// Coordinate `i` of vertex `v` for `seed`; independent of evaluation order.
#[inline]
pub fn position_coordinate(seed: u64, v: usize, i: usize) -> f64 {
    cell_uniform(row_key(stream_key(seed, Stream::Position), v as u64), i as u64)
}

/// `n * d` independent uniform coordinates keyed by `(seed, v, i)`.
pub fn sample_positions(n: usize, d: usize, seed: u64) -> Positions {
    let key = stream_key(seed, Stream::Position);
    let coords = (0..d)
        .map(|i| (0..n).map(|v| cell_uniform(row_key(key, v as u64), i as u64)).collect())
        .collect();
    Positions { n, coords }
}

/// `c * min(w_u w_v / (n V), 1)^alpha` with `V = volume(kappa(delta))`;
/// zero volume counts as an infinite ratio.
pub fn edge_probability(
    params: &GirgParams,
    bdf: &BdfExpr,
    w_u: f64,
    w_v: f64,
    delta: &[f64],
) -> Result<f64> {
    let dist = evaluate(bdf, delta)?;
    let vol = volume(bdf, dist)?;
    Ok(probability_from_ratio(params.c, params.alpha, weight_ratio(params.n, w_u, w_v, vol)))
}

#[inline]
pub(crate) fn weight_ratio(n: usize, w_u: f64, w_v: f64, vol: f64) -> f64 {
    if vol <= 0.0 {
        f64::INFINITY
    } else {
        w_u * w_v / (n as f64 * vol)
    }
}

#[inline]
pub(crate) fn probability_from_ratio(c: f64, alpha: f64, ratio: f64) -> f64 {
    if ratio >= 1.0 {
        c
    } else {
        c * ratio.powf(alpha)
    }
}

/// `uniform < probability_from_ratio(c, alpha, ratio)` without the power in
/// the common case: for `ratio < 1`, `ratio^alpha <= ratio`.
#[inline]
pub(crate) fn accepts(uniform: f64, c: f64, alpha: f64, ratio: f64) -> bool {
    if uniform >= c {
        return false;
    }
    if ratio >= 1.0 {
        return true;
    }
    if uniform >= c * ratio {
        return false;
    }
    uniform < c * ratio.powf(alpha)
}

/// A sampled graph with everything needed to reproduce or analyse it.
#[derive(Debug, Clone)]
pub struct GirgInstance {
    pub params: GirgParams,
    pub bdf: BdfExpr,
    pub weights: WeightSequence,
    pub positions: Positions,
    /// Sorted, `u < v`, no duplicates.
    pub edges: Vec<(u32, u32)>,
}

impl GirgInstance {
    /// Assembles an instance from stored parts, checking the invariants.
    pub fn from_parts(
        params: GirgParams,
        bdf: BdfExpr,
        weights: WeightSequence,
        positions: Positions,
        mut edges: Vec<(u32, u32)>,
    ) -> Result<Self> {
        params.validate()?;
        let d = bdf.validate()?;
        if positions.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: positions.dim(),
            });
        }
        let n = params.n;
        if weights.len() != n || positions.len() != n {
            return Err(Error::Format(format!(
                "expected {n} weights and positions, got {} and {}",
                weights.len(),
                positions.len()
            )));
        }
        for e in edges.iter_mut() {
            if e.0 == e.1 {
                return Err(Error::Format(format!("self-loop at vertex {}", e.0)));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if e.1 as usize >= n {
                return Err(Error::Format(format!("edge endpoint {} >= n = {n}", e.1)));
            }
        }
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        if edges.len() != before {
            return Err(Error::Format("duplicate edges".into()));
        }
        Ok(GirgInstance {
            params,
            bdf,
            weights,
            positions,
            edges,
        })
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn dim(&self) -> usize {
        self.positions.dim()
    }
}

impl GraphView for GirgInstance {
    fn vertex_count(&self) -> usize {
        self.params.n
    }

    fn edge_list(&self) -> &[(u32, u32)] {
        &self.edges
    }
}

/// Per-coordinate torus distances between `u` and every later vertex are
/// computed on the fly; `visit(v, norms)` sees them for `v in u+1..n`.
#[inline]
pub(crate) fn for_each_later<F: FnMut(usize, &[f64])>(positions: &Positions, u: usize, mut visit: F) {
    let d = positions.dim();
    let mut norms = [0.0f64; crate::bdf::MAX_COMPILED_DIM];
    let base: Vec<f64> = (0..d).map(|i| positions.get(u, i)).collect();
    for v in u + 1..positions.len() {
        for i in 0..d {
            let diff = (base[i] - positions.coords[i][v]).abs();
            norms[i] = diff.min(1.0 - diff);
        }
        visit(v, &norms[..d]);
    }
}

/// Draws a GIRG in `O(n^2)` pair checks, parallel over rows with a
/// deterministic result.
pub fn sample_girg(params: &GirgParams, bdf: &BdfExpr) -> Result<GirgInstance> {
    params.validate()?;
    let compiled = CompiledBdf::new(bdf)?;
    let weights = power_law_weights(params.n, params.beta)?;
    let positions = sample_positions(params.n, compiled.dim(), params.seed);
    let edges = sample_edges(params, &compiled, &weights, &positions);
    Ok(GirgInstance {
        params: *params,
        bdf: bdf.clone(),
        weights,
        positions,
        edges,
    })
}

pub(crate) fn sample_edges(
    params: &GirgParams,
    compiled: &CompiledBdf,
    weights: &WeightSequence,
    positions: &Positions,
) -> Vec<(u32, u32)> {
    let n = params.n;
    let key = stream_key(params.seed, Stream::EdgeUniform);
    let w = weights.as_slice();
    let (c, alpha) = (params.c, params.alpha);
    let rows: Vec<Vec<(u32, u32)>> = (0..n)
        .into_par_iter()
        .with_min_len(64)
        .map(|u| {
            let rk = row_key(key, u as u64);
            let d = positions.dim();
            let base: Vec<f64> = (0..d).map(|i| positions.get(u, i)).collect();
            let mut norms = [0.0f64; crate::bdf::MAX_COMPILED_DIM];
            let mut scratch = [0.0f64; crate::bdf::MAX_COMPILED_DIM];
            let mut out = Vec::new();
            for v in u + 1..n {
                // the uniform alone rejects a (1 - c) fraction of all pairs
                let uniform = cell_uniform(rk, v as u64);
                if uniform >= c {
                    continue;
                }
                for i in 0..d {
                    let diff = (base[i] - positions.coords[i][v]).abs();
                    norms[i] = diff.min(1.0 - diff);
                }
                let vol = compiled.ball_volume_at(&norms[..d], &mut scratch);
                let ratio = weight_ratio(n, w[u], w[v], vol);
                if accepts(uniform, c, alpha, ratio) {
                    out.push((u as u32, v as u32));
                }
            }
            out
        })
        .collect();
    rows.concat()
}

/// The keyed uniform deciding pair `{u, v}` in [`sample_girg`].
pub fn edge_uniform(seed: u64, u: usize, v: usize) -> f64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    cell_uniform(row_key(stream_key(seed, Stream::EdgeUniform), a as u64), b as u64)
}

/// Expected number of edges, integrating positions out exactly.
///
/// `V(kappa(x_u - x_v))` is uniform on `[0, 1]` for every BDF (the volume
/// function is the distribution function of the distance), so with
/// `a = w_u w_v / n < 1` the pair probability averages to
/// `c (a + (a - a^alpha) / (alpha - 1))`, and to `c` once `a >= 1`.
pub fn expected_edge_count(params: &GirgParams, weights: &WeightSequence) -> f64 {
    let w = weights.as_slice();
    let n = params.n as f64;
    let mut total = 0.0;
    for u in 0..w.len() {
        for v in u + 1..w.len() {
            total += expected_pair_probability(params.c, params.alpha, w[u] * w[v] / n);
        }
    }
    total
}

/// Mean of `c * min(a / V, 1)^alpha` over `V ~ Uniform[0, 1]`.
pub fn expected_pair_probability(c: f64, alpha: f64, a: f64) -> f64 {
    if a >= 1.0 {
        c
    } else {
        c * (a + (a - a.powf(alpha)) / (alpha - 1.0))
    }
}

/// Torus norm of every coordinate of `delta`.
pub fn coordinate_norms(delta: &[f64]) -> Vec<f64> {
    delta.iter().map(|t| torus_norm(*t)).collect()
}
