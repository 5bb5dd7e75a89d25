//! Boolean distance functions.
//!
//! A BDF on the d-torus is either the torus distance of a single coordinate
//! or the `max`/`min` of two BDFs acting on disjoint, complementary sets of
//! coordinates. The tree is stored literally; every coordinate `1..=d`
//! appears in exactly one leaf.

mod ball;
mod bounds;
mod compiled;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub use ball::{sample_ball, sample_ball_complement};
pub use bounds::{
    bound_subset, leading_term, min_of_maxes_bound, outer_min_upper_bound, volume_ratio_constant,
    BoundWitness, WitnessKind, RATIO_GRID_LEN, RATIO_SAFETY,
};
pub use compiled::{CompiledBdf, MAX_COMPILED_DIM};

/// Expression tree of a Boolean distance function. Leaves carry 1-based
/// coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BdfExpr {
    Leaf(usize),
    Max(Box<BdfExpr>, Box<BdfExpr>),
    Min(Box<BdfExpr>, Box<BdfExpr>),
}

impl BdfExpr {
    pub fn leaf(coord: usize) -> Self {
        BdfExpr::Leaf(coord)
    }

    pub fn max(left: BdfExpr, right: BdfExpr) -> Self {
        BdfExpr::Max(Box::new(left), Box::new(right))
    }

    pub fn min(left: BdfExpr, right: BdfExpr) -> Self {
        BdfExpr::Min(Box::new(left), Box::new(right))
    }

    /// Left-nested `max` over the given coordinates (the max-norm on them).
    pub fn max_norm(coords: &[usize]) -> Option<Self> {
        let (first, rest) = coords.split_first()?;
        Some(
            rest.iter()
                .fold(BdfExpr::Leaf(*first), |acc, &c| BdfExpr::max(acc, BdfExpr::Leaf(c))),
        )
    }

    /// Left-nested `min` over the given coordinates (the minimum component
    /// distance on them).
    pub fn min_component(coords: &[usize]) -> Option<Self> {
        let (first, rest) = coords.split_first()?;
        Some(
            rest.iter()
                .fold(BdfExpr::Leaf(*first), |acc, &c| BdfExpr::min(acc, BdfExpr::Leaf(c))),
        )
    }

    pub fn children(&self) -> Option<(&BdfExpr, &BdfExpr)> {
        match self {
            BdfExpr::Leaf(_) => None,
            BdfExpr::Max(a, b) | BdfExpr::Min(a, b) => Some((a, b)),
        }
    }

    pub fn is_outer_max(&self) -> bool {
        matches!(self, BdfExpr::Max(..))
    }

    pub fn is_outer_min(&self) -> bool {
        matches!(self, BdfExpr::Min(..))
    }

    /// Number of leaves, i.e. the dimension of a valid tree.
    pub fn leaf_count(&self) -> usize {
        match self {
            BdfExpr::Leaf(_) => 1,
            BdfExpr::Max(a, b) | BdfExpr::Min(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    /// Leaf coordinates in left-to-right order.
    pub fn coordinates(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.collect_coords(&mut out);
        out
    }

    fn collect_coords(&self, out: &mut Vec<usize>) {
        match self {
            BdfExpr::Leaf(k) => out.push(*k),
            BdfExpr::Max(a, b) | BdfExpr::Min(a, b) => {
                a.collect_coords(out);
                b.collect_coords(out);
            }
        }
    }

    /// Checks that the leaves cover `1..=d` exactly once and returns `d`.
    pub fn validate(&self) -> Result<usize> {
        let coords = self.coordinates();
        let d = coords.len();
        let mut seen = vec![false; d + 1];
        for &k in &coords {
            if k == 0 || k > d {
                return Err(Error::InvalidCoordinates(format!(
                    "coordinate x{k} outside 1..={d}"
                )));
            }
            if seen[k] {
                return Err(Error::InvalidCoordinates(format!("coordinate x{k} repeated")));
            }
            seen[k] = true;
        }
        Ok(d)
    }

    /// Applies `map` to every leaf index.
    pub fn relabel(&self, map: &impl Fn(usize) -> usize) -> BdfExpr {
        match self {
            BdfExpr::Leaf(k) => BdfExpr::Leaf(map(*k)),
            BdfExpr::Max(a, b) => BdfExpr::max(a.relabel(map), b.relabel(map)),
            BdfExpr::Min(a, b) => BdfExpr::min(a.relabel(map), b.relabel(map)),
        }
    }
}

impl fmt::Display for BdfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BdfExpr::Leaf(k) => write!(f, "x{k}"),
            BdfExpr::Max(a, b) => write!(f, "max({a},{b})"),
            BdfExpr::Min(a, b) => write!(f, "min({a},{b})"),
        }
    }
}

/// A point of the d-torus with every coordinate in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint(Vec<f64>);

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|c| !(0.0..1.0).contains(*c)) {
            return Err(Error::InvalidParameter(format!(
                "torus coordinate {bad} not in [0, 1)"
            )));
        }
        Ok(TorusPoint(coords))
    }

    /// Reduces arbitrary reals modulo 1.
    pub fn wrapping(coords: impl IntoIterator<Item = f64>) -> Self {
        TorusPoint(coords.into_iter().map(wrap_unit).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Componentwise difference `self - other` on the torus.
    pub fn difference(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint(self.0.iter().zip(&other.0).map(|(a, b)| wrap_unit(a - b)).collect())
    }

    /// Componentwise negation on the torus.
    pub fn negated(&self) -> TorusPoint {
        TorusPoint(self.0.iter().map(|a| wrap_unit(-a)).collect())
    }
}

impl std::ops::Deref for TorusPoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Reduces `t` into `[0, 1)`.
#[inline]
pub fn wrap_unit(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    // rem_euclid of a tiny negative number rounds up to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Torus norm `|t|_T = min(|t mod 1|, 1 - |t mod 1|)` of a single coordinate.
#[inline]
pub fn torus_norm(t: f64) -> f64 {
    // `%` is exact, so for |t| < 1 this is bit-identical to torus_distance_1d
    let r = t.abs() % 1.0;
    r.min(1.0 - r)
}

/// Distance of two points of the circle `[0, 1)`.
#[inline]
pub fn torus_distance_1d(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// Depth of a BDF; governs the ball volume exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Depth(usize);

impl Depth {
    pub fn value(self) -> usize {
        self.0
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Evaluates `expr` at the torus difference `delta`. Each coordinate of
/// `delta` is reduced with the torus norm, so any real vector is accepted.
pub fn evaluate(expr: &BdfExpr, delta: &[f64]) -> Result<f64> {
    let d = expr.leaf_count();
    if delta.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: delta.len(),
        });
    }
    eval_checked(expr, delta)
}

fn eval_checked(expr: &BdfExpr, delta: &[f64]) -> Result<f64> {
    match expr {
        BdfExpr::Leaf(k) => match k.checked_sub(1).and_then(|i| delta.get(i)) {
            Some(t) => Ok(torus_norm(*t)),
            None => Err(Error::InvalidCoordinates(format!("coordinate x{k} out of range"))),
        },
        BdfExpr::Max(a, b) => Ok(eval_checked(a, delta)?.max(eval_checked(b, delta)?)),
        BdfExpr::Min(a, b) => Ok(eval_checked(a, delta)?.min(eval_checked(b, delta)?)),
    }
}

/// Leaf 1, outer-max adds the child depths, outer-min takes their minimum.
pub fn depth(expr: &BdfExpr) -> Depth {
    fn go(e: &BdfExpr) -> usize {
        match e {
            BdfExpr::Leaf(_) => 1,
            BdfExpr::Max(a, b) => go(a) + go(b),
            BdfExpr::Min(a, b) => go(a).min(go(b)),
        }
    }
    Depth(go(expr))
}

/// Single-coordinate outer-max test.
///
/// Returns the coordinate `k` such that `expr = max(|x_k|, rest)`. A leaf is
/// SCOM by convention. Because `max` is associative, a leaf anywhere in the
/// chain of `max` nodes hanging off the root qualifies; when several do, the
/// smallest index is returned.
pub fn is_scom(expr: &BdfExpr) -> (bool, Option<usize>) {
    fn witness(e: &BdfExpr) -> Option<usize> {
        match e {
            BdfExpr::Leaf(k) => Some(*k),
            BdfExpr::Max(a, b) => match (witness(a), witness(b)) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            },
            BdfExpr::Min(..) => None,
        }
    }
    let k = witness(expr);
    (k.is_some(), k)
}

/// Exact Lebesgue measure of the ball `{x : kappa(x) < r}`.
///
/// Leaf `min(2r, 1)`; outer-max multiplies the child volumes; outer-min is
/// `1 - (1 - V1)(1 - V2)`, evaluated as `V1 + V2 - V1 V2` so tiny radii do
/// not cancel.
pub fn volume(expr: &BdfExpr, r: f64) -> Result<f64> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::NegativeRadius(r));
    }
    Ok(volume_unchecked(expr, r))
}

pub(crate) fn volume_unchecked(expr: &BdfExpr, r: f64) -> f64 {
    match expr {
        BdfExpr::Leaf(_) => (2.0 * r).min(1.0),
        BdfExpr::Max(a, b) => volume_unchecked(a, r) * volume_unchecked(b, r),
        BdfExpr::Min(a, b) => {
            let (va, vb) = (volume_unchecked(a, r), volume_unchecked(b, r));
            va + vb - va * vb
        }
    }
}

/// Volume of the max-norm ball on `k` coordinates.
#[inline]
pub(crate) fn box_volume(k: usize, r: f64) -> f64 {
    (2.0 * r).min(1.0).powi(k as i32)
}

/// `max_{i in coords} |delta_i|_T` for 1-based `coords`.
pub fn max_norm_over(delta: &[f64], coords: &BTreeSet<usize>) -> f64 {
    coords
        .iter()
        .map(|&k| torus_norm(delta[k - 1]))
        .fold(0.0, f64::max)
}

/// Monte Carlo hit counts of `{kappa(x) < r}` for every radius, from one
/// shared sample of `samples` uniform points.
pub fn monte_carlo_volume<R: rand::Rng + ?Sized>(
    expr: &BdfExpr,
    radii: &[f64],
    samples: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let compiled = CompiledBdf::new(expr)?;
    let d = compiled.dim();
    let mut sorted: Vec<(f64, usize)> = radii.iter().copied().zip(0..).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut hits = vec![0usize; radii.len()];
    let mut norms = vec![0.0; d];
    for _ in 0..samples {
        for v in norms.iter_mut() {
            *v = torus_norm(rng.gen::<f64>());
        }
        let dist = compiled.distance(&norms);
        // first sorted radius strictly above the distance; all larger ones hit too
        let first = sorted.partition_point(|&(r, _)| r <= dist);
        if first < sorted.len() {
            hits[sorted[first].1] += 1;
        }
    }
    // turn per-bucket counts into cumulative counts in sorted order
    let mut acc = 0;
    for &(_, i) in &sorted {
        acc += hits[i];
        hits[i] = acc;
    }
    Ok(hits)
}
