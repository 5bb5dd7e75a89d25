//! Two-round exposure.
//!
//! Each pair carries two independent split variables `Y1`, `Y2` with
//! `Pr[Y < t] = 1 - sqrt(1 - t)`, so `min(Y1, Y2)` is uniform and the rule
//! `min(Y1, Y2) < p_uv` (EIC) reproduces the one-round sampler. Cheaper
//! sufficient conditions look at one coordinate block only: LB1 uses `Y1`
//! and the max-norm over `S1`, LB2 uses `Y2` and the max-norm over `S2`.
//!
//! [`run_phases`] exposes the randomness in stages: the LB1 graph `G1` and
//! its giant `K1`, a thinned vertex set `F` of light giant vertices, then
//! all vertices one at a time (outside `K1`, then `K1 \ F`, then `F`), each
//! step adding the EIC edges to earlier vertices. `G2`, `G3`, `G4` are the
//! graphs after those three groups of steps.

mod cells;

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cells::{top_cells_load, CellPartition};

use crate::analysis::components::DisjointSets;
use crate::bdf::{depth, is_scom, max_norm_over, min_of_maxes_bound, volume_ratio_constant};
use crate::bdf::{BdfExpr, CompiledBdf};
use crate::error::{Error, Result};
use crate::rng::{cell_uniform, keyed_uniform, row_key, stream_key, Stream};
use crate::sampler::{
    accepts, for_each_later, power_law_weights, probability_from_ratio, sample_positions, weight_ratio,
    GirgParams, Positions, WeightSequence,
};

pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_L: f64 = 1.0;
/// Fraction of the admissible upper bound `(s/12) min(delta, s)` used for `f`.
pub const F_FACTOR: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitVariable {
    pub y1: f64,
    pub y2: f64,
}

impl SplitVariable {
    /// Inverse-CDF transform `y = 1 - (1 - U)^2` of two uniforms.
    pub fn from_uniforms(u1: f64, u2: f64) -> Self {
        SplitVariable {
            y1: split_transform(u1),
            y2: split_transform(u2),
        }
    }

    pub fn min(&self) -> f64 {
        self.y1.min(self.y2)
    }
}

#[inline]
fn split_transform(u: f64) -> f64 {
    let t = 1.0 - u;
    1.0 - t * t
}

pub fn sample_split_variable<R: Rng + ?Sized>(rng: &mut R) -> SplitVariable {
    SplitVariable::from_uniforms(rng.gen(), rng.gen())
}

/// The split variables of pair `{u, v}` under `seed`.
pub fn pair_split(seed: u64, u: usize, v: usize) -> SplitVariable {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    SplitVariable::from_uniforms(
        keyed_uniform(seed, Stream::SplitFirst, a as u64, b as u64),
        keyed_uniform(seed, Stream::SplitSecond, a as u64, b as u64),
    )
}

/// `min(y1, y2) < p`.
pub fn eic_check(split: &SplitVariable, p: f64) -> bool {
    split.min() < p
}

/// Coordinate blocks and constant of the sufficient conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitBound {
    /// Original (1-based) coordinates; `|s2| <= |s1|`.
    pub s1: BTreeSet<usize>,
    pub s2: BTreeSet<usize>,
    pub m: usize,
    /// Depth `D` of the target BDF, `= min(|s1|, |s2|)`.
    pub depth: usize,
    pub c_prime: f64,
    /// `K >= sup_r V_kappa(r) / V_bound(r)`.
    pub ratio_constant: f64,
    /// `permutation[j]` is the original coordinate moved to position `j + 1`;
    /// `s2` fills the last `m` positions.
    pub permutation: Vec<usize>,
}

impl SplitBound {
    /// The BDF with coordinates renamed so that `s2` comes last.
    pub fn relabel(&self, expr: &BdfExpr) -> BdfExpr {
        let mut inverse = vec![0; self.permutation.len() + 1];
        for (j, &orig) in self.permutation.iter().enumerate() {
            inverse[orig] = j + 1;
        }
        expr.relabel(&|k| inverse[k])
    }

    /// Positions in relabeled coordinate order.
    pub fn relabel_positions(&self, positions: &Positions) -> Positions {
        Positions::from_axes(
            self.permutation
                .iter()
                .map(|&orig| positions.axis(orig - 1).to_vec())
                .collect(),
        )
    }
}

/// Splits a non-SCOM BDF into the two blocks of its min-of-maxes bound.
///
/// With `kappa <= kappa' = min(max_S1, max_S2)`, `V_kappa <= K V_kappa'` and
/// `V_kappa'(r) <= 2^(D+1) r^D`, the constant `c' = c (K 2^(D+1))^-alpha`
/// makes `c' min(1, (w_u w_v / (n x^D))^alpha)` at `x = max_Si |delta|` a
/// lower bound of the one-round edge probability.
pub fn derive_split_bound(expr: &BdfExpr, params: &GirgParams) -> Result<SplitBound> {
    let d = expr.validate()?;
    let witness = min_of_maxes_bound(expr)?;
    let (s1, s2) = if witness.s2.len() <= witness.s1.len() {
        (witness.s1.clone(), witness.s2.clone())
    } else {
        (witness.s2.clone(), witness.s1.clone())
    };
    let dep = depth(expr).value();
    debug_assert_eq!(dep, s1.len().min(s2.len()));
    let ratio_constant = volume_ratio_constant(expr, &witness);
    if !ratio_constant.is_finite() {
        return Err(Error::Invariant(format!(
            "no finite volume ratio between {expr} and its min-of-maxes bound"
        )));
    }
    let scale = ratio_constant.max(1.0) * 2f64.powi(dep as i32 + 1);
    let c_prime = params.c * scale.powf(-params.alpha);
    let permutation: Vec<usize> = (1..=d)
        .filter(|k| !s2.contains(k))
        .chain(s2.iter().copied())
        .collect();
    Ok(SplitBound {
        m: s2.len(),
        s1,
        s2,
        depth: dep,
        c_prime,
        ratio_constant,
        permutation,
    })
}

/// `c min(1, (w_u w_v / (n x^D))^alpha)`; `x = 0` gives `c`.
#[inline]
pub fn lb_probability(c: f64, alpha: f64, n: usize, w_u: f64, w_v: f64, x: f64, d: usize) -> f64 {
    probability_from_ratio(c, alpha, lb_ratio(n, w_u, w_v, x, d))
}

#[inline]
fn lb_ratio(n: usize, w_u: f64, w_v: f64, x: f64, d: usize) -> f64 {
    let denom = n as f64 * x.powi(d as i32);
    if denom <= 0.0 {
        f64::INFINITY
    } else {
        w_u * w_v / denom
    }
}

/// `(LB1, LB2)` for a pair with torus difference `delta` (original
/// coordinate order).
pub fn lb_checks(
    split: &SplitVariable,
    bound: &SplitBound,
    alpha: f64,
    w_u: f64,
    w_v: f64,
    delta: &[f64],
    n: usize,
) -> (bool, bool) {
    let p = |s: &BTreeSet<usize>| {
        lb_probability(bound.c_prime, alpha, n, w_u, w_v, max_norm_over(delta, s), bound.depth)
    };
    (split.y1 < p(&bound.s1), split.y2 < p(&bound.s2))
}

/// Derived constants of phases 2 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseConstants {
    pub delta: f64,
    pub l: f64,
    /// `|K1| / n`.
    pub s_max: f64,
    /// `f = 0.9 (s/12) min(delta, s)`.
    pub f_rate: f64,
    /// Half of `K1` has weight below `b_prime`.
    pub b_prime: f64,
    /// `4 f / s`.
    pub inclusion_probability: f64,
    pub c_prime: f64,
}

/// Empirical version of the per-step connection probability into a
/// planted set `A` of `ceil(delta n / 2)` vertices of `K1 \ F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepProbe {
    pub planted: usize,
    /// Steps of vertices in `F`.
    pub steps: usize,
    /// Of those, steps adding at least one edge into `A`.
    pub hits: usize,
}

impl StepProbe {
    pub fn frequency(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.hits as f64 / self.steps as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseRow {
    /// `i` of `G_i`.
    pub phase: usize,
    pub edges: usize,
    pub giant_size: usize,
}

#[derive(Debug, Clone)]
pub struct TwoRoundTrace {
    pub params: GirgParams,
    pub bdf: BdfExpr,
    pub bound: SplitBound,
    pub constants: PhaseConstants,
    pub cells: CellPartition,
    pub weights: WeightSequence,
    pub positions: Positions,
    /// All edges of `G4`, sorted, `u < v`.
    pub edges: Vec<(u32, u32)>,
    /// `edge_stage[e] = i` when edge `e` first appears in `G_i`.
    pub edge_stage: Vec<u8>,
    /// `giant_stage[v] = i` when `v` first belongs to `K_i`, 0 if never.
    pub giant_stage: Vec<u8>,
    pub giant_sizes: [usize; 4],
    pub f_prime: Vec<u32>,
    pub f: Vec<u32>,
    /// Step order of phases 4 to 6.
    pub ordering: Vec<u32>,
    /// Pairs accepted by LB1 or LB2 but rejected by EIC; must be zero.
    pub lb_violations: u64,
    pub lb1_pairs: u64,
    pub lb2_pairs: u64,
    pub step_probe: StepProbe,
}

impl TwoRoundTrace {
    /// Edges of `G_i`, `i in 1..=4`.
    pub fn graph(&self, i: usize) -> Vec<(u32, u32)> {
        self.edges
            .iter()
            .zip(&self.edge_stage)
            .filter(|(_, &s)| (s as usize) <= i)
            .map(|(e, _)| *e)
            .collect()
    }

    pub fn edge_count(&self, i: usize) -> usize {
        self.edge_stage.iter().filter(|&&s| (s as usize) <= i).count()
    }

    /// Vertices of `K_i`, ascending.
    pub fn giant(&self, i: usize) -> Vec<u32> {
        (0..self.giant_stage.len() as u32)
            .filter(|&v| {
                let s = self.giant_stage[v as usize];
                s != 0 && (s as usize) <= i
            })
            .collect()
    }

    pub fn phase_rows(&self) -> Vec<PhaseRow> {
        (1..=4)
            .map(|i| PhaseRow {
                phase: i,
                edges: self.edge_count(i),
                giant_size: self.giant_sizes[i - 1],
            })
            .collect()
    }

    /// `|K4| <= |K3| + 3 delta n`.
    pub fn growth_within_bound(&self) -> bool {
        let slack = 3.0 * self.constants.delta * self.params.n as f64;
        self.giant_sizes[3] as f64 <= self.giant_sizes[2] as f64 + slack
    }
}

/// Per-pair outcome of the single pass over all pairs.
#[derive(Default)]
struct PairTally {
    g1: Vec<(u32, u32)>,
    later: Vec<(u32, u32)>,
    violations: u64,
    lb1: u64,
    lb2: u64,
}

/// Runs phases 1 to 6 on the instance determined by `params`.
///
/// Positions use the same keyed stream as the one-round sampler; the pair
/// randomness comes from the split streams.
pub fn run_phases(params: &GirgParams, expr: &BdfExpr, delta: f64, l: f64) -> Result<TwoRoundTrace> {
    params.validate()?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must lie in (0, 1)")));
    }
    if let (true, Some(k)) = is_scom(expr) {
        return Err(Error::Precondition(format!(
            "{expr} is SCOM (coordinate x{k} can be singled out); it has sublinear separators and no two-round split"
        )));
    }
    let bound = derive_split_bound(expr, params)?;
    let cells = CellPartition::new(params.n, l, bound.m)?;
    let compiled = CompiledBdf::new(expr)?;
    let n = params.n;
    let weights = power_law_weights(n, params.beta)?;
    let positions = sample_positions(n, compiled.dim(), params.seed);

    let tally = expose_pairs(params, &compiled, &bound, &weights, &positions);

    // phases 1-3: K1, B', F', F
    let mut dsu = DisjointSets::new(n);
    for &(u, v) in &tally.g1 {
        dsu.union(u as usize, v as usize);
    }
    let k1_root = (0..n)
        .max_by(|&a, &b| dsu.size(a).cmp(&dsu.size(b)).then(b.cmp(&a)))
        .map(|v| dsu.find(v))
        .ok_or(Error::EmptyGiant)?;
    let k1: Vec<usize> = (0..n).filter(|&v| dsu.find(v) == k1_root).collect();
    if k1.len() < 2 {
        return Err(Error::EmptyGiant);
    }
    let w = weights.as_slice();
    let s_max = k1.len() as f64 / n as f64;
    let b_prime = median_threshold(&k1.iter().map(|&v| w[v]).collect::<Vec<_>>(), w);
    let f_rate = F_FACTOR * (s_max / 12.0) * delta.min(s_max);
    let inclusion_probability = (4.0 * f_rate / s_max).min(1.0);
    let f_prime: Vec<u32> = (0..n)
        .filter(|&v| {
            w[v] < b_prime
                && keyed_uniform(params.seed, Stream::Subsample, v as u64, 0) < inclusion_probability
        })
        .map(|v| v as u32)
        .collect();
    let mut in_k1 = vec![false; n];
    for &v in &k1 {
        in_k1[v] = true;
    }
    let f: Vec<u32> = f_prime.iter().copied().filter(|&v| in_k1[v as usize]).collect();
    let mut in_f = vec![false; n];
    for &v in &f {
        in_f[v as usize] = true;
    }

    // phases 4-6: step order and the step of every remaining EIC edge
    let group = |v: usize| -> u8 {
        if !in_k1[v] {
            2
        } else if !in_f[v] {
            3
        } else {
            4
        }
    };
    let mut ordering: Vec<u32> = (0..n as u32).collect();
    ordering.sort_by_key(|&v| (group(v as usize), v));
    let mut step = vec![0usize; n];
    for (k, &v) in ordering.iter().enumerate() {
        step[v as usize] = k;
    }

    // planted set A: a keyed random subset of K1 \ F, all stepped before F
    let mut candidates: Vec<usize> = k1.iter().copied().filter(|&v| !in_f[v]).collect();
    candidates.sort_by(|&a, &b| {
        let ua = keyed_uniform(params.seed, Stream::Subsample, a as u64, 1);
        let ub = keyed_uniform(params.seed, Stream::Subsample, b as u64, 1);
        ua.total_cmp(&ub).then(a.cmp(&b))
    });
    let planted = ((delta * n as f64 / 2.0).ceil() as usize).min(candidates.len());
    let mut in_a = vec![false; n];
    for &v in &candidates[..planted] {
        in_a[v] = true;
    }
    let mut hit = vec![false; n];

    let mut staged: Vec<((u32, u32), u8)> = tally.g1.iter().map(|&e| (e, 1u8)).collect();
    for &(u, v) in &tally.later {
        let (early, late) = if step[u as usize] < step[v as usize] {
            (u as usize, v as usize)
        } else {
            (v as usize, u as usize)
        };
        let stage = group(late);
        if stage == 4 && in_a[early] {
            hit[late] = true;
        }
        staged.push(((u, v), stage));
    }
    staged.sort_unstable();

    // giants K2..K4 grow from K1 by adding each stage's edges
    let mut giant_stage = vec![0u8; n];
    for &v in &k1 {
        giant_stage[v] = 1;
    }
    let mut giant_sizes = [k1.len(), 0, 0, 0];
    for stage in 2..=4u8 {
        for &((u, v), s) in &staged {
            if s == stage {
                dsu.union(u as usize, v as usize);
            }
        }
        let root = dsu.find(k1[0]);
        let mut size = 0;
        for (v, gs) in giant_stage.iter_mut().enumerate() {
            if dsu.find(v) == root {
                size += 1;
                if *gs == 0 {
                    *gs = stage;
                }
            }
        }
        giant_sizes[stage as usize - 1] = size;
    }

    let step_probe = StepProbe {
        planted,
        steps: f.len(),
        hits: f.iter().filter(|&&v| hit[v as usize]).count(),
    };
    let (edges, edge_stage) = staged.into_iter().unzip();
    Ok(TwoRoundTrace {
        params: *params,
        bdf: expr.clone(),
        constants: PhaseConstants {
            delta,
            l,
            s_max,
            f_rate,
            b_prime,
            inclusion_probability,
            c_prime: bound.c_prime,
        },
        bound,
        cells,
        weights,
        positions,
        edges,
        edge_stage,
        giant_stage,
        giant_sizes,
        f_prime,
        f,
        ordering,
        lb_violations: tally.violations,
        lb1_pairs: tally.lb1,
        lb2_pairs: tally.lb2,
        step_probe,
    })
}

/// Smallest weight (among `all`) strictly above the `ceil(k/2)`-th smallest
/// of `giant`: then at least half of the giant lies strictly below it.
fn median_threshold(giant: &[f64], all: &[f64]) -> f64 {
    let mut sorted = giant.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[(sorted.len() + 1) / 2 - 1];
    all.iter()
        .copied()
        .filter(|&x| x > median)
        .min_by(f64::total_cmp)
        .unwrap_or_else(|| next_up(median))
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

/// One pass over all pairs: LB1 edges form `G1`, every other EIC edge is
/// kept for the stepwise phases.
fn expose_pairs(
    params: &GirgParams,
    compiled: &CompiledBdf,
    bound: &SplitBound,
    weights: &WeightSequence,
    positions: &Positions,
) -> PairTally {
    let n = params.n;
    let (c, alpha) = (params.c, params.alpha);
    let c_prime = bound.c_prime;
    let d_exp = bound.depth;
    let s1: Vec<usize> = bound.s1.iter().map(|k| k - 1).collect();
    let s2: Vec<usize> = bound.s2.iter().map(|k| k - 1).collect();
    let k1 = stream_key(params.seed, Stream::SplitFirst);
    let k2 = stream_key(params.seed, Stream::SplitSecond);
    let w = weights.as_slice();
    let block_max = |norms: &[f64], idx: &[usize]| idx.iter().fold(0.0f64, |m, &i| m.max(norms[i]));

    let rows: Vec<PairTally> = (0..n)
        .into_par_iter()
        .with_min_len(64)
        .map(|u| {
            let (r1, r2) = (row_key(k1, u as u64), row_key(k2, u as u64));
            let mut t = PairTally::default();
            for_each_later(positions, u, |v, norms| {
                let split = SplitVariable::from_uniforms(
                    cell_uniform(r1, v as u64),
                    cell_uniform(r2, v as u64),
                );
                // every threshold below is at most c
                if split.min() >= c {
                    return;
                }
                let vol = compiled.volume(compiled.distance(norms));
                // same decision as eic_check(&split, p_uv), mostly without powf
                let eic = accepts(split.min(), c, alpha, weight_ratio(n, w[u], w[v], vol));
                let lb = |y: f64, block: &[usize]| {
                    y < c_prime
                        && accepts(y, c_prime, alpha, lb_ratio(n, w[u], w[v], block_max(norms, block), d_exp))
                };
                let (lb1, lb2) = (lb(split.y1, &s1), lb(split.y2, &s2));
                t.lb1 += lb1 as u64;
                t.lb2 += lb2 as u64;
                if (lb1 || lb2) && !eic {
                    t.violations += 1;
                }
                let e = (u as u32, v as u32);
                if lb1 {
                    t.g1.push(e);
                } else if eic {
                    t.later.push(e);
                }
            });
            t
        })
        .collect();
    let mut all = PairTally::default();
    for t in rows {
        all.g1.extend(t.g1);
        all.later.extend(t.later);
        all.violations += t.violations;
        all.lb1 += t.lb1;
        all.lb2 += t.lb2;
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdf::evaluate;
    use crate::parse;
    use crate::sampler::{edge_probability, sample_girg};
    use rand::SeedableRng;

    #[test]
    fn split_transform_endpoints_and_cdf() {
        assert_eq!(split_transform(0.0), 0.0);
        assert_eq!(split_transform(1.0), 1.0);
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let trials = 1_000_000;
        let below = (0..trials).filter(|_| sample_split_variable(&mut rng).y1 < 0.75).count();
        let freq = below as f64 / trials as f64;
        // 1 - sqrt(1 - 0.75) = 0.5
        assert!((freq - 0.5).abs() < 4.0 * (0.25 / trials as f64).sqrt(), "{freq}");
    }

    #[test]
    fn eic_examples_and_frequency() {
        let s = SplitVariable { y1: 0.9, y2: 0.2 };
        assert!(eic_check(&s, 1.0));
        assert!(!eic_check(&s, 0.0));
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let trials = 1_000_000;
        let hits = (0..trials)
            .filter(|_| eic_check(&sample_split_variable(&mut rng), 0.3))
            .count();
        let freq = hits as f64 / trials as f64;
        assert!((freq - 0.3).abs() < 4.0 * (0.21 / trials as f64).sqrt(), "{freq}");
    }

    #[test]
    fn split_bound_examples() {
        let p = GirgParams::with_defaults(100, 0);
        let b = derive_split_bound(&parse("min(x1,x2)").unwrap(), &p).unwrap();
        assert_eq!(b.s1, BTreeSet::from([1]));
        assert_eq!(b.s2, BTreeSet::from([2]));
        assert_eq!((b.m, b.depth), (1, 1));
        assert_eq!(b.permutation, vec![1, 2]);

        let e = parse("max(min(x1,x2),min(x3,x4))").unwrap();
        let b = derive_split_bound(&e, &p).unwrap();
        assert_eq!(b.m, 2);
        assert_eq!(b.permutation, vec![1, 3, 2, 4]);
        let relabeled = b.relabel(&e);
        assert_eq!(relabeled, parse("max(min(x1,x3),min(x2,x4))").unwrap());
        // s2 = {2, 4} now sits at positions 3 and 4
        let moved: BTreeSet<usize> = b.s2.iter().map(|k| b.permutation.iter().position(|p| p == k).unwrap() + 1).collect();
        assert_eq!(moved, BTreeSet::from([3, 4]));

        assert!(derive_split_bound(&parse("max(x1,min(x2,x3))").unwrap(), &p).is_err());
    }

    #[test]
    fn unequal_blocks_put_the_smaller_last() {
        let p = GirgParams::with_defaults(100, 0);
        let b = derive_split_bound(&parse("min(max(x1,x2),x3)").unwrap(), &p).unwrap();
        assert!(b.s2.len() <= b.s1.len());
        assert_eq!(b.s2, BTreeSet::from([3]));
        assert_eq!(b.depth, 1);
    }

    #[test]
    fn lower_bound_probability_is_pointwise_below() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let p = GirgParams::new(1000, 2.5, 1.5, 0.8, 0).unwrap();
        for text in ["min(x1,x2)", "max(min(x1,x2),min(x3,x4))", "min(max(x1,x2),min(x3,max(x4,x5)))"] {
            let e = parse(text).unwrap();
            let b = derive_split_bound(&e, &p).unwrap();
            let d = e.leaf_count();
            for _ in 0..100_000 {
                let x: Vec<f64> = (0..d).map(|_| rng.gen::<f64>() * rng.gen::<f64>()).collect();
                let (wu, wv) = (1.0 + 30.0 * rng.gen::<f64>(), 1.0 + 30.0 * rng.gen::<f64>());
                let exact = edge_probability(&p, &e, wu, wv, &x).unwrap();
                let kp = b.s1.iter().map(|&k| crate::bdf::torus_norm(x[k - 1])).fold(0.0, f64::max)
                    .min(b.s2.iter().map(|&k| crate::bdf::torus_norm(x[k - 1])).fold(0.0, f64::max));
                assert!(kp >= evaluate(&e, &x).unwrap());
                let lower = lb_probability(b.c_prime, p.alpha, p.n, wu, wv, kp, b.depth);
                assert!(lower <= exact, "{text} at {x:?}: {lower} > {exact}");
            }
        }
    }

    #[test]
    fn lb_check_examples() {
        let p = GirgParams::new(100, 2.5, 1.5, 0.5, 0).unwrap();
        let b = derive_split_bound(&parse("min(x1,x2)").unwrap(), &p).unwrap();
        let s = SplitVariable { y1: b.c_prime * 0.99, y2: 1.0 };
        assert_eq!(lb_checks(&s, &b, 1.5, 1.0, 1.0, &[0.0, 0.3], 100), (true, false));
        let s = SplitVariable { y1: b.c_prime, y2: 1.0 };
        assert_eq!(lb_checks(&s, &b, 1.5, 1.0, 1.0, &[0.0, 0.3], 100).0, false);
        let s = SplitVariable { y1: 1.0, y2: 1.0 };
        assert_eq!(lb_checks(&s, &b, 1.5, 50.0, 50.0, &[0.0, 0.0], 100), (false, false));
    }

    #[test]
    fn lb_implies_eic_randomized() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        let p = GirgParams::new(500, 2.5, 1.5, 0.6, 0).unwrap();
        let e = parse("max(min(x1,x2),min(x3,x4))").unwrap();
        let b = derive_split_bound(&e, &p).unwrap();
        for _ in 0..1_000_000 {
            // small splits and distances so that the bounds are often active
            let s = SplitVariable {
                y1: rng.gen::<f64>() * 0.05,
                y2: rng.gen::<f64>() * 0.05,
            };
            let x: Vec<f64> = (0..4).map(|_| rng.gen::<f64>().powi(3)).collect();
            let (wu, wv) = (rng.gen_range(1.0..40.0), rng.gen_range(1.0..40.0));
            let (lb1, lb2) = lb_checks(&s, &b, p.alpha, wu, wv, &x, p.n);
            if lb1 || lb2 {
                let prob = edge_probability(&p, &e, wu, wv, &x).unwrap();
                assert!(eic_check(&s, prob));
            }
        }
    }

    #[test]
    fn phases_on_small_instance() {
        let p = GirgParams::new(2000, 2.5, 1.5, 0.8, 5).unwrap();
        let e = parse("min(x1,x2)").unwrap();
        let t = run_phases(&p, &e, 0.05, 1.0).unwrap();
        assert_eq!(t.lb_violations, 0);
        assert!(t.giant_sizes.windows(2).all(|w| w[0] <= w[1]));
        let rows = t.phase_rows();
        assert_eq!(rows.len(), 4);
        assert!(rows.windows(2).all(|w| w[0].edges <= w[1].edges));
        // G1 is the LB1 graph, G4 the EIC graph
        assert_eq!(t.edge_count(4), t.edges.len());
        let k1 = t.giant(1);
        assert_eq!(k1.len(), t.giant_sizes[0]);
        assert!(t.giant(3).len() >= k1.len());
        let w = t.weights.as_slice();
        assert!(t.f_prime.iter().all(|&v| w[v as usize] < t.constants.b_prime));
        let below = k1.iter().filter(|&&v| w[v as usize] < t.constants.b_prime).count();
        assert!(2 * below >= k1.len());
        assert!(t.f.iter().all(|v| t.f_prime.contains(v) && k1.binary_search(v).is_ok()));
        let mut sorted = t.ordering.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..2000).collect::<Vec<u32>>());
    }

    #[test]
    fn final_graph_is_the_eic_graph() {
        let p = GirgParams::new(600, 2.5, 1.5, 0.7, 8).unwrap();
        let e = parse("min(x1,max(x2,x3))").unwrap();
        let t = run_phases(&p, &e, 0.05, 1.0).unwrap();
        let w = t.weights.as_slice();
        let mut expected = Vec::new();
        for u in 0..600 {
            for v in u + 1..600 {
                let prob = edge_probability(&p, &e, w[u], w[v], &t.positions.raw_difference(u, v)).unwrap();
                if eic_check(&pair_split(8, u, v), prob) {
                    expected.push((u as u32, v as u32));
                }
            }
        }
        assert_eq!(t.edges, expected);
    }

    #[test]
    fn empty_giant_is_an_error() {
        let p = GirgParams::new(10, 2.5, 1.5, 1e-9, 0).unwrap();
        assert!(matches!(
            run_phases(&p, &parse("min(x1,x2)").unwrap(), 0.05, 1.0),
            Err(Error::EmptyGiant)
        ));
        let p = GirgParams::new(10, 2.5, 1.5, 0.5, 0).unwrap();
        assert!(matches!(
            run_phases(&p, &parse("max(x1,min(x2,x3))").unwrap(), 0.05, 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn shares_positions_with_one_round() {
        let p = GirgParams::new(300, 2.5, 1.5, 0.9, 2).unwrap();
        let e = parse("min(x1,x2)").unwrap();
        let t = run_phases(&p, &e, 0.05, 1.0).unwrap();
        let g = sample_girg(&p, &e).unwrap();
        assert_eq!(t.positions, g.positions);
    }
}
