//! Exact uniform sampling from BDF balls and their complements.
//!
//! `{max(k1, k2) < r}` is the product of the child balls, and
//! `{min(k1, k2) < r}` is the complement of the product of the child
//! complements, so both the ball and its complement decompose into
//! disjoint products that can be drawn by recursion with the exact child
//! volumes as mixture weights.

use rand::Rng;

use super::{volume_unchecked, wrap_unit, BdfExpr};

/// Fills `out[k - 1]` for every leaf `k` of `expr` with a uniform sample
/// from the ball `{kappa < r}` centred at the origin. `r` must be positive.
pub fn sample_ball<R: Rng + ?Sized>(expr: &BdfExpr, r: f64, rng: &mut R, out: &mut [f64]) {
    match expr {
        BdfExpr::Leaf(k) => {
            out[k - 1] = if r >= 0.5 {
                rng.gen::<f64>()
            } else {
                wrap_unit(r * (2.0 * rng.gen::<f64>() - 1.0))
            };
        }
        BdfExpr::Max(a, b) => {
            sample_ball(a, r, rng, out);
            sample_ball(b, r, rng, out);
        }
        BdfExpr::Min(a, b) => {
            let (va, vb) = (volume_unchecked(a, r), volume_unchecked(b, r));
            let total = va + vb - va * vb;
            let u = rng.gen::<f64>() * total;
            if u < va * (1.0 - vb) {
                sample_ball(a, r, rng, out);
                sample_ball_complement(b, r, rng, out);
            } else if u < va * (1.0 - vb) + (1.0 - va) * vb {
                sample_ball_complement(a, r, rng, out);
                sample_ball(b, r, rng, out);
            } else {
                sample_ball(a, r, rng, out);
                sample_ball(b, r, rng, out);
            }
        }
    }
}

/// Uniform sample from `{kappa >= r}`; requires `r < 1/2`.
pub fn sample_ball_complement<R: Rng + ?Sized>(
    expr: &BdfExpr,
    r: f64,
    rng: &mut R,
    out: &mut [f64],
) {
    match expr {
        BdfExpr::Leaf(k) => {
            out[k - 1] = r + (1.0 - 2.0 * r) * rng.gen::<f64>();
        }
        BdfExpr::Min(a, b) => {
            sample_ball_complement(a, r, rng, out);
            sample_ball_complement(b, r, rng, out);
        }
        BdfExpr::Max(a, b) => {
            let (va, vb) = (volume_unchecked(a, r), volume_unchecked(b, r));
            let total = 1.0 - va * vb;
            let u = rng.gen::<f64>() * total;
            if u < 1.0 - va {
                sample_ball_complement(a, r, rng, out);
                sample_uniform(b, rng, out);
            } else {
                sample_ball(a, r, rng, out);
                sample_ball_complement(b, r, rng, out);
            }
        }
    }
}

fn sample_uniform<R: Rng + ?Sized>(expr: &BdfExpr, rng: &mut R, out: &mut [f64]) {
    for k in expr.coordinates() {
        out[k - 1] = rng.gen::<f64>();
    }
}
