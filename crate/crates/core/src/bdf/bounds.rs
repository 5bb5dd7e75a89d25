//! Upper bounds on a BDF by simpler distance functions.

use std::collections::BTreeSet;

use super::{box_volume, depth, is_scom, max_norm_over, volume_unchecked, BdfExpr};
use crate::error::{Error, Result};

/// Radii `2^-1 .. 2^-RATIO_GRID_LEN` scanned by [`volume_ratio_constant`].
pub const RATIO_GRID_LEN: i32 = 40;
/// Multiplier applied on top of the largest observed volume ratio.
pub const RATIO_SAFETY: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `kappa(x) <= max_{i in s1} |x_i|`, `s2` empty.
    SingleMax,
    /// `kappa(x) <= min(max_{i in s1} |x_i|, max_{i in s2} |x_i|)`.
    MinOfMaxes,
}

/// Coordinate sets of an upper-bounding distance function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundWitness {
    pub s1: BTreeSet<usize>,
    pub s2: BTreeSet<usize>,
    pub kind: WitnessKind,
}

impl BoundWitness {
    pub fn single_max(s: BTreeSet<usize>) -> Self {
        BoundWitness {
            s1: s,
            s2: BTreeSet::new(),
            kind: WitnessKind::SingleMax,
        }
    }

    /// Value of the bounding function at the difference `delta`.
    pub fn evaluate(&self, delta: &[f64]) -> f64 {
        let a = max_norm_over(delta, &self.s1);
        match self.kind {
            WitnessKind::SingleMax => a,
            WitnessKind::MinOfMaxes => a.min(max_norm_over(delta, &self.s2)),
        }
    }

    /// Exact ball volume of the bounding function.
    pub fn volume(&self, r: f64) -> f64 {
        let a = box_volume(self.s1.len(), r);
        match self.kind {
            WitnessKind::SingleMax => a,
            WitnessKind::MinOfMaxes => {
                let b = box_volume(self.s2.len(), r);
                a + b - a * b
            }
        }
    }

    /// `(coefficient, exponent)` of the small-radius volume asymptotics.
    pub fn leading_term(&self) -> (f64, usize) {
        let box_term = |k: usize| (2f64.powi(k as i32), k);
        match self.kind {
            WitnessKind::SingleMax => box_term(self.s1.len()),
            WitnessKind::MinOfMaxes => min_term(box_term(self.s1.len()), box_term(self.s2.len())),
        }
    }

    pub fn depth(&self) -> usize {
        match self.kind {
            WitnessKind::SingleMax => self.s1.len(),
            WitnessKind::MinOfMaxes => self.s1.len().min(self.s2.len()),
        }
    }
}

fn min_term(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    match a.1.cmp(&b.1) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => (a.0 + b.0, a.1),
    }
}

/// `(c, D)` with `volume(expr, r) = c r^D + o(r^D)` as `r -> 0`.
pub fn leading_term(expr: &BdfExpr) -> (f64, usize) {
    match expr {
        BdfExpr::Leaf(_) => (2.0, 1),
        BdfExpr::Max(a, b) => {
            let (ca, da) = leading_term(a);
            let (cb, db) = leading_term(b);
            (ca * cb, da + db)
        }
        BdfExpr::Min(a, b) => min_term(leading_term(a), leading_term(b)),
    }
}

/// A coordinate set `S` with `|S| = depth(expr)` and
/// `kappa(x) <= max_{i in S} |x_i|` everywhere.
///
/// Leaves give their coordinate, outer-max takes the union, outer-min keeps
/// the child set of smaller size (left on ties).
pub fn bound_subset(expr: &BdfExpr) -> BTreeSet<usize> {
    match expr {
        BdfExpr::Leaf(k) => BTreeSet::from([*k]),
        BdfExpr::Max(a, b) => {
            let mut s = bound_subset(a);
            s.extend(bound_subset(b));
            s
        }
        BdfExpr::Min(a, b) => {
            let (sa, sb) = (bound_subset(a), bound_subset(b));
            if sb.len() < sa.len() {
                sb
            } else {
                sa
            }
        }
    }
}

/// Outer-min BDF `kappa'` of equal depth with `kappa <= kappa'` pointwise,
/// for a non-SCOM outer-max `expr`.
///
/// Both children are first brought into outer-min form (recursively), then
/// `max(min(a1, a2), min(b1, b2)) <= min(max(a1, b1), max(a2, b2))` is
/// applied with the shallower comprising function of each side in front.
pub fn outer_min_upper_bound(expr: &BdfExpr) -> Result<BdfExpr> {
    if !expr.is_outer_max() {
        return Err(Error::Precondition(format!(
            "{expr} is not outer-max; it is already its own outer-min bound"
        )));
    }
    if let (true, Some(k)) = is_scom(expr) {
        return Err(Error::Precondition(format!(
            "{expr} is SCOM (coordinate x{k} can be singled out)"
        )));
    }
    Ok(to_outer_min(expr))
}

fn to_outer_min(expr: &BdfExpr) -> BdfExpr {
    match expr {
        BdfExpr::Min(..) => expr.clone(),
        BdfExpr::Max(a, b) => {
            let (a1, a2) = shallow_first(to_outer_min(a));
            let (b1, b2) = shallow_first(to_outer_min(b));
            BdfExpr::min(BdfExpr::max(a1, b1), BdfExpr::max(a2, b2))
        }
        // unreachable for non-SCOM input: a leaf under a max chain is SCOM
        BdfExpr::Leaf(_) => expr.clone(),
    }
}

fn shallow_first(e: BdfExpr) -> (BdfExpr, BdfExpr) {
    match e {
        BdfExpr::Min(a, b) => {
            if depth(&b) < depth(&a) {
                (*b, *a)
            } else {
                (*a, *b)
            }
        }
        other => unreachable!("expected an outer-min tree, got {other}"),
    }
}

/// Disjoint `S1, S2` with `kappa(x) <= min(max_{S1} |x_i|, max_{S2} |x_i|)`
/// and `min(|S1|, |S2|) = depth(expr)`, for a non-SCOM `expr`.
pub fn min_of_maxes_bound(expr: &BdfExpr) -> Result<BoundWitness> {
    if let (true, Some(k)) = is_scom(expr) {
        return Err(Error::Precondition(format!(
            "{expr} is SCOM (coordinate x{k} can be singled out); no min-of-maxes bound of equal depth exists"
        )));
    }
    let outer_min = match expr {
        BdfExpr::Min(..) => expr.clone(),
        _ => outer_min_upper_bound(expr)?,
    };
    let (left, right) = outer_min
        .children()
        .expect("outer-min tree has two comprising functions");
    Ok(BoundWitness {
        s1: bound_subset(left),
        s2: bound_subset(right),
        kind: WitnessKind::MinOfMaxes,
    })
}

/// A constant `K >= sup_{0 < r <= 1/2} V_expr(r) / V_witness(r)`.
///
/// The exact ratio is maximised over `r = 2^-k, k = 1..=40` together with
/// its `r -> 0` limit (ratio of leading coefficients), then multiplied by
/// [`RATIO_SAFETY`].
pub fn volume_ratio_constant(expr: &BdfExpr, witness: &BoundWitness) -> f64 {
    let mut sup = (1..=RATIO_GRID_LEN)
        .map(|k| {
            let r = 2f64.powi(-k);
            volume_unchecked(expr, r) / witness.volume(r)
        })
        .fold(0.0, f64::max);
    let (c, d) = leading_term(expr);
    let (cw, dw) = witness.leading_term();
    if d == dw {
        sup = sup.max(c / cw);
    } else if d < dw {
        // the expression ball is asymptotically larger: no finite constant
        return f64::INFINITY;
    }
    RATIO_SAFETY * sup
}
