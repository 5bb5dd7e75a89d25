use super::{depth, BdfExpr};
use crate::error::{Error, Result};

/// Largest dimension the flat evaluator supports.
pub const MAX_COMPILED_DIM: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Coord(u8),
    Max,
    Min,
}

/// Postfix form of a validated BDF for the sampling hot loops.
///
/// Evaluation works on the per-coordinate torus norms of a difference
/// vector (already reduced into `[0, 1/2]`) and uses a fixed stack, so it
/// allocates nothing.
#[derive(Debug, Clone)]
pub struct CompiledBdf {
    ops: Vec<Op>,
    dim: usize,
    depth: usize,
}

impl CompiledBdf {
    pub fn new(expr: &BdfExpr) -> Result<Self> {
        let dim = expr.validate()?;
        if dim > MAX_COMPILED_DIM {
            return Err(Error::InvalidParameter(format!(
                "dimension {dim} exceeds the supported maximum {MAX_COMPILED_DIM}"
            )));
        }
        let mut ops = Vec::with_capacity(2 * dim - 1);
        fn emit(e: &BdfExpr, ops: &mut Vec<Op>) {
            match e {
                BdfExpr::Leaf(k) => ops.push(Op::Coord((k - 1) as u8)),
                BdfExpr::Max(a, b) => {
                    emit(a, ops);
                    emit(b, ops);
                    ops.push(Op::Max);
                }
                BdfExpr::Min(a, b) => {
                    emit(a, ops);
                    emit(b, ops);
                    ops.push(Op::Min);
                }
            }
        }
        emit(expr, &mut ops);
        Ok(CompiledBdf {
            ops,
            dim,
            depth: depth(expr).value(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Distance from per-coordinate torus norms (`norms.len() >= dim`).
    #[inline]
    pub fn distance(&self, norms: &[f64]) -> f64 {
        self.distance_in(norms, &mut [0.0f64; MAX_COMPILED_DIM])
    }

    /// `volume(distance(norms))`, using caller-provided scratch space.
    #[inline]
    pub fn ball_volume_at(&self, norms: &[f64], scratch: &mut [f64; MAX_COMPILED_DIM]) -> f64 {
        let r = self.distance_in(norms, scratch);
        self.volume_in(r, scratch)
    }

    #[inline]
    fn distance_in(&self, norms: &[f64], stack: &mut [f64; MAX_COMPILED_DIM]) -> f64 {
        let mut top = 0usize;
        for op in &self.ops {
            match *op {
                Op::Coord(i) => {
                    stack[top] = norms[i as usize];
                    top += 1;
                }
                Op::Max => {
                    top -= 1;
                    stack[top - 1] = stack[top - 1].max(stack[top]);
                }
                Op::Min => {
                    top -= 1;
                    stack[top - 1] = stack[top - 1].min(stack[top]);
                }
            }
        }
        stack[0]
    }

    /// Ball volume at radius `r >= 0`; same recursion as [`super::volume`].
    #[inline]
    pub fn volume(&self, r: f64) -> f64 {
        self.volume_in(r, &mut [0.0f64; MAX_COMPILED_DIM])
    }

    #[inline]
    fn volume_in(&self, r: f64, stack: &mut [f64; MAX_COMPILED_DIM]) -> f64 {
        let leaf = (2.0 * r).min(1.0);
        let mut top = 0usize;
        for op in &self.ops {
            match *op {
                Op::Coord(_) => {
                    stack[top] = leaf;
                    top += 1;
                }
                Op::Max => {
                    top -= 1;
                    stack[top - 1] *= stack[top];
                }
                Op::Min => {
                    top -= 1;
                    let (a, b) = (stack[top - 1], stack[top]);
                    stack[top - 1] = a + b - a * b;
                }
            }
        }
        stack[0]
    }
}
