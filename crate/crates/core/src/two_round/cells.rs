//! Cells `T^(d-m) x I_j1 x .. x I_jm` over the last `m` coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellPartition {
    /// Intervals per partitioned axis.
    pub cells_per_axis: usize,
    /// Number of partitioned (trailing) coordinates.
    pub m: usize,
}

impl CellPartition {
    /// Smallest `M` with `M^m >= n / l`, i.e. `M = ceil((n / l)^(1/m))`.
    pub fn new(n: usize, l: f64, m: usize) -> Result<Self> {
        if !(l > 0.0 && l <= 1.0) {
            return Err(Error::InvalidParameter(format!("l = {l} must lie in (0, 1]")));
        }
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter("cell partition needs n >= 1 and m >= 1".into()));
        }
        let target = n as f64 / l;
        let covers = |c: usize| (c as f64).powi(m as i32) >= target;
        let mut c = target.powf(1.0 / m as f64).ceil().max(1.0) as usize;
        // correct the floating-point root in either direction
        while c > 1 && covers(c - 1) {
            c -= 1;
        }
        while !covers(c) {
            c += 1;
        }
        Ok(CellPartition {
            cells_per_axis: c,
            m,
        })
    }

    pub fn with_cells(cells_per_axis: usize, m: usize) -> Self {
        CellPartition { cells_per_axis, m }
    }

    /// `M^m`.
    pub fn cell_count(&self) -> usize {
        self.cells_per_axis.pow(self.m as u32)
    }

    /// Mixed-radix index of `floor(x_i * M)` over the last `m` coordinates,
    /// most significant first.
    pub fn cell_index(&self, x: &[f64]) -> Result<usize> {
        if x.len() < self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: x.len(),
            });
        }
        let big_m = self.cells_per_axis;
        Ok(x[x.len() - self.m..].iter().fold(0, |id, &c| {
            let j = ((c * big_m as f64) as usize).min(big_m - 1);
            id * big_m + j
        }))
    }

    /// Number of points per cell.
    pub fn occupancy<'a>(&self, points: impl IntoIterator<Item = &'a [f64]>) -> Result<Vec<usize>> {
        let mut counts = vec![0; self.cell_count()];
        for p in points {
            counts[self.cell_index(p)?] += 1;
        }
        Ok(counts)
    }
}

/// Total load of the `k` most occupied cells.
pub fn top_cells_load(occupancy: &[usize], k: usize) -> usize {
    let mut sorted = occupancy.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted.iter().take(k).sum()
}
