//! Degree sequences and their tails.

use super::GraphView;
use crate::stats::log_log_slope;

/// Thresholds with fewer vertices than this are left out of the fit.
pub const MIN_TAIL_COUNT: usize = 50;
/// Geometric spacing of the tail thresholds.
pub const THRESHOLDS_PER_OCTAVE: usize = 4;

pub fn degrees<G: GraphView + ?Sized>(g: &G) -> Vec<usize> {
    let mut deg = vec![0; g.vertex_count()];
    for &(u, v) in g.edge_list() {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    deg
}

/// `|{v : deg(v) >= t}|` for each threshold.
pub fn tail_counts<G: GraphView + ?Sized>(g: &G, thresholds: &[f64]) -> Vec<usize> {
    let mut deg = degrees(g);
    deg.sort_unstable();
    thresholds
        .iter()
        .map(|&t| deg.len() - deg.partition_point(|&d| (d as f64) < t))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeTail {
    /// `(threshold, count of vertices with degree >= threshold)`.
    pub rows: Vec<(f64, usize)>,
    /// Log-log slope of the count over the fitted thresholds.
    pub slope: Option<f64>,
    /// Fitted threshold range.
    pub fit_range: Option<(f64, f64)>,
}

/// Tail counts at `2^(i/4)` for all thresholds up to the maximum degree,
/// fitted over thresholds at least `fit_factor` times the mean degree that
/// still hold [`MIN_TAIL_COUNT`] vertices.
pub fn degree_tail_table_with<G: GraphView + ?Sized>(g: &G, fit_factor: f64) -> DegreeTail {
    let deg = degrees(g);
    let max_deg = deg.iter().copied().max().unwrap_or(0) as f64;
    let thresholds: Vec<f64> = (0..)
        .map(|i| 2f64.powf(i as f64 / THRESHOLDS_PER_OCTAVE as f64))
        .take_while(|&t| t <= max_deg.max(1.0))
        .collect();
    let counts = tail_counts(g, &thresholds);
    let rows: Vec<(f64, usize)> = thresholds.into_iter().zip(counts).collect();
    let mean = if deg.is_empty() {
        0.0
    } else {
        deg.iter().sum::<usize>() as f64 / deg.len() as f64
    };
    let fit: Vec<(f64, usize)> = rows
        .iter()
        .copied()
        .filter(|&(t, c)| t >= fit_factor * mean && c >= MIN_TAIL_COUNT)
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = fit.iter().map(|&(t, c)| (t, c as f64)).unzip();
    DegreeTail {
        slope: log_log_slope(&xs, &ys),
        fit_range: fit.first().zip(fit.last()).map(|(a, b)| (a.0, b.0)),
        rows,
    }
}

/// [`degree_tail_table_with`] at the default fit factor.
pub fn degree_tail_table<G: GraphView + ?Sized>(g: &G) -> DegreeTail {
    degree_tail_table_with(g, DEFAULT_FIT_FACTOR)
}

pub const DEFAULT_FIT_FACTOR: f64 = 2.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::SimpleGraph;

    #[test]
    fn star_tail() {
        let g = SimpleGraph::new(4, vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(tail_counts(&g, &[1.0, 2.0, 3.0]), vec![4, 1, 1]);
        assert_eq!(degrees(&g), vec![3, 1, 1, 1]);
    }

    #[test]
    fn empty_graph_tail() {
        let g = SimpleGraph::new(5, vec![]);
        assert_eq!(tail_counts(&g, &[1.0, 2.0, 10.0]), vec![0, 0, 0]);
        let t = degree_tail_table(&g);
        assert!(t.rows.iter().all(|&(_, c)| c == 0));
        assert_eq!(t.slope, None);
    }

    #[test]
    fn thresholds_are_geometric() {
        let g = SimpleGraph::new(20, (1..20).map(|v| (0, v)).collect());
        let t = degree_tail_table(&g);
        assert_eq!(t.rows[0], (1.0, 20));
        assert_eq!(t.rows[4].0, 2.0);
        assert!(t.rows.last().unwrap().0 <= 19.0);
    }
}
