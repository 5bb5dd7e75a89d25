//! Triangle counts and the mean local clustering coefficient.

use super::{degrees, Adjacency, GraphView};

/// Triangles through each vertex.
///
/// Edges are oriented from lower to higher `(degree, id)` rank and each
/// triangle is found once by intersecting sorted forward lists.
pub fn triangles_per_vertex<G: GraphView + ?Sized>(g: &G) -> Vec<u64> {
    let n = g.vertex_count();
    let deg = degrees(g);
    let rank = |v: u32| (deg[v as usize], v);
    let forward: Vec<(u32, u32)> = g
        .edge_list()
        .iter()
        .map(|&(u, v)| if rank(u) < rank(v) { (u, v) } else { (v, u) })
        .collect();
    let fwd = Adjacency::directed(n, &forward);
    let mut tri = vec![0u64; n];
    for u in 0..n {
        let nu = fwd.neighbors(u);
        for &v in nu {
            let nv = fwd.neighbors(v as usize);
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        tri[u] += 1;
                        tri[v as usize] += 1;
                        tri[nu[i] as usize] += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    tri
}

/// `tri(v) / C(deg(v), 2)`, and 0 for degree below 2.
pub fn local_clustering<G: GraphView + ?Sized>(g: &G) -> Vec<f64> {
    let deg = degrees(g);
    triangles_per_vertex(g)
        .into_iter()
        .zip(deg)
        .map(|(t, d)| {
            if d < 2 {
                0.0
            } else {
                t as f64 / (d as f64 * (d as f64 - 1.0) / 2.0)
            }
        })
        .collect()
}

/// Mean local clustering over all vertices.
pub fn clustering_coefficient<G: GraphView + ?Sized>(g: &G) -> f64 {
    let local = local_clustering(g);
    if local.is_empty() {
        return 0.0;
    }
    local.iter().sum::<f64>() / local.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::SimpleGraph;

    #[test]
    fn examples() {
        let tri = SimpleGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]);
        assert_eq!(clustering_coefficient(&tri), 1.0);
        let path = SimpleGraph::new(3, vec![(0, 1), (1, 2)]);
        assert_eq!(clustering_coefficient(&path), 0.0);
        // K4 without {2, 3}: vertices 0 and 1 have degree 3 and 2 triangles
        let k4e = SimpleGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(triangles_per_vertex(&k4e), vec![2, 2, 1, 1]);
        assert!((clustering_coefficient(&k4e) - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn empty() {
        assert_eq!(clustering_coefficient(&SimpleGraph::new(0, vec![])), 0.0);
        assert_eq!(clustering_coefficient(&SimpleGraph::new(5, vec![])), 0.0);
    }
}
