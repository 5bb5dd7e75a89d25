mod common;

use bdf_girg::analysis::{
    clustering_coefficient, connected_components, degrees, hyperplane_cut, separator_split,
    triangles_per_vertex, SimpleGraph,
};
use bdf_girg::sampler::sample_girg;
use bdf_girg::{parse, GirgParams};
use proptest::prelude::*;

#[test]
fn components_match_bfs_on_corpus() {
    for g in common::graph_corpus(200) {
        let c = connected_components(&g);
        assert_eq!(c.sizes, common::bfs_component_sizes(&g), "n={} m={}", g.n, g.edges.len());
        for u in (0..g.n).step_by(7) {
            for v in (0..g.n).step_by(11) {
                assert_eq!(c.labels[u] == c.labels[v], common::bfs_connected(&g, u, v));
            }
        }
    }
}

#[test]
fn triangles_and_clustering_match_enumeration() {
    for g in common::graph_corpus(50) {
        assert_eq!(triangles_per_vertex(&g), common::brute_force_triangles(&g));
        assert_eq!(clustering_coefficient(&g), common::brute_force_clustering(&g));
    }
}

#[test]
fn degree_sum_is_twice_edges() {
    for g in common::graph_corpus(200) {
        assert_eq!(degrees(&g).iter().sum::<usize>(), 2 * g.edges.len());
    }
}

#[test]
fn separator_leaves_no_crossing_edge() {
    let expr = parse("max(x1,min(x2,x3))").unwrap();
    for seed in 0..4 {
        let g = sample_girg(&GirgParams::with_defaults(600, seed), &expr).unwrap();
        let split = separator_split(&g, 1, 0.05).unwrap();
        let axis = g.positions.axis(0);
        let side = |v: u32| axis[v as usize] < 0.5;
        assert!(split.remaining.edges.iter().all(|&(u, v)| side(u) == side(v)));
        assert_eq!(
            split.remaining.edges.len() + split.report.cross_edges,
            g.edges.len()
        );
        let crossing = g.edges.iter().filter(|&&(u, v)| side(u) != side(v)).count();
        assert_eq!(crossing, split.report.cross_edges);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_graph_components(n in 0usize..120, p in 0.0..0.08f64, seed in any::<u64>()) {
        let g = common::gnp(n, p, seed);
        prop_assert_eq!(connected_components(&g).sizes, common::bfs_component_sizes(&g));
    }

    #[test]
    fn random_graph_triangles(n in 0usize..40, p in 0.0..1.0f64, seed in any::<u64>()) {
        let g = common::gnp(n, p, seed);
        prop_assert_eq!(triangles_per_vertex(&g), common::brute_force_triangles(&g));
    }

    #[test]
    fn cut_sides_partition_vertices(seed in 0u64..1000, offset in 0.0..1.0f64, width in 0.05..0.95f64) {
        let g = sample_girg(&GirgParams::with_defaults(200, seed), &parse("min(x1,x2)").unwrap()).unwrap();
        let r = hyperplane_cut(&g, 2, offset, width).unwrap();
        prop_assert_eq!(r.side_sizes.0 + r.side_sizes.1, 200);
        // the complementary slab gives the same cut
        let c = hyperplane_cut(&g, 2, (offset + 1.0 - width) % 1.0, 1.0 - width).unwrap();
        prop_assert_eq!(c.side_sizes, (r.side_sizes.1, r.side_sizes.0));
        prop_assert_eq!(c.cross_edges, r.cross_edges);
    }
}

#[test]
fn isolated_vertices_are_singletons() {
    let g = SimpleGraph::new(5, vec![(1, 3)]);
    let c = connected_components(&g);
    assert_eq!(c.sizes, vec![2, 1, 1, 1]);
    assert_eq!(c.largest(), 2);
    assert_eq!(c.second_largest(), 1);
}
