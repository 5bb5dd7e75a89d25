//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use bdf_girg::analysis::SimpleGraph;
use bdf_girg::sampler::sample_girg;
use bdf_girg::{BdfExpr, GirgParams};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// Uniformly split leaf counts, random node kinds, coordinates shuffled.
pub fn random_bdf<R: Rng>(rng: &mut R, d: usize) -> BdfExpr {
    let mut coords: Vec<usize> = (1..=d).collect();
    coords.shuffle(rng);
    build(rng, &coords)
}

fn build<R: Rng>(rng: &mut R, coords: &[usize]) -> BdfExpr {
    if coords.len() == 1 {
        return BdfExpr::leaf(coords[0]);
    }
    let k = rng.gen_range(1..coords.len());
    let (a, b) = (build(rng, &coords[..k]), build(rng, &coords[k..]));
    if rng.gen_bool(0.5) {
        BdfExpr::max(a, b)
    } else {
        BdfExpr::min(a, b)
    }
}

pub fn seeded_bdf(seed: u64, d: usize) -> BdfExpr {
    random_bdf(&mut StdRng::seed_from_u64(seed), d)
}

/// A non-SCOM tree with `d >= 2` leaves, found by rejection.
pub fn random_non_scom<R: Rng>(rng: &mut R, d: usize) -> BdfExpr {
    loop {
        let e = random_bdf(rng, d);
        if !bdf_girg::bdf::is_scom(&e).0 {
            return e;
        }
    }
}

pub fn random_point<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen::<f64>()).collect()
}

/// Erdos-Renyi `G(n, p)`, edges `u < v` ascending.
pub fn gnp(n: usize, p: f64, seed: u64) -> SimpleGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::new(n, edges)
}

/// Deterministic corpus: special graphs, `G(n, p)` and small GIRGs, all
/// with at most `max_n` vertices.
pub fn graph_corpus(max_n: usize) -> Vec<SimpleGraph> {
    let mut out = vec![SimpleGraph::new(0, vec![]), SimpleGraph::new(1, vec![])];
    for n in [2usize, 3, 5, 10, 30, 50, 120, 200] {
        if n > max_n {
            continue;
        }
        let n32 = n as u32;
        let complete = (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v))).collect();
        out.push(SimpleGraph::new(n, complete));
        out.push(SimpleGraph::new(n, (1..n32).map(|v| (0, v)).collect()));
        let mut cycle: Vec<(u32, u32)> = (0..n32 - 1).map(|v| (v, v + 1)).collect();
        if n > 2 {
            cycle.push((0, n32 - 1));
        }
        out.push(SimpleGraph::new(n, cycle));
        out.push(SimpleGraph::new(n, vec![]));
    }
    for (i, n) in (4..=max_n).step_by(7).enumerate() {
        for (j, p) in [0.02, 0.1, 0.3, 0.7].into_iter().enumerate() {
            out.push(gnp(n, p, (i * 10 + j) as u64));
        }
    }
    for (seed, n) in [(1u64, 20usize), (2, 50), (3, 120), (4, 200)] {
        if n > max_n {
            continue;
        }
        for bdf in ["min(x1,x2)", "max(x1,min(x2,x3))"] {
            let expr = bdf_girg::parse(bdf).unwrap();
            let g = sample_girg(&GirgParams::with_defaults(n, seed), &expr).unwrap();
            out.push(SimpleGraph::new(n, g.edges));
        }
    }
    out
}

fn adjacency(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.n];
    for &(u, v) in &g.edges {
        adj[u as usize].push(v as usize);
        adj[v as usize].push(u as usize);
    }
    adj
}

/// Component sizes, descending, by breadth-first search.
pub fn bfs_component_sizes(g: &SimpleGraph) -> Vec<usize> {
    let adj = adjacency(g);
    let mut seen = vec![false; g.n];
    let mut sizes = Vec::new();
    for s in 0..g.n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Whether `u` and `v` are in the same component, by search from `u`.
pub fn bfs_connected(g: &SimpleGraph, u: usize, v: usize) -> bool {
    let adj = adjacency(g);
    let mut seen = vec![false; g.n];
    let mut queue = VecDeque::from([u]);
    seen[u] = true;
    while let Some(x) = queue.pop_front() {
        if x == v {
            return true;
        }
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    false
}

/// Triangles through each vertex by enumerating all triples.
pub fn brute_force_triangles(g: &SimpleGraph) -> Vec<u64> {
    let n = g.n;
    let mut m = vec![false; n * n];
    for &(u, v) in &g.edges {
        m[u as usize * n + v as usize] = true;
        m[v as usize * n + u as usize] = true;
    }
    let mut t = vec![0u64; n];
    for a in 0..n {
        for b in a + 1..n {
            if !m[a * n + b] {
                continue;
            }
            for c in b + 1..n {
                if m[a * n + c] && m[b * n + c] {
                    t[a] += 1;
                    t[b] += 1;
                    t[c] += 1;
                }
            }
        }
    }
    t
}

/// Mean local clustering from the triple enumeration; degree < 2 counts 0.
pub fn brute_force_clustering(g: &SimpleGraph) -> f64 {
    if g.n == 0 {
        return 0.0;
    }
    let tri = brute_force_triangles(g);
    let mut deg = vec![0.0f64; g.n];
    for &(u, v) in &g.edges {
        deg[u as usize] += 1.0;
        deg[v as usize] += 1.0;
    }
    // same expression and summation order as the fast path, so equality is exact
    let sum: f64 = (0..g.n)
        .map(|v| {
            if deg[v] < 2.0 {
                0.0
            } else {
                tri[v] as f64 / (deg[v] * (deg[v] - 1.0) / 2.0)
            }
        })
        .sum();
    sum / g.n as f64
}
