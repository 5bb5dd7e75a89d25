//! Connected components by union-find.

use super::GraphView;

/// Union by size with path halving.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns `true` if two distinct sets were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Size of the set containing `v`.
    pub fn size(&mut self, v: usize) -> usize {
        let r = self.find(v);
        self.size[r]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    /// Smallest vertex id of each vertex's component.
    pub labels: Vec<u32>,
    /// Component sizes, largest first.
    pub sizes: Vec<usize>,
}

impl ComponentDecomposition {
    pub fn largest(&self) -> usize {
        self.sizes.first().copied().unwrap_or(0)
    }

    pub fn second_largest(&self) -> usize {
        self.sizes.get(1).copied().unwrap_or(0)
    }

    /// Label of a largest component (smallest label on ties).
    pub fn largest_label(&self) -> Option<u32> {
        let mut count = vec![0usize; self.labels.len()];
        for &l in &self.labels {
            count[l as usize] += 1;
        }
        let best = *count.iter().max()?;
        count.iter().position(|&c| c == best).map(|l| l as u32)
    }

    pub fn members(&self, label: u32) -> Vec<u32> {
        (0..self.labels.len() as u32)
            .filter(|&v| self.labels[v as usize] == label)
            .collect()
    }
}

pub fn connected_components<G: GraphView + ?Sized>(g: &G) -> ComponentDecomposition {
    let n = g.vertex_count();
    let mut dsu = DisjointSets::new(n);
    for &(u, v) in g.edge_list() {
        dsu.union(u as usize, v as usize);
    }
    let mut root_label = vec![u32::MAX; n];
    let mut labels = vec![0u32; n];
    for v in 0..n {
        let r = dsu.find(v);
        if root_label[r] == u32::MAX {
            root_label[r] = v as u32;
        }
        labels[v] = root_label[r];
    }
    let mut sizes: Vec<usize> = (0..n)
        .filter(|&v| labels[v] == v as u32)
        .map(|v| dsu.size(v))
        .collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    ComponentDecomposition { labels, sizes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::SimpleGraph;

    #[test]
    fn examples() {
        let c = connected_components(&SimpleGraph::new(3, vec![]));
        assert_eq!(c.sizes, vec![1, 1, 1]);
        let c = connected_components(&SimpleGraph::new(3, vec![(0, 1), (1, 2)]));
        assert_eq!(c.sizes, vec![3]);
        let c = connected_components(&SimpleGraph::new(4, vec![(0, 3), (1, 2)]));
        assert_eq!(c.sizes, vec![2, 2]);
        assert_eq!(c.labels, vec![0, 1, 1, 0]);
        assert_eq!(c.largest_label(), Some(0));
        assert_eq!(c.members(1), vec![1, 2]);
    }

    #[test]
    fn empty_graph() {
        let c = connected_components(&SimpleGraph::new(0, vec![]));
        assert!(c.sizes.is_empty());
        assert_eq!(c.largest(), 0);
        assert_eq!(c.largest_label(), None);
    }
}
