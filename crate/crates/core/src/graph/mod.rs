//! Simple undirected graphs over dense vertex ids `0..n`.

mod generate;
mod io;
pub(crate) mod oracle;

pub use generate::{clique, gnp, path, star, GeneratorSpec, Kind};
pub use io::{load_edge_list, parse_edge_list, save_edge_list, to_edge_list};
pub use oracle::{
    density_of, exact_core_numbers, exact_densest_subset, graph_stats, Density, DensityReport,
    GraphStats, ENUMERATION_CAP,
};

use crate::error::{Error, Result};

/// A simple undirected graph with sorted adjacency lists.
///
/// Construction rejects self-loops and out-of-range ids and collapses
/// duplicate edges, so `u ∈ adj[v] ⇔ v ∈ adj[u]` always holds. The graph is
/// immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    m: usize,
}

impl Graph {
    /// Graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for id in [u, v] {
                if id as usize >= n {
                    return Err(Error::VertexOutOfRange { id: id as u64, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut twice_m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            twice_m += list.len();
        }
        Ok(Graph {
            adj,
            m: twice_m / 2,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        (u as usize) < self.n() && self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        0..self.n() as u32
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Places `other` after `self`, shifting its ids by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n() as u32;
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|list| list.iter().map(|&v| v + shift).collect()),
        );
        Graph {
            adj,
            m: self.m + other.m,
        }
    }

    /// Neighbour bitmasks, for graphs small enough to enumerate subsets.
    pub(crate) fn adjacency_masks(&self) -> Vec<u32> {
        debug_assert!(self.n() <= 32);
        self.adj
            .iter()
            .map(|list| list.iter().fold(0u32, |acc, &v| acc | (1 << v)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_collapse_and_adjacency_is_symmetric() {
        let g = Graph::from_edges(4, [(0, 1), (1, 0), (2, 1), (3, 2), (2, 3)]).unwrap();
        assert_eq!(g.m(), 3);
        for u in g.vertices() {
            for &v in g.neighbors(u) {
                assert!(g.has_edge(v, u));
            }
        }
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn rejects_self_loops_and_bad_ids() {
        assert!(matches!(
            Graph::from_edges(3, [(1, 1)]),
            Err(Error::SelfLoop(1))
        ));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::VertexOutOfRange { id: 3, n: 3 })
        ));
    }

    #[test]
    fn disjoint_union_shifts_ids() {
        let a = Graph::from_edges(2, [(0, 1)]).unwrap();
        let b = Graph::from_edges(3, [(0, 2)]).unwrap();
        let u = a.disjoint_union(&b);
        assert_eq!(u.n(), 5);
        assert_eq!(u.m(), 2);
        assert!(u.has_edge(2, 4));
        assert!(!u.has_edge(1, 2));
    }
}
