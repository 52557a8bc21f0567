//! Undirected weighted graphs with sorted adjacency lists.

use std::collections::{BTreeMap, VecDeque};

use crate::scalar::Scalar;

/// Symmetric, loop-free graph with strictly positive edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<T> {
    adjacency: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> WeightedGraph<T> {
    /// Builds a graph from weighted pairs. Weights of repeated pairs add up;
    /// self-pairs and non-positive weights are skipped.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (a, b, w) in pairs {
            assert!(a < n && b < n, "pair ({a}, {b}) out of range for {n} nodes");
            if a == b || !(w > T::zero()) {
                continue;
            }
            let key = (a.min(b), a.max(b));
            let slot = acc.entry(key).or_insert_with(T::zero);
            *slot = *slot + w;
        }
        let mut adjacency = vec![Vec::new(); n];
        for ((a, b), w) in acc {
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(j, _)| j);
        }
        Self { adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, T)] {
        &self.adjacency[i]
    }

    /// Weight of pair `(i, j)`, zero when absent.
    pub fn weight(&self, i: usize, j: usize) -> T {
        self.adjacency[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map(|pos| self.adjacency[i][pos].1)
            .unwrap_or_else(|_| T::zero())
    }

    /// Weighted degree.
    pub fn degree(&self, i: usize) -> T {
        self.adjacency[i].iter().map(|&(_, w)| w).sum()
    }

    pub fn degrees(&self) -> Vec<T> {
        (0..self.node_count()).map(|i| self.degree(i)).collect()
    }

    pub fn total_weight(&self) -> T {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, l)| l.iter().filter(move |&&(j, _)| j > i).map(|&(_, w)| w))
            .sum()
    }

    /// Node sets of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(u, _) in &self.adjacency[v] {
                    if comp[u] == usize::MAX {
                        comp[u] = id;
                        members.push(u);
                        queue.push_back(u);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Subgraph induced by `nodes`; node `k` of the result is `nodes[k]`.
    pub fn induced(&self, nodes: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.node_count()];
        for (k, &v) in nodes.iter().enumerate() {
            local[v] = k;
        }
        let adjacency = nodes
            .iter()
            .map(|&v| {
                let mut list: Vec<(usize, T)> = self.adjacency[v]
                    .iter()
                    .filter(|&&(u, _)| local[u] != usize::MAX)
                    .map(|&(u, w)| (local[u], w))
                    .collect();
                list.sort_by_key(|&(j, _)| j);
                list
            })
            .collect();
        Self { adjacency }
    }

    /// Weight crossing between `set` (as a membership mask) and the rest.
    pub fn cut_weight(&self, in_set: &[bool]) -> T {
        let mut cut = T::zero();
        for (i, list) in self.adjacency.iter().enumerate() {
            if !in_set[i] {
                continue;
            }
            for &(j, w) in list {
                if !in_set[j] {
                    cut = cut + w;
                }
            }
        }
        cut
    }

    /// `cut(S) / min(vol(S), vol(V \ S))` with weighted volumes.
    pub fn conductance(&self, in_set: &[bool]) -> T {
        let degrees = self.degrees();
        let vol_s: T = degrees
            .iter()
            .zip(in_set)
            .filter(|(_, &m)| m)
            .map(|(&d, _)| d)
            .sum();
        let vol: T = degrees.iter().copied().sum();
        self.cut_weight(in_set) / vol_s.min(vol - vol_s)
    }
}
