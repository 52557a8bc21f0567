//! Labeled hypergraphs: storage, diameter, components, clique expansion and
//! majority-rule reconstruction of sub-hypergraphs from node partitions.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::scalar::Scalar;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(u32);

        impl $name {
            #[inline]
            pub fn new(index: usize) -> Self {
                Self(u32::try_from(index).expect("id exceeds u32"))
            }

            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(
    /// Index of a node within one [`LabeledHypergraph`].
    NodeId
);
id_type!(EdgeId);
id_type!(
    /// Index into the label alphabet.
    LabelId
);

/// A labeled hyperedge.
///
/// `nodes` is the sorted member set; `args` keeps the argument order of the
/// atom the edge came from, including repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    label: LabelId,
    nodes: Vec<NodeId>,
    args: Vec<NodeId>,
}

impl Hyperedge {
    pub fn from_args(label: LabelId, args: Vec<NodeId>) -> Self {
        let mut nodes = args.clone();
        nodes.sort_unstable();
        nodes.dedup();
        Self { label, nodes, args }
    }

    pub fn from_nodes(label: LabelId, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        Self::from_args(label, nodes.into_iter().collect())
    }

    pub fn label(&self) -> LabelId {
        self.label
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn args(&self) -> &[NodeId] {
        &self.args
    }

    pub fn cardinality(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }

    fn remap(&self, map: &[Option<NodeId>]) -> Self {
        let args = self
            .args
            .iter()
            .map(|v| map[v.index()].expect("edge endpoint kept"))
            .collect();
        Self::from_args(self.label, args)
    }
}

/// Immutable labeled hypergraph with an incidence index.
///
/// The label alphabet is shared by every sub-hypergraph cut from the same
/// root, so label ids stay comparable across them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledHypergraph {
    names: Vec<String>,
    labels: Vec<String>,
    edges: Vec<Hyperedge>,
    incidence: Vec<Vec<EdgeId>>,
}

impl LabeledHypergraph {
    pub fn new(names: Vec<String>, labels: Vec<String>, edges: Vec<Hyperedge>) -> Result<Self> {
        let n = names.len();
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.nodes.is_empty() {
                return Err(Error::InvalidHypergraph(format!("edge {i} is empty")));
            }
            if e.label.index() >= labels.len() {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} has unknown label {}",
                    e.label.index()
                )));
            }
            for &v in &e.nodes {
                if v.index() >= n {
                    return Err(Error::InvalidHypergraph(format!(
                        "edge {i} references missing node {}",
                        v.index()
                    )));
                }
                incidence[v.index()].push(EdgeId::new(i));
            }
        }
        Ok(Self {
            names,
            labels,
            edges,
            incidence,
        })
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.names.len()).map(NodeId::new)
    }

    pub fn node_name(&self, v: NodeId) -> &str {
        &self.names[v.index()]
    }

    pub fn node_names(&self) -> &[String] {
        &self.names
    }

    pub fn find_node(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name).map(NodeId::new)
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Hyperedge {
        &self.edges[e.index()]
    }

    pub fn incident(&self, v: NodeId) -> &[EdgeId] {
        &self.incidence[v.index()]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.incidence[v.index()].len()
    }

    /// The full alphabet, including labels unused in this hypergraph.
    pub fn label_alphabet(&self) -> &[String] {
        &self.labels
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.labels[l.index()]
    }

    /// Number of distinct labels carried by this hypergraph's edges.
    pub fn label_count(&self) -> usize {
        let mut used = vec![false; self.labels.len()];
        for e in &self.edges {
            used[e.label.index()] = true;
        }
        used.into_iter().filter(|&u| u).count()
    }

    /// Distinct neighbours of `v` (excluding `v`), in ascending order.
    pub fn neighbors(&self, v: NodeId) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self.incidence[v.index()]
            .iter()
            .flat_map(|&e| self.edges[e.index()].nodes.iter().copied())
            .filter(|&u| u != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut seen_edge = vec![false; self.edge_count()];
        let mut queue = VecDeque::new();
        dist[source.index()] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v.index()].expect("queued nodes have a distance");
            for &e in &self.incidence[v.index()] {
                if std::mem::replace(&mut seen_edge[e.index()], true) {
                    continue;
                }
                for &u in &self.edges[e.index()].nodes {
                    if dist[u.index()].is_none() {
                        dist[u.index()] = Some(d + 1);
                        queue.push_back(u);
                    }
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.bfs_distances(NodeId::new(0)).iter().all(Option::is_some)
    }

    /// Sub-hypergraph on `nodes` plus the endpoints of `edges`, with node
    /// order preserved from `self`.
    pub fn subhypergraph(&self, nodes: &[NodeId], edges: &[EdgeId]) -> LabeledHypergraph {
        let mut keep = vec![false; self.node_count()];
        for &v in nodes {
            keep[v.index()] = true;
        }
        for &e in edges {
            for &v in &self.edges[e.index()].nodes {
                keep[v.index()] = true;
            }
        }
        let mut map = vec![None; self.node_count()];
        let mut names = Vec::new();
        for (i, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
            map[i] = Some(NodeId::new(names.len()));
            names.push(self.names[i].clone());
        }
        let new_edges = edges.iter().map(|&e| self.edges[e.index()].remap(&map)).collect();
        LabeledHypergraph::new(names, self.labels.clone(), new_edges)
            .expect("sub-hypergraph of a valid hypergraph is valid")
    }
}

/// Largest finite shortest-path length, in edges traversed.
///
/// Unreachable pairs are ignored, so a disconnected hypergraph reports the
/// maximum over its components. Exact: one BFS per node.
pub fn diameter(h: &LabeledHypergraph) -> usize {
    h.nodes()
        .map(|v| h.bfs_distances(v).into_iter().flatten().max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

/// Maximal connected sub-hypergraphs, ordered by their smallest node id.
pub fn connected_components(h: &LabeledHypergraph) -> Vec<LabeledHypergraph> {
    let mut comp = vec![usize::MAX; h.node_count()];
    let mut count = 0;
    for v in h.nodes() {
        if comp[v.index()] != usize::MAX {
            continue;
        }
        for (u, d) in h.bfs_distances(v).iter().enumerate() {
            if d.is_some() {
                comp[u] = count;
            }
        }
        count += 1;
    }
    let mut nodes = vec![Vec::new(); count];
    for v in h.nodes() {
        nodes[comp[v.index()]].push(v);
    }
    let mut edges = vec![Vec::new(); count];
    for (i, e) in h.edges().iter().enumerate() {
        edges[comp[e.nodes[0].index()]].push(EdgeId::new(i));
    }
    nodes
        .iter()
        .zip(&edges)
        .map(|(n, e)| h.subhypergraph(n, e))
        .collect()
}

/// Pair weight contributed by one hyperedge during clique expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CliqueWeighting {
    /// Every pair inside an edge gets weight 1.
    Unit,
    /// Pairs inside an edge of cardinality `c` get `1 / (c - 1)`, so each
    /// member's weighted degree grows by exactly 1 per incident edge.
    #[default]
    InverseCardinality,
}

/// Clique expansion with the default [`CliqueWeighting::InverseCardinality`].
pub fn to_weighted_graph<T: Scalar>(h: &LabeledHypergraph) -> WeightedGraph<T> {
    to_weighted_graph_with(h, CliqueWeighting::default())
}

/// Replaces every hyperedge of cardinality `c >= 2` by a weighted clique;
/// weights of repeated pairs accumulate.
pub fn to_weighted_graph_with<T: Scalar>(
    h: &LabeledHypergraph,
    weighting: CliqueWeighting,
) -> WeightedGraph<T> {
    let mut pairs = Vec::new();
    for e in h.edges() {
        let c = e.cardinality();
        if c < 2 {
            continue;
        }
        let w = match weighting {
            CliqueWeighting::Unit => T::one(),
            CliqueWeighting::InverseCardinality => T::one() / T::of_usize(c - 1),
        };
        for (i, a) in e.nodes.iter().enumerate() {
            for b in &e.nodes[i + 1..] {
                pairs.push((a.index(), b.index(), w));
            }
        }
    }
    WeightedGraph::from_pairs(h.node_count(), pairs)
}

/// Rebuilds one sub-hypergraph per part of a node partition.
///
/// Each edge goes to the part holding a strict majority of its nodes. With
/// no strict majority the edge goes to the part of its lowest node id. A
/// part's hypergraph holds its own nodes plus any outside endpoints of the
/// edges assigned to it, so no node or edge is dropped.
pub fn majority_subhypergraph(
    h: &LabeledHypergraph,
    parts: &[Vec<NodeId>],
) -> Result<Vec<LabeledHypergraph>> {
    let mut part_of = vec![usize::MAX; h.node_count()];
    for (p, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::NotAPartition(format!("part {p} is empty")));
        }
        for &v in part {
            if v.index() >= h.node_count() {
                return Err(Error::NotAPartition(format!("unknown node {}", v.index())));
            }
            if part_of[v.index()] != usize::MAX {
                return Err(Error::NotAPartition(format!(
                    "node `{}` appears in more than one part",
                    h.node_name(v)
                )));
            }
            part_of[v.index()] = p;
        }
    }
    if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
        return Err(Error::NotAPartition(format!(
            "node `{}` is not covered",
            h.names[v]
        )));
    }

    let mut assigned = vec![Vec::new(); parts.len()];
    let mut tally = vec![0usize; parts.len()];
    for (i, e) in h.edges().iter().enumerate() {
        for &v in &e.nodes {
            tally[part_of[v.index()]] += 1;
        }
        let majority = tally.iter().position(|&c| 2 * c > e.cardinality());
        let target = majority.unwrap_or_else(|| part_of[e.nodes[0].index()]);
        assigned[target].push(EdgeId::new(i));
        for &v in &e.nodes {
            tally[part_of[v.index()]] = 0;
        }
    }

    Ok(parts
        .iter()
        .zip(&assigned)
        .map(|(part, edges)| {
            let mut nodes = part.clone();
            nodes.sort_unstable();
            h.subhypergraph(&nodes, edges)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relational_io::{build_hypergraph, parse_database};

    fn hg(text: &str) -> LabeledHypergraph {
        build_hypergraph(&parse_database(text).unwrap())
    }

    fn ids(h: &LabeledHypergraph, names: &[&str]) -> Vec<NodeId> {
        names.iter().map(|n| h.find_node(n).unwrap()).collect()
    }

    #[test]
    fn incidence_inverts_membership() {
        let h = hg("R(a,b,c)\nS(c,d)\nT(d)");
        for v in h.nodes() {
            for &e in h.incident(v) {
                assert!(h.edge(e).contains(v));
            }
        }
        let total: usize = h.nodes().map(|v| h.degree(v)).sum();
        let members: usize = h.edges().iter().map(Hyperedge::cardinality).sum();
        assert_eq!(total, members);
    }

    #[test]
    fn rejects_malformed_edges() {
        let names = vec!["a".to_owned()];
        let labels = vec!["R".to_owned()];
        let empty = Hyperedge::from_nodes(LabelId::new(0), []);
        assert!(LabeledHypergraph::new(names.clone(), labels.clone(), vec![empty]).is_err());
        let dangling = Hyperedge::from_nodes(LabelId::new(0), [NodeId::new(3)]);
        assert!(LabeledHypergraph::new(names, labels, vec![dangling]).is_err());
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter(&hg("R(a,b,c)")), 1);
        assert_eq!(diameter(&hg("R(a,b)\nR(b,c)\nR(c,d)")), 3);
        assert_eq!(diameter(&hg("R(a)")), 0);
        // max over components
        assert_eq!(diameter(&hg("R(a,b)\nR(b,c)\nS(x,y)")), 2);
    }

    #[test]
    fn components() {
        let h = hg("R(a,b)\nR(b,c)");
        let comps = connected_components(&h);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0], h);

        let comps = connected_components(&hg("R(a,b)\nS(c,d)"));
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].node_names(), ["a", "b"]);
        assert_eq!(comps[1].node_names(), ["c", "d"]);

        let empty = LabeledHypergraph::new(vec![], vec![], vec![]).unwrap();
        assert!(connected_components(&empty).is_empty());
    }

    #[test]
    fn clique_expansion_examples() {
        let g = to_weighted_graph::<f64>(&hg("R(a,b)"));
        assert_eq!(g.weight(0, 1), 1.0);

        let g = to_weighted_graph::<f64>(&hg("R(a,b,c)"));
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!((g.weight(i, j) - 0.5).abs() < 1e-15);
        }

        let g = to_weighted_graph::<f64>(&hg("R(a,b,c)\nS(a,b)"));
        assert!((g.weight(0, 1) - 1.5).abs() < 1e-15);
        assert!((g.weight(0, 2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unit_weighting_examples() {
        let unit = |text| to_weighted_graph_with::<f64>(&hg(text), CliqueWeighting::Unit);
        let g = unit("R(a,b,c)");
        assert_eq!((g.weight(0, 1), g.weight(1, 2), g.weight(0, 2)), (1.0, 1.0, 1.0));
        let g = unit("R(a,b,c)\nS(a,b)");
        assert_eq!((g.weight(0, 1), g.weight(1, 2), g.weight(0, 2)), (2.0, 1.0, 1.0));
    }

    #[test]
    fn inverse_weighting_preserves_hyperedge_degree() {
        let h = hg("R(a,b,c,d)\nS(a,b)\nT(b,c,e)");
        let g = to_weighted_graph::<f64>(&h);
        for v in h.nodes() {
            assert!((g.degree(v.index()) - h.degree(v) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn majority_assignment() {
        let h = hg("R(a,b,c)");
        let parts = vec![ids(&h, &["a", "b"]), ids(&h, &["c"])];
        let subs = majority_subhypergraph(&h, &parts).unwrap();
        assert_eq!(subs[0].edge_count(), 1);
        assert_eq!(subs[1].edge_count(), 0);
        assert_eq!(subs[1].node_names(), ["c"]);
    }

    #[test]
    fn majority_tie_goes_to_lowest_node() {
        let h = hg("R(a,b)\nS(c,d)\nT(b,c)");
        let parts = vec![ids(&h, &["c", "d"]), ids(&h, &["a", "b"])];
        let subs = majority_subhypergraph(&h, &parts).unwrap();
        // T(b,c) splits 1:1; b has the lower id, so it joins {a,b}
        assert_eq!(subs[1].edge_count(), 2);
        assert_eq!(subs[1].node_names(), ["a", "b", "c"]);
        assert_eq!(subs[0].edge_count(), 1);
    }

    #[test]
    fn single_part_is_identity() {
        let h = hg("R(a,b,c)\nS(c,d)");
        let all: Vec<NodeId> = h.nodes().collect();
        let subs = majority_subhypergraph(&h, &[all]).unwrap();
        assert_eq!(subs, vec![h]);
    }

    #[test]
    fn rejects_non_partitions() {
        let h = hg("R(a,b,c)");
        let [a, b, c] = ids(&h, &["a", "b", "c"])[..] else { unreachable!() };
        assert!(majority_subhypergraph(&h, &[vec![a, b]]).is_err());
        assert!(majority_subhypergraph(&h, &[vec![a, b], vec![b, c]]).is_err());
        assert!(majority_subhypergraph(&h, &[vec![a, b, c], vec![]]).is_err());
    }
}
