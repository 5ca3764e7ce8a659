//! Typed-node graphs with aggregated integer link weights.
//!
//! Nodes are stored in canonical order (kind, then id: integer ids
//! numerically, text ids lexicographically) and addressed internally by
//! their position in that order. Both adjacency directions are kept as
//! sorted `(neighbour, weight)` lists.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::corpus::{AuthorId, PacsCode, PaperId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Author,
    Paper,
    Pacs,
    Reference,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Author => "author",
            Self::Paper => "paper",
            Self::Pacs => "pacs",
            Self::Reference => "reference",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeId {
    Int(u64),
    Text(String),
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Int(i) => write!(f, "{i}"),
            Self::Text(s) => f.write_str(s),
        }
    }
}

/// A node: its kind plus an identifier from that kind's corpus id space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef {
    pub kind: NodeKind,
    pub id: NodeId,
}

impl NodeRef {
    pub fn author(id: AuthorId) -> Self {
        Self {
            kind: NodeKind::Author,
            id: NodeId::Int(id),
        }
    }

    pub fn paper(id: PaperId) -> Self {
        Self {
            kind: NodeKind::Paper,
            id: NodeId::Text(id.to_string()),
        }
    }

    pub fn pacs(code: &PacsCode) -> Self {
        Self {
            kind: NodeKind::Pacs,
            id: NodeId::Text(code.to_string()),
        }
    }

    /// `key` must already be normalized.
    pub fn reference(key: &str) -> Self {
        Self {
            kind: NodeKind::Reference,
            id: NodeId::Text(key.to_string()),
        }
    }

    /// Interprets a textual id as a node of `kind`.
    pub fn parse(kind: NodeKind, token: &str) -> Result<Self, GraphError> {
        let bad = || GraphError::BadNodeId {
            kind,
            token: token.to_string(),
        };
        match kind {
            NodeKind::Author => token.trim().parse().map(Self::author).map_err(|_| bad()),
            NodeKind::Paper => token.trim().parse().map(Self::paper).map_err(|_| bad()),
            NodeKind::Pacs => PacsCode::parse(token.trim())
                .map(|c| Self::pacs(&c))
                .map_err(|_| bad()),
            NodeKind::Reference => {
                let key = crate::corpus::normalize_reference(token);
                if key.is_empty() {
                    Err(bad())
                } else {
                    Ok(Self::reference(&key))
                }
            }
        }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.id.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on node {0}")]
    SelfLoop(NodeRef),
    #[error("link {0} - {1} has weight 0; weights must be at least 1")]
    ZeroWeight(NodeRef, NodeRef),
    #[error("{token:?} is not a valid {kind} id")]
    BadNodeId { kind: NodeKind, token: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Directedness {
    Undirected,
    Directed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    directedness: Directedness,
    nodes: Vec<NodeRef>,
    index: HashMap<NodeRef, usize>,
    /// Out-neighbours (all neighbours when undirected), sorted by index.
    out: Vec<Vec<(usize, u64)>>,
    /// In-neighbours; empty lists for undirected graphs.
    inc: Vec<Vec<(usize, u64)>>,
    aux: Vec<Option<u64>>,
    link_count: usize,
}

/// Accumulates nodes and links, then freezes them into a [`Graph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    directedness: Directedness,
    nodes: BTreeSet<NodeRef>,
    links: BTreeMap<(NodeRef, NodeRef), u64>,
    aux: BTreeMap<NodeRef, u64>,
}

impl GraphBuilder {
    pub fn new(directedness: Directedness) -> Self {
        Self {
            directedness,
            nodes: BTreeSet::new(),
            links: BTreeMap::new(),
            aux: BTreeMap::new(),
        }
    }

    pub fn add_node(&mut self, node: NodeRef) -> &mut Self {
        self.nodes.insert(node);
        self
    }

    /// Adds `weight` to the link `u`-`v` (or arc `u`->`v`).
    pub fn add_link(&mut self, u: NodeRef, v: NodeRef, weight: u64) -> Result<&mut Self, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if weight == 0 {
            return Err(GraphError::ZeroWeight(u, v));
        }
        let key = match self.directedness {
            Directedness::Undirected if v < u => (v, u),
            _ => (u, v),
        };
        self.nodes.insert(key.0.clone());
        self.nodes.insert(key.1.clone());
        *self.links.entry(key).or_insert(0) += weight;
        Ok(self)
    }

    pub fn set_aux(&mut self, node: NodeRef, value: u64) -> &mut Self {
        self.nodes.insert(node.clone());
        self.aux.insert(node, value);
        self
    }

    pub fn build(self) -> Graph {
        let nodes: Vec<NodeRef> = self.nodes.into_iter().collect();
        let index: HashMap<NodeRef, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let n = nodes.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let link_count = self.links.len();
        for ((u, v), w) in &self.links {
            let (u, v) = (index[u], index[v]);
            out[u].push((v, *w));
            match self.directedness {
                Directedness::Undirected => out[v].push((u, *w)),
                Directedness::Directed => inc[v].push((u, *w)),
            }
        }
        for list in out.iter_mut().chain(inc.iter_mut()) {
            list.sort_unstable();
        }
        let aux = nodes.iter().map(|v| self.aux.get(v).copied()).collect();
        Graph {
            directedness: self.directedness,
            nodes,
            index,
            out,
            inc,
            aux,
            link_count,
        }
    }
}

/// Builds a graph from weighted links plus explicitly declared isolated
/// nodes. Repeated links aggregate by weight summation.
pub fn build_graph(
    directedness: Directedness,
    links: impl IntoIterator<Item = (NodeRef, NodeRef, u64)>,
    isolated: impl IntoIterator<Item = NodeRef>,
) -> Result<Graph, GraphError> {
    let mut b = GraphBuilder::new(directedness);
    for (u, v, w) in links {
        b.add_link(u, v, w)?;
    }
    for v in isolated {
        b.add_node(v);
    }
    Ok(b.build())
}

impl Graph {
    pub fn empty(directedness: Directedness) -> Self {
        GraphBuilder::new(directedness).build()
    }

    pub fn directedness(&self) -> Directedness {
        self.directedness
    }

    pub fn is_directed(&self) -> bool {
        self.directedness == Directedness::Directed
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Edges when undirected, arcs when directed.
    pub fn link_count(&self) -> usize {
        self.link_count
    }

    pub fn nodes(&self) -> &[NodeRef] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &NodeRef {
        &self.nodes[i]
    }

    pub fn index_of(&self, node: &NodeRef) -> Option<usize> {
        self.index.get(node).copied()
    }

    pub fn contains(&self, node: &NodeRef) -> bool {
        self.index.contains_key(node)
    }

    pub fn kinds(&self) -> BTreeSet<NodeKind> {
        self.nodes.iter().map(|n| n.kind).collect()
    }

    pub fn out_links(&self, i: usize) -> &[(usize, u64)] {
        &self.out[i]
    }

    /// In-links of a directed graph; for undirected graphs, all links.
    pub fn in_links(&self, i: usize) -> &[(usize, u64)] {
        match self.directedness {
            Directedness::Undirected => &self.out[i],
            Directedness::Directed => &self.inc[i],
        }
    }

    pub fn aux(&self, i: usize) -> Option<u64> {
        self.aux[i]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        let list = &self.out[u];
        list.binary_search_by_key(&v, |(n, _)| *n)
            .ok()
            .map(|pos| list[pos].1)
    }

    /// Every link once: `u < v` for undirected graphs, `(tail, head)` for arcs.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let undirected = !self.is_directed();
        self.out.iter().enumerate().flat_map(move |(u, list)| {
            list.iter()
                .filter(move |(v, _)| !undirected || u < *v)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    /// Neighbours ignoring direction, each with the summed weight of the
    /// links joining it to `i`.
    pub fn neighbours(&self, i: usize) -> Vec<(usize, u64)> {
        if !self.is_directed() {
            return self.out[i].clone();
        }
        let mut merged: BTreeMap<usize, u64> = BTreeMap::new();
        for &(v, w) in self.out[i].iter().chain(&self.inc[i]) {
            *merged.entry(v).or_insert(0) += w;
        }
        merged.into_iter().collect()
    }

    /// Undirected adjacency lists (indices only), sorted.
    pub fn topology(&self) -> Vec<Vec<usize>> {
        (0..self.node_count())
            .map(|i| self.neighbours(i).into_iter().map(|(v, _)| v).collect())
            .collect()
    }

    /// The undirected view: opposite arcs merge into one edge whose weight
    /// is the sum of both.
    pub fn symmetrized(&self) -> Graph {
        if !self.is_directed() {
            return self.clone();
        }
        let mut b = GraphBuilder::new(Directedness::Undirected);
        for v in &self.nodes {
            b.add_node(v.clone());
        }
        for (i, a) in self.aux.iter().enumerate() {
            if let Some(a) = a {
                b.set_aux(self.nodes[i].clone(), *a);
            }
        }
        for (u, v, w) in self.links() {
            b.add_link(self.nodes[u].clone(), self.nodes[v].clone(), w)
                .expect("source graph is loop-free");
        }
        b.build()
    }

    /// Links as `(u, v, weight)` node triples, in canonical order.
    pub fn link_triples(&self) -> Vec<(NodeRef, NodeRef, u64)> {
        self.links()
            .map(|(u, v, w)| (self.nodes[u].clone(), self.nodes[v].clone(), w))
            .collect()
    }
}

/// One row of the nearest-neighbour table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyRow {
    pub node: NodeRef,
    pub neighbours: Vec<NodeRef>,
    pub degree: usize,
    pub aux_count: u64,
}

/// One row per node in canonical order. Directed graphs list the union of
/// in- and out-neighbours. The aux column comes from `aux` when given,
/// otherwise from the graph's own node attributes, defaulting to 0.
pub fn adjacency_rows(graph: &Graph, aux: Option<&BTreeMap<NodeRef, u64>>) -> Vec<AdjacencyRow> {
    (0..graph.node_count())
        .map(|i| {
            let node = graph.node(i).clone();
            let neighbours: Vec<NodeRef> = graph
                .neighbours(i)
                .into_iter()
                .map(|(v, _)| graph.node(v).clone())
                .collect();
            let aux_count = match aux {
                Some(map) => map.get(&node).copied().unwrap_or(0),
                None => graph.aux(i).unwrap_or(0),
            };
            AdjacencyRow {
                degree: neighbours.len(),
                node,
                neighbours,
                aux_count,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> NodeRef {
        NodeRef::reference(s)
    }

    #[test]
    fn path_degrees() {
        let g = build_graph(Directedness::Undirected, [(t("a"), t("b"), 1), (t("b"), t("c"), 1)], []).unwrap();
        let degrees: Vec<usize> = (0..3).map(|i| g.neighbours(i).len()).collect();
        assert_eq!(degrees, [1, 2, 1]);
        assert_eq!(g.link_count(), 2);
    }

    #[test]
    fn duplicate_links_aggregate() {
        let g = build_graph(Directedness::Undirected, [(t("a"), t("b"), 1), (t("b"), t("a"), 2)], []).unwrap();
        assert_eq!(g.link_count(), 1);
        assert_eq!(g.weight(0, 1), Some(3));
        assert_eq!(g.weight(1, 0), Some(3));
    }

    #[test]
    fn self_loop_rejected() {
        let err = build_graph(Directedness::Undirected, [(t("a"), t("a"), 1)], []).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop(t("a")));
        assert!(build_graph(Directedness::Directed, [(t("a"), t("b"), 0)], []).is_err());
    }

    #[test]
    fn directed_keeps_both_directions_apart() {
        let g = build_graph(Directedness::Directed, [(t("a"), t("b"), 1), (t("b"), t("a"), 1)], []).unwrap();
        assert_eq!(g.link_count(), 2);
        assert_eq!(g.out_links(0), &[(1, 1)]);
        assert_eq!(g.in_links(0), &[(1, 1)]);
        assert_eq!(g.neighbours(0), vec![(1, 2)]);
        let s = g.symmetrized();
        assert_eq!(s.link_count(), 1);
        assert_eq!(s.weight(0, 1), Some(2));
    }

    #[test]
    fn canonical_order_authors_numeric() {
        let g = build_graph(
            Directedness::Undirected,
            [(NodeRef::author(100), NodeRef::author(20), 1)],
            [NodeRef::author(3)],
        )
        .unwrap();
        let ids: Vec<String> = g.nodes().iter().map(ToString::to_string).collect();
        assert_eq!(ids, ["3", "20", "100"]);
    }

    #[test]
    fn isolated_row() {
        let g = build_graph(Directedness::Undirected, [], [NodeRef::author(7)]).unwrap();
        let rows = adjacency_rows(&g, None);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].degree, 0);
        assert!(rows[0].neighbours.is_empty());
        assert_eq!(rows[0].aux_count, 0);
    }

    #[test]
    fn node_parse() {
        assert_eq!(NodeRef::parse(NodeKind::Author, "101").unwrap(), NodeRef::author(101));
        assert!(NodeRef::parse(NodeKind::Author, "x").is_err());
        assert_eq!(
            NodeRef::parse(NodeKind::Paper, "v4n4p14").unwrap().to_string(),
            "v4n4p14"
        );
        assert!(NodeRef::parse(NodeKind::Pacs, "5.5").is_err());
        assert_eq!(NodeRef::parse(NodeKind::Reference, " Phys  Rev ").unwrap(), t("phys rev"));
    }
}
