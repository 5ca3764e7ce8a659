//! The network catalog: bipartite relations read off the corpus, their
//! one-mode projections, and the directly built citation, co-citation and
//! bibliographic-coupling layers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::{Corpus, PaperId};
use crate::graph::{Directedness, Graph, GraphBuilder, NodeKind, NodeRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LayerSpec {
    CoAuthorship,
    PaperCommonAuthor,
    PaperCitation,
    PaperCommonPacs,
    CoCitation,
    BibliographicCoupling,
    AuthorCommonPacs,
    BipartiteAuthorPaper,
    BipartitePaperPacs,
    BipartitePaperReference,
}

impl LayerSpec {
    pub const ALL: [LayerSpec; 10] = [
        Self::CoAuthorship,
        Self::PaperCommonAuthor,
        Self::PaperCitation,
        Self::PaperCommonPacs,
        Self::CoCitation,
        Self::BibliographicCoupling,
        Self::AuthorCommonPacs,
        Self::BipartiteAuthorPaper,
        Self::BipartitePaperPacs,
        Self::BipartitePaperReference,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Self::CoAuthorship => "coauthorship",
            Self::PaperCommonAuthor => "paper-common-author",
            Self::PaperCitation => "paper-citation",
            Self::PaperCommonPacs => "paper-common-pacs",
            Self::CoCitation => "cocitation",
            Self::BibliographicCoupling => "coupling",
            Self::AuthorCommonPacs => "author-common-pacs",
            Self::BipartiteAuthorPaper => "bipartite-author-paper",
            Self::BipartitePaperPacs => "bipartite-paper-pacs",
            Self::BipartitePaperReference => "bipartite-paper-reference",
        }
    }

    pub fn is_directed(self) -> bool {
        self == Self::PaperCitation
    }

    /// Node kinds the layer contains.
    pub fn node_kinds(self) -> &'static [NodeKind] {
        use NodeKind::*;
        match self {
            Self::CoAuthorship | Self::AuthorCommonPacs => &[Author],
            Self::PaperCommonAuthor
            | Self::PaperCitation
            | Self::PaperCommonPacs
            | Self::BibliographicCoupling => &[Paper],
            Self::CoCitation => &[Reference],
            Self::BipartiteAuthorPaper => &[Author, Paper],
            Self::BipartitePaperPacs => &[Paper, Pacs],
            Self::BipartitePaperReference => &[Paper, Reference],
        }
    }

    pub fn valid_tokens() -> String {
        Self::ALL.map(Self::token).join(", ")
    }
}

impl fmt::Display for LayerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown layer {token:?}; valid layers: {valid}")]
pub struct UnknownLayer {
    pub token: String,
    pub valid: String,
}

impl FromStr for LayerSpec {
    type Err = UnknownLayer;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|l| l.token() == s)
            .ok_or_else(|| UnknownLayer {
                token: s.to_string(),
                valid: Self::valid_tokens(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BipartiteKind {
    AuthorPaper,
    PaperPacs,
    PaperReference,
    /// Author linked to every code used on one of their papers.
    AuthorPacs,
}

impl BipartiteKind {
    pub fn sides(self) -> (NodeKind, NodeKind) {
        match self {
            Self::AuthorPaper => (NodeKind::Author, NodeKind::Paper),
            Self::PaperPacs => (NodeKind::Paper, NodeKind::Pacs),
            Self::PaperReference => (NodeKind::Paper, NodeKind::Reference),
            Self::AuthorPacs => (NodeKind::Author, NodeKind::Pacs),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BipartiteError {
    #[error("left and right node kinds must differ (both {0})")]
    SameKinds(NodeKind),
    #[error("node {node} has kind {kind}, expected {left} or {right}")]
    ForeignKind {
        node: NodeRef,
        kind: NodeKind,
        left: NodeKind,
        right: NodeKind,
    },
    #[error("link {0} - {1} joins two nodes of the same side")]
    IntraSide(NodeRef, NodeRef),
    #[error("a bipartite graph must be undirected")]
    Directed,
}

/// An undirected graph with two node kinds and links only across them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    graph: Graph,
    left: NodeKind,
    right: NodeKind,
}

impl BipartiteGraph {
    /// Wraps `graph`, checking every node and link by scan.
    pub fn new(graph: Graph, left: NodeKind, right: NodeKind) -> Result<Self, BipartiteError> {
        if left == right {
            return Err(BipartiteError::SameKinds(left));
        }
        if graph.is_directed() {
            return Err(BipartiteError::Directed);
        }
        if let Some(node) = graph.nodes().iter().find(|n| n.kind != left && n.kind != right) {
            return Err(BipartiteError::ForeignKind {
                node: node.clone(),
                kind: node.kind,
                left,
                right,
            });
        }
        if let Some((u, v, _)) = graph.links().find(|&(u, v, _)| graph.node(u).kind == graph.node(v).kind) {
            return Err(BipartiteError::IntraSide(graph.node(u).clone(), graph.node(v).clone()));
        }
        Ok(Self { graph, left, right })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn left(&self) -> NodeKind {
        self.left
    }

    pub fn right(&self) -> NodeKind {
        self.right
    }

    pub fn kind_of(&self, side: Side) -> NodeKind {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }
}

fn author_nodes(corpus: &Corpus) -> impl Iterator<Item = NodeRef> + '_ {
    corpus.authors.keys().map(|a| NodeRef::author(*a))
}

fn paper_nodes(corpus: &Corpus) -> impl Iterator<Item = NodeRef> + '_ {
    corpus.papers.keys().map(|p| NodeRef::paper(*p))
}

/// Reads one of the bipartite relations off the corpus. Every paper (and,
/// for author relations, every author) is a node even when it has no
/// counterpart; codes and cited works appear only when used.
pub fn build_bipartite(corpus: &Corpus, kind: BipartiteKind) -> BipartiteGraph {
    let mut b = GraphBuilder::new(Directedness::Undirected);
    match kind {
        BipartiteKind::AuthorPaper => {
            author_nodes(corpus).for_each(|n| {
                b.add_node(n);
            });
            paper_nodes(corpus).for_each(|n| {
                b.add_node(n);
            });
            for p in corpus.papers.values() {
                for a in &p.author_ids {
                    b.add_link(NodeRef::author(*a), NodeRef::paper(p.paper_id), 1)
                        .expect("distinct kinds");
                }
            }
        }
        BipartiteKind::PaperPacs => {
            paper_nodes(corpus).for_each(|n| {
                b.add_node(n);
            });
            for p in corpus.papers.values() {
                for c in &p.pacs_codes {
                    b.add_link(NodeRef::paper(p.paper_id), NodeRef::pacs(c), 1)
                        .expect("distinct kinds");
                }
            }
        }
        BipartiteKind::PaperReference => {
            paper_nodes(corpus).for_each(|n| {
                b.add_node(n);
            });
            for p in corpus.papers.values() {
                for r in &p.reference_keys {
                    b.add_link(NodeRef::paper(p.paper_id), NodeRef::reference(&r.key), 1)
                        .expect("distinct kinds");
                }
            }
        }
        BipartiteKind::AuthorPacs => {
            author_nodes(corpus).for_each(|n| {
                b.add_node(n);
            });
            for (author, papers) in &corpus.indexes().author_papers {
                let codes: std::collections::BTreeSet<_> = papers
                    .iter()
                    .filter_map(|p| corpus.papers.get(p))
                    .flat_map(|p| p.pacs_codes.iter())
                    .collect();
                for c in codes {
                    b.add_link(NodeRef::author(*author), NodeRef::pacs(c), 1)
                        .expect("distinct kinds");
                }
            }
        }
    }
    let (left, right) = kind.sides();
    BipartiteGraph::new(b.build(), left, right).expect("constructed across kinds")
}

/// Collapses a bipartite graph onto one side: two nodes are joined when
/// they share at least one counterpart, with weight equal to the number of
/// shared counterparts. Every node of that side is kept.
pub fn project_one_mode(bipartite: &BipartiteGraph, side: Side) -> Graph {
    let g = bipartite.graph();
    let keep = bipartite.kind_of(side);
    let mut pairs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for c in 0..g.node_count() {
        if g.node(c).kind == keep {
            continue;
        }
        let members = g.out_links(c);
        for (i, &(u, _)) in members.iter().enumerate() {
            for &(v, _) in &members[i + 1..] {
                *pairs.entry((u, v)).or_insert(0) += 1;
            }
        }
    }
    let mut b = GraphBuilder::new(Directedness::Undirected);
    for (i, n) in g.nodes().iter().enumerate() {
        if n.kind == keep {
            b.add_node(n.clone());
            if let Some(a) = g.aux(i) {
                b.set_aux(n.clone(), a);
            }
        }
    }
    for ((u, v), w) in pairs {
        b.add_link(g.node(u).clone(), g.node(v).clone(), w)
            .expect("distinct nodes");
    }
    b.build()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LayerOptions {
    /// Restrict co-citation nodes to works that are papers of the journal.
    pub internal_only_cocitation: bool,
}

pub fn build_layer(corpus: &Corpus, spec: LayerSpec) -> Graph {
    build_layer_with(corpus, spec, LayerOptions::default())
}

pub fn build_layer_with(corpus: &Corpus, spec: LayerSpec, opts: LayerOptions) -> Graph {
    match spec {
        LayerSpec::CoAuthorship => {
            let projected = project_one_mode(&build_bipartite(corpus, BipartiteKind::AuthorPaper), Side::Left);
            with_paper_counts(corpus, projected)
        }
        LayerSpec::PaperCommonAuthor => {
            project_one_mode(&build_bipartite(corpus, BipartiteKind::AuthorPaper), Side::Right)
        }
        LayerSpec::PaperCommonPacs => {
            project_one_mode(&build_bipartite(corpus, BipartiteKind::PaperPacs), Side::Left)
        }
        LayerSpec::AuthorCommonPacs => {
            project_one_mode(&build_bipartite(corpus, BipartiteKind::AuthorPacs), Side::Left)
        }
        LayerSpec::PaperCitation => citation(corpus),
        LayerSpec::CoCitation => cocitation(corpus, opts.internal_only_cocitation),
        LayerSpec::BibliographicCoupling => coupling(corpus),
        LayerSpec::BipartiteAuthorPaper => {
            build_bipartite(corpus, BipartiteKind::AuthorPaper).into_graph()
        }
        LayerSpec::BipartitePaperPacs => build_bipartite(corpus, BipartiteKind::PaperPacs).into_graph(),
        LayerSpec::BipartitePaperReference => {
            build_bipartite(corpus, BipartiteKind::PaperReference).into_graph()
        }
    }
}

fn with_paper_counts(corpus: &Corpus, graph: Graph) -> Graph {
    let mut b = GraphBuilder::new(Directedness::Undirected);
    for n in graph.nodes() {
        if let crate::graph::NodeId::Int(a) = n.id {
            b.set_aux(n.clone(), corpus.paper_count(a) as u64);
        }
    }
    for (u, v, w) in graph.link_triples() {
        b.add_link(u, v, w).expect("projection is loop-free");
    }
    b.build()
}

/// Arcs run from the citing paper to the cited one.
fn citation(corpus: &Corpus) -> Graph {
    let mut b = GraphBuilder::new(Directedness::Directed);
    paper_nodes(corpus).for_each(|n| {
        b.add_node(n);
    });
    for p in corpus.papers.values() {
        for target in p.reference_keys.iter().filter_map(|r| r.internal_paper_id) {
            b.add_link(NodeRef::paper(p.paper_id), NodeRef::paper(target), 1)
                .expect("self-citations are rejected at ingest");
        }
    }
    b.build()
}

/// Each reference list contributes one co-citation to every pair it contains.
fn cocitation(corpus: &Corpus, internal_only: bool) -> Graph {
    let mut b = GraphBuilder::new(Directedness::Undirected);
    for p in corpus.papers.values() {
        let cited: Vec<&str> = p
            .reference_keys
            .iter()
            .filter(|r| !internal_only || r.internal_paper_id.is_some())
            .map(|r| r.key.as_str())
            .collect();
        for (i, x) in cited.iter().enumerate() {
            b.add_node(NodeRef::reference(x));
            for y in &cited[i + 1..] {
                b.add_link(NodeRef::reference(x), NodeRef::reference(y), 1)
                    .expect("reference lists hold distinct keys");
            }
        }
    }
    b.build()
}

/// Papers weighted by the number of references they share, counted through
/// the reference -> citing papers index.
fn coupling(corpus: &Corpus) -> Graph {
    let mut b = GraphBuilder::new(Directedness::Undirected);
    paper_nodes(corpus).for_each(|n| {
        b.add_node(n);
    });
    for citers in corpus.indexes().reference_citers.values() {
        let citers: Vec<&PaperId> = citers.iter().collect();
        for (i, p) in citers.iter().enumerate() {
            for q in &citers[i + 1..] {
                b.add_link(NodeRef::paper(**p), NodeRef::paper(**q), 1)
                    .expect("distinct papers");
            }
        }
    }
    b.build()
}
