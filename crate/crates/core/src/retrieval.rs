//! Related-item queries: neighbourhoods within one layer, and the
//! intersection and ranking of a node's neighbours across several layers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::corpus::Corpus;
use crate::graph::{Graph, NodeRef};
use crate::layers::{build_layer, LayerSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RetrievalError {
    #[error("node {0} is not in the graph")]
    UnknownSeed(NodeRef),
    #[error("node {node} is not in layer {layer}")]
    SeedNotInLayer { node: NodeRef, layer: LayerSpec },
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("at least two layers are needed, got {0}")]
    TooFewLayers(usize),
    #[error("layer {layer} has no {kind} nodes (seed {node})")]
    KindMismatch {
        node: NodeRef,
        kind: crate::graph::NodeKind,
        layer: LayerSpec,
    },
}

/// Which arcs a traversal may follow in a directed graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    Out,
    In,
    #[default]
    Both,
}

fn step(graph: &Graph, i: usize, direction: Direction) -> Vec<(usize, u64)> {
    if !graph.is_directed() {
        return graph.out_links(i).to_vec();
    }
    match direction {
        Direction::Out => graph.out_links(i).to_vec(),
        Direction::In => graph.in_links(i).to_vec(),
        Direction::Both => graph.neighbours(i),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodResult {
    pub seed: NodeRef,
    pub depth: usize,
    /// Hop distance of every node within `depth`, seed excluded.
    pub members: BTreeMap<NodeRef, usize>,
}

impl NeighborhoodResult {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["node_id", "distance"]).expect("in-memory write");
        for (n, d) in &self.members {
            w.write_record([n.to_string(), d.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
    }
}

/// The BFS ball of radius `depth` around `seed`, minus the seed.
pub fn neighborhood(
    graph: &Graph,
    seed: &NodeRef,
    depth: usize,
    direction: Direction,
) -> Result<NeighborhoodResult, RetrievalError> {
    if depth == 0 {
        return Err(RetrievalError::ZeroDepth);
    }
    let s = graph
        .index_of(seed)
        .ok_or_else(|| RetrievalError::UnknownSeed(seed.clone()))?;
    let mut dist: BTreeMap<usize, usize> = BTreeMap::from([(s, 0)]);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        if d == depth {
            continue;
        }
        for (v, _) in step(graph, u, direction) {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(v) {
                e.insert(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist.remove(&s);
    Ok(NeighborhoodResult {
        seed: seed.clone(),
        depth,
        members: dist.into_iter().map(|(v, d)| (graph.node(v).clone(), d)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapResult {
    pub seed: NodeRef,
    pub layers: Vec<LayerSpec>,
    /// Nodes adjacent to the seed in every layer.
    pub common: BTreeSet<NodeRef>,
    pub per_layer: BTreeMap<LayerSpec, BTreeSet<NodeRef>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedEntry {
    pub node: NodeRef,
    pub layer_count: usize,
    pub weight_sum: u64,
}

/// Sorted by layer count, then weight sum (both descending), then node id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankedRelated {
    pub entries: Vec<RankedEntry>,
}

impl RankedRelated {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["node_id", "layer_count", "weight_sum"]).expect("in-memory write");
        for e in &self.entries {
            w.write_record([e.node.to_string(), e.layer_count.to_string(), e.weight_sum.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
    }
}

/// Weighted depth-1 neighbours of `seed` in one prebuilt layer.
fn adjacent(
    layer: LayerSpec,
    graph: &Graph,
    seed: &NodeRef,
    direction: Direction,
) -> Result<BTreeMap<NodeRef, u64>, RetrievalError> {
    if !layer.node_kinds().contains(&seed.kind) {
        return Err(RetrievalError::KindMismatch {
            node: seed.clone(),
            kind: seed.kind,
            layer,
        });
    }
    let i = graph.index_of(seed).ok_or_else(|| RetrievalError::SeedNotInLayer {
        node: seed.clone(),
        layer,
    })?;
    Ok(step(graph, i, direction)
        .into_iter()
        .map(|(v, w)| (graph.node(v).clone(), w))
        .collect())
}

fn check_layer_count(n: usize) -> Result<(), RetrievalError> {
    if n < 2 {
        Err(RetrievalError::TooFewLayers(n))
    } else {
        Ok(())
    }
}

fn build_all(corpus: &Corpus, layers: &[LayerSpec]) -> Vec<(LayerSpec, Graph)> {
    layers.iter().map(|&l| (l, build_layer(corpus, l))).collect()
}

/// [`layer_overlap`] over layers that were already built.
pub fn overlap_in(
    layers: &[(LayerSpec, Graph)],
    seed: &NodeRef,
    direction: Direction,
) -> Result<OverlapResult, RetrievalError> {
    check_layer_count(layers.len())?;
    let mut per_layer = BTreeMap::new();
    for (spec, graph) in layers {
        let nb = adjacent(*spec, graph, seed, direction)?;
        per_layer.insert(*spec, nb.into_keys().collect::<BTreeSet<_>>());
    }
    let mut sets = per_layer.values();
    let first = sets.next().cloned().unwrap_or_default();
    let common = sets.fold(first, |acc, s| acc.intersection(s).cloned().collect());
    Ok(OverlapResult {
        seed: seed.clone(),
        layers: layers.iter().map(|(l, _)| *l).collect(),
        common,
        per_layer,
    })
}

/// Nodes adjacent to `seed` in every listed layer. Citation adjacency
/// counts both citing and cited papers.
pub fn layer_overlap(corpus: &Corpus, seed: &NodeRef, layers: &[LayerSpec]) -> Result<OverlapResult, RetrievalError> {
    check_layer_count(layers.len())?;
    overlap_in(&build_all(corpus, layers), seed, Direction::Both)
}

/// [`related_rank`] over layers that were already built.
pub fn rank_in(
    layers: &[(LayerSpec, Graph)],
    seed: &NodeRef,
    direction: Direction,
) -> Result<RankedRelated, RetrievalError> {
    check_layer_count(layers.len())?;
    let mut tally: BTreeMap<NodeRef, (usize, u64)> = BTreeMap::new();
    let mut seen_layers = BTreeSet::new();
    for (spec, graph) in layers {
        // a layer listed twice counts once
        if !seen_layers.insert(*spec) {
            continue;
        }
        for (node, w) in adjacent(*spec, graph, seed, direction)? {
            let t = tally.entry(node).or_insert((0, 0));
            t.0 += 1;
            t.1 += w;
        }
    }
    let mut entries: Vec<RankedEntry> = tally
        .into_iter()
        .map(|(node, (layer_count, weight_sum))| RankedEntry {
            node,
            layer_count,
            weight_sum,
        })
        .collect();
    entries.sort_by(|a, b| {
        b.layer_count
            .cmp(&a.layer_count)
            .then(b.weight_sum.cmp(&a.weight_sum))
            .then_with(|| a.node.cmp(&b.node))
    });
    Ok(RankedRelated { entries })
}

/// Every node adjacent to `seed` in at least one layer, ranked by how many
/// layers link it to the seed and then by the summed link weights.
pub fn related_rank(corpus: &Corpus, seed: &NodeRef, layers: &[LayerSpec]) -> Result<RankedRelated, RetrievalError> {
    check_layer_count(layers.len())?;
    rank_in(&build_all(corpus, layers), seed, Direction::Both)
}
