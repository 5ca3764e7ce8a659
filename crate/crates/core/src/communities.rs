//! Divisive community detection by repeated removal of the edge with the
//! highest shortest-path betweenness, scored by modularity.
//!
//! Everything here works on the unweighted, undirected topology of a graph.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, NodeRef};
use crate::metrics::{bfs_distances, components};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommunityError {
    #[error("modularity is undefined for a graph without edges")]
    NoEdges,
    #[error("partition covers {found} nodes but the graph has {expected}")]
    PartitionMismatch { expected: usize, found: usize },
    #[error("node {0} is not in the analyzed graph")]
    UnknownNode(NodeRef),
}

/// Betweenness per undirected edge, keyed by (smaller, larger) endpoint.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeBetweennessMap {
    pub values: BTreeMap<(NodeRef, NodeRef), f64>,
}

impl EdgeBetweennessMap {
    pub fn get(&self, u: &NodeRef, v: &NodeRef) -> Option<f64> {
        let key = if u <= v { (u.clone(), v.clone()) } else { (v.clone(), u.clone()) };
        self.values.get(&key).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

type EdgeList = Vec<(usize, usize)>;

/// Edges of a topology as `(u, v)` with `u < v`, plus per-node
/// `(neighbour, edge index)` lists.
fn index_edges(topo: &[Vec<usize>]) -> (EdgeList, Vec<EdgeList>) {
    let mut edges = Vec::new();
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (u, nb) in topo.iter().enumerate() {
        for &v in nb {
            if u < v {
                ids.insert((u, v), edges.len());
                edges.push((u, v));
            }
        }
    }
    let incident = topo
        .iter()
        .enumerate()
        .map(|(u, nb)| nb.iter().map(|&v| (v, ids[&(u.min(v), u.max(v))])).collect())
        .collect();
    (edges, incident)
}

/// Dependency accumulation from one source over shortest paths.
fn accumulate_from(source: usize, incident: &[Vec<(usize, usize)>], scores: &mut [f64]) {
    let n = incident.len();
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::from([source]);
    sigma[source] = 1.0;
    dist[source] = 0;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(w, e) in &incident[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push((v, e));
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    for &w in order.iter().rev() {
        for &(v, e) in &preds[w] {
            let c = sigma[v] / sigma[w] * (1.0 + delta[w]);
            scores[e] += c;
            delta[v] += c;
        }
    }
}

const SOURCE_CHUNK: usize = 32;

/// Betweenness per edge index. Sources are summed in fixed chunks and the
/// chunks in order, so the result does not depend on thread scheduling.
fn betweenness_scores(edge_count: usize, incident: &[Vec<(usize, usize)>]) -> Vec<f64> {
    let n = incident.len();
    let sources: Vec<usize> = (0..n).filter(|&s| !incident[s].is_empty()).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut scores = vec![0.0; edge_count];
            for &s in chunk {
                accumulate_from(s, incident, &mut scores);
            }
            scores
        })
        .collect();
    let mut total = vec![0.0; edge_count];
    for p in partials {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    // each unordered pair was seen from both of its ends
    total.iter_mut().for_each(|x| *x /= 2.0);
    total
}

/// Shortest-path edge betweenness over unordered node pairs, splitting each
/// pair's unit of flow evenly over its shortest paths.
pub fn edge_betweenness(graph: &Graph) -> EdgeBetweennessMap {
    let topo = graph.topology();
    let (edges, incident) = index_edges(&topo);
    let scores = betweenness_scores(edges.len(), &incident);
    EdgeBetweennessMap {
        values: edges
            .iter()
            .zip(scores)
            .map(|(&(u, v), b)| ((graph.node(u).clone(), graph.node(v).clone()), b))
            .collect(),
    }
}

/// A hard assignment of every node to one community, with labels
/// renumbered so that communities are numbered in order of their smallest
/// node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    nodes: Vec<NodeRef>,
    labels: Vec<usize>,
    count: usize,
}

impl Partition {
    /// `raw` holds any labels, one per node of `graph` in node order.
    pub fn from_labels(graph: &Graph, raw: &[usize]) -> Result<Self, CommunityError> {
        if raw.len() != graph.node_count() {
            return Err(CommunityError::PartitionMismatch {
                expected: graph.node_count(),
                found: raw.len(),
            });
        }
        let mut canon: BTreeMap<usize, usize> = BTreeMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = canon.len();
                *canon.entry(*l).or_insert(next)
            })
            .collect();
        Ok(Self {
            nodes: graph.nodes().to_vec(),
            labels,
            count: canon.len(),
        })
    }

    pub fn from_map(graph: &Graph, map: &BTreeMap<NodeRef, usize>) -> Result<Self, CommunityError> {
        if map.len() != graph.node_count() {
            return Err(CommunityError::PartitionMismatch {
                expected: graph.node_count(),
                found: map.len(),
            });
        }
        let raw: Result<Vec<usize>, _> = graph
            .nodes()
            .iter()
            .map(|n| map.get(n).copied().ok_or_else(|| CommunityError::UnknownNode(n.clone())))
            .collect();
        Self::from_labels(graph, &raw?)
    }

    fn from_components(graph: &Graph, comps: &[Vec<usize>]) -> Self {
        let mut raw = vec![0; graph.node_count()];
        for (c, members) in comps.iter().enumerate() {
            for &v in members {
                raw[v] = c;
            }
        }
        Self::from_labels(graph, &raw).expect("components cover the graph")
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn nodes(&self) -> &[NodeRef] {
        &self.nodes
    }

    pub fn label_of(&self, node: &NodeRef) -> Option<usize> {
        self.nodes.binary_search(node).ok().map(|i| self.labels[i])
    }

    pub fn members(&self, label: usize) -> Vec<NodeRef> {
        self.nodes
            .iter()
            .zip(&self.labels)
            .filter(|(_, l)| **l == label)
            .map(|(n, _)| n.clone())
            .collect()
    }

    /// `node_id,community_label` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["node_id", "community_label"]).expect("in-memory write");
        for (n, l) in self.nodes.iter().zip(&self.labels) {
            w.write_record([n.to_string(), l.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
    }
}

/// Modularity as an exact fraction `numerator / (4 m^2)`.
fn modularity_fraction(topo: &[Vec<usize>], labels: &[usize], count: usize) -> Option<(i128, i128)> {
    let m: usize = topo.iter().map(Vec::len).sum::<usize>() / 2;
    if m == 0 {
        return None;
    }
    let mut inside = vec![0i128; count];
    let mut degree = vec![0i128; count];
    for (u, nb) in topo.iter().enumerate() {
        degree[labels[u]] += nb.len() as i128;
        for &v in nb {
            if u < v && labels[u] == labels[v] {
                inside[labels[u]] += 1;
            }
        }
    }
    let m = m as i128;
    let num = inside
        .iter()
        .zip(&degree)
        .map(|(l, d)| 4 * m * l - d * d)
        .sum();
    Some((num, 4 * m * m))
}

/// Q = sum over communities of L_c / m - (d_c / 2m)^2, unweighted.
///
/// Evaluated as one integer fraction and a single division, so rational
/// values are rounded once.
pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64, CommunityError> {
    if partition.nodes() != graph.nodes() {
        return Err(CommunityError::PartitionMismatch {
            expected: graph.node_count(),
            found: partition.nodes().len(),
        });
    }
    let (num, den) = modularity_fraction(&graph.topology(), partition.labels(), partition.community_count())
        .ok_or(CommunityError::NoEdges)?;
    Ok(num as f64 / den as f64)
}

/// One recorded state of the edge-removal process.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub removed_edges: usize,
    pub partition: Partition,
    pub modularity: f64,
    q_numerator: i128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommunityResult {
    /// The initial state, then one entry per increase in component count.
    pub levels: Vec<Level>,
    /// Index into `levels` of the highest-modularity partition.
    pub best: usize,
    /// Edges removed in order, as (smaller, larger) endpoint pairs.
    pub removal_order: Vec<(NodeRef, NodeRef)>,
}

impl CommunityResult {
    pub fn best_level(&self) -> &Level {
        &self.levels[self.best]
    }

    pub fn best_partition(&self) -> &Partition {
        &self.best_level().partition
    }

    /// One `removed_edges=<k> communities=<c> Q=<value>` line per level.
    pub fn dendrogram_dump(&self) -> String {
        self.levels
            .iter()
            .map(|l| {
                format!(
                    "removed_edges={} communities={} Q={}\n",
                    l.removed_edges,
                    l.partition.community_count(),
                    l.modularity
                )
            })
            .collect()
    }
}

/// Relative slack under which two betweenness values count as tied.
const TIE_EPS: f64 = 1e-9;

/// Removes edges one at a time, always the current highest-betweenness
/// edge (ties go to the smallest `(min endpoint, max endpoint)`), and
/// records the component partition, scored against the original graph,
/// whenever the component count grows. The best level maximizes
/// modularity; ties prefer fewer communities, then the earlier level.
pub fn girvan_newman(graph: &Graph) -> Result<CommunityResult, CommunityError> {
    let original = graph.topology();
    let edge_total: usize = original.iter().map(Vec::len).sum::<usize>() / 2;
    if edge_total == 0 {
        return Err(CommunityError::NoEdges);
    }
    let mut topo = original.clone();
    let mut levels = Vec::new();
    let mut removal_order = Vec::with_capacity(edge_total);

    let record = |topo: &[Vec<usize>], removed: usize, levels: &mut Vec<Level>| {
        let comps = components(topo);
        let partition = Partition::from_components(graph, &comps);
        let (num, den) = modularity_fraction(&original, partition.labels(), partition.community_count())
            .expect("original graph has edges");
        levels.push(Level {
            removed_edges: removed,
            modularity: num as f64 / den as f64,
            q_numerator: num,
            partition,
        });
        comps.len()
    };

    let mut component_count = record(&topo, 0, &mut levels);
    for removed in 1..=edge_total {
        let (edges, incident) = index_edges(&topo);
        let scores = betweenness_scores(edges.len(), &incident);
        let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let cutoff = top - TIE_EPS * top.abs().max(1.0);
        // edges are listed in ascending (u, v) order
        let (u, v) = edges
            .iter()
            .zip(&scores)
            .find(|(_, &b)| b >= cutoff)
            .map(|(e, _)| *e)
            .expect("graph still has edges");
        topo[u].retain(|&x| x != v);
        topo[v].retain(|&x| x != u);
        removal_order.push((graph.node(u).clone(), graph.node(v).clone()));
        if bfs_distances(&topo, u)[v].is_none() {
            let now = record(&topo, removed, &mut levels);
            debug_assert_eq!(now, component_count + 1);
            component_count = now;
        }
    }

    let best = levels
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| {
            a.q_numerator
                .cmp(&b.q_numerator)
                .then(b.partition.community_count().cmp(&a.partition.community_count()))
                .then(j.cmp(i))
        })
        .map(|(i, _)| i)
        .expect("initial level is always recorded");

    Ok(CommunityResult {
        levels,
        best,
        removal_order,
    })
}

/// Members of `node`'s community in the best partition, sorted.
pub fn community_of(result: &CommunityResult, node: &NodeRef) -> Result<Vec<NodeRef>, CommunityError> {
    let p = result.best_partition();
    let label = p.label_of(node).ok_or_else(|| CommunityError::UnknownNode(node.clone()))?;
    Ok(p.members(label))
}
