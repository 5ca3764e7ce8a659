//! Standard network statistics and their evolution over corpus snapshots.
//!
//! Weights never enter these computations; paths are hop counts, and
//! directed graphs are read as undirected for clustering and paths.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{snapshot, Corpus, TimeIndex};
use crate::graph::{Graph, NodeRef};
use crate::layers::{build_layer, LayerSpec};

/// Degree k -> number of nodes with that degree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DegreeDistribution {
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeDistribution {
    pub fn node_count(&self) -> usize {
        self.counts.values().sum()
    }

    /// P(k) = N(k) / node count.
    pub fn fractions(&self) -> Vec<(usize, f64)> {
        let n = self.node_count() as f64;
        self.counts.iter().map(|(&k, &c)| (k, c as f64 / n)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    pub mean: f64,
    pub max: usize,
    pub distribution: DegreeDistribution,
    /// Mean in- and out-degree, directed graphs only.
    pub mean_in_out: Option<(f64, f64)>,
}

/// Per-node degrees: neighbour count for undirected graphs, in + out arc
/// count for directed ones.
pub fn degrees(graph: &Graph) -> Vec<usize> {
    (0..graph.node_count())
        .map(|i| {
            if graph.is_directed() {
                graph.out_links(i).len() + graph.in_links(i).len()
            } else {
                graph.out_links(i).len()
            }
        })
        .collect()
}

pub fn degree_stats(graph: &Graph) -> DegreeStats {
    let degrees = degrees(graph);
    let n = degrees.len();
    let mut distribution = DegreeDistribution::default();
    for &k in &degrees {
        *distribution.counts.entry(k).or_insert(0) += 1;
    }
    let mean = if n == 0 {
        0.0
    } else {
        degrees.iter().sum::<usize>() as f64 / n as f64
    };
    let mean_in_out = (graph.is_directed() && n > 0).then(|| {
        let arcs = graph.link_count() as f64;
        (arcs / n as f64, arcs / n as f64)
    });
    DegreeStats {
        mean,
        max: degrees.iter().copied().max().unwrap_or(0),
        distribution,
        mean_in_out,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Local coefficient per node, in node order.
    pub per_node: Vec<f64>,
    /// Links among each node's neighbours.
    pub triangles: Vec<usize>,
    pub mean: f64,
    pub max: f64,
}

impl Clustering {
    pub fn of(&self, graph: &Graph, node: &NodeRef) -> Option<f64> {
        graph.index_of(node).map(|i| self.per_node[i])
    }

    /// Global transitivity: 3 x triangles / connected triples.
    pub fn transitivity(&self, topology: &[Vec<usize>]) -> f64 {
        let closed: usize = self.triangles.iter().sum();
        let triples: usize = topology.iter().map(|n| n.len() * n.len().saturating_sub(1) / 2).sum();
        if triples == 0 {
            0.0
        } else {
            closed as f64 / triples as f64
        }
    }
}

/// Local clustering C(v) = 2 T(v) / (k (k - 1)), with C(v) = 0 when k < 2.
/// The mean runs over all nodes.
pub fn clustering(graph: &Graph) -> Clustering {
    let topo = graph.topology();
    let triangles: Vec<usize> = (0..topo.len())
        .into_par_iter()
        .map(|v| {
            let nb = &topo[v];
            let mut t = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if topo[a].binary_search(&b).is_ok() {
                        t += 1;
                    }
                }
            }
            t
        })
        .collect();
    let per_node: Vec<f64> = topo
        .iter()
        .zip(&triangles)
        .map(|(nb, &t)| {
            let k = nb.len();
            if k < 2 {
                0.0
            } else {
                (2 * t) as f64 / (k * (k - 1)) as f64
            }
        })
        .collect();
    let n = per_node.len();
    let mean = if n == 0 { 0.0 } else { per_node.iter().sum::<f64>() / n as f64 };
    let max = per_node.iter().copied().fold(0.0, f64::max);
    Clustering {
        per_node,
        triangles,
        mean,
        max,
    }
}

/// Hop distances from `source`; `None` for unreachable nodes.
pub fn bfs_distances(topology: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; topology.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].expect("queued nodes have a distance");
        for &v in &topology[u] {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Connected components as sorted index lists, ordered by their smallest node.
pub fn components(topology: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; topology.len()];
    let mut out = Vec::new();
    for s in 0..topology.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &topology[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathStats {
    pub mean_shortest_path: f64,
    pub diameter: usize,
    pub component_count: usize,
    pub giant_component_size: usize,
}

/// Component structure plus mean distance and diameter over the largest
/// component (the one with the smallest node on size ties).
pub fn path_stats(graph: &Graph) -> PathStats {
    let topo = graph.topology();
    let comps = components(&topo);
    let giant = comps
        .iter()
        .fold(None::<&Vec<usize>>, |best, c| match best {
            Some(b) if b.len() >= c.len() => Some(b),
            _ => Some(c),
        })
        .cloned()
        .unwrap_or_default();
    let (sum, diameter) = giant
        .par_iter()
        .map(|&s| {
            let dist = bfs_distances(&topo, s);
            giant.iter().fold((0usize, 0usize), |(sum, max), &t| {
                let d = dist[t].expect("same component");
                (sum + d, max.max(d))
            })
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1.max(b.1)));
    let size = giant.len();
    // every unordered pair was counted from both ends
    let pairs = size * size.saturating_sub(1);
    let mean_shortest_path = if pairs == 0 { 0.0 } else { sum as f64 / pairs as f64 };
    PathStats {
        mean_shortest_path,
        diameter,
        component_count: comps.len(),
        giant_component_size: size,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub node_count: usize,
    pub link_count: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub mean_clustering: f64,
    pub max_clustering: f64,
    pub mean_shortest_path: f64,
    pub diameter: usize,
    pub component_count: usize,
    pub giant_component_size: usize,
}

pub fn metrics_report(graph: &Graph) -> MetricsReport {
    let deg = degree_stats(graph);
    let cl = clustering(graph);
    let paths = path_stats(graph);
    MetricsReport {
        node_count: graph.node_count(),
        link_count: graph.link_count(),
        mean_degree: deg.mean,
        max_degree: deg.max,
        mean_clustering: cl.mean,
        max_clustering: cl.max,
        mean_shortest_path: paths.mean_shortest_path,
        diameter: paths.diameter,
        component_count: paths.component_count,
        giant_component_size: paths.giant_component_size,
    }
}

impl MetricsReport {
    /// (key, rendered value) pairs in report order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("nodes", self.node_count.to_string()),
            ("links", self.link_count.to_string()),
            ("mean_degree", self.mean_degree.to_string()),
            ("max_degree", self.max_degree.to_string()),
            ("mean_clustering", self.mean_clustering.to_string()),
            ("max_clustering", self.max_clustering.to_string()),
            ("mean_path", self.mean_shortest_path.to_string()),
            ("diameter", self.diameter.to_string()),
            ("components", self.component_count.to_string()),
            ("giant_size", self.giant_component_size.to_string()),
        ]
    }

    pub fn to_kv(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        for (k, v) in self.entries() {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvolutionMetric {
    NodeCount,
    LinkCount,
    MeanDegree,
    MeanClustering,
    GiantComponentSize,
    ComponentCount,
}

impl EvolutionMetric {
    pub const ALL: [EvolutionMetric; 6] = [
        Self::NodeCount,
        Self::LinkCount,
        Self::MeanDegree,
        Self::MeanClustering,
        Self::GiantComponentSize,
        Self::ComponentCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::NodeCount => "node_count",
            Self::LinkCount => "link_count",
            Self::MeanDegree => "mean_degree",
            Self::MeanClustering => "mean_clustering",
            Self::GiantComponentSize => "giant_component_size",
            Self::ComponentCount => "component_count",
        }
    }

    pub fn evaluate(self, graph: &Graph) -> f64 {
        match self {
            Self::NodeCount => graph.node_count() as f64,
            Self::LinkCount => graph.link_count() as f64,
            Self::MeanDegree => degree_stats(graph).mean,
            Self::MeanClustering => clustering(graph).mean,
            Self::GiantComponentSize => path_stats(graph).giant_component_size as f64,
            Self::ComponentCount => path_stats(graph).component_count as f64,
        }
    }
}

impl fmt::Display for EvolutionMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown metric {name:?}; valid metrics: {valid}")]
pub struct UnknownMetric {
    pub name: String,
    pub valid: String,
}

impl FromStr for EvolutionMetric {
    type Err = UnknownMetric;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| UnknownMetric {
            name: s.to_string(),
            valid: Self::ALL.map(Self::name).join(", "),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSeries {
    pub layer: LayerSpec,
    pub metric: EvolutionMetric,
    pub points: Vec<(TimeIndex, f64)>,
}

impl EvolutionSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("as_of,value\n");
        for (t, v) in &self.points {
            out.push_str(&format!("{t},{v}\n"));
        }
        out
    }
}

/// The metric on the cumulative snapshot at every issue present in the corpus.
pub fn evolution_series(corpus: &Corpus, layer: LayerSpec, metric: EvolutionMetric) -> EvolutionSeries {
    let points = corpus
        .time_indices()
        .into_par_iter()
        .map(|t| (t, metric.evaluate(&build_layer(&snapshot(corpus, t), layer))))
        .collect();
    EvolutionSeries {
        layer,
        metric,
        points,
    }
}
