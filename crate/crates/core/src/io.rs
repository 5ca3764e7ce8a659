//! Text exports: Pajek `.net` networks, the nearest-neighbour report and
//! degree distributions.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{adjacency_rows, Directedness, Graph, GraphBuilder, GraphError, NodeKind, NodeRef};
use crate::metrics::DegreeDistribution;

/// Renders `graph` in Pajek format. Vertices are numbered 1..N in node
/// order and labelled by node id; undirected edges are written once with
/// the smaller index first.
pub fn export_pajek(graph: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "*Vertices {}", graph.node_count()).unwrap();
    for (i, n) in graph.nodes().iter().enumerate() {
        writeln!(out, "{} \"{}\"", i + 1, n).unwrap();
    }
    out.push_str(if graph.is_directed() { "*Arcs\n" } else { "*Edges\n" });
    for (u, v, w) in graph.links() {
        writeln!(out, "{} {} {}", u + 1, v + 1, w).unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PajekError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> PajekError {
    PajekError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a Pajek network, turning each vertex label into a node with
/// `resolve`. A missing link weight reads as 1.
pub fn parse_pajek<F>(text: &str, resolve: F) -> Result<Graph, PajekError>
where
    F: Fn(&str) -> Result<NodeRef, GraphError>,
{
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (first_no, first) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| syntax(1, "empty input"))?;
    let count: usize = first
        .split_whitespace()
        .collect::<Vec<_>>()
        .as_slice()
        .split_first()
        .filter(|(head, _)| head.eq_ignore_ascii_case("*vertices"))
        .and_then(|(_, rest)| rest.first())
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| syntax(first_no, "expected `*Vertices N`"))?;

    let mut vertices = Vec::with_capacity(count);
    while vertices.len() < count {
        let (no, line) = lines.next().ok_or_else(|| syntax(first_no, format!("expected {count} vertices")))?;
        if line.is_empty() {
            continue;
        }
        let (index, label) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| syntax(no, "expected `<index> \"<label>\"`"))?;
        if index.parse::<usize>().ok() != Some(vertices.len() + 1) {
            return Err(syntax(no, format!("expected vertex index {}", vertices.len() + 1)));
        }
        let label = label.trim();
        let label = label
            .strip_prefix('"')
            .and_then(|l| l.strip_suffix('"'))
            .unwrap_or(label);
        let node = resolve(label).map_err(|source| PajekError::Graph { line: no, source })?;
        vertices.push(node);
    }

    let (mut no, mut section) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .unwrap_or((first_no, "*Edges"));
    let directedness = if section.eq_ignore_ascii_case("*edges") {
        Directedness::Undirected
    } else if section.eq_ignore_ascii_case("*arcs") {
        Directedness::Directed
    } else {
        return Err(syntax(no, format!("expected *Edges or *Arcs, found {section:?}")));
    };
    let mut b = GraphBuilder::new(directedness);
    for v in &vertices {
        b.add_node(v.clone());
    }
    for (line_no, line) in lines {
        (no, section) = (line_no, line);
        if section.is_empty() {
            continue;
        }
        let fields: Vec<&str> = section.split_whitespace().collect();
        let vertex = |s: &str| -> Result<NodeRef, PajekError> {
            s.parse::<usize>()
                .ok()
                .filter(|i| (1..=vertices.len()).contains(i))
                .map(|i| vertices[i - 1].clone())
                .ok_or_else(|| syntax(no, format!("vertex index {s:?} out of range")))
        };
        let weight = match fields.get(2) {
            None => 1,
            Some(w) => w.parse().map_err(|_| syntax(no, format!("weight {w:?} is not a positive integer")))?,
        };
        if fields.len() < 2 || fields.len() > 3 {
            return Err(syntax(no, "expected `<i> <j> [<w>]`"));
        }
        b.add_link(vertex(fields[0])?, vertex(fields[1])?, weight)
            .map_err(|source| PajekError::Graph { line: no, source })?;
    }
    Ok(b.build())
}

/// [`parse_pajek`] for graphs whose nodes all have one kind.
pub fn parse_pajek_kind(text: &str, kind: NodeKind) -> Result<Graph, PajekError> {
    parse_pajek(text, |label| NodeRef::parse(kind, label))
}

fn csv_text(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
}

/// The nearest-neighbour table as CSV:
/// `node_id,neighbour_ids,degree,aux_count`, neighbour ids space-separated.
pub fn export_adjacency_report(
    graph: &Graph,
    aux: Option<&std::collections::BTreeMap<NodeRef, u64>>,
) -> String {
    let header = ["node_id", "neighbour_ids", "degree", "aux_count"].map(String::from).to_vec();
    let rows = adjacency_rows(graph, aux).into_iter().map(|r| {
        let ids: Vec<String> = r.neighbours.iter().map(ToString::to_string).collect();
        vec![r.node.to_string(), ids.join(" "), r.degree.to_string(), r.aux_count.to_string()]
    });
    csv_text(std::iter::once(header).chain(rows))
}

/// `degree,count,fraction` rows in ascending degree.
pub fn export_distribution(dist: &DegreeDistribution) -> String {
    let header = ["degree", "count", "fraction"].map(String::from).to_vec();
    let rows = dist.fractions().into_iter().map(|(k, p)| {
        vec![k.to_string(), dist.counts[&k].to_string(), p.to_string()]
    });
    csv_text(std::iter::once(header).chain(rows))
}
