//! Command-line front end. Exit status: 0 on success, 1 on usage errors,
//! 2 on data errors. Diagnostics go to `err`; data goes to `--out` files or
//! to `out`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::communities::{community_of, girvan_newman};
use crate::corpus::{ingest_corpus, load_corpus, persist_corpus, snapshot, Corpus, IngestPaths, TimeIndex};
use crate::graph::{Graph, GraphError, NodeRef};
use crate::io::{export_adjacency_report, export_distribution, export_pajek};
use crate::layers::{build_layer, LayerSpec};
use crate::metrics::{degree_stats, evolution_series, metrics_report, EvolutionMetric};
use crate::retrieval::{neighborhood, overlap_in, rank_in, Direction, RetrievalError};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "journet", version, about = "Bibliometric networks from journal metadata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Kv,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExportFormat {
    Pajek,
    Adjacency,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Out,
    In,
    Both,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Out => Direction::Out,
            DirectionArg::In => Direction::In,
            DirectionArg::Both => Direction::Both,
        }
    }
}

fn parse_layer(s: &str) -> Result<LayerSpec, String> {
    s.parse().map_err(|e: crate::layers::UnknownLayer| e.to_string())
}

#[derive(Debug, Clone)]
struct LayerList(Vec<LayerSpec>);

fn parse_layers(s: &str) -> Result<LayerList, String> {
    s.split(',').map(|t| parse_layer(t.trim())).collect::<Result<_, _>>().map(LayerList)
}

fn parse_metric(s: &str) -> Result<EvolutionMetric, String> {
    s.parse().map_err(|e: crate::metrics::UnknownMetric| e.to_string())
}

fn parse_time(s: &str) -> Result<TimeIndex, String> {
    s.parse().map_err(|e: crate::corpus::IdError| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Read the CSV file set and write a corpus file.
    Ingest {
        #[arg(long)]
        papers: PathBuf,
        #[arg(long)]
        authors: PathBuf,
        /// authorship.csv
        #[arg(long)]
        links: PathBuf,
        /// references.csv
        #[arg(long)]
        refs: PathBuf,
        #[arg(long)]
        affils: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Network statistics for one layer.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_parser = parse_layer)]
        layer: LayerSpec,
        /// Restrict to papers up to this issue, e.g. v4n2.
        #[arg(long, value_parser = parse_time)]
        as_of: Option<TimeIndex>,
        #[arg(long, value_enum, default_value = "kv")]
        format: ReportFormat,
    },
    /// Degree distribution of one layer as CSV.
    Distribution {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_parser = parse_layer)]
        layer: LayerSpec,
        #[arg(long)]
        out: PathBuf,
    },
    /// Girvan-Newman communities of one layer.
    Communities {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_parser = parse_layer)]
        layer: LayerSpec,
        /// Print only the community containing this node.
        #[arg(long)]
        node: Option<String>,
        #[arg(long)]
        dump_dendrogram: bool,
    },
    /// Nodes within a hop distance of a node in one layer.
    Neighbors {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_parser = parse_layer)]
        layer: LayerSpec,
        #[arg(long)]
        node: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "both")]
        direction: DirectionArg,
    },
    /// Nodes adjacent to a node in every listed layer.
    Overlap {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        node: String,
        #[arg(long, value_parser = parse_layers)]
        layers: LayerList,
    },
    /// Nodes adjacent to a node in any listed layer, ranked.
    Rank {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        node: String,
        #[arg(long, value_parser = parse_layers)]
        layers: LayerList,
    },
    /// One metric over cumulative snapshots, one per issue.
    Evolution {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_parser = parse_layer)]
        layer: LayerSpec,
        #[arg(long, value_parser = parse_metric)]
        metric: EvolutionMetric,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a layer as a Pajek network or a nearest-neighbour table.
    Export {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_parser = parse_layer)]
        layer: LayerSpec,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Error> {
    out.write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })
}

/// Resolves a node token against the kinds of `layer`, preferring a kind
/// whose node is present in `graph`.
fn resolve_node(token: &str, layer: LayerSpec, graph: &Graph) -> Result<NodeRef, Error> {
    let mut parsed = None;
    let mut first_err = None;
    for &kind in layer.node_kinds() {
        match NodeRef::parse(kind, token) {
            Ok(n) if graph.contains(&n) => return Ok(n),
            Ok(n) => {
                parsed.get_or_insert(n);
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match (parsed, first_err) {
        (Some(n), _) => Err(RetrievalError::SeedNotInLayer { node: n, layer }.into()),
        (None, Some(e)) => Err(e.into()),
        (None, None) => Err(GraphError::BadNodeId {
            kind: layer.node_kinds()[0],
            token: token.to_string(),
        }
        .into()),
    }
}

fn layer_of(corpus: &Corpus, layer: LayerSpec) -> Graph {
    build_layer(corpus, layer)
}

type BuiltLayers = Vec<(LayerSpec, Graph)>;

fn multi_layer_query(corpus: &Path, token: &str, layers: &[LayerSpec]) -> Result<(BuiltLayers, NodeRef), Error> {
    if layers.len() < 2 {
        return Err(RetrievalError::TooFewLayers(layers.len()).into());
    }
    let corpus = load_corpus(corpus)?;
    let built: BuiltLayers = layers.iter().map(|&l| (l, layer_of(&corpus, l))).collect();
    let seed = resolve_node(token, built[0].0, &built[0].1)?;
    Ok((built, seed))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Error> {
    match command {
        Command::Ingest {
            papers,
            authors,
            links,
            refs,
            affils,
            out: target,
        } => {
            let corpus = ingest_corpus(&IngestPaths {
                papers,
                authors,
                authorship: links,
                references: refs,
                affiliations: affils,
            })?;
            persist_corpus(&corpus, &target)?;
        }
        Command::Stats {
            corpus,
            layer,
            as_of,
            format,
        } => {
            let mut corpus = load_corpus(&corpus)?;
            if let Some(t) = as_of {
                corpus = snapshot(&corpus, t);
            }
            let report = metrics_report(&layer_of(&corpus, layer));
            let text = match format {
                ReportFormat::Kv => report.to_kv(),
                ReportFormat::Csv => report.to_csv(),
            };
            emit(out, &text)?;
        }
        Command::Distribution {
            corpus,
            layer,
            out: target,
        } => {
            let corpus = load_corpus(&corpus)?;
            let stats = degree_stats(&layer_of(&corpus, layer));
            write_file(&target, &export_distribution(&stats.distribution))?;
        }
        Command::Communities {
            corpus,
            layer,
            node,
            dump_dendrogram,
        } => {
            let corpus = load_corpus(&corpus)?;
            let graph = layer_of(&corpus, layer).symmetrized();
            let result = girvan_newman(&graph)?;
            if dump_dendrogram {
                emit(out, &result.dendrogram_dump())?;
            }
            match node {
                Some(token) => {
                    let seed = resolve_node(&token, layer, &graph)?;
                    let mut text = String::from("node_id\n");
                    for n in community_of(&result, &seed)? {
                        text.push_str(&format!("{n}\n"));
                    }
                    emit(out, &text)?;
                }
                None if !dump_dendrogram => emit(out, &result.best_partition().to_csv())?,
                None => {}
            }
        }
        Command::Neighbors {
            corpus,
            layer,
            node,
            depth,
            direction,
        } => {
            let corpus = load_corpus(&corpus)?;
            let graph = layer_of(&corpus, layer);
            let seed = resolve_node(&node, layer, &graph)?;
            emit(out, &neighborhood(&graph, &seed, depth, direction.into())?.to_csv())?;
        }
        Command::Overlap { corpus, node, layers } => {
            let (built, seed) = multi_layer_query(&corpus, &node, &layers.0)?;
            let result = overlap_in(&built, &seed, Direction::Both)?;
            let mut text = String::from("node_id\n");
            for n in &result.common {
                text.push_str(&format!("{n}\n"));
            }
            emit(out, &text)?;
        }
        Command::Rank { corpus, node, layers } => {
            let (built, seed) = multi_layer_query(&corpus, &node, &layers.0)?;
            emit(out, &rank_in(&built, &seed, Direction::Both)?.to_csv())?;
        }
        Command::Evolution {
            corpus,
            layer,
            metric,
            out: target,
        } => {
            let corpus = load_corpus(&corpus)?;
            write_file(&target, &evolution_series(&corpus, layer, metric).to_csv())?;
        }
        Command::Export {
            corpus,
            layer,
            format,
            out: target,
        } => {
            let corpus = load_corpus(&corpus)?;
            let graph = layer_of(&corpus, layer);
            let text = match format {
                ExportFormat::Pajek => export_pajek(&graph),
                ExportFormat::Adjacency => export_adjacency_report(&graph, None),
            };
            write_file(&target, &text)?;
        }
    }
    Ok(())
}
