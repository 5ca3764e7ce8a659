//! Bibliometric networks built from journal metadata.
//!
//! A [`corpus::Corpus`] holds the papers, authors, affiliations, PACS
//! codes and reference lists of one journal. [`layers`] turns it into the
//! co-authorship, citation, co-citation, bibliographic-coupling, common-PACS
//! and bipartite author/paper networks; [`metrics`] and [`communities`]
//! analyse each network; [`retrieval`] compares a node's neighbours across
//! networks; [`io`] writes Pajek and CSV reports.

pub mod cli;
pub mod communities;
pub mod corpus;
mod error;
pub mod graph;
pub mod io;
pub mod layers;
pub mod metrics;
pub mod retrieval;

pub use error::Error;
pub use graph::{Directedness, Graph, NodeId, NodeKind, NodeRef};
pub use layers::LayerSpec;
