use thiserror::Error;

use crate::communities::CommunityError;
use crate::corpus::CorpusError;
use crate::graph::GraphError;
use crate::io::PajekError;
use crate::retrieval::RetrievalError;

/// Any failure surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Community(#[from] CommunityError),
    #[error(transparent)]
    Retrieval(#[from] RetrievalError),
    #[error(transparent)]
    Pajek(#[from] PajekError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
