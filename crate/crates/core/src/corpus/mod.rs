//! Journal metadata: papers, authors, affiliations, PACS assignments and
//! reference lists, with derived inverted indexes.
//!
//! A [`Corpus`] is assembled from records and is not mutated afterwards by
//! any analysis code. The record maps are public so that callers (and
//! tests) can inspect them directly; [`validate_corpus`] reports any
//! invariant a hand-edited corpus breaks.

mod ids;
mod ingest;
mod store;
mod validate;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ids::{
    normalize_reference, AffiliationId, AuthorId, IdError, PacsCode, PaperId, ReferenceKey,
    TimeIndex,
};
pub use ingest::{ingest_corpus, IngestPaths};
pub use store::{load_corpus, persist_corpus, read_corpus, write_corpus, FORMAT_HEADER};
pub use validate::{validate_corpus, ValidationReport, Violation, ViolationKind};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: malformed row: {message}")]
    Malformed {
        file: String,
        line: u64,
        message: String,
    },
    #[error("{file}:{line}: duplicate {what} {id}")]
    Duplicate {
        file: String,
        line: u64,
        what: &'static str,
        id: String,
    },
    #[error("{file}:{line}: unknown {what} {id}")]
    Dangling {
        file: String,
        line: u64,
        what: &'static str,
        id: String,
    },
    #[error("corpus failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error("{file}: unsupported corpus format: expected {expected:?}, found {found:?}")]
    FormatVersion {
        file: String,
        expected: String,
        found: String,
    },
    #[error("{file}: corrupt corpus body: {message}")]
    Corrupt { file: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: PaperId,
    pub title: String,
    pub volume: u32,
    pub issue: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    /// Authors in byline order.
    pub author_ids: Vec<AuthorId>,
    pub pacs_codes: BTreeSet<PacsCode>,
    /// Sorted by key; the input files carry no reference order.
    pub reference_keys: Vec<ReferenceKey>,
}

impl PaperRecord {
    pub fn new(paper_id: PaperId, title: impl Into<String>) -> Self {
        Self {
            paper_id,
            title: title.into(),
            volume: paper_id.volume,
            issue: paper_id.issue,
            year: None,
            author_ids: Vec::new(),
            pacs_codes: BTreeSet::new(),
            reference_keys: Vec::new(),
        }
    }

    pub fn time_index(&self) -> TimeIndex {
        TimeIndex::new(self.volume, self.issue)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRecord {
    pub author_id: AuthorId,
    pub name: String,
    pub affiliation_ids: BTreeSet<AffiliationId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffiliationRecord {
    pub affiliation_id: AffiliationId,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
}

/// Inverted indexes derived from the paper records.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusIndexes {
    pub author_papers: BTreeMap<AuthorId, BTreeSet<PaperId>>,
    pub pacs_papers: BTreeMap<PacsCode, BTreeSet<PaperId>>,
    pub reference_citers: BTreeMap<String, BTreeSet<PaperId>>,
}

impl CorpusIndexes {
    pub fn build(papers: &BTreeMap<PaperId, PaperRecord>) -> Self {
        let mut idx = Self::default();
        for (id, p) in papers {
            for a in &p.author_ids {
                idx.author_papers.entry(*a).or_default().insert(*id);
            }
            for c in &p.pacs_codes {
                idx.pacs_papers.entry(c.clone()).or_default().insert(*id);
            }
            for r in &p.reference_keys {
                idx.reference_citers
                    .entry(r.key.clone())
                    .or_default()
                    .insert(*id);
            }
        }
        idx
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub papers: BTreeMap<PaperId, PaperRecord>,
    pub authors: BTreeMap<AuthorId, AuthorRecord>,
    pub affiliations: BTreeMap<AffiliationId, AffiliationRecord>,
    indexes: CorpusIndexes,
}

impl Corpus {
    /// Builds a corpus and its indexes without validating it.
    pub fn assemble(
        papers: impl IntoIterator<Item = PaperRecord>,
        authors: impl IntoIterator<Item = AuthorRecord>,
        affiliations: impl IntoIterator<Item = AffiliationRecord>,
    ) -> Self {
        let papers: BTreeMap<_, _> = papers.into_iter().map(|p| (p.paper_id, p)).collect();
        let authors = authors.into_iter().map(|a| (a.author_id, a)).collect();
        let affiliations = affiliations
            .into_iter()
            .map(|a| (a.affiliation_id, a))
            .collect();
        let indexes = CorpusIndexes::build(&papers);
        Self {
            papers,
            authors,
            affiliations,
            indexes,
        }
    }

    /// Like [`Corpus::assemble`], but rejects a corpus with any violation.
    pub fn from_records(
        papers: impl IntoIterator<Item = PaperRecord>,
        authors: impl IntoIterator<Item = AuthorRecord>,
        affiliations: impl IntoIterator<Item = AffiliationRecord>,
    ) -> Result<Self, CorpusError> {
        let corpus = Self::assemble(papers, authors, affiliations);
        let report = validate_corpus(&corpus);
        if report.is_empty() {
            Ok(corpus)
        } else {
            Err(CorpusError::Invalid(report))
        }
    }

    pub fn indexes(&self) -> &CorpusIndexes {
        &self.indexes
    }

    /// Recomputes the derived indexes after the record maps were edited.
    pub fn rebuild_indexes(&mut self) {
        self.indexes = CorpusIndexes::build(&self.papers);
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty() && self.authors.is_empty() && self.affiliations.is_empty()
    }

    pub fn papers_of(&self, author: AuthorId) -> impl Iterator<Item = &PaperId> {
        self.indexes.author_papers.get(&author).into_iter().flatten()
    }

    pub fn paper_count(&self, author: AuthorId) -> usize {
        self.indexes
            .author_papers
            .get(&author)
            .map_or(0, BTreeSet::len)
    }

    /// Distinct (volume, issue) pairs of the papers, ascending.
    pub fn time_indices(&self) -> Vec<TimeIndex> {
        let set: BTreeSet<TimeIndex> = self.papers.values().map(PaperRecord::time_index).collect();
        set.into_iter().collect()
    }
}

/// The corpus as it stood at `as_of`: papers with `(volume, issue) <= as_of`,
/// the authors of those papers and the affiliations of those authors.
///
/// An internal reference to a paper published after `as_of` is kept as an
/// external reference, since the cited paper is not part of the snapshot.
pub fn snapshot(corpus: &Corpus, as_of: TimeIndex) -> Corpus {
    let papers: Vec<PaperRecord> = corpus
        .papers
        .values()
        .filter(|p| p.time_index() <= as_of)
        .cloned()
        .collect();
    let kept: BTreeSet<PaperId> = papers.iter().map(|p| p.paper_id).collect();
    let papers: Vec<PaperRecord> = papers
        .into_iter()
        .map(|mut p| {
            for r in &mut p.reference_keys {
                if r.internal_paper_id.is_some_and(|q| !kept.contains(&q)) {
                    r.internal_paper_id = None;
                }
            }
            p
        })
        .collect();
    let author_ids: BTreeSet<AuthorId> = papers
        .iter()
        .flat_map(|p| p.author_ids.iter().copied())
        .collect();
    let authors: Vec<AuthorRecord> = author_ids
        .iter()
        .filter_map(|a| corpus.authors.get(a).cloned())
        .collect();
    let affiliation_ids: BTreeSet<AffiliationId> = authors
        .iter()
        .flat_map(|a| a.affiliation_ids.iter().copied())
        .collect();
    let affiliations: Vec<AffiliationRecord> = affiliation_ids
        .iter()
        .filter_map(|a| corpus.affiliations.get(a).cloned())
        .collect();
    Corpus::assemble(papers, authors, affiliations)
}
