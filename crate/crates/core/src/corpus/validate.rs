use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Corpus, CorpusIndexes, PaperId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    PaperIdMismatch,
    AuthorIdMismatch,
    AffiliationIdMismatch,
    EmptyAuthors,
    DuplicateAuthor,
    UnknownAuthor,
    UnknownAffiliation,
    UnknownPaper,
    SelfCitation,
    DuplicateReference,
    InconsistentReference,
    IndexMismatch,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PaperIdMismatch => "paper-id-mismatch",
            Self::AuthorIdMismatch => "author-id-mismatch",
            Self::AffiliationIdMismatch => "affiliation-id-mismatch",
            Self::EmptyAuthors => "empty-authors",
            Self::DuplicateAuthor => "duplicate-author",
            Self::UnknownAuthor => "unknown-author",
            Self::UnknownAffiliation => "unknown-affiliation",
            Self::UnknownPaper => "unknown-paper",
            Self::SelfCitation => "self-citation",
            Self::DuplicateReference => "duplicate-reference",
            Self::InconsistentReference => "inconsistent-reference",
            Self::IndexMismatch => "index-mismatch",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub kind: ViolationKind,
    /// The record holding the bad value, e.g. `paper v4n4p14`.
    pub subject: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    fn push(&mut self, kind: ViolationKind, subject: String, detail: String) {
        self.violations.push(Violation {
            kind,
            subject,
            detail,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{}: {}: {}", v.kind, v.subject, v.detail)?;
        }
        Ok(())
    }
}

/// Lists every invariant the corpus violates. Read-only; an empty report
/// means the corpus is valid.
pub fn validate_corpus(corpus: &Corpus) -> ValidationReport {
    use ViolationKind::*;
    let mut report = ValidationReport::default();

    // internal target recorded per reference key, to detect disagreement
    let mut key_targets: BTreeMap<&str, BTreeSet<Option<PaperId>>> = BTreeMap::new();

    for (id, p) in &corpus.papers {
        let subject = format!("paper {id}");
        if p.paper_id != *id {
            report.push(PaperIdMismatch, subject.clone(), format!("stored under {id} but record says {}", p.paper_id));
        }
        if (p.volume, p.issue) != (p.paper_id.volume, p.paper_id.issue) {
            report.push(
                PaperIdMismatch,
                subject.clone(),
                format!("volume/issue {}/{} disagree with the id", p.volume, p.issue),
            );
        }
        if p.author_ids.is_empty() {
            report.push(EmptyAuthors, subject.clone(), "no authors".into());
        }
        let mut seen = BTreeSet::new();
        for a in &p.author_ids {
            if !seen.insert(*a) {
                report.push(DuplicateAuthor, subject.clone(), format!("author {a} listed twice"));
            } else if !corpus.authors.contains_key(a) {
                report.push(UnknownAuthor, subject.clone(), format!("author {a}"));
            }
        }
        let mut keys = BTreeSet::new();
        for r in &p.reference_keys {
            if !keys.insert(r.key.as_str()) {
                report.push(DuplicateReference, subject.clone(), format!("reference {:?} listed twice", r.key));
            }
            key_targets.entry(&r.key).or_default().insert(r.internal_paper_id);
            if let Some(target) = r.internal_paper_id {
                if target == *id {
                    report.push(SelfCitation, subject.clone(), format!("reference {:?}", r.key));
                } else if !corpus.papers.contains_key(&target) {
                    report.push(UnknownPaper, subject.clone(), format!("cites paper {target}"));
                }
            }
        }
    }

    for (key, targets) in key_targets {
        if targets.len() > 1 {
            let list: Vec<String> = targets
                .iter()
                .map(|t| t.map_or_else(|| "external".to_string(), |p| p.to_string()))
                .collect();
            report.push(
                InconsistentReference,
                format!("reference {key:?}"),
                format!("resolves to {}", list.join(", ")),
            );
        }
    }

    for (id, a) in &corpus.authors {
        let subject = format!("author {id}");
        if a.author_id != *id {
            report.push(AuthorIdMismatch, subject.clone(), format!("record says {}", a.author_id));
        }
        for f in &a.affiliation_ids {
            if !corpus.affiliations.contains_key(f) {
                report.push(UnknownAffiliation, subject.clone(), format!("affiliation {f}"));
            }
        }
    }

    for (id, f) in &corpus.affiliations {
        if f.affiliation_id != *id {
            report.push(
                AffiliationIdMismatch,
                format!("affiliation {id}"),
                format!("record says {}", f.affiliation_id),
            );
        }
    }

    let rebuilt = CorpusIndexes::build(&corpus.papers);
    let stored = corpus.indexes();
    for (name, same) in [
        ("author->papers", rebuilt.author_papers == stored.author_papers),
        ("pacs->papers", rebuilt.pacs_papers == stored.pacs_papers),
        ("reference->citers", rebuilt.reference_citers == stored.reference_citers),
    ] {
        if !same {
            report.push(IndexMismatch, format!("index {name}"), "stale; rebuild indexes".into());
        }
    }

    report
}
