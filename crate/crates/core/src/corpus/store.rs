//! Corpus persistence: a version header line followed by a JSON body.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{validate_corpus, AffiliationRecord, AuthorRecord, Corpus, CorpusError, PaperRecord};

pub const FORMAT_HEADER: &str = "journet-corpus v1";

#[derive(Serialize)]
struct BodyRef<'a> {
    papers: Vec<&'a PaperRecord>,
    authors: Vec<&'a AuthorRecord>,
    affiliations: Vec<&'a AffiliationRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Body {
    papers: Vec<PaperRecord>,
    authors: Vec<AuthorRecord>,
    affiliations: Vec<AffiliationRecord>,
}

pub fn write_corpus<W: Write>(corpus: &Corpus, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{FORMAT_HEADER}")?;
    let body = BodyRef {
        papers: corpus.papers.values().collect(),
        authors: corpus.authors.values().collect(),
        affiliations: corpus.affiliations.values().collect(),
    };
    serde_json::to_writer_pretty(&mut out, &body)?;
    writeln!(out)
}

/// `name` is only used in diagnostics.
pub fn read_corpus<R: Read>(input: R, name: &str) -> Result<Corpus, CorpusError> {
    let mut reader = BufReader::new(input);
    let mut header = String::new();
    reader.read_line(&mut header).map_err(|source| CorpusError::Io {
        file: name.to_string(),
        source,
    })?;
    let found = header.trim_end_matches(['\r', '\n']);
    if found != FORMAT_HEADER {
        return Err(CorpusError::FormatVersion {
            file: name.to_string(),
            expected: FORMAT_HEADER.to_string(),
            found: found.to_string(),
        });
    }
    let body: Body = serde_json::from_reader(reader).map_err(|e| CorpusError::Corrupt {
        file: name.to_string(),
        message: e.to_string(),
    })?;
    let corpus = Corpus::assemble(body.papers, body.authors, body.affiliations);
    let report = validate_corpus(&corpus);
    if !report.is_empty() {
        return Err(CorpusError::Invalid(report));
    }
    Ok(corpus)
}

pub fn persist_corpus(corpus: &Corpus, path: &Path) -> Result<(), CorpusError> {
    let io_err = |source| CorpusError::Io {
        file: path.display().to_string(),
        source,
    };
    let mut buf = Vec::new();
    write_corpus(corpus, &mut buf).map_err(io_err)?;
    fs::write(path, buf).map_err(io_err)
}

pub fn load_corpus(path: &Path) -> Result<Corpus, CorpusError> {
    let file = fs::File::open(path).map_err(|source| CorpusError::Io {
        file: path.display().to_string(),
        source,
    })?;
    read_corpus(file, &path.display().to_string())
}
