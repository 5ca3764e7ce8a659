//! CSV ingestion.
//!
//! All five files are UTF-8 with a header row. Multi-valued cells (PACS
//! codes, affiliation ids) are `;`-separated. Any bad row aborts the whole
//! ingestion; there is no partial corpus.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::path::{Path, PathBuf};

use super::{
    validate_corpus, AffiliationRecord, AuthorId, AuthorRecord, Corpus, CorpusError, PacsCode,
    PaperId, PaperRecord, ReferenceKey,
};

#[derive(Debug, Clone)]
pub struct IngestPaths {
    pub papers: PathBuf,
    pub authors: PathBuf,
    pub authorship: PathBuf,
    pub references: PathBuf,
    pub affiliations: Option<PathBuf>,
}

struct Table {
    file: String,
    columns: HashMap<String, usize>,
    rows: Vec<(u64, csv::StringRecord)>,
}

impl Table {
    fn read(path: &Path, required: &[&str]) -> Result<Self, CorpusError> {
        let file = path.display().to_string();
        let handle = File::open(path).map_err(|source| CorpusError::Io {
            file: file.clone(),
            source,
        })?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(handle);
        let csv_err = |e: csv::Error, file: &str| {
            let line = e.position().map_or(0, |p| p.line());
            CorpusError::Malformed {
                file: file.to_string(),
                line,
                message: e.to_string(),
            }
        };
        let headers = reader.headers().map_err(|e| csv_err(e, &file))?.clone();
        let columns: HashMap<String, usize> = headers
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim_start_matches('\u{feff}').to_string(), i))
            .collect();
        for col in required {
            if !columns.contains_key(*col) {
                return Err(CorpusError::Malformed {
                    file,
                    line: 1,
                    message: format!("missing column {col:?} (expected {})", required.join(",")),
                });
            }
        }
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| csv_err(e, &file))?;
            let line = rec.position().map_or(0, |p| p.line());
            rows.push((line, rec));
        }
        Ok(Self {
            file,
            columns,
            rows,
        })
    }

    fn cell<'r>(&self, rec: &'r csv::StringRecord, col: &str) -> &'r str {
        rec.get(self.columns[col]).unwrap_or("")
    }

    fn malformed(&self, line: u64, message: impl Into<String>) -> CorpusError {
        CorpusError::Malformed {
            file: self.file.clone(),
            line,
            message: message.into(),
        }
    }

    fn duplicate(&self, line: u64, what: &'static str, id: impl ToString) -> CorpusError {
        CorpusError::Duplicate {
            file: self.file.clone(),
            line,
            what,
            id: id.to_string(),
        }
    }

    fn dangling(&self, line: u64, what: &'static str, id: impl ToString) -> CorpusError {
        CorpusError::Dangling {
            file: self.file.clone(),
            line,
            what,
            id: id.to_string(),
        }
    }

    fn int<T: std::str::FromStr>(&self, line: u64, col: &str, raw: &str) -> Result<T, CorpusError> {
        raw.parse()
            .map_err(|_| self.malformed(line, format!("{col} {raw:?} is not an integer")))
    }

    fn paper_id(&self, line: u64, raw: &str) -> Result<PaperId, CorpusError> {
        raw.parse().map_err(|e| self.malformed(line, format!("{e}")))
    }
}

fn split_list(raw: &str) -> impl Iterator<Item = &str> {
    raw.split(';').map(str::trim).filter(|s| !s.is_empty())
}

/// Reads the CSV file set into a validated [`Corpus`].
pub fn ingest_corpus(paths: &IngestPaths) -> Result<Corpus, CorpusError> {
    let mut affiliations: BTreeMap<u64, AffiliationRecord> = BTreeMap::new();
    if let Some(path) = &paths.affiliations {
        let t = Table::read(path, &["affiliation_id", "name", "country"])?;
        for (line, rec) in &t.rows {
            let line = *line;
            let id: u64 = t.int(line, "affiliation_id", t.cell(rec, "affiliation_id"))?;
            let country = t.cell(rec, "country");
            let record = AffiliationRecord {
                affiliation_id: id,
                name: t.cell(rec, "name").to_string(),
                country: (!country.is_empty()).then(|| country.to_string()),
            };
            if affiliations.insert(id, record).is_some() {
                return Err(t.duplicate(line, "affiliation", id));
            }
        }
    }

    let mut authors: BTreeMap<AuthorId, AuthorRecord> = BTreeMap::new();
    let t = Table::read(&paths.authors, &["author_id", "name", "affiliation_ids"])?;
    for (line, rec) in &t.rows {
        let line = *line;
        let id: AuthorId = t.int(line, "author_id", t.cell(rec, "author_id"))?;
        let mut record = AuthorRecord {
            author_id: id,
            name: t.cell(rec, "name").to_string(),
            affiliation_ids: Default::default(),
        };
        for raw in split_list(t.cell(rec, "affiliation_ids")) {
            let aff: u64 = t.int(line, "affiliation_ids", raw)?;
            if !affiliations.contains_key(&aff) {
                return Err(t.dangling(line, "affiliation", aff));
            }
            record.affiliation_ids.insert(aff);
        }
        if authors.insert(id, record).is_some() {
            return Err(t.duplicate(line, "author", id));
        }
    }

    let mut papers: BTreeMap<PaperId, PaperRecord> = BTreeMap::new();
    let t = Table::read(&paths.papers, &["paper_id", "title", "volume", "issue", "year", "pacs"])?;
    for (line, rec) in &t.rows {
        let line = *line;
        let id = t.paper_id(line, t.cell(rec, "paper_id"))?;
        let volume: u32 = t.int(line, "volume", t.cell(rec, "volume"))?;
        let issue: u32 = t.int(line, "issue", t.cell(rec, "issue"))?;
        if (volume, issue) != (id.volume, id.issue) {
            return Err(t.malformed(
                line,
                format!("volume/issue {volume}/{issue} disagree with paper id {id}"),
            ));
        }
        let year = match t.cell(rec, "year") {
            "" => None,
            raw => Some(t.int(line, "year", raw)?),
        };
        let mut record = PaperRecord::new(id, t.cell(rec, "title"));
        record.year = year;
        for raw in split_list(t.cell(rec, "pacs")) {
            let code = PacsCode::parse(raw).map_err(|e| t.malformed(line, e.to_string()))?;
            record.pacs_codes.insert(code);
        }
        if papers.insert(id, record).is_some() {
            return Err(t.duplicate(line, "paper", id));
        }
    }

    let t = Table::read(&paths.authorship, &["paper_id", "author_id", "position"])?;
    let mut bylines: BTreeMap<PaperId, BTreeMap<u32, AuthorId>> = BTreeMap::new();
    for (line, rec) in &t.rows {
        let line = *line;
        let paper = t.paper_id(line, t.cell(rec, "paper_id"))?;
        let author: AuthorId = t.int(line, "author_id", t.cell(rec, "author_id"))?;
        let position: u32 = t.int(line, "position", t.cell(rec, "position"))?;
        if position == 0 {
            return Err(t.malformed(line, "position is 1-based"));
        }
        if !papers.contains_key(&paper) {
            return Err(t.dangling(line, "paper", paper));
        }
        if !authors.contains_key(&author) {
            return Err(t.dangling(line, "author", author));
        }
        let byline = bylines.entry(paper).or_default();
        if byline.values().any(|a| *a == author) {
            return Err(t.duplicate(line, "author on paper", format!("{author} on {paper}")));
        }
        if byline.insert(position, author).is_some() {
            return Err(t.duplicate(line, "author position", format!("{position} on {paper}")));
        }
    }
    for (paper, byline) in bylines {
        papers.get_mut(&paper).expect("checked above").author_ids = byline.into_values().collect();
    }

    let t = Table::read(&paths.references, &["citing_paper_id", "ref_key", "internal_paper_id"])?;
    for (line, rec) in &t.rows {
        let line = *line;
        let citing = t.paper_id(line, t.cell(rec, "citing_paper_id"))?;
        if !papers.contains_key(&citing) {
            return Err(t.dangling(line, "paper", citing));
        }
        let internal = match t.cell(rec, "internal_paper_id") {
            "" => None,
            raw => {
                let id = t.paper_id(line, raw)?;
                if !papers.contains_key(&id) {
                    return Err(t.dangling(line, "paper", id));
                }
                if id == citing {
                    return Err(t.malformed(line, format!("paper {id} cites itself")));
                }
                Some(id)
            }
        };
        let key = ReferenceKey::new(t.cell(rec, "ref_key"), internal)
            .map_err(|e| t.malformed(line, e.to_string()))?;
        let refs = &mut papers.get_mut(&citing).expect("checked above").reference_keys;
        if refs.iter().any(|r| r.key == key.key) {
            return Err(t.duplicate(line, "reference", format!("{:?} in {citing}", key.key)));
        }
        refs.push(key);
    }
    for p in papers.values_mut() {
        p.reference_keys.sort();
    }

    let corpus = Corpus::assemble(papers.into_values(), authors.into_values(), affiliations.into_values());
    let report = validate_corpus(&corpus);
    if report.is_empty() {
        Ok(corpus)
    } else {
        Err(CorpusError::Invalid(report))
    }
}
