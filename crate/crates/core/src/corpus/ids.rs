//! Identifier types shared by the corpus records.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("paper id {0:?} is not of the form v<volume>n<issue>p<seq>")]
    PaperId(String),
    #[error("PACS code {0:?} is not of the form NN.NN.xx")]
    Pacs(String),
    #[error("time index {0:?} is not of the form v<volume>n<issue>")]
    TimeIndex(String),
    #[error("reference key is empty after normalization")]
    EmptyReference,
}

pub type AuthorId = u64;
pub type AffiliationId = u64;

/// Parses the digits following `tag` at the start of `s`, returning the
/// value and the rest. Leading zeros and zero itself are rejected so that
/// the textual form stays canonical.
fn take_number(s: &str, tag: char) -> Option<(u32, &str)> {
    let s = s.strip_prefix(tag)?;
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    let digits = &s[..end];
    if digits.is_empty() || digits.starts_with('0') {
        return None;
    }
    Some((digits.parse().ok()?, &s[end..]))
}

/// Journal paper identifier in canonical `v{volume}n{issue}p{seq}` form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PaperId {
    pub volume: u32,
    pub issue: u32,
    pub seq: u32,
}

impl PaperId {
    pub fn new(volume: u32, issue: u32, seq: u32) -> Self {
        Self { volume, issue, seq }
    }

    pub fn time_index(&self) -> TimeIndex {
        TimeIndex::new(self.volume, self.issue)
    }
}

impl fmt::Display for PaperId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}n{}p{}", self.volume, self.issue, self.seq)
    }
}

impl FromStr for PaperId {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IdError::PaperId(s.to_string());
        let (volume, rest) = take_number(s, 'v').ok_or_else(bad)?;
        let (issue, rest) = take_number(rest, 'n').ok_or_else(bad)?;
        let (seq, rest) = take_number(rest, 'p').ok_or_else(bad)?;
        if !rest.is_empty() {
            return Err(bad());
        }
        Ok(Self { volume, issue, seq })
    }
}

impl TryFrom<String> for PaperId {
    type Error = IdError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PaperId> for String {
    fn from(id: PaperId) -> Self {
        id.to_string()
    }
}

/// Publication time proxy: a (volume, issue) pair, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimeIndex {
    pub volume: u32,
    pub issue: u32,
}

impl TimeIndex {
    pub fn new(volume: u32, issue: u32) -> Self {
        Self { volume, issue }
    }
}

impl fmt::Display for TimeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}n{}", self.volume, self.issue)
    }
}

impl FromStr for TimeIndex {
    type Err = IdError;

    /// Accepts `vVnI`; unlike paper ids, zero is allowed so that `v0n0`
    /// can name the time before the first issue.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IdError::TimeIndex(s.to_string());
        let rest = s.strip_prefix('v').ok_or_else(bad)?;
        let (volume, issue) = rest.split_once('n').ok_or_else(bad)?;
        let num = |t: &str| -> Result<u32, IdError> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        Ok(Self::new(num(volume)?, num(issue)?))
    }
}

/// A PACS classification code such as `05.50.+q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PacsCode(String);

impl PacsCode {
    pub fn parse(s: &str) -> Result<Self, IdError> {
        let b = s.as_bytes();
        let digit = |i: usize| b[i].is_ascii_digit();
        let tail = |i: usize| b[i].is_ascii_alphanumeric() || matches!(b[i], b'+' | b'-' | b'*');
        let ok = b.len() == 8
            && digit(0)
            && digit(1)
            && b[2] == b'.'
            && digit(3)
            && digit(4)
            && b[5] == b'.'
            && tail(6)
            && tail(7);
        if ok {
            Ok(Self(s.to_string()))
        } else {
            Err(IdError::Pacs(s.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PacsCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for PacsCode {
    type Error = IdError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Self::parse(&s)
    }
}

impl From<PacsCode> for String {
    fn from(code: PacsCode) -> Self {
        code.0
    }
}

/// Trim, collapse internal whitespace to single spaces and case-fold.
pub fn normalize_reference(raw: &str) -> String {
    raw.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// An entry of a paper's reference list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReferenceKey {
    pub key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub internal_paper_id: Option<PaperId>,
}

impl ReferenceKey {
    pub fn new(raw: &str, internal_paper_id: Option<PaperId>) -> Result<Self, IdError> {
        let key = normalize_reference(raw);
        if key.is_empty() {
            return Err(IdError::EmptyReference);
        }
        Ok(Self {
            key,
            internal_paper_id,
        })
    }

    pub fn external(raw: &str) -> Result<Self, IdError> {
        Self::new(raw, None)
    }
}
