//! OEIS b-file parsing and cross-checks against computed gross sequences.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::ser_nat;
use crate::star_core::{GrossSeq, StarError};
use crate::Nat;

const A000058: &str = include_str!("../fixtures/A000058.txt");
const A082732: &str = include_str!("../fixtures/A082732.txt");

#[derive(Debug, Error)]
pub enum OeisError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("no bundled cross-check for sequence {0} (known: A000058, A082732)")]
    UnknownSequence(String),
    #[error("fetching {id}: {reason}")]
    Fetch { id: String, reason: String },
    #[error(transparent)]
    Star(#[from] StarError),
}

/// A parsed b-file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub sequence_id: String,
    pub entries: Vec<(u64, Nat)>,
}

impl BFile {
    pub fn parse(sequence_id: &str, text: &str) -> Result<BFile, OeisError> {
        let mut entries: Vec<(u64, Nat)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let err = |reason: String| OeisError::Parse { line, reason };
            let mut fields = body.split_whitespace();
            let (Some(i), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(err(format!("expected `index value`, got `{body}`")));
            };
            let index: u64 = i.parse().map_err(|_| err(format!("bad index `{i}`")))?;
            let value: Nat = v.parse().map_err(|_| err(format!("bad value `{v}`")))?;
            if value == Nat::ZERO {
                return Err(err("values must be positive".into()));
            }
            if entries.last().is_some_and(|&(prev, _)| prev >= index) {
                return Err(err(format!("index {index} does not increase")));
            }
            entries.push((index, value));
        }
        Ok(BFile {
            sequence_id: sequence_id.to_string(),
            entries,
        })
    }

    pub fn get(&self, index: u64) -> Option<&Nat> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| &self.entries[k].1)
    }
}

/// Sequences with a bundled fixture and a known gross-sequence counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Known {
    /// Sylvester's sequence, the gross sequence of 1, offset 0.
    A000058,
    /// The gross sequence of 2, offset 1.
    A082732,
}

impl Known {
    pub fn base(self) -> u32 {
        match self {
            Known::A000058 => 1,
            Known::A082732 => 2,
        }
    }

    pub fn offset(self) -> u64 {
        match self {
            Known::A000058 => 0,
            Known::A082732 => 1,
        }
    }

    pub fn fixture(self) -> BFile {
        let text = match self {
            Known::A000058 => A000058,
            Known::A082732 => A082732,
        };
        BFile::parse(&self.to_string(), text).expect("bundled fixture parses")
    }
}

impl FromStr for Known {
    type Err = OeisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A000058" => Ok(Known::A000058),
            "A082732" => Ok(Known::A082732),
            _ => Err(OeisError::UnknownSequence(s.to_string())),
        }
    }
}

impl fmt::Display for Known {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: u64,
    #[serde(serialize_with = "ser_nat")]
    pub expected: Nat,
    #[serde(serialize_with = "ser_nat")]
    pub computed: Nat,
}

/// Last-two-digit alternation between 57 and 93.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuffixCheck {
    /// One-based position of the first checked term.
    pub from_term: usize,
    pub checked: usize,
    pub suffixes: Vec<u32>,
    /// First one-based term position breaking the pattern.
    pub first_break: Option<usize>,
}

impl SuffixCheck {
    pub fn holds(&self) -> bool {
        self.checked > 0 && self.first_break.is_none()
    }
}

/// Checks that terms from one-based position `from_term` end in 57, 93,
/// 57, ... in either phase.
pub fn suffix_alternation(terms: &[Nat], from_term: usize) -> SuffixCheck {
    let hundred = Nat::from(100u32);
    let suffixes: Vec<u32> = terms
        .iter()
        .skip(from_term - 1)
        .map(|t| u32::try_from(t % &hundred).expect("below 100"))
        .collect();
    let first_break = suffixes
        .iter()
        .enumerate()
        .position(|(i, &s)| {
            let ok = matches!(s, 57 | 93);
            !ok || (i > 0 && s == suffixes[i - 1])
        })
        .map(|i| i + from_term);
    SuffixCheck {
        from_term,
        checked: suffixes.len(),
        suffixes,
        first_break,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OeisReport {
    pub id: Known,
    pub source: String,
    pub compared: usize,
    pub computed_terms: usize,
    pub first_mismatch: Option<Mismatch>,
    pub suffix: Option<SuffixCheck>,
}

impl OeisReport {
    pub fn terms_match(&self) -> bool {
        self.compared > 0 && self.first_mismatch.is_none()
    }

    pub fn passed(&self) -> bool {
        self.terms_match() && self.suffix.as_ref().is_none_or(SuffixCheck::holds)
    }
}

/// Compares the gross sequence behind `id` against every entry of `bfile`
/// reachable within `max_digits`.
pub fn oeis_check(id: Known, bfile: &BFile, source: &str, max_digits: u64) -> Result<OeisReport, OeisError> {
    let mut gross = GrossSeq::new(Nat::from(id.base()), max_digits)?;
    let mut compared = 0;
    let mut first_mismatch = None;
    for (index, expected) in &bfile.entries {
        let Some(k) = index.checked_sub(id.offset()) else {
            continue;
        };
        let computed = match gross.term(k as usize) {
            Ok(t) => t.clone(),
            Err(StarError::TermTooLarge { .. }) => break,
            Err(e) => return Err(e.into()),
        };
        compared += 1;
        if &computed != expected {
            first_mismatch = Some(Mismatch {
                index: *index,
                expected: expected.clone(),
                computed,
            });
            break;
        }
    }
    // Extend to everything the digit bound allows.
    let mut count = gross.cached().len();
    while gross.term(count).is_ok() {
        count += 1;
    }
    let terms = gross.cached();
    let suffix = (id == Known::A082732).then(|| suffix_alternation(terms, 5));
    Ok(OeisReport {
        id,
        source: source.to_string(),
        compared,
        computed_terms: terms.len(),
        first_mismatch,
        suffix,
    })
}

/// Downloads the b-file for `id` from oeis.org.
#[cfg(feature = "fetch")]
pub fn fetch(id: Known) -> Result<BFile, OeisError> {
    let name = id.to_string();
    let url = format!("https://oeis.org/{name}/b{}.txt", &name[1..]);
    let fail = |reason: String| OeisError::Fetch {
        id: name.clone(),
        reason,
    };
    let text = ureq::get(&url)
        .call()
        .map_err(|e| fail(e.to_string()))?
        .body_mut()
        .read_to_string()
        .map_err(|e| fail(e.to_string()))?;
    BFile::parse(&name, &text)
}

#[cfg(not(feature = "fetch"))]
pub fn fetch(id: Known) -> Result<BFile, OeisError> {
    Err(OeisError::Fetch {
        id: id.to_string(),
        reason: "built without the `fetch` feature".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star_core::DEFAULT_MAX_DIGITS;

    #[test]
    fn grammar() {
        let b = BFile::parse("A1", "# comment\n\n0 2\n1   3\n  # indented\n5 7\n").unwrap();
        assert_eq!(b.entries.len(), 3);
        assert_eq!(b.get(5), Some(&Nat::from(7u32)));
        assert_eq!(b.get(2), None);
        for (bad, line) in [
            ("0 2\n0 3", 2),
            ("1 0", 1),
            ("x 3", 1),
            ("1", 1),
            ("1 2 3", 1),
            ("2 -4", 1),
        ] {
            match BFile::parse("A1", bad) {
                Err(OeisError::Parse { line: l, .. }) => assert_eq!(l, line, "{bad:?}"),
                other => panic!("{bad:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn fixtures_match() {
        for id in [Known::A000058, Known::A082732] {
            let r = oeis_check(id, &id.fixture(), "fixture", DEFAULT_MAX_DIGITS).unwrap();
            assert!(r.terms_match(), "{r:?}");
            assert!(r.compared >= 6);
        }
    }

    #[test]
    fn corrupted_fixture() {
        let text = A000058.replace("3 43", "3 44");
        let b = BFile::parse("A000058", &text).unwrap();
        let r = oeis_check(Known::A000058, &b, "edited", DEFAULT_MAX_DIGITS).unwrap();
        assert_eq!(r.first_mismatch.as_ref().unwrap().index, 3);
        assert!(!r.passed());
    }

    #[test]
    fn alternation_detector() {
        let terms: Vec<Nat> = [1u32, 2, 3, 4, 157, 24493, 557, 1193].map(Nat::from).to_vec();
        assert!(suffix_alternation(&terms, 5).holds());
        let broken: Vec<Nat> = [1u32, 2, 3, 4, 157, 157].map(Nat::from).to_vec();
        assert_eq!(suffix_alternation(&broken, 5).first_break, Some(6));
        let other: Vec<Nat> = [1u32, 2, 3, 4, 43, 7].map(Nat::from).to_vec();
        assert_eq!(suffix_alternation(&other, 5).first_break, Some(5));
        assert!(!suffix_alternation(&terms[..4], 5).holds());
    }

    #[test]
    fn ids() {
        assert_eq!("a000058".parse::<Known>().unwrap(), Known::A000058);
        assert!("A00058".parse::<Known>().is_err());
    }
}
