//! Parallel embeddings: infinitely many pairwise formally disjoint
//! subsequences of the mother sequence, each numerically equal to a target
//! prime-power sequence `eta`.
//!
//! Captures follow the antidiagonals of the (row, position) grid:
//! `(0,0) (0,1) (1,0) (0,2) (1,1) (2,0) ...`. Pair `(u, v)` takes the least
//! uncaptured mother index whose value is `eta[v]` and appends it to row `u`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::factoring::PrimePower;
use crate::mother::{Mother, MotherError};
use crate::star_stream::{StarStream, StreamError};
use crate::Nat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("term {position} of eta ({value}) is not a prime power")]
    NotPrimePower { position: usize, value: String },
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Mother(#[from] MotherError),
    #[error("unknown embedding mode `{0}` (expected literal or monotone)")]
    UnknownMode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Least uncaptured matching index, as in the original construction.
    Literal,
    /// Additionally above the row's previous index, so rows are genuine
    /// subsequences.
    #[default]
    Monotone,
}

impl FromStr for Mode {
    type Err = EmbedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(Mode::Literal),
            "monotone" => Ok(Mode::Monotone),
            other => Err(EmbedError::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Literal => "literal",
            Mode::Monotone => "monotone",
        })
    }
}

/// The `step`-th pair of the antidiagonal schedule.
pub fn diagonal_pair(step: u64) -> (u64, u64) {
    // Largest d with d(d+1)/2 <= step.
    let mut d = ((8 * step as u128 + 1).isqrt() as u64 - 1) / 2;
    while d * (d + 1) / 2 > step {
        d -= 1;
    }
    let u = step - d * (d + 1) / 2;
    (u, d - u)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaptureStep {
    pub step: u64,
    pub u: u64,
    pub v: u64,
    pub captured_index: u64,
    pub value: PrimePower,
}

impl fmt::Display for CaptureStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.step, self.u, self.v, self.captured_index, self.value
        )
    }
}

/// The target sequence.
#[derive(Debug, Clone)]
pub enum Eta {
    Finite(Vec<PrimePower>),
    Star(Box<StarStream>),
    /// The mother sequence itself.
    Mother,
}

impl Eta {
    /// Certifies every value as a prime power.
    pub fn from_values(values: &[Nat]) -> Result<Eta, EmbedError> {
        values
            .iter()
            .enumerate()
            .map(|(position, v)| {
                PrimePower::from_value(v).map_err(|_| EmbedError::NotPrimePower {
                    position,
                    value: v.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Eta::Finite)
    }

    fn term(&mut self, v: u64, mother: &mut Mother) -> Result<Option<PrimePower>, EmbedError> {
        match self {
            Eta::Finite(terms) => Ok(terms.get(v as usize).cloned()),
            Eta::Star(stream) => Ok(stream.get(v as usize)?.map(|t| t.pp.clone())),
            Eta::Mother => Ok(Some(mother.term(v)?.value)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingState {
    pub mode: Mode,
    /// Terms of eta consulted so far, by position.
    pub eta_prefix: Vec<PrimePower>,
    /// Length of eta once known to be finite.
    pub eta_len: Option<u64>,
    pub log: Vec<CaptureStep>,
    /// Why generation stopped before the requested step count, if it did.
    pub truncated: Option<String>,
    #[serde(skip)]
    captured: BTreeSet<u64>,
    #[serde(skip)]
    rows: BTreeMap<u64, Vec<usize>>,
    #[serde(skip)]
    schedule: u64,
}

impl EmbeddingState {
    pub fn new(mode: Mode) -> Self {
        EmbeddingState {
            mode,
            eta_prefix: Vec::new(),
            eta_len: None,
            log: Vec::new(),
            truncated: None,
            captured: BTreeSet::new(),
            rows: BTreeMap::new(),
            schedule: 0,
        }
    }

    pub fn steps(&self) -> usize {
        self.log.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// The captures of row `u`, by position.
    pub fn row(&self, u: u64) -> Vec<&CaptureStep> {
        self.rows
            .get(&u)
            .map(|steps| steps.iter().map(|&i| &self.log[i]).collect())
            .unwrap_or_default()
    }

    /// Captured mother indices of row `u`, by position.
    pub fn row_indices(&self, u: u64) -> Vec<u64> {
        self.row(u).iter().map(|s| s.captured_index).collect()
    }

    pub fn captured(&self) -> &BTreeSet<u64> {
        &self.captured
    }
}

/// Drives the capture schedule one step at a time.
#[derive(Debug)]
pub struct Embedder<'m> {
    mother: &'m mut Mother,
    eta: Eta,
    state: EmbeddingState,
}

impl<'m> Embedder<'m> {
    pub fn new(eta: Eta, mode: Mode, mother: &'m mut Mother) -> Self {
        let mut state = EmbeddingState::new(mode);
        if let Eta::Finite(terms) = &eta {
            state.eta_len = Some(terms.len() as u64);
        }
        Embedder { mother, eta, state }
    }

    pub fn state(&self) -> &EmbeddingState {
        &self.state
    }

    pub fn into_state(self) -> EmbeddingState {
        self.state
    }

    fn eta_term(&mut self, v: u64) -> Result<Option<PrimePower>, EmbedError> {
        if let Some(pp) = self.state.eta_prefix.get(v as usize) {
            return Ok(Some(pp.clone()));
        }
        if self.state.eta_len.is_some_and(|len| v >= len) {
            return Ok(None);
        }
        debug_assert_eq!(v as usize, self.state.eta_prefix.len());
        match self.eta.term(v, self.mother)? {
            Some(pp) => {
                self.state.eta_prefix.push(pp.clone());
                Ok(Some(pp))
            }
            None => {
                self.state.eta_len = Some(v);
                Ok(None)
            }
        }
    }

    /// Performs one capture. Returns `false` once no further capture is
    /// possible; the reason is recorded in `truncated`.
    pub fn step(&mut self) -> Result<bool, EmbedError> {
        if self.state.truncated.is_some() {
            return Ok(false);
        }
        if self.state.eta_len == Some(0) {
            self.state.truncated = Some("eta is empty".into());
            return Ok(false);
        }
        let (u, v, value) = loop {
            let (u, v) = diagonal_pair(self.state.schedule);
            // Positions are requested in order along each diagonal, so a
            // missing term means every later position is missing too.
            match self.eta_term(v)? {
                Some(value) => break (u, v, value),
                None => self.state.schedule += 1,
            }
        };
        let floor = match self.state.mode {
            Mode::Literal => None,
            Mode::Monotone => self
                .state
                .rows
                .get(&u)
                .and_then(|r| r.last())
                .map(|&i| self.state.log[i].captured_index),
        };
        let index = match self.mother.next_matching(&value, &self.state.captured, floor) {
            Ok(t) => t,
            Err(e @ MotherError::CeilingReached { .. }) => {
                self.state.truncated = Some(format!("pair ({u}, {v}): {e}"));
                return Ok(false);
            }
            Err(e) => return Err(e.into()),
        };
        let step = self.state.log.len() as u64;
        self.state.captured.insert(index);
        self.state.rows.entry(u).or_default().push(step as usize);
        self.state.log.push(CaptureStep {
            step,
            u,
            v,
            captured_index: index,
            value,
        });
        self.state.schedule += 1;
        Ok(true)
    }

    pub fn run(&mut self, steps: u64) -> Result<(), EmbedError> {
        for _ in 0..steps {
            if !self.step()? {
                break;
            }
        }
        Ok(())
    }
}

/// Runs `steps` captures of the diagonal schedule.
pub fn embed(eta: Eta, steps: u64, mode: Mode, mother: &mut Mother) -> Result<EmbeddingState, EmbedError> {
    let mut embedder = Embedder::new(eta, mode, mother);
    embedder.run(steps)?;
    Ok(embedder.into_state())
}

/// No mother index is used twice across all rows.
pub fn verify_pfd(state: &EmbeddingState) -> bool {
    let mut seen = BTreeSet::new();
    state
        .rows
        .values()
        .flatten()
        .all(|&i| seen.insert(state.log[i].captured_index))
}

/// Row `u`'s `v`-th capture equals `eta[v]`, for every row.
pub fn verify_numeric(state: &EmbeddingState) -> bool {
    state.rows.values().all(|row| {
        row.iter().enumerate().all(|(v, &i)| {
            let step = &state.log[i];
            step.v == v as u64 && state.eta_prefix.get(v) == Some(&step.value)
        })
    })
}

/// Every captured index really holds its recorded value in the mother sequence.
pub fn verify_against_mother(state: &EmbeddingState, mother: &mut Mother) -> Result<bool, MotherError> {
    for step in &state.log {
        if mother.term(step.captured_index)?.value != step.value {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every row's captured indices strictly increase.
pub fn rows_monotone(state: &EmbeddingState) -> bool {
    state
        .rows
        .keys()
        .all(|&u| state.row_indices(u).windows(2).all(|w| w[0] < w[1]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub steps: usize,
    pub rows: usize,
    /// One past the largest captured index.
    pub frontier: u64,
    pub captured_below_frontier: u64,
    pub coverage: f64,
    /// Least index not yet captured.
    pub first_gap: u64,
    pub duplicates: usize,
    pub truncated: Option<String>,
}

impl PartitionReport {
    pub fn disjoint(&self) -> bool {
        self.duplicates == 0
    }
}

/// Embeds the mother sequence in itself and reports how much of it the
/// captured rows cover.
pub fn partition_check(steps: u64, mother: &mut Mother) -> Result<PartitionReport, EmbedError> {
    let state = embed(Eta::Mother, steps, Mode::Literal, mother)?;
    let mut seen = BTreeSet::new();
    let duplicates = state.log.iter().filter(|s| !seen.insert(s.captured_index)).count();
    let frontier = seen.last().map_or(0, |&i| i + 1);
    let first_gap = (0..).find(|i| !seen.contains(i)).unwrap_or(0);
    let captured_below_frontier = seen.len() as u64;
    Ok(PartitionReport {
        steps: state.steps(),
        rows: state.row_count(),
        frontier,
        captured_below_frontier,
        coverage: if frontier == 0 {
            0.0
        } else {
            captured_below_frontier as f64 / frontier as f64
        },
        first_gap,
        duplicates,
        truncated: state.truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factoring::FactorBudget;

    fn pp(s: &str) -> PrimePower {
        s.parse().unwrap()
    }

    fn printed_one_star() -> Eta {
        Eta::Finite(["2", "3", "7", "43", "13", "139", "3263443"].map(pp).to_vec())
    }

    #[test]
    fn schedule() {
        assert_eq!(diagonal_pair(0), (0, 0));
        assert_eq!(diagonal_pair(1), (0, 1));
        assert_eq!(diagonal_pair(2), (1, 0));
        assert_eq!(diagonal_pair(9), (3, 0));
        let order: Vec<(u64, u64)> = (0..13).map(diagonal_pair).collect();
        assert_eq!(
            order,
            [
                (0, 0),
                (0, 1),
                (1, 0),
                (0, 2),
                (1, 1),
                (2, 0),
                (0, 3),
                (1, 2),
                (2, 1),
                (3, 0),
                (0, 4),
                (1, 3),
                (2, 2)
            ]
        );
        assert_eq!(diagonal_pair(u64::from(u32::MAX)), {
            let s = u64::from(u32::MAX);
            let mut d = 0;
            while (d + 1) * (d + 2) / 2 <= s {
                d += 1;
            }
            let u = s - d * (d + 1) / 2;
            (u, d - u)
        });
    }

    #[test]
    fn literal_embedding_of_one_star() {
        let mut m = Mother::default();
        let s = embed(printed_one_star(), 6, Mode::Literal, &mut m).unwrap();
        let order: Vec<u64> = s.log.iter().map(|c| c.captured_index).collect();
        assert_eq!(order, [0, 1, 4, 6, 5, 9]);
        assert_eq!(s.row_indices(0), [0, 1, 6]);
        assert_eq!(s.row_indices(1), [4, 5]);
        assert_eq!(s.row_indices(2), [9]);
        assert!(verify_pfd(&s));
        assert!(verify_numeric(&s));
        let mono = embed(printed_one_star(), 6, Mode::Monotone, &mut m).unwrap();
        assert_eq!(mono.log, s.log);
    }

    #[test]
    fn single_term_eta() {
        let mut m = Mother::default();
        let s = embed(Eta::Finite(vec![pp("2")]), 3, Mode::Literal, &mut m).unwrap();
        assert_eq!(s.row_indices(0), [0]);
        assert_eq!(s.row_indices(1), [4]);
        assert_eq!(s.row_indices(2), [9]);
    }

    #[test]
    fn literal_rows_can_go_backwards() {
        // 7 first occurs at index 6, 2 at index 0: row 0 reads 6 then 0.
        let mut m = Mother::default();
        let eta = || Eta::Finite(vec![pp("7"), pp("2")]);
        let lit = embed(eta(), 2, Mode::Literal, &mut m).unwrap();
        assert_eq!(lit.row_indices(0), [6, 0]);
        assert!(!rows_monotone(&lit));
        let mono = embed(eta(), 2, Mode::Monotone, &mut m).unwrap();
        assert_eq!(mono.row_indices(0), [6, 9]);
        assert!(rows_monotone(&mono));
    }

    #[test]
    fn verifiers_reject_corruption() {
        let empty = EmbeddingState::new(Mode::Literal);
        assert!(verify_pfd(&empty));
        assert!(verify_numeric(&empty));

        let mut m = Mother::default();
        let good = embed(printed_one_star(), 6, Mode::Literal, &mut m).unwrap();
        let mut reused = good.clone();
        reused.log[2].captured_index = reused.log[0].captured_index;
        assert!(!verify_pfd(&reused));
        assert!(verify_numeric(&reused));

        let mut wrong = good.clone();
        wrong.log[1].value = pp("5");
        assert!(verify_pfd(&wrong));
        assert!(!verify_numeric(&wrong));
        assert!(!verify_against_mother(&wrong, &mut m).unwrap());
        assert!(verify_against_mother(&good, &mut m).unwrap());
    }

    #[test]
    fn rejects_non_prime_powers() {
        let values: Vec<Nat> = [2u32, 3, 6].into_iter().map(Nat::from).collect();
        assert_eq!(
            Eta::from_values(&values).unwrap_err(),
            EmbedError::NotPrimePower {
                position: 2,
                value: "6".into()
            }
        );
        assert!(Eta::from_values(&values[..2]).is_ok());
    }

    #[test]
    fn ceiling_truncates() {
        let mut m = Mother::new(50);
        let s = embed(Eta::Finite(vec![pp("43")]), 5, Mode::Literal, &mut m).unwrap();
        assert_eq!(s.steps(), 1);
        assert!(s.truncated.as_deref().unwrap().contains("ceiling 50"));
        let empty = embed(Eta::Finite(vec![]), 5, Mode::Literal, &mut m).unwrap();
        assert_eq!(empty.steps(), 0);
    }

    #[test]
    fn star_stream_eta() {
        let mut m = Mother::default();
        let stream = StarStream::new(Nat::from(1u32), FactorBudget::default()).unwrap();
        let s = embed(Eta::Star(Box::new(stream)), 6, Mode::Literal, &mut m).unwrap();
        let order: Vec<u64> = s.log.iter().map(|c| c.captured_index).collect();
        assert_eq!(order, [0, 1, 4, 6, 5, 9]);
        assert_eq!(s.eta_len, None);
    }

    #[test]
    fn partition_examples() {
        let mut m = Mother::default();
        let one = partition_check(1, &mut m).unwrap();
        assert_eq!((one.frontier, one.duplicates, one.first_gap), (1, 0, 1));
        let ten = partition_check(10, &mut m).unwrap();
        assert!(ten.disjoint());
        let hundred = partition_check(100, &mut m).unwrap();
        assert!(hundred.disjoint());
        assert_eq!(hundred.steps, 100);
        assert!(hundred.coverage > 0.0 && hundred.coverage <= 1.0);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("literal".parse::<Mode>().unwrap(), Mode::Literal);
        assert_eq!("monotone".parse::<Mode>().unwrap(), Mode::Monotone);
        assert!("sideways".parse::<Mode>().is_err());
        assert_eq!(Mode::default(), Mode::Monotone);
    }
}
