//! Star sequences: gross terms split into ascending prime powers.
//!
//! A [`StarStream`] factors gross terms lazily, one at a time, and stops at
//! the first term the budget cannot finish (strict policy). The lenient
//! policy keeps going and records the unsplit cofactors separately so that
//! emitted terms are always genuine prime powers.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{reciprocal, Rational};
use crate::factoring::{factor, FactorBudget, FactorError, Factorization, PrimePower};
use crate::star_core::{star_pow_bounded, GrossSeq, StarError, DEFAULT_MAX_DIGITS};
use crate::Nat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StreamError {
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("gross term {gross_index} did not factor completely under the budget")]
    Incomplete { gross_index: usize },
    #[error("no prime factor of {0} was found under the budget")]
    NoPrimeFactor(Nat),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StallPolicy {
    #[default]
    Strict,
    Lenient,
}

/// One term of a star sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarTerm {
    pub pp: PrimePower,
    /// Which gross term `star^k(x) + 1` it divides.
    pub gross_index: usize,
    /// 0-based position in the star sequence.
    pub position: usize,
}

impl StarTerm {
    pub fn prime(&self) -> &Nat {
        self.pp.prime()
    }

    pub fn value(&self) -> &Nat {
        self.pp.value()
    }
}

/// A gross term the budget could not finish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stall {
    pub gross_index: usize,
    pub partial: Factorization,
}

#[derive(Debug, Clone)]
pub struct StarStream {
    gross: GrossSeq,
    budget: FactorBudget,
    policy: StallPolicy,
    terms: Vec<StarTerm>,
    factorizations: Vec<Factorization>,
    stalls: Vec<Stall>,
    horizon: Option<StarError>,
}

impl StarStream {
    pub fn new(x: Nat, budget: FactorBudget) -> Result<Self, StreamError> {
        Self::with_options(x, budget, StallPolicy::Strict, DEFAULT_MAX_DIGITS)
    }

    pub fn with_options(
        x: Nat,
        budget: FactorBudget,
        policy: StallPolicy,
        max_digits: u64,
    ) -> Result<Self, StreamError> {
        budget.validate()?;
        Ok(StarStream {
            gross: GrossSeq::new(x, max_digits)?,
            budget,
            policy,
            terms: Vec::new(),
            factorizations: Vec::new(),
            stalls: Vec::new(),
            horizon: None,
        })
    }

    pub fn base(&self) -> &Nat {
        self.gross.base()
    }

    pub fn terms(&self) -> &[StarTerm] {
        &self.terms
    }

    /// Next gross index to factor.
    pub fn frontier(&self) -> usize {
        self.factorizations.len()
    }

    pub fn is_stalled(&self) -> bool {
        !self.stalls.is_empty()
    }

    pub fn stalls(&self) -> &[Stall] {
        &self.stalls
    }

    /// Set when the term-size guard stopped generation.
    pub fn horizon(&self) -> Option<&StarError> {
        self.horizon.as_ref()
    }

    /// Factorizations of gross terms `0..frontier`, complete or not.
    pub fn factorizations(&self) -> &[Factorization] {
        &self.factorizations
    }

    /// Index of the last gross term whose factorization is complete and
    /// precedes every stall.
    pub fn complete_through(&self) -> Option<usize> {
        let end = self
            .stalls
            .first()
            .map(|s| s.gross_index)
            .unwrap_or(self.factorizations.len());
        end.checked_sub(1)
    }

    fn blocked(&self) -> bool {
        self.horizon.is_some() || (self.policy == StallPolicy::Strict && self.is_stalled())
    }

    /// Factors one more gross term. Returns `false` when the stream can no
    /// longer advance.
    pub fn advance(&mut self) -> Result<bool, StreamError> {
        if self.blocked() {
            return Ok(false);
        }
        let k = self.factorizations.len();
        let term = match self.gross.term(k) {
            Ok(t) => t.clone(),
            Err(e @ StarError::TermTooLarge { .. }) => {
                self.horizon = Some(e);
                return Ok(false);
            }
            Err(e) => return Err(e.into()),
        };
        let f = factor(&term, &self.budget)?;
        if !f.is_complete() {
            self.stalls.push(Stall {
                gross_index: k,
                partial: f.clone(),
            });
            if self.policy == StallPolicy::Strict {
                self.factorizations.push(f);
                return Ok(false);
            }
        }
        for pp in f.parts() {
            let position = self.terms.len();
            self.terms.push(StarTerm {
                pp: pp.clone(),
                gross_index: k,
                position,
            });
        }
        self.factorizations.push(f);
        Ok(true)
    }

    /// Advances until at least `count` terms exist or the stream stops.
    pub fn ensure_terms(&mut self, count: usize) -> Result<usize, StreamError> {
        while self.terms.len() < count && self.advance()? {}
        Ok(self.terms.len().min(count))
    }

    /// Advances until gross terms `0..=k` have been processed or the stream stops.
    pub fn ensure_gross(&mut self, k: usize) -> Result<(), StreamError> {
        while self.factorizations.len() <= k && self.advance()? {}
        Ok(())
    }

    pub fn get(&mut self, j: usize) -> Result<Option<&StarTerm>, StreamError> {
        self.ensure_terms(j + 1)?;
        Ok(self.terms.get(j))
    }

    /// Terms from gross indices `0..=k`, failing if any of them is incomplete.
    pub fn terms_through(&mut self, k: usize) -> Result<Vec<StarTerm>, StreamError> {
        self.ensure_gross(k)?;
        match self.complete_through() {
            Some(done) if done >= k => Ok(self.terms.iter().filter(|t| t.gross_index <= k).cloned().collect()),
            _ => Err(StreamError::Incomplete {
                gross_index: self.complete_through().map_or(0, |d| d + 1),
            }),
        }
    }
}

/// The first `count` star terms, or fewer when the stream stalled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarPrefix {
    pub terms: Vec<StarTerm>,
    pub stall: Option<Stall>,
}

pub fn star_prefix(x: &Nat, count: usize, budget: &FactorBudget) -> Result<StarPrefix, StreamError> {
    let mut stream = StarStream::new(x.clone(), *budget)?;
    stream.ensure_terms(count)?;
    let terms = stream.terms().iter().take(count).cloned().collect::<Vec<_>>();
    let stall = if terms.len() < count {
        stream.stalls().first().cloned()
    } else {
        None
    };
    Ok(StarPrefix { terms, stall })
}

/// Values of the star terms from gross indices `0..=k_max`.
pub fn term_set(x: &Nat, k_max: usize, budget: &FactorBudget) -> Result<BTreeSet<Nat>, StreamError> {
    let mut stream = StarStream::new(x.clone(), *budget)?;
    Ok(stream
        .terms_through(k_max)?
        .into_iter()
        .map(|t| t.value().clone())
        .collect())
}

/// A prime dividing no gross term of `x`: 11 for `x = 1`, otherwise the
/// least prime factor of `x`.
pub fn witness_prime(x: &Nat) -> Result<Nat, StreamError> {
    if x.is_zero() {
        return Err(StarError::ZeroArgument.into());
    }
    if x.is_one() {
        return Ok(Nat::from(11u32));
    }
    let f = factor(x, &FactorBudget::default())?;
    match f.parts().first() {
        // With a cofactor left over the smallest known part is still a prime
        // factor of x, just not provably the least one.
        Some(pp) => Ok(pp.prime().clone()),
        None => Err(StreamError::NoPrimeFactor(x.clone())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub x: String,
    pub witness: String,
    pub k_max: usize,
    /// First gross index whose term the witness divides, if any.
    pub divides_at: Option<usize>,
}

impl WitnessCheck {
    pub fn holds(&self) -> bool {
        self.divides_at.is_none()
    }
}

/// Checks that the witness prime divides none of `star^k(x) + 1` for
/// `k = 0..=k_max`, working modulo the witness.
pub fn verify_witness(x: &Nat, k_max: usize) -> Result<WitnessCheck, StreamError> {
    let p = witness_prime(x)?;
    let mut s = x % &p;
    let mut divides_at = None;
    for k in 0..=k_max {
        if k > 0 {
            s = (&s * (&s + 1u32)) % &p;
        }
        if ((&s + 1u32) % &p).is_zero() {
            divides_at = Some(k);
            break;
        }
    }
    Ok(WitnessCheck {
        x: x.to_string(),
        witness: p.to_string(),
        k_max,
        divides_at,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueClass {
    /// The prime 3 itself.
    Three,
    /// Congruent to 1 modulo 6.
    OneModSix,
    /// The prime 2, which only appears as the first term `1 + 1`; annotated
    /// rather than flagged.
    EvenInitialTerm,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueEntry {
    pub gross_index: usize,
    pub prime: String,
    pub residue_mod_6: u32,
    pub class: ResidueClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OdoniReport {
    pub k_max: usize,
    pub entries: Vec<ResidueEntry>,
    /// Gross indices the budget could not finish; their known primes are
    /// still listed but the term is not covered.
    pub stalled: Vec<usize>,
}

impl OdoniReport {
    pub fn violations(&self) -> impl Iterator<Item = &ResidueEntry> {
        self.entries.iter().filter(|e| e.class == ResidueClass::Violation)
    }

    pub fn passed(&self) -> bool {
        self.violations().next().is_none()
    }
}

fn classify(p: &Nat, gross_index: usize) -> (u32, ResidueClass) {
    let r = (p % 6u32).to_u32().unwrap_or(0);
    let class = if *p == Nat::from(3u32) {
        ResidueClass::Three
    } else if *p == Nat::from(2u32) && gross_index == 0 {
        ResidueClass::EvenInitialTerm
    } else if r == 1 {
        ResidueClass::OneModSix
    } else {
        ResidueClass::Violation
    };
    (r, class)
}

/// Residues modulo 6 of every prime found in the gross terms of 1 through
/// `k_max`. Odd primes above 3 must be 1 modulo 6.
pub fn odoni_residue_check(k_max: usize, budget: &FactorBudget) -> Result<OdoniReport, StreamError> {
    let mut stream = StarStream::with_options(Nat::one(), *budget, StallPolicy::Lenient, DEFAULT_MAX_DIGITS)?;
    stream.ensure_gross(k_max)?;
    let mut entries = Vec::new();
    for (k, f) in stream.factorizations().iter().enumerate().take(k_max + 1) {
        for pp in f.parts() {
            let (residue_mod_6, class) = classify(pp.prime(), k);
            entries.push(ResidueEntry {
                gross_index: k,
                prime: pp.prime().to_string(),
                residue_mod_6,
                class,
            });
        }
    }
    let stalled = stream
        .stalls()
        .iter()
        .map(|s| s.gross_index)
        .filter(|&k| k <= k_max)
        .collect();
    Ok(OdoniReport {
        k_max,
        entries,
        stalled,
    })
}

/// Factorization of `star^k(x)` from `star^k(x) = x * prod_{j<k} (star^j(x) + 1)`,
/// merging the factorizations of `x` and of gross terms `0..k`.
pub fn star_pow_factor(x: &Nat, k: usize, budget: &FactorBudget) -> Result<Factorization, StreamError> {
    let target = star_pow_bounded(x, k, DEFAULT_MAX_DIGITS)?;
    if target < Nat::from(2u32) {
        return Err(FactorError::BelowTwo(target).into());
    }
    let mut pieces = Vec::with_capacity(k + 1);
    if !x.is_one() {
        pieces.push(factor(x, budget)?);
    }
    let mut gross = GrossSeq::new(x.clone(), DEFAULT_MAX_DIGITS)?;
    for j in 0..k {
        pieces.push(factor(gross.term(j)?, budget)?);
    }
    let merged = Factorization::merged(target, pieces.iter());
    // Unsplit pieces come back as one composite cofactor.
    debug_assert_eq!(merged.recompose(), *merged.target());
    Ok(merged)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremeRow {
    pub k: usize,
    /// Prime power of the largest prime exactly dividing the gross term.
    pub largest: PrimePower,
    /// Prime power of the smallest prime exactly dividing the gross term.
    pub smallest: PrimePower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremeReport {
    pub x: String,
    pub rows: Vec<ExtremeRow>,
    #[serde(serialize_with = "crate::analysis::ser_rational")]
    pub sigma_largest: Rational,
    #[serde(serialize_with = "crate::analysis::ser_rational")]
    pub sigma_smallest: Rational,
    /// First gross index that could not be finished, when below `k_max`.
    pub stalled_at: Option<usize>,
}

/// Largest and smallest exactly-dividing prime powers of each gross term,
/// with the exact reciprocal sums of each family.
pub fn extreme_sums(x: &Nat, k_max: usize, budget: &FactorBudget) -> Result<ExtremeReport, StreamError> {
    let mut stream = StarStream::new(x.clone(), *budget)?;
    stream.ensure_gross(k_max)?;
    let mut rows = Vec::new();
    let mut sigma_largest = Rational::zero();
    let mut sigma_smallest = Rational::zero();
    for (k, f) in stream.factorizations().iter().enumerate().take(k_max + 1) {
        if !f.is_complete() {
            break;
        }
        let (Some(smallest), Some(largest)) = (f.parts().first(), f.parts().last()) else {
            continue;
        };
        sigma_largest += reciprocal(largest.value());
        sigma_smallest += reciprocal(smallest.value());
        rows.push(ExtremeRow {
            k,
            largest: largest.clone(),
            smallest: smallest.clone(),
        });
    }
    let stalled_at = (rows.len() <= k_max).then_some(rows.len());
    Ok(ExtremeReport {
        x: x.to_string(),
        rows,
        sigma_largest,
        sigma_smallest,
        stalled_at,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquarefreeHit {
    pub k: usize,
    pub pp: PrimePower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquarefreeReport {
    pub x: String,
    pub k_max: usize,
    pub hits: Vec<SquarefreeHit>,
    pub stalled_at: Option<usize>,
}

/// Every prime power with exponent at least 2 among the gross terms
/// `0..=k_max` that factor completely.
pub fn squarefree_scan(x: &Nat, k_max: usize, budget: &FactorBudget) -> Result<SquarefreeReport, StreamError> {
    let mut stream = StarStream::new(x.clone(), *budget)?;
    stream.ensure_gross(k_max)?;
    let mut hits = Vec::new();
    let mut done = 0;
    for (k, f) in stream.factorizations().iter().enumerate().take(k_max + 1) {
        if !f.is_complete() {
            break;
        }
        done = k + 1;
        hits.extend(
            f.parts()
                .iter()
                .filter(|pp| pp.exponent() >= 2)
                .map(|pp| SquarefreeHit { k, pp: pp.clone() }),
        );
    }
    Ok(SquarefreeReport {
        x: x.to_string(),
        k_max,
        hits,
        stalled_at: (done <= k_max).then_some(done),
    })
}

/// First prime that occurs in more than one term, if any.
pub fn shared_prime(terms: &[StarTerm]) -> Option<Nat> {
    let mut seen = BTreeSet::new();
    for t in terms {
        if !seen.insert(t.prime().clone()) {
            return Some(t.prime().clone());
        }
    }
    None
}

/// Largest gcd over all pairs of values; 1 when they are pairwise coprime.
pub fn max_pairwise_gcd(values: &[Nat]) -> Nat {
    let mut worst = Nat::one();
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            let g = a.gcd(b);
            if g > worst {
                worst = g;
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Nat {
        Nat::from(v)
    }

    fn shown(terms: &[StarTerm]) -> Vec<String> {
        terms.iter().map(|t| t.pp.to_string()).collect()
    }

    fn quick() -> FactorBudget {
        FactorBudget::default()
    }

    #[test]
    fn printed_star_sequences() {
        let b = quick();
        let one = star_prefix(&nat(1), 7, &b).unwrap();
        assert_eq!(shown(&one.terms), ["2", "3", "7", "43", "13", "139", "3263443"]);
        assert!(one.stall.is_none());
        let two = star_prefix(&nat(2), 6, &b).unwrap();
        assert_eq!(shown(&two.terms), ["3", "7", "43", "13", "139", "3263443"]);
        // 24493 = 7 * 3499 splits, so the third gross term contributes two.
        let three = star_prefix(&nat(3), 8, &b).unwrap();
        assert_eq!(
            shown(&three.terms),
            ["2^2", "13", "157", "7", "3499", "67", "277", "32323"]
        );
        let gross: Vec<usize> = three.terms.iter().map(|t| t.gross_index).collect();
        assert_eq!(gross, [0, 1, 2, 3, 3, 4, 4, 4]);
        let positions: Vec<usize> = three.terms.iter().map(|t| t.position).collect();
        assert_eq!(positions, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn strict_stall_stops_at_unfinished_term() {
        // 1807 = 13 * 139 cannot be split by trial division to 10 with one
        // iteration of rho.
        let b = FactorBudget::new(10, 1, 1).unwrap();
        let p = star_prefix(&nat(1), 7, &b).unwrap();
        assert_eq!(shown(&p.terms), ["2", "3", "7", "43"]);
        let stall = p.stall.unwrap();
        assert_eq!(stall.gross_index, 4);
        assert_eq!(stall.partial.cofactor(), Some(&nat(1807)));

        let mut s = StarStream::new(nat(1), b).unwrap();
        s.ensure_terms(10).unwrap();
        assert!(s.is_stalled());
        assert_eq!(s.frontier(), 5);
        assert_eq!(s.complete_through(), Some(3));
        assert!(!s.advance().unwrap());
    }

    #[test]
    fn lenient_stream_keeps_going() {
        let b = FactorBudget::new(10, 1, 1).unwrap();
        let mut s = StarStream::with_options(nat(1), b, StallPolicy::Lenient, DEFAULT_MAX_DIGITS).unwrap();
        s.ensure_gross(5).unwrap();
        assert_eq!(s.frontier(), 6);
        assert_eq!(s.stalls()[0].gross_index, 4);
        // 3263443 is prime, so it is certified even under the tiny budget.
        assert_eq!(shown(s.terms()), ["2", "3", "7", "43", "3263443"]);
        assert_eq!(s.terms()[4].gross_index, 5);
    }

    #[test]
    fn term_sets() {
        let b = quick();
        let set = |x: u64, k: usize| -> Vec<u64> {
            term_set(&nat(x), k, &b)
                .unwrap()
                .iter()
                .map(|v| v.to_u64().unwrap())
                .collect()
        };
        assert_eq!(set(1, 3), [2, 3, 7, 43]);
        assert_eq!(set(1, 4), [2, 3, 7, 13, 43, 139]);
        assert_eq!(set(3, 1), [4, 13]);
        let tiny = FactorBudget::new(10, 1, 1).unwrap();
        assert_eq!(
            term_set(&nat(1), 4, &tiny),
            Err(StreamError::Incomplete { gross_index: 4 })
        );
    }

    #[test]
    fn witnesses() {
        assert_eq!(witness_prime(&nat(1)).unwrap(), nat(11));
        assert_eq!(witness_prime(&nat(6)).unwrap(), nat(2));
        assert_eq!(witness_prime(&nat(35)).unwrap(), nat(5));
        assert!(verify_witness(&nat(1), 8).unwrap().holds());
        let two = verify_witness(&nat(2), 8).unwrap();
        assert!(two.holds());
        assert_eq!(two.witness, "2");
        for x in 2..30 {
            assert!(verify_witness(&nat(x), 0).unwrap().holds());
        }
        assert!(witness_prime(&nat(0)).is_err());
    }

    #[test]
    fn odoni_examples() {
        let b = quick();
        let r3 = odoni_residue_check(3, &b).unwrap();
        let classes: Vec<(String, ResidueClass)> = r3.entries.iter().map(|e| (e.prime.clone(), e.class)).collect();
        assert_eq!(
            classes,
            [
                ("2".to_string(), ResidueClass::EvenInitialTerm),
                ("3".to_string(), ResidueClass::Three),
                ("7".to_string(), ResidueClass::OneModSix),
                ("43".to_string(), ResidueClass::OneModSix),
            ]
        );
        assert!(r3.passed());
        let r4 = odoni_residue_check(4, &b).unwrap();
        assert_eq!(
            &r4.entries[4..].iter().map(|e| e.prime.as_str()).collect::<Vec<_>>(),
            &["13", "139"]
        );
        assert!(r4.entries[4..].iter().all(|e| e.residue_mod_6 == 1));
        let r5 = odoni_residue_check(5, &b).unwrap();
        let last = r5.entries.last().unwrap();
        assert_eq!((last.prime.as_str(), last.residue_mod_6), ("3263443", 1));
        assert!(r5.passed());
    }

    #[test]
    fn product_identity_factorizations() {
        let b = quick();
        let show = |x: u64, k: usize| star_pow_factor(&nat(x), k, &b).unwrap().to_string();
        assert_eq!(show(1, 3), "2 * 3 * 7");
        assert_eq!(show(1, 4), "2 * 3 * 7 * 43");
        assert_eq!(show(3, 2), "2^2 * 3 * 13");
        let f = star_pow_factor(&nat(3), 2, &b).unwrap();
        assert_eq!(f.target(), &nat(156));
        assert!(star_pow_factor(&nat(1), 0, &b).is_err());
    }

    #[test]
    fn extremes() {
        let b = quick();
        let r = extreme_sums(&nat(1), 4, &b).unwrap();
        let last = r.rows.last().unwrap();
        assert_eq!(last.k, 4);
        assert_eq!(last.smallest.to_string(), "13");
        assert_eq!(last.largest.to_string(), "139");
        // 1/2 + 1/3 + 1/7 + 1/43 + 1/139 and the same with 1/13.
        assert_eq!(r.sigma_largest, Rational::new(nat(252_701), nat(251_034)));
        assert_eq!(r.sigma_smallest, Rational::new(nat(25_271), nat(23_478)));
        assert_eq!(r.stalled_at, None);

        let r0 = extreme_sums(&nat(1), 0, &b).unwrap();
        assert_eq!(r0.sigma_largest, Rational::new(nat(1), nat(2)));
        assert_eq!(r0.sigma_smallest, Rational::new(nat(1), nat(2)));
        let r3 = extreme_sums(&nat(3), 0, &b).unwrap();
        assert_eq!(r3.rows[0].largest.to_string(), "2^2");
        assert_eq!(r3.sigma_smallest, Rational::new(nat(1), nat(4)));
    }

    #[test]
    fn squarefree() {
        let b = quick();
        assert!(squarefree_scan(&nat(1), 5, &b).unwrap().hits.is_empty());
        let three = squarefree_scan(&nat(3), 0, &b).unwrap();
        assert_eq!(three.hits.len(), 1);
        assert_eq!((three.hits[0].k, three.hits[0].pp.to_string()), (0, "2^2".to_string()));
        let seven = squarefree_scan(&nat(7), 0, &b).unwrap();
        assert_eq!(seven.hits[0].pp.to_string(), "2^3");
        let tiny = FactorBudget::new(10, 1, 1).unwrap();
        assert_eq!(squarefree_scan(&nat(1), 5, &tiny).unwrap().stalled_at, Some(4));
    }

    #[test]
    fn helpers() {
        let b = quick();
        let p = star_prefix(&nat(1), 7, &b).unwrap();
        assert_eq!(shared_prime(&p.terms), None);
        assert_eq!(max_pairwise_gcd(&[nat(4), nat(9), nat(6)]), nat(3));
    }
}
