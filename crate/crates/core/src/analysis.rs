//! Exact reciprocal sums and finite-depth divergence diagnostics.

use std::collections::BTreeSet;

use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::factoring::{FactorBudget, PrimePower};
use crate::sieve::{prime_count, primes_up_to};
use crate::star_core::{gross_prefix, star_pow, StarError, DEFAULT_MAX_DIGITS};
use crate::star_stream::{StarStream, StreamError};
use crate::Nat;

/// Exact nonnegative fraction in lowest terms.
pub type Rational = num_rational::Ratio<Nat>;

/// Meissel-Mertens constant to the precision used in reports.
pub const MEISSEL_MERTENS: f64 = 0.261_497_21;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("reciprocal of 0")]
    ZeroElement,
    #[error("{0} is outside the domain of the estimate")]
    EstimateDomain(String),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Stream(#[from] StreamError),
}

pub(crate) fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

pub(crate) fn ser_nat<S: Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.denom() == &Nat::from(1u32) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `1/n`; panics on zero, callers check.
pub fn reciprocal(n: &Nat) -> Rational {
    Rational::new(Nat::from(1u32), n.clone())
}

/// Sum of `1/y` over the set. The empty sum is 0.
pub fn sigma_partial(set: &BTreeSet<Nat>) -> Result<Rational, AnalysisError> {
    let mut acc = Rational::zero();
    for y in set {
        if y.is_zero() {
            return Err(AnalysisError::ZeroElement);
        }
        acc += reciprocal(y);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecipCheck {
    pub x: String,
    pub n: usize,
    /// `star^k(x) + 1` for `k < n`.
    pub terms: Vec<String>,
    /// `star^n(x)`.
    pub tail_denominator: String,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: Rational,
    pub equal: bool,
}

/// Compares `1/x` with `sum_{k<n} 1/(star^k(x) + 1) + 1/star^n(x)` exactly.
pub fn recip_check(x: &Nat, n: usize) -> Result<RecipCheck, AnalysisError> {
    let lhs = reciprocal_checked(x)?;
    let terms = gross_prefix(x, n, DEFAULT_MAX_DIGITS)?;
    let tail = star_pow(x, n)?;
    let mut rhs = reciprocal(&tail);
    for t in &terms {
        rhs += reciprocal(t);
    }
    let equal = lhs == rhs;
    Ok(RecipCheck {
        x: x.to_string(),
        n,
        terms: terms.iter().map(|t| t.to_string()).collect(),
        tail_denominator: tail.to_string(),
        lhs,
        rhs,
        equal,
    })
}

fn reciprocal_checked(x: &Nat) -> Result<Rational, AnalysisError> {
    if x.is_zero() {
        return Err(StarError::ZeroArgument.into());
    }
    Ok(reciprocal(x))
}

/// `1/star^n(x)`, the gap between `1/x` and the `n`-term partial sum.
pub fn tail_bound(x: &Nat, n: usize) -> Result<Rational, AnalysisError> {
    let s = star_pow(x, n)?;
    reciprocal_checked(&s)
}

/// Natural log of an arbitrary-size natural number.
pub fn ln_nat(n: &Nat) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(0.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log log n + M`, natural logarithms.
pub fn mertens_from_ln(ln_n: f64) -> Result<f64, AnalysisError> {
    if ln_n.is_nan() || ln_n <= 0.0 {
        return Err(AnalysisError::EstimateDomain(format!("exp({ln_n})")));
    }
    Ok(ln_n.ln() + MEISSEL_MERTENS)
}

pub fn mertens_estimate(n: &Nat) -> Result<f64, AnalysisError> {
    if *n < Nat::from(3u32) {
        return Err(AnalysisError::EstimateDomain(n.to_string()));
    }
    mertens_from_ln(ln_nat(n))
}

/// Both readings of the prime-reciprocal growth estimate at `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorPiEstimate {
    pub log_log_n: f64,
    /// Number of primes up to `floor(log log n)`.
    pub prime_count_reading: u64,
    /// `(log log n + M) / log log log n`.
    pub ratio_reading: f64,
    /// `log log log n < 1`: the asymptotics say nothing at this scale.
    pub fragile: bool,
}

pub fn cor_pi_from_ln(ln_n: f64) -> Result<CorPiEstimate, AnalysisError> {
    // Need log log log n > 0, i.e. n > e^e.
    if ln_n.is_nan() || ln_n <= std::f64::consts::E {
        return Err(AnalysisError::EstimateDomain(format!("exp({ln_n})")));
    }
    let log_log_n = ln_n.ln();
    let lll = log_log_n.ln();
    Ok(CorPiEstimate {
        log_log_n,
        prime_count_reading: prime_count(log_log_n.floor() as u64),
        ratio_reading: (log_log_n + MEISSEL_MERTENS) / lll,
        fragile: lll < 1.0,
    })
}

pub fn cor_pi_estimate(n: &Nat) -> Result<CorPiEstimate, AnalysisError> {
    cor_pi_from_ln(ln_nat(n)).map_err(|_| AnalysisError::EstimateDomain(n.to_string()))
}

/// `sum_{p <= limit} 1/p` in floating point.
pub fn prime_reciprocal_sum(limit: u64) -> f64 {
    primes_up_to(limit).iter().rev().map(|&p| 1.0 / p as f64).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceRow {
    pub j: usize,
    pub gross_index: usize,
    pub term: PrimePower,
    /// Prime base of the term.
    pub prime: String,
    /// Running `sum 1/x_j`.
    #[serde(serialize_with = "ser_rational")]
    pub sum_terms: Rational,
    /// Running `sum 1/p_j` over the prime bases.
    #[serde(serialize_with = "ser_rational")]
    pub sum_primes: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub x: String,
    pub depth: usize,
    pub rows: Vec<DivergenceRow>,
    /// `sum_{k<=K} 1/(star^k(x) + 1)` for each fully processed gross index `K`.
    #[serde(serialize_with = "ser_rationals")]
    pub gross_sums: Vec<Rational>,
    /// Largest fully processed gross term.
    pub estimate_n: Option<String>,
    pub mertens_estimate: Option<f64>,
    pub cor_pi_estimate: Option<CorPiEstimate>,
    /// First gross index at or below `depth` that was not processed.
    pub stalled_at: Option<usize>,
}

fn ser_rationals<S: Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(fmt_rational))
}

impl DivergenceReport {
    /// Running sum over star terms at the end of each fully processed gross index.
    pub fn term_sums_by_gross(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let last_of_group = self
                .rows
                .get(i + 1)
                .is_none_or(|next| next.gross_index != row.gross_index);
            if last_of_group {
                out.push(row.sum_terms.clone());
            }
        }
        out
    }
}

/// Partial sums over the star sequence of `x` through gross index `depth`, with
/// descriptive estimates for the largest processed gross term.
pub fn divergence_report(x: &Nat, depth: usize, budget: &FactorBudget) -> Result<DivergenceReport, AnalysisError> {
    let mut stream = StarStream::new(x.clone(), *budget)?;
    stream.ensure_gross(depth)?;
    let done = stream.complete_through().map_or(0, |d| (d + 1).min(depth + 1));
    let mut rows = Vec::new();
    let mut sum_terms = Rational::zero();
    let mut sum_primes = Rational::zero();
    for t in stream.terms().iter().filter(|t| t.gross_index < done) {
        sum_terms += reciprocal(t.value());
        sum_primes += reciprocal(t.prime());
        rows.push(DivergenceRow {
            j: t.position,
            gross_index: t.gross_index,
            term: t.pp.clone(),
            prime: t.prime().to_string(),
            sum_terms: sum_terms.clone(),
            sum_primes: sum_primes.clone(),
        });
    }
    let gross = gross_prefix(x, done, DEFAULT_MAX_DIGITS)?;
    let mut gross_sums = Vec::with_capacity(done);
    let mut acc = Rational::zero();
    for g in &gross {
        acc += reciprocal(g);
        gross_sums.push(acc.clone());
    }
    let largest = gross.last();
    Ok(DivergenceReport {
        x: x.to_string(),
        depth,
        rows,
        gross_sums,
        estimate_n: largest.map(|n| n.to_string()),
        mertens_estimate: largest.and_then(|n| mertens_estimate(n).ok()),
        cor_pi_estimate: largest.and_then(|n| cor_pi_estimate(n).ok()),
        stalled_at: (done <= depth).then_some(done),
    })
}
