//! The map `x -> x(x+1)`, its iterates, and gross sequences.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::factoring::is_prime;
use crate::Nat;

/// Default cap on the decimal size of a generated term.
pub const DEFAULT_MAX_DIGITS: u64 = 100_000;
/// Default number of gross terms scanned by [`suffix_offset`].
pub const DEFAULT_SUFFIX_DEPTH: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StarError {
    #[error("the map is defined on positive integers; got 0")]
    ZeroArgument,
    #[error("term {index} would exceed {max_digits} decimal digits")]
    TermTooLarge { index: usize, max_digits: u64 },
    #[error("seed list is empty")]
    EmptySeed,
    #[error("{0} is not prime")]
    NotPrime(Nat),
    #[error("duplicate prime {0}")]
    DuplicatePrime(Nat),
    #[error("gross recursions disagree at term {0}")]
    RecursionMismatch(usize),
}

fn check_domain(x: &Nat) -> Result<(), StarError> {
    if x.is_zero() {
        Err(StarError::ZeroArgument)
    } else {
        Ok(())
    }
}

/// Upper bound on the decimal digit count of `n`.
pub fn digit_bound(n: &Nat) -> u64 {
    // log10(2) rounded up.
    (n.bits() * 30_103).div_ceil(100_000).max(1)
}

pub fn star(x: &Nat) -> Result<Nat, StarError> {
    check_domain(x)?;
    Ok(x * (x + 1u32))
}

/// `k`-fold application of [`star`]; `star_pow(x, 0) = x`.
pub fn star_pow(x: &Nat, k: usize) -> Result<Nat, StarError> {
    star_pow_bounded(x, k, DEFAULT_MAX_DIGITS)
}

pub fn star_pow_bounded(x: &Nat, k: usize, max_digits: u64) -> Result<Nat, StarError> {
    check_domain(x)?;
    let mut acc = x.clone();
    for index in 0..k {
        if 2 * digit_bound(&acc) > max_digits + 1 {
            return Err(StarError::TermTooLarge {
                index: index + 1,
                max_digits,
            });
        }
        acc = &acc * (&acc + 1u32);
    }
    Ok(acc)
}

fn guard(next_index: usize, current: &Nat, max_digits: u64) -> Result<(), StarError> {
    // Squaring at most doubles the digit count, plus one for the carry.
    if next_index > 0 && 2 * digit_bound(current) > max_digits + 1 {
        return Err(StarError::TermTooLarge {
            index: next_index,
            max_digits,
        });
    }
    Ok(())
}

/// First `count` terms `star^k(x) + 1`, by iterating the map.
pub fn gross_prefix(x: &Nat, count: usize, max_digits: u64) -> Result<Vec<Nat>, StarError> {
    check_domain(x)?;
    let mut out = Vec::with_capacity(count);
    let mut s = x.clone();
    for k in 0..count {
        if k > 0 {
            guard(k, &s, max_digits)?;
            s = &s * (&s + 1u32);
        }
        out.push(&s + 1u32);
    }
    Ok(out)
}

/// First `count` terms by the product recursion `w_{k+1} = 1 + prod_{j<=k} w_j`
/// with `w_0 = x`, returning `w_1, w_2, ...`.
pub fn gross_via_product(x: &Nat, count: usize, max_digits: u64) -> Result<Vec<Nat>, StarError> {
    check_domain(x)?;
    let mut out: Vec<Nat> = Vec::with_capacity(count);
    let mut product = x.clone();
    for k in 0..count {
        guard(k, &product, max_digits)?;
        let w = &product + 1u32;
        product *= &w;
        out.push(w);
    }
    Ok(out)
}

/// Memoized gross sequence. Each batch of new terms is computed by both
/// recursions and committed only when they agree.
#[derive(Debug, Clone)]
pub struct GrossSeq {
    base: Nat,
    max_digits: u64,
    cache: Vec<Nat>,
    // star^(len-1)(x) by iteration, and x * w_1 * ... * w_len by the product recursion.
    star_state: Nat,
    product_state: Nat,
}

impl GrossSeq {
    pub fn new(base: Nat, max_digits: u64) -> Result<Self, StarError> {
        check_domain(&base)?;
        Ok(GrossSeq {
            star_state: base.clone(),
            product_state: base.clone(),
            base,
            max_digits,
            cache: Vec::new(),
        })
    }

    pub fn base(&self) -> &Nat {
        &self.base
    }

    pub fn cached(&self) -> &[Nat] {
        &self.cache
    }

    pub fn ensure(&mut self, count: usize) -> Result<(), StarError> {
        while self.cache.len() < count {
            let k = self.cache.len();
            guard(k, &self.star_state, self.max_digits)?;
            let star_next = if k == 0 {
                self.star_state.clone()
            } else {
                &self.star_state * (&self.star_state + 1u32)
            };
            let via_star = &star_next + 1u32;
            let via_product = &self.product_state + 1u32;
            if via_star != via_product {
                return Err(StarError::RecursionMismatch(k));
            }
            self.product_state *= &via_product;
            self.star_state = star_next;
            self.cache.push(via_star);
        }
        Ok(())
    }

    /// `star^k(x) + 1`.
    pub fn term(&mut self, k: usize) -> Result<&Nat, StarError> {
        self.ensure(k + 1)?;
        Ok(&self.cache[k])
    }

    pub fn prefix(&mut self, count: usize) -> Result<&[Nat], StarError> {
        self.ensure(count)?;
        Ok(&self.cache[..count])
    }
}

/// Outcome of a bounded search for `y + 1` in the gross sequence of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum SuffixSearch {
    /// `star^offset(x) + 1 = y + 1`; the gross sequence of `y` starts there.
    Found { offset: usize },
    /// Not among the first `depth + 1` terms.
    Absent { depth: usize },
}

impl SuffixSearch {
    pub fn offset(self) -> Option<usize> {
        match self {
            SuffixSearch::Found { offset } => Some(offset),
            SuffixSearch::Absent { .. } => None,
        }
    }
}

/// Least `k <= depth` with `star^k(x) = y`.
pub fn suffix_offset(x: &Nat, y: &Nat, depth: usize) -> Result<SuffixSearch, StarError> {
    check_domain(x)?;
    check_domain(y)?;
    let mut s = x.clone();
    for k in 0..=depth {
        if k > 0 {
            s = &s * (&s + 1u32);
        }
        if s == *y {
            return Ok(SuffixSearch::Found { offset: k });
        }
        if s > *y {
            break;
        }
    }
    Ok(SuffixSearch::Absent { depth })
}

/// `1 + product(primes)`, a starting point whose gross sequence avoids every
/// listed prime.
pub fn euclid_seed(primes: &[Nat]) -> Result<Nat, StarError> {
    if primes.is_empty() {
        return Err(StarError::EmptySeed);
    }
    let mut seen = BTreeSet::new();
    let mut product = Nat::one();
    for p in primes {
        if !is_prime(p).unwrap_or(false) {
            return Err(StarError::NotPrime(p.clone()));
        }
        if !seen.insert(p.clone()) {
            return Err(StarError::DuplicatePrime(p.clone()));
        }
        product *= p;
    }
    Ok(product + 1u32)
}
