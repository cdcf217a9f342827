//! The mother sequence: the prime-power factorizations of `2, 3, 4, ...`
//! concatenated in order, each ascending by prime.
//!
//! Terms are never stored wholesale. Sources are processed in fixed-size
//! chunks by a segmented sieve; only the running term count at each chunk
//! boundary is kept, plus a few recently used chunks. Occurrence lists are
//! cached per value since the embedding scheduler asks for them repeatedly.

use std::collections::{BTreeSet, HashMap};

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::factoring::PrimePower;
use crate::sieve::primes_up_to;
use crate::Nat;

/// Default largest source integer the generator will visit.
pub const DEFAULT_CEILING: u64 = 100_000_000;
const CHUNK: u64 = 1 << 16;
const CACHED_CHUNKS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MotherError {
    #[error("mother sequence generation ceiling {ceiling} reached")]
    CeilingReached { ceiling: u64 },
    #[error("{0} is too large for the mother sequence generator")]
    ValueTooLarge(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MotherTerm {
    pub index: u64,
    pub value: PrimePower,
    #[serde(serialize_with = "crate::analysis::ser_nat")]
    pub source: Nat,
    /// Position within the factorization of `source`.
    pub slot: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct RawTerm {
    p: u64,
    e: u32,
    source: u64,
    slot: u32,
}

impl RawTerm {
    fn into_term(self, index: u64) -> MotherTerm {
        MotherTerm {
            index,
            value: PrimePower::from_certified(Nat::from(self.p), self.e),
            source: Nat::from(self.source),
            slot: self.slot as usize,
        }
    }
}

#[derive(Debug, Default, Clone)]
struct Occurrences {
    next_multiplier: u64,
    indices: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct Mother {
    ceiling: u64,
    base_primes: Vec<u64>,
    /// `chunk_starts[c]` is the index of the first term contributed by chunk `c`.
    chunk_starts: Vec<u64>,
    prefix_cache: HashMap<u64, Vec<u32>>,
    term_cache: Option<(u64, Vec<RawTerm>)>,
    occurrences: HashMap<(u64, u32), Occurrences>,
}

impl Default for Mother {
    fn default() -> Self {
        Mother::new(DEFAULT_CEILING)
    }
}

impl Mother {
    pub fn new(ceiling: u64) -> Self {
        let ceiling = ceiling.max(2);
        Mother {
            ceiling,
            base_primes: primes_up_to(ceiling.isqrt() + 1),
            chunk_starts: vec![0],
            prefix_cache: HashMap::new(),
            term_cache: None,
            occurrences: HashMap::new(),
        }
    }

    pub fn ceiling(&self) -> u64 {
        self.ceiling
    }

    fn chunk_bounds(&self, c: u64) -> Option<(u64, u64)> {
        let lo = 2 + c * CHUNK;
        (lo <= self.ceiling).then(|| (lo, (lo + CHUNK).min(self.ceiling + 1)))
    }

    fn chunk_of(n: u64) -> u64 {
        (n - 2) / CHUNK
    }

    /// Distinct prime counts of every source in `[lo, hi)`.
    fn omegas(&self, lo: u64, hi: u64) -> Vec<u8> {
        let len = (hi - lo) as usize;
        let mut rem: Vec<u64> = (lo..hi).collect();
        let mut count = vec![0u8; len];
        for &p in &self.base_primes {
            if p * p >= hi {
                break;
            }
            let mut j = lo.div_ceil(p) * p;
            while j < hi {
                let i = (j - lo) as usize;
                count[i] += 1;
                let r = &mut rem[i];
                *r /= p;
                while (*r).is_multiple_of(p) {
                    *r /= p;
                }
                j += p;
            }
        }
        for (c, r) in count.iter_mut().zip(&rem) {
            if *r > 1 {
                *c += 1;
            }
        }
        count
    }

    /// Full factorizations of `[lo, hi)` in mother order.
    fn terms_in(&self, lo: u64, hi: u64) -> Vec<RawTerm> {
        let len = (hi - lo) as usize;
        let mut rem: Vec<u64> = (lo..hi).collect();
        let mut found: Vec<(u32, u64, u32)> = Vec::with_capacity(len * 3);
        for &p in &self.base_primes {
            if p * p >= hi {
                break;
            }
            let mut j = lo.div_ceil(p) * p;
            while j < hi {
                let i = (j - lo) as usize;
                let r = &mut rem[i];
                let mut e = 0;
                while (*r).is_multiple_of(p) {
                    *r /= p;
                    e += 1;
                }
                found.push((i as u32, p, e));
                j += p;
            }
        }
        for (i, &r) in rem.iter().enumerate() {
            if r > 1 {
                found.push((i as u32, r, 1));
            }
        }
        // Stable: primes were pushed in ascending order per source, and the
        // leftover prime is larger than every sieved one.
        found.sort_by_key(|&(i, _, _)| i);
        let mut out = Vec::with_capacity(found.len());
        let mut last = u32::MAX;
        let mut slot = 0;
        for (i, p, e) in found {
            slot = if i == last { slot + 1 } else { 0 };
            last = i;
            out.push(RawTerm {
                p,
                e,
                source: lo + i as u64,
                slot,
            });
        }
        out
    }

    fn ensure_counted(&mut self, c: u64) -> Result<(), MotherError> {
        while (self.chunk_starts.len() as u64) <= c + 1 {
            let next = self.chunk_starts.len() as u64 - 1;
            let (lo, hi) = self
                .chunk_bounds(next)
                .ok_or(MotherError::CeilingReached { ceiling: self.ceiling })?;
            let total: u64 = self.omegas(lo, hi).iter().map(|&w| w as u64).sum();
            let start = *self.chunk_starts.last().unwrap_or(&0);
            self.chunk_starts.push(start + total);
        }
        Ok(())
    }

    /// Number of terms contributed by sources `2..n`.
    fn terms_before(&mut self, n: u64) -> Result<u64, MotherError> {
        let c = Self::chunk_of(n);
        self.ensure_counted(c)?;
        let (lo, hi) = self
            .chunk_bounds(c)
            .ok_or(MotherError::CeilingReached { ceiling: self.ceiling })?;
        if !self.prefix_cache.contains_key(&c) {
            if self.prefix_cache.len() >= CACHED_CHUNKS {
                self.prefix_cache.clear();
            }
            let omegas = self.omegas(lo, hi);
            let mut prefix = Vec::with_capacity(omegas.len() + 1);
            let mut acc = 0u32;
            prefix.push(0);
            for w in omegas {
                acc += w as u32;
                prefix.push(acc);
            }
            self.prefix_cache.insert(c, prefix);
        }
        let within = self.prefix_cache[&c][(n - lo) as usize];
        Ok(self.chunk_starts[c as usize] + within as u64)
    }

    /// Number of distinct primes of `n` below `p`.
    fn slot_of(&self, n: u64, p: u64) -> u32 {
        let mut rest = n;
        let mut slot = 0;
        for &q in &self.base_primes {
            if q >= p {
                return slot;
            }
            if q * q > rest {
                break;
            }
            if rest.is_multiple_of(q) {
                slot += 1;
                while rest.is_multiple_of(q) {
                    rest /= q;
                }
            }
        }
        // What is left is 1 or a single prime.
        if rest > 1 && rest < p {
            slot += 1;
        }
        slot
    }

    fn cached_chunk_terms(&mut self, c: u64) -> Result<&[RawTerm], MotherError> {
        if self.term_cache.as_ref().is_none_or(|(cached, _)| *cached != c) {
            let (lo, hi) = self
                .chunk_bounds(c)
                .ok_or(MotherError::CeilingReached { ceiling: self.ceiling })?;
            let terms = self.terms_in(lo, hi);
            self.term_cache = Some((c, terms));
        }
        Ok(&self.term_cache.as_ref().expect("just filled").1)
    }

    /// The term `m_index`.
    pub fn term(&mut self, index: u64) -> Result<MotherTerm, MotherError> {
        while *self.chunk_starts.last().unwrap_or(&0) <= index {
            let c = self.chunk_starts.len() as u64 - 1;
            self.ensure_counted(c)?;
        }
        let c = self.chunk_starts.partition_point(|&s| s <= index) as u64 - 1;
        let start = self.chunk_starts[c as usize];
        let raw = self.cached_chunk_terms(c)?[(index - start) as usize];
        Ok(raw.into_term(index))
    }

    /// `m_0, ..., m_{count-1}`.
    pub fn prefix(&mut self, count: u64) -> Result<Vec<MotherTerm>, MotherError> {
        let mut out = Vec::with_capacity(count as usize);
        let mut c = 0;
        while (out.len() as u64) < count {
            self.ensure_counted(c)?;
            let start = self.chunk_starts[c as usize];
            let need = count - out.len() as u64;
            let terms = self.cached_chunk_terms(c)?;
            out.extend(
                terms
                    .iter()
                    .take(need as usize)
                    .enumerate()
                    .map(|(i, raw)| raw.into_term(start + i as u64)),
            );
            c += 1;
        }
        Ok(out)
    }

    fn key(value: &PrimePower) -> Result<(u64, u32), MotherError> {
        let p = value
            .prime()
            .to_u64()
            .ok_or_else(|| MotherError::ValueTooLarge(value.to_string()))?;
        Ok((p, value.exponent()))
    }

    /// Makes sure at least `count` occurrences of `value` are cached.
    fn extend_occurrences(&mut self, key: (u64, u32), count: usize) -> Result<(), MotherError> {
        let (p, e) = key;
        let base = p
            .checked_pow(e)
            .filter(|&b| b <= self.ceiling)
            .ok_or(MotherError::CeilingReached { ceiling: self.ceiling })?;
        let mut cursor = self.occurrences.remove(&key).unwrap_or(Occurrences {
            next_multiplier: 1,
            indices: Vec::new(),
        });
        let result = (|| {
            while cursor.indices.len() < count {
                let m = cursor.next_multiplier;
                cursor.next_multiplier += 1;
                if m.is_multiple_of(p) {
                    continue;
                }
                let n = base
                    .checked_mul(m)
                    .filter(|&n| n <= self.ceiling)
                    .ok_or(MotherError::CeilingReached { ceiling: self.ceiling })?;
                let index = self.terms_before(n)? + self.slot_of(n, p) as u64;
                cursor.indices.push(index);
            }
            Ok(())
        })();
        self.occurrences.insert(key, cursor);
        result
    }

    /// First `limit` indices `i` with `m_i = value`, ascending.
    pub fn occurrences(&mut self, value: &PrimePower, limit: usize) -> Result<Vec<u64>, MotherError> {
        let key = Self::key(value)?;
        self.extend_occurrences(key, limit)?;
        Ok(self.occurrences[&key].indices[..limit].to_vec())
    }

    /// Least index `t` with `m_t = value`, `t` not excluded, and `t > floor`.
    pub fn next_matching(
        &mut self,
        value: &PrimePower,
        excluded: &BTreeSet<u64>,
        floor: Option<u64>,
    ) -> Result<u64, MotherError> {
        let key = Self::key(value)?;
        let mut i = match (floor, self.occurrences.get(&key)) {
            (Some(f), Some(occ)) => occ.indices.partition_point(|&t| t <= f),
            _ => 0,
        };
        loop {
            self.extend_occurrences(key, i + 1)?;
            let t = self.occurrences[&key].indices[i];
            if floor.is_none_or(|f| t > f) && !excluded.contains(&t) {
                return Ok(t);
            }
            i += 1;
        }
    }
}

/// Convenience wrapper over a fresh generator.
pub fn mother_prefix(count: u64) -> Result<Vec<MotherTerm>, MotherError> {
    Mother::default().prefix(count)
}
