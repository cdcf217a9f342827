//! Primality certification and budget-limited factorization.
//!
//! The ladder is trial division, perfect-power extraction, then Pollard rho
//! with Brent's cycle detection. Anything that survives the budget is kept
//! as a composite cofactor and the factorization is marked partial.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sieve::{small_primes, TABLE_LIMIT};
use crate::Nat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("{0} is below 2")]
    BelowTwo(Nat),
    #[error("{0} is not prime")]
    NotPrime(Nat),
    #[error("{0} is not a prime power")]
    NotPrimePower(Nat),
    #[error("prime power exponent must be at least 1")]
    ZeroExponent,
    #[error("factor budget field `{0}` must be positive")]
    InvalidBudget(&'static str),
    #[error("cannot parse prime power `{0}`")]
    Parse(String),
}

/// Miller-Rabin with the first thirteen prime bases is exact below this bound.
pub const DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;
const DETERMINISTIC_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
/// Random-witness rounds above the deterministic bound; error below 4^-64.
pub const PROBABILISTIC_ROUNDS: u32 = 64;
const WITNESS_SEED: u64 = 0x57a2_5eed_0000_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Deterministic,
    Probabilistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Primality {
    pub prime: bool,
    pub regime: Regime,
}

pub fn primality(n: &Nat) -> Result<Primality, FactorError> {
    if *n < BigUint::from(2u32) {
        return Err(FactorError::BelowTwo(n.clone()));
    }
    if let Some(small) = n.to_u64() {
        return Ok(Primality {
            prime: is_prime_u64(small),
            regime: Regime::Deterministic,
        });
    }
    if n.to_u128().is_some_and(|v| v < DETERMINISTIC_BOUND) {
        let prime = small_prime_divisor_free(n)
            && DETERMINISTIC_BASES
                .iter()
                .all(|&a| miller_rabin_round(n, &BigUint::from(a)));
        return Ok(Primality {
            prime,
            regime: Regime::Deterministic,
        });
    }
    let prime = small_prime_divisor_free(n) && {
        let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
        let low = BigUint::from(2u32);
        let high = n - 1u32;
        (0..PROBABILISTIC_ROUNDS).all(|_| {
            let a = rng.gen_biguint_range(&low, &high);
            miller_rabin_round(n, &a)
        })
    };
    Ok(Primality {
        prime,
        regime: Regime::Probabilistic,
    })
}

pub fn is_prime(n: &Nat) -> Result<bool, FactorError> {
    primality(n).map(|p| p.prime)
}

fn small_prime_divisor_free(n: &Nat) -> bool {
    small_primes().iter().take(64).all(|&p| !(n % p).is_zero())
}

fn miller_rabin_round(n: &Nat, a: &Nat) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES[..12] {
        let p = p as u64;
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &DETERMINISTIC_BASES[..12] {
        let mut x = pow_mod(a as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// One prime power `p^e` with a certified prime base.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: Nat,
    e: u32,
    value: Nat,
}

impl PrimePower {
    pub fn new(p: Nat, e: u32) -> Result<Self, FactorError> {
        if e == 0 {
            return Err(FactorError::ZeroExponent);
        }
        if !is_prime(&p).map_err(|_| FactorError::NotPrime(p.clone()))? {
            return Err(FactorError::NotPrime(p));
        }
        Ok(Self::from_certified(p, e))
    }

    /// Caller guarantees `p` is prime and `e >= 1`.
    pub(crate) fn from_certified(p: Nat, e: u32) -> Self {
        debug_assert!(e >= 1);
        let value = num_traits::pow(p.clone(), e as usize);
        PrimePower { p, e, value }
    }

    /// Recognizes `n` as a prime power, if it is one.
    pub fn from_value(n: &Nat) -> Result<Self, FactorError> {
        let f = factor(n, &FactorBudget::default())?;
        match (f.parts(), f.cofactor()) {
            ([single], None) => Ok(single.clone()),
            _ => Err(FactorError::NotPrimePower(n.clone())),
        }
    }

    pub fn prime(&self) -> &Nat {
        &self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn value(&self) -> &Nat {
        &self.value
    }
}

impl PartialOrd for PrimePower {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimePower {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.p, self.e).cmp(&(&other.p, other.e))
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.e)
        }
    }
}

impl FromStr for PrimePower {
    type Err = FactorError;

    /// Accepts `p`, `p^e`, or a bare value such as `8` that is a prime power.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FactorError::Parse(s.to_string());
        let s = s.trim();
        match s.split_once('^') {
            Some((p, e)) => {
                let p = Nat::from_str(p.trim()).map_err(|_| bad())?;
                let e = e.trim().parse::<u32>().map_err(|_| bad())?;
                PrimePower::new(p, e)
            }
            None => {
                let n = Nat::from_str(s).map_err(|_| bad())?;
                PrimePower::from_value(&n)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PrimePowerRepr {
    p: String,
    e: u32,
    value: String,
}

impl Serialize for PrimePower {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PrimePowerRepr {
            p: self.p.to_string(),
            e: self.e,
            value: self.value.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PrimePower {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PrimePowerRepr::deserialize(deserializer)?;
        let p = Nat::from_str(&repr.p).map_err(D::Error::custom)?;
        let pp = PrimePower::new(p, repr.e).map_err(D::Error::custom)?;
        if pp.value.to_string() != repr.value {
            return Err(D::Error::custom("value does not equal p^e"));
        }
        Ok(pp)
    }
}

/// Limits for one call to [`factor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    pub trial_bound: u64,
    pub rho_rounds: u32,
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 100_000,
            rho_rounds: 64,
            rho_iterations: 10_000_000,
        }
    }
}

impl FactorBudget {
    pub fn new(trial_bound: u64, rho_rounds: u32, rho_iterations: u64) -> Result<Self, FactorError> {
        let budget = FactorBudget {
            trial_bound,
            rho_rounds,
            rho_iterations,
        };
        budget.validate()?;
        Ok(budget)
    }

    pub fn validate(&self) -> Result<(), FactorError> {
        if self.trial_bound == 0 {
            return Err(FactorError::InvalidBudget("trial_bound"));
        }
        if self.rho_rounds == 0 {
            return Err(FactorError::InvalidBudget("rho_rounds"));
        }
        if self.rho_iterations == 0 {
            return Err(FactorError::InvalidBudget("rho_iterations"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Complete,
    Partial,
}

/// Prime powers of `target` in ascending prime order, plus the composite
/// remainder that the budget could not split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    target: Nat,
    parts: Vec<PrimePower>,
    cofactor: Option<Nat>,
}

impl Factorization {
    fn from_map(target: Nat, found: BTreeMap<Nat, u32>) -> Self {
        let parts: Vec<PrimePower> = found
            .into_iter()
            .map(|(p, e)| PrimePower::from_certified(p, e))
            .collect();
        let known = parts.iter().fold(Nat::one(), |acc, pp| acc * pp.value());
        let (quotient, rest) = target.div_rem(&known);
        debug_assert!(rest.is_zero());
        let cofactor = (!quotient.is_one()).then_some(quotient);
        Factorization {
            target,
            parts,
            cofactor,
        }
    }

    /// Combines factorizations of pieces whose product is `target`.
    pub fn merged<'a>(target: Nat, pieces: impl IntoIterator<Item = &'a Factorization>) -> Self {
        let mut found = BTreeMap::new();
        for piece in pieces {
            for pp in &piece.parts {
                *found.entry(pp.p.clone()).or_insert(0) += pp.e;
            }
        }
        Self::from_map(target, found)
    }

    pub fn target(&self) -> &Nat {
        &self.target
    }

    pub fn parts(&self) -> &[PrimePower] {
        &self.parts
    }

    pub fn cofactor(&self) -> Option<&Nat> {
        self.cofactor.as_ref()
    }

    pub fn status(&self) -> Status {
        if self.cofactor.is_none() {
            Status::Complete
        } else {
            Status::Partial
        }
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    pub fn recompose(&self) -> Nat {
        let known = self.parts.iter().fold(Nat::one(), |acc, pp| acc * pp.value());
        match &self.cofactor {
            Some(c) => known * c,
            None => known,
        }
    }

    pub fn distinct_primes(&self) -> usize {
        self.parts.len()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for pp in &self.parts {
            if !first {
                f.write_str(" * ")?;
            }
            write!(f, "{pp}")?;
            first = false;
        }
        if let Some(c) = &self.cofactor {
            if !first {
                f.write_str(" * ")?;
            }
            write!(f, "[{c}]")?;
        }
        Ok(())
    }
}

impl Serialize for Factorization {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Factorization", 4)?;
        s.serialize_field("target", &self.target.to_string())?;
        s.serialize_field("parts", &self.parts)?;
        s.serialize_field("status", &self.status())?;
        s.serialize_field("cofactor", &self.cofactor.as_ref().map(|c| c.to_string()))?;
        s.end()
    }
}

/// Factors `n` as far as `budget` allows. Deterministic for a fixed budget.
pub fn factor(n: &Nat, budget: &FactorBudget) -> Result<Factorization, FactorError> {
    if *n < BigUint::from(2u32) {
        return Err(FactorError::BelowTwo(n.clone()));
    }
    budget.validate()?;

    let mut found: BTreeMap<Nat, u32> = BTreeMap::new();
    let remaining = match n.to_u64() {
        Some(small) => {
            let (rest, certified_prime) = trial_divide_u64(small, budget.trial_bound, &mut found);
            if rest == 1 {
                return Ok(Factorization::from_map(n.clone(), found));
            }
            if certified_prime {
                found.insert(Nat::from(rest), 1);
                return Ok(Factorization::from_map(n.clone(), found));
            }
            Nat::from(rest)
        }
        None => {
            let (rest, certified_prime) = trial_divide_big(n, budget.trial_bound, &mut found);
            if rest.is_one() {
                return Ok(Factorization::from_map(n.clone(), found));
            }
            if certified_prime {
                found.insert(rest, 1);
                return Ok(Factorization::from_map(n.clone(), found));
            }
            rest
        }
    };

    let mut pending = vec![remaining];
    let mut stuck: Vec<Nat> = Vec::new();
    loop {
        while let Some(mut piece) = pending.pop() {
            for p in found.keys() {
                while (&piece % p).is_zero() {
                    piece /= p;
                }
            }
            if piece.is_one() {
                continue;
            }
            if is_prime(&piece)? {
                let e = multiplicity(n, &piece);
                found.insert(piece, e);
                continue;
            }
            if let Some(root) = perfect_power_root(&piece) {
                pending.push(root);
                continue;
            }
            match pollard_brent(&piece, budget) {
                Some(d) => {
                    let other = &piece / &d;
                    pending.push(d);
                    pending.push(other);
                }
                None => stuck.push(piece),
            }
        }
        // A prime found late may still divide an earlier unsplit piece.
        let mut progressed = false;
        for piece in std::mem::take(&mut stuck) {
            if found.keys().any(|p| (&piece % p).is_zero()) {
                progressed = true;
                pending.push(piece);
            } else {
                stuck.push(piece);
            }
        }
        if !progressed {
            break;
        }
    }
    Ok(Factorization::from_map(n.clone(), found))
}

fn multiplicity(n: &Nat, p: &Nat) -> u32 {
    let mut e = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        rest = q;
        e += 1;
    }
}

/// Returns the remainder and whether trial division has already proven it prime.
fn trial_divide_u64(mut n: u64, bound: u64, found: &mut BTreeMap<Nat, u32>) -> (u64, bool) {
    let mut exhausted = false;
    let mut take = |n: &mut u64, p: u64| {
        if (*n).is_multiple_of(p) {
            let mut e = 0;
            while (*n).is_multiple_of(p) {
                *n /= p;
                e += 1;
            }
            found.insert(Nat::from(p), e);
        }
    };
    let mut table_done = true;
    for &p in small_primes() {
        if p > bound {
            table_done = false;
            break;
        }
        if p.saturating_mul(p) > n {
            exhausted = true;
            break;
        }
        take(&mut n, p);
    }
    if !exhausted && table_done && bound > TABLE_LIMIT {
        let mut d = TABLE_LIMIT | 1;
        while d <= bound {
            if d.saturating_mul(d) > n {
                exhausted = true;
                break;
            }
            take(&mut n, d);
            d += 2;
        }
    }
    (n, exhausted && n > 1)
}

fn trial_divide_big(n: &Nat, bound: u64, found: &mut BTreeMap<Nat, u32>) -> (Nat, bool) {
    let mut rest = n.clone();
    let mut exhausted = false;
    let mut take = |rest: &mut Nat, p: u64| {
        if (&*rest % p).is_zero() {
            let mut e = 0;
            while (&*rest % p).is_zero() {
                *rest /= p;
                e += 1;
            }
            found.insert(Nat::from(p), e);
        }
    };
    let mut table_done = true;
    for &p in small_primes() {
        if p > bound {
            table_done = false;
            break;
        }
        if rest.bits() < 128 && rest.to_u128().is_some_and(|r| (p as u128) * (p as u128) > r) {
            exhausted = true;
            break;
        }
        take(&mut rest, p);
    }
    if !exhausted && table_done && bound > TABLE_LIMIT {
        let mut d = TABLE_LIMIT | 1;
        while d <= bound {
            if rest.bits() < 128 && rest.to_u128().is_some_and(|r| (d as u128) * (d as u128) > r) {
                exhausted = true;
                break;
            }
            take(&mut rest, d);
            d += 2;
        }
    }
    let prime = exhausted && !rest.is_one();
    (rest, prime)
}

/// Smallest root `r` with `r^k = n` for some `k >= 2`.
fn perfect_power_root(n: &Nat) -> Option<Nat> {
    let bits = n.bits() as u32;
    for k in 2..=bits {
        if !is_prime_u64(k as u64) {
            continue;
        }
        let r = n.nth_root(k);
        if r <= Nat::one() {
            break;
        }
        if num_traits::pow(r.clone(), k as usize) == *n {
            return perfect_power_root(&r).or(Some(r));
        }
    }
    None
}

const BRENT_BATCH: u64 = 128;

/// Finds a nontrivial divisor of the composite `n`, or gives up.
fn pollard_brent(n: &Nat, budget: &FactorBudget) -> Option<Nat> {
    if n.is_even() {
        return Some(Nat::from(2u32));
    }
    if let Some(small) = n.to_u64() {
        return (0..budget.rho_rounds)
            .find_map(|round| brent_round_u64(small, round as u64 + 1, budget.rho_iterations))
            .map(Nat::from);
    }
    (0..budget.rho_rounds).find_map(|round| brent_round_big(n, round as u64 + 1, budget.rho_iterations))
}

fn brent_round_u64(n: u64, c: u64, cap: u64) -> Option<u64> {
    let c = c % n;
    let f = |y: u64| (mul_mod(y, y, n) + c) % n;
    let mut y = 2 % n;
    let mut x = y;
    let mut ys = y;
    let mut g = 1;
    let mut q = 1;
    let mut r = 1u64;
    let mut spent = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        spent += r;
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let batch = BRENT_BATCH.min(r - k);
            for _ in 0..batch {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            spent += batch;
            g = q.gcd(&n);
            k += BRENT_BATCH;
        }
        r *= 2;
        if g == 1 && spent >= cap {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_round_big(n: &Nat, c: u64, cap: u64) -> Option<Nat> {
    let c = Nat::from(c) % n;
    let f = |y: &Nat| (y * y + &c) % n;
    let diff = |a: &Nat, b: &Nat| if a > b { a - b } else { b - a };
    let mut y = Nat::from(2u32) % n;
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut g = Nat::one();
    let mut q = Nat::one();
    let mut r = 1u64;
    let mut spent = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        spent += r;
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let batch = BRENT_BATCH.min(r - k);
            for _ in 0..batch {
                y = f(&y);
                q = (q * diff(&x, &y)) % n;
            }
            spent += batch;
            g = q.gcd(n);
            k += BRENT_BATCH;
        }
        r *= 2;
        if g.is_one() && spent >= cap {
            return None;
        }
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}
