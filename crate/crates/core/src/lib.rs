//! Iterates of the map `x -> x(x+1)` and the sequences built from them.
//!
//! * [`star_core`]: the map itself, gross sequences `<x+1; *x+1; **x+1; ...>`
//!   by two independent recursions, and suffix relations between them.
//! * [`factoring`]: Miller-Rabin certification and budget-limited
//!   factorization into ascending prime powers.
//! * [`star_stream`]: star sequences obtained by factoring gross terms, plus
//!   checks about which primes can and cannot appear in them.
//! * [`mother`]: the concatenated factorizations of `2, 3, 4, ...`.
//! * [`embedding`]: diagonal capture scheduling that realizes any
//!   prime-power sequence as pairwise formally disjoint subsequences of the
//!   mother sequence.
//! * [`analysis`]: exact reciprocal sums, the telescoping identity, and
//!   finite-depth divergence diagnostics.
//! * [`cli`]: the `starseq` command line and OEIS b-file cross-checks.

pub mod analysis;
pub mod cli;
pub mod embedding;
pub mod factoring;
pub mod mother;
pub mod oeis;
pub mod sieve;
pub mod star_core;
pub mod star_stream;

/// Arbitrary-precision natural number.
pub type Nat = num_bigint::BigUint;

pub use analysis::Rational;
pub use factoring::{factor, is_prime, FactorBudget, Factorization, PrimePower};
pub use star_core::GrossSeq;
pub use star_stream::{StarStream, StarTerm};
