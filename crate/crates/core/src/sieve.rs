//! Small-prime tables shared by trial division, the mother sequence and the
//! prime-reciprocal diagnostics.

use std::sync::OnceLock;

/// Primes below this bound are kept in a process-wide table.
pub const TABLE_LIMIT: u64 = 1 << 20;

/// Sieve of Eratosthenes over `0..=limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// All primes below [`TABLE_LIMIT`], computed once.
pub fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| primes_up_to(TABLE_LIMIT))
}

/// Number of primes `<= n`, for small `n`.
pub fn prime_count(n: u64) -> u64 {
    if n < TABLE_LIMIT {
        small_primes().partition_point(|&p| p <= n) as u64
    } else {
        primes_up_to(n).len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(2), vec![2]);
    }

    #[test]
    fn counts() {
        assert_eq!(prime_count(0), 0);
        assert_eq!(prime_count(5), 3);
        assert_eq!(prime_count(1_000_000), 78_498);
    }
}
