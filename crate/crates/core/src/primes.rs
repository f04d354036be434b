//! Prime enumeration and factorization by trial division.
//!
//! Factoring uses a fixed table of the first 64 primes and then falls back to
//! trial division by integers of the form 6k ± 1. Prime *positions*
//! (2 ↦ 0, 3 ↦ 1, 5 ↦ 2, ...) come from a sieve that grows on demand up to
//! [`PRIME_TABLE_LIMIT`].

use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};

pub const SMALL_PRIMES: [u64; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239,
    241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311,
];

/// Largest integer the position sieve will cover.
pub const PRIME_TABLE_LIMIT: u64 = 1 << 24;

fn table() -> &'static RwLock<Vec<u64>> {
    static TABLE: OnceLock<RwLock<Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(SMALL_PRIMES.to_vec()))
}

fn sieve(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Grows the table until it covers every prime up to `bound` and holds at least `count` primes.
fn ensure(bound: u64, count: usize) -> Result<()> {
    let covered = |t: &Vec<u64>, limit: u64| limit >= bound && t.len() >= count;
    let sieved_to = |t: &Vec<u64>| (*t.last().unwrap()).max(SMALL_PRIMES[63] + 1);
    {
        let t = table().read().unwrap();
        if covered(&t, sieved_to(&t)) {
            return Ok(());
        }
    }
    let mut t = table().write().unwrap();
    let mut limit = sieved_to(&t);
    while !covered(&t, limit) && limit < PRIME_TABLE_LIMIT {
        limit = (limit.max(512) * 2).min(PRIME_TABLE_LIMIT);
        *t = sieve(limit);
    }
    if limit < bound {
        return Err(Error::PrimeTooLarge(bound));
    }
    if t.len() < count {
        return Err(Error::PrimeTooLarge(PRIME_TABLE_LIMIT));
    }
    Ok(())
}

/// The `index`-th prime, zero based (`nth_prime(0) == 2`).
pub fn nth_prime(index: usize) -> u64 {
    if index < SMALL_PRIMES.len() {
        return SMALL_PRIMES[index];
    }
    ensure(0, index + 1).expect("prime index beyond table limit");
    table().read().unwrap()[index]
}

/// Zero-based position of the prime `p` among all primes.
pub fn prime_position(p: u64) -> Result<usize> {
    if let Ok(i) = SMALL_PRIMES.binary_search(&p) {
        return Ok(i);
    }
    if p > PRIME_TABLE_LIMIT {
        return Err(Error::PrimeTooLarge(p));
    }
    ensure(p, 0)?;
    table().read().unwrap().binary_search(&p).map_err(|_| Error::Precondition(format!("{p} is not prime")))
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factor(mut n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::NonPositiveIndex(0));
    }
    let mut out = Vec::new();
    let push = |n: &mut u64, p: u64, out: &mut Vec<(u64, u32)>| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    for &p in SMALL_PRIMES.iter() {
        if p * p > n {
            break;
        }
        push(&mut n, p, &mut out);
    }
    // 6k ± 1 candidates above the table (313 = 6·52 + 1).
    let mut k = 313u64;
    while k.checked_mul(k).is_some_and(|kk| kk <= n) {
        push(&mut n, k, &mut out);
        let k2 = k + 4;
        if k2.checked_mul(k2).is_some_and(|kk| kk <= n) {
            push(&mut n, k2, &mut out);
        }
        k += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Greatest prime divisor; `None` for `n == 1`.
pub fn greatest_prime_divisor(n: u64) -> Result<Option<u64>> {
    Ok(factor(n)?.last().map(|&(p, _)| p))
}

/// True when every prime factor of `n` is among the first `budget` primes.
pub fn is_smooth(mut n: u64, budget: usize) -> bool {
    if n == 0 {
        return false;
    }
    for j in 0..budget {
        if n == 1 {
            break;
        }
        let p = nth_prime(j);
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    n == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_match_enumeration() {
        assert_eq!(prime_position(2).unwrap(), 0);
        assert_eq!(prime_position(311).unwrap(), 63);
        assert_eq!(prime_position(313).unwrap(), 64);
        assert_eq!(nth_prime(64), 313);
        assert_eq!(nth_prime(1228), 9973);
        assert!(prime_position(9).is_err());
    }

    #[test]
    fn factors_past_the_small_table() {
        assert_eq!(factor(313 * 317).unwrap(), vec![(313, 1), (317, 1)]);
        assert_eq!(factor(2 * 3 * 3 * 1009).unwrap(), vec![(2, 1), (3, 2), (1009, 1)]);
        assert_eq!(factor(97 * 97).unwrap(), vec![(97, 2)]);
        assert_eq!(factor(1).unwrap(), vec![]);
        assert!(factor(0).is_err());
    }

    #[test]
    fn smoothness() {
        assert!(is_smooth(12, 2));
        assert!(!is_smooth(10, 2));
        assert!(is_smooth(1, 0));
        assert!(!is_smooth(2, 0));
    }
}
