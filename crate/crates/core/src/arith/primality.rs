//! Primality testing and prime-power recognition.
//!
//! Below 2⁶⁴ the Miller-Rabin witness set {2, 3, 5, ..., 37} is a proof
//! (the set is known to have no strong pseudoprime below 3.3·10²⁴). Above,
//! the verdict combines a strong base-2 test with a strong Lucas test
//! (Selfridge parameters) and is reported as [`Primality::Probable`];
//! callers that surface verdicts to users must carry the label along.

use rug::{ops::Pow, Integer};
use std::sync::OnceLock;

/// Outcome of a primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primality {
    /// Proven composite (or < 2).
    Composite,
    /// Proven prime.
    Prime,
    /// Strong probable prime above the deterministic range.
    Probable,
}

impl Primality {
    /// True for both proven and probable primes.
    pub fn is_prime(self) -> bool {
        self != Primality::Composite
    }
}

const DETERMINISTIC_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Test `n` for primality; negative inputs are never prime.
pub fn primality(n: &Integer) -> Primality {
    if *n < 2 {
        return Primality::Composite;
    }
    // Quick screen by the primes below 100.
    for q in small_primes(100) {
        let q = Integer::from(q);
        if *n == q {
            return Primality::Prime;
        }
        if n.is_divisible(&q) {
            return Primality::Composite;
        }
    }
    let (d, s) = split_odd(&(n.clone() - 1u32));
    if n.to_u64().is_some() {
        for a in DETERMINISTIC_WITNESSES {
            if !miller_rabin_passes(n, &Integer::from(a), &d, s) {
                return Primality::Composite;
            }
        }
        return Primality::Prime;
    }
    if !miller_rabin_passes(n, &Integer::from(2), &d, s) {
        return Primality::Composite;
    }
    if n.is_perfect_square() {
        return Primality::Composite;
    }
    if !strong_lucas_passes(n) {
        return Primality::Composite;
    }
    Primality::Probable
}

/// Convenience wrapper: proven or probable prime.
pub fn is_prime(n: &Integer) -> bool {
    primality(n).is_prime()
}

/// Decompose |n| as a prime power p^k, if it is one.
///
/// Returns `Some((p, k))` with p (probably) prime and k ≥ 1 such that
/// |n| = p^k; `None` otherwise. Unlike factorization this is always
/// decisive: it needs only k-th roots and primality tests.
pub fn is_prime_power(n: &Integer) -> Option<(Integer, u32)> {
    let n = n.clone().abs();
    if n < 2 {
        return None;
    }
    if is_prime(&n) {
        return Some((n, 1));
    }
    let bits = n.significant_bits();
    for k in 2..bits {
        let root = n.clone().root(k);
        if Integer::from(root.clone().pow(k)) == n && is_prime(&root) {
            return Some((root, k));
        }
    }
    None
}

/// Primes up to `bound` (inclusive), via a plain sieve. The default
/// trial-division bound of 10⁶ is cached.
pub(crate) fn small_primes(bound: u64) -> Vec<u64> {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    const CACHED_BOUND: u64 = 1_000_000;
    if bound <= CACHED_BOUND {
        let all = CACHE.get_or_init(|| sieve(CACHED_BOUND));
        let cut = all.partition_point(|&p| p <= bound);
        return all[..cut].to_vec();
    }
    sieve(bound)
}

fn sieve(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            for multiple in (p * p..=n).step_by(p) {
                composite[multiple] = true;
            }
        }
        if p * p > n {
            break;
        }
    }
    for p in primes.last().map_or(2, |&q| q as usize + 1)..=n {
        if !composite[p] {
            primes.push(p as u64);
        }
    }
    primes
}

/// Write n = d·2^s with d odd.
fn split_odd(n: &Integer) -> (Integer, u32) {
    let s = n.find_one(0).unwrap_or(0);
    (Integer::from(n >> s), s)
}

/// One strong-pseudoprime round: base `a`, with n−1 = d·2^s precomputed.
fn miller_rabin_passes(n: &Integer, a: &Integer, d: &Integer, s: u32) -> bool {
    let a = Integer::from(a % n);
    if a.cmp0() == std::cmp::Ordering::Equal {
        return true;
    }
    let n_minus_1 = Integer::from(n - 1u32);
    let mut x = a.pow_mod(d, n).expect("positive modulus");
    if x == 1 || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x.square_mut();
        x %= n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Strong Lucas probable-prime test with Selfridge's parameters:
/// D = 5, −7, 9, −11, ... is the first with Jacobi(D|n) = −1, P = 1,
/// Q = (1 − D)/4. Requires n odd, > small primes, not a perfect square.
fn strong_lucas_passes(n: &Integer) -> bool {
    let mut d_abs = 5i64;
    let d = loop {
        let cand = Integer::from(if d_abs % 4 == 1 { d_abs } else { -d_abs });
        match cand.jacobi(n) {
            -1 => break cand,
            0 => {
                // Shared factor with n; n survived the small-prime screen,
                // so any common divisor < n proves n composite.
                let g = Integer::from(cand.gcd_ref(n));
                if g != *n {
                    return false;
                }
            }
            _ => {}
        }
        d_abs += 2;
    };
    let q = Integer::from(1 - d.clone()) / 4u32;
    let (k, s) = split_odd(&(n.clone() + 1u32));

    // Lucas ladder for U_k, V_k, Q^k mod n, MSB first; P = 1.
    let mut u = Integer::from(1);
    let mut v = Integer::from(1);
    let mut qk = modn(q.clone(), n);
    for i in (0..k.significant_bits() - 1).rev() {
        // Index doubling.
        u = modn(u * &v, n);
        v = modn(v.square() - Integer::from(2) * &qk, n);
        qk = modn(qk.square(), n);
        if k.get_bit(i) {
            // Index + 1 (P = 1): U' = (U + V)/2, V' = (D·U + V)/2.
            let new_u = half_mod(Integer::from(&u + &v), n);
            let new_v = half_mod(Integer::from(&d * &u) + &v, n);
            u = new_u;
            v = new_v;
            qk = modn(qk * &q, n);
        }
    }
    if u.cmp0() == std::cmp::Ordering::Equal || v.cmp0() == std::cmp::Ordering::Equal {
        return true;
    }
    for _ in 1..s {
        v = modn(v.square() - Integer::from(2) * &qk, n);
        if v.cmp0() == std::cmp::Ordering::Equal {
            return true;
        }
        qk = modn(qk.square(), n);
    }
    false
}

/// Reduce into [0, n).
fn modn(x: Integer, n: &Integer) -> Integer {
    let mut r = x % n;
    if r.cmp0() == std::cmp::Ordering::Less {
        r += n;
    }
    r
}

/// (x/2) mod n for odd n, where x is already reduced.
fn half_mod(x: Integer, n: &Integer) -> Integer {
    let x = modn(x, n);
    if x.is_even() {
        x >> 1
    } else {
        (x + n) >> 1
    }
}
