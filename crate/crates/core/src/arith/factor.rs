//! Budgeted integer factorization.
//!
//! Terms of the sequences studied here grow to thousands of digits, so
//! complete factorization cannot be promised. [`factor`] spends a fixed,
//! deterministic effort — sieve-backed trial division followed by Brent's
//! variant of Pollard rho — and reports any unfactored remainder
//! explicitly as a composite cofactor instead of guessing.

use super::primality::{is_prime_power, primality, small_primes};
use crate::{Error, Result};
use rug::{ops::Pow, Integer};

/// Effort caps for [`factor`]. The defaults keep a single call well under
/// a second for inputs whose hard part is out of reach anyway.
#[derive(Debug, Clone)]
pub struct FactorBudget {
    /// Trial-divide by all primes up to this bound.
    pub trial_bound: u64,
    /// Total rho iterations allowed per stubborn composite.
    pub rho_iterations: u64,
    /// Number of polynomial constants tried before giving up.
    pub rho_attempts: u32,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 500_000,
            rho_attempts: 4,
        }
    }
}

impl FactorBudget {
    /// A light budget for callers that only want the smooth part.
    pub fn trial_only(bound: u64) -> Self {
        FactorBudget {
            trial_bound: bound,
            rho_iterations: 0,
            rho_attempts: 0,
        }
    }
}

/// Result of a budgeted factorization: sign · Π pᵢ^eᵢ · cofactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// −1 for negative input, +1 otherwise.
    pub sign: i32,
    /// Prime factors in ascending order with multiplicities. Factors
    /// above 2⁶⁴ are probable primes (see [`primality`]).
    pub factors: Vec<(Integer, u32)>,
    /// Unfactored composite part, present only when the budget ran out.
    pub cofactor: Option<Integer>,
}

impl Factorization {
    /// Whether every prime factor was found.
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    /// Recompose the original input.
    pub fn value(&self) -> Integer {
        let mut v = Integer::from(self.sign);
        for (p, e) in &self.factors {
            v *= Integer::from(p.pow(*e));
        }
        if let Some(c) = &self.cofactor {
            v *= c;
        }
        v
    }

    /// The distinct primes found, ascending.
    pub fn distinct_primes(&self) -> Vec<&Integer> {
        self.factors.iter().map(|(p, _)| p).collect()
    }

    /// Multiplicity of `p` among the found factors (0 if absent —
    /// which is only conclusive when [`Self::is_complete`]).
    pub fn multiplicity(&self, p: &Integer) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }
}

/// Factor `n` within `budget`. Zero is rejected; ±1 yield an empty list.
pub fn factor(n: &Integer, budget: &FactorBudget) -> Result<Factorization> {
    if n.cmp0() == std::cmp::Ordering::Equal {
        return Err(Error::ZeroArgument);
    }
    let sign = if n.cmp0() == std::cmp::Ordering::Less {
        -1
    } else {
        1
    };
    let mut remaining = n.clone().abs();
    let mut factors: Vec<(Integer, u32)> = Vec::new();

    for p in small_primes(budget.trial_bound) {
        if remaining == 1 {
            break;
        }
        let p = Integer::from(p);
        if Integer::from(&p * &p) > remaining {
            break;
        }
        let mut e = 0u32;
        while remaining.is_divisible(&p) {
            remaining.div_exact_mut(&p);
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    if remaining > 1 {
        // Anything below the square of the trial bound is now prime.
        let bound_sq = Integer::from(budget.trial_bound) * budget.trial_bound;
        if remaining < bound_sq {
            push_factor(&mut factors, remaining, 1);
            remaining = Integer::from(1);
        }
    }

    let mut cofactor = Integer::from(1);
    let mut pending = Vec::new();
    if remaining > 1 {
        pending.push((remaining, 1u32));
    }
    while let Some((value, mult)) = pending.pop() {
        if primality(&value).is_prime() {
            push_factor(&mut factors, value, mult);
            continue;
        }
        if let Some((p, k)) = is_prime_power(&value) {
            push_factor(&mut factors, p, k * mult);
            continue;
        }
        match rho_split(&value, budget) {
            Some(d) => {
                let other = Integer::from(value.div_exact_ref(&d));
                pending.push((d, mult));
                pending.push((other, mult));
            }
            None => cofactor *= Integer::from((&value).pow(mult)),
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    merge_adjacent(&mut factors);
    Ok(Factorization {
        sign,
        factors,
        cofactor: if cofactor == 1 { None } else { Some(cofactor) },
    })
}

fn push_factor(factors: &mut Vec<(Integer, u32)>, p: Integer, e: u32) {
    factors.push((p, e));
}

fn merge_adjacent(factors: &mut Vec<(Integer, u32)>) {
    let mut merged: Vec<(Integer, u32)> = Vec::with_capacity(factors.len());
    for (p, e) in factors.drain(..) {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    *factors = merged;
}

/// Try to split an odd composite with Brent's cycle-finding rho, cycling
/// through fixed polynomial constants. Fully deterministic.
fn rho_split(n: &Integer, budget: &FactorBudget) -> Option<Integer> {
    const CONSTANTS: [u32; 4] = [1, 3, 5, 7];
    let mut iterations_left = budget.rho_iterations;
    for attempt in 0..budget.rho_attempts {
        if iterations_left == 0 {
            return None;
        }
        let c = CONSTANTS[attempt as usize % CONSTANTS.len()];
        if let Some(d) = brent_rho(n, c, &mut iterations_left) {
            return Some(d);
        }
    }
    None
}

/// One Brent-rho run with iterate x ← x² + c, start 2, gcd batching.
/// Decrements `iterations_left` as it works; None when exhausted or when
/// the cycle degenerated (gcd = n).
fn brent_rho(n: &Integer, c: u32, iterations_left: &mut u64) -> Option<Integer> {
    const BATCH: u64 = 128;
    let step = |x: &Integer| -> Integer {
        let mut t = x.clone().square();
        t += c;
        t % n
    };
    let mut y = Integer::from(2);
    let mut r: u64 = 1;
    let mut q = Integer::from(1);
    loop {
        let x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        if *iterations_left <= r {
            *iterations_left = 0;
            return None;
        }
        *iterations_left -= r;
        let mut k: u64 = 0;
        while k < r {
            let ys = y.clone();
            let m = BATCH.min(r - k);
            for _ in 0..m {
                y = step(&y);
                let diff = Integer::from(&x - &y).abs();
                q = q * diff % n;
            }
            if *iterations_left <= m {
                *iterations_left = 0;
                return None;
            }
            *iterations_left -= m;
            let g = Integer::from(q.gcd_ref(n));
            if g > 1 {
                if g < *n {
                    return Some(g);
                }
                // The batch overshot past the factor; replay singly.
                let mut z = ys;
                loop {
                    z = step(&z);
                    let d = Integer::from(&x - &z).abs().gcd(n);
                    if d > 1 {
                        return if d < *n { Some(d) } else { None };
                    }
                }
            }
            k += m;
        }
        r *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Integer {
        Integer::from(n)
    }

    fn pairs(f: &Factorization) -> Vec<(i64, u32)> {
        f.factors
            .iter()
            .map(|(p, e)| (p.to_i64().unwrap(), *e))
            .collect()
    }

    #[test]
    fn test_rejects_zero() {
        assert!(factor(&int(0), &FactorBudget::default()).is_err());
    }

    #[test]
    fn test_units_and_small() {
        let f = factor(&int(1), &FactorBudget::default()).unwrap();
        assert_eq!((f.sign, f.factors.len(), f.cofactor), (1, 0, None));
        let f = factor(&int(-1), &FactorBudget::default()).unwrap();
        assert_eq!(f.sign, -1);
        let f = factor(&int(-960_540), &FactorBudget::default()).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(pairs(&f), vec![(2, 2), (3, 1), (5, 1), (7, 1), (2287, 1)]);
        assert!(f.is_complete());
        assert_eq!(f.value(), int(-960_540));
    }

    #[test]
    fn test_trial_only_leaves_cofactor() {
        // 1009 · 1013 with a tiny trial bound: nothing found, all cofactor.
        let n = int(1009 * 1013);
        let f = factor(&n, &FactorBudget::trial_only(100)).unwrap();
        assert!(pairs(&f).is_empty());
        assert_eq!(f.cofactor, Some(n.clone()));
        assert!(!f.is_complete());
        assert_eq!(f.value(), n);
    }

    #[test]
    fn test_rho_splits_semiprime() {
        // Two 11-digit primes; out of trial range, easy for rho.
        let p = Integer::from(10_000_000_019u64);
        let q = Integer::from(10_000_000_033u64);
        let n = Integer::from(&p * &q);
        let f = factor(&n, &FactorBudget::default()).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.factors, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn test_prime_power_shortcut() {
        let p = Integer::from(10_000_000_019u64);
        let n = Integer::from((&p).pow(3));
        let f = factor(&n, &FactorBudget::default()).unwrap();
        assert_eq!(f.factors, vec![(p, 3)]);
    }

    #[test]
    fn test_multiplicity_and_distinct() {
        let f = factor(&int(8 * 27 * 25), &FactorBudget::default()).unwrap();
        assert_eq!(f.multiplicity(&int(2)), 3);
        assert_eq!(f.multiplicity(&int(3)), 3);
        assert_eq!(f.multiplicity(&int(5)), 2);
        assert_eq!(f.multiplicity(&int(7)), 0);
        let distinct: Vec<i64> = f
            .distinct_primes()
            .iter()
            .map(|p| p.to_i64().unwrap())
            .collect();
        assert_eq!(distinct, vec![2, 3, 5]);
    }

    #[test]
    fn test_value_round_trip_with_cofactor() {
        // A 30-digit hard composite times smooth part: the hard part must
        // land in the cofactor and the product must still round-trip.
        let hard = (Integer::from(2).pow(89) - 1) * (Integer::from(2).pow(107) - 1);
        let n = Integer::from(&hard * 360u32);
        let mut budget = FactorBudget::default();
        budget.rho_iterations = 1_000; // far too little for 59-digit split
        let f = factor(&n, &budget).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.cofactor, Some(hard));
    }
}
