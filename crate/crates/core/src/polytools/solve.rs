//! Exhaustive searches over coprime integer pairs: box enumeration of
//! all prime-power values of a homogeneous form, and residue-class
//! exclusion of high p-adic valuations.

use super::HomogPoly;
use crate::arith::pure_power_of;
use crate::{Error, Result};
use rayon::prelude::*;
use rug::{ops::Pow, Integer};

/// A coprime pair at which a form takes the value `sign · p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct PowerSolution {
    pub u: i64,
    pub v: i64,
    pub k: u32,
    pub sign: i32,
}

/// Find every coprime pair with |u|, |v| ≤ `bound` where
/// g(u, v) = ±p^k for some k ≤ `k_max`.
///
/// Coprime means gcd(|u|, |v|) = 1, which admits (±1, 0) and (0, ±1)
/// but not (0, 0). Results are ordered by u then v, independent of the
/// parallel execution schedule.
pub fn solve_power_of_p(
    g: &HomogPoly,
    p: &Integer,
    k_max: u32,
    bound: i64,
) -> Result<Vec<PowerSolution>> {
    if g.is_zero() {
        return Err(Error::BadPolynomial("zero form has no power values"));
    }
    if bound < 2 {
        return Err(Error::BadIndex("search box must be at least 2"));
    }
    let stripes: Vec<Vec<PowerSolution>> = (-bound..=bound)
        .into_par_iter()
        .map(|u| {
            let mut hits = Vec::new();
            let ui = Integer::from(u);
            for v in -bound..=bound {
                if gcd_i64(u, v) != 1 {
                    continue;
                }
                let value = g.eval(&ui, &Integer::from(v));
                if let Some((k, sign)) = pure_power_of(&value, p) {
                    if k <= k_max {
                        hits.push(PowerSolution { u, v, k, sign });
                    }
                }
            }
            hits
        })
        .collect();
    Ok(stripes.into_iter().flatten().collect())
}

/// Decide by exhaustive residue enumeration whether every coprime pair
/// satisfies ord_p(g(u, v)) ≤ `k_threshold`.
///
/// Requires g ≡ ±(u − v)^deg mod p, the shape for which a finite check
/// mod p^(k_threshold+1) is decisive; returns `None` when that
/// precondition (or the u64 modulus range) fails. Otherwise
/// `Some(true)` means no pair with u, v not both divisible by p reaches
/// valuation k_threshold + 1, and `Some(false)` means some such residue
/// class does.
pub fn congruence_exclusion(g: &HomogPoly, p: &Integer, k_threshold: u32) -> Option<bool> {
    let p_small = p.to_u32()?;
    if !g.is_power_of_u_minus_v_mod(p_small) {
        return None;
    }
    let modulus = Integer::from(p.pow(k_threshold + 1)).to_u64()?;
    if modulus > u32::MAX as u64 {
        return None;
    }
    let p_small = p_small as u64;
    let coeffs: Vec<u64> = g
        .coeffs()
        .iter()
        .map(|c| c.mod_u(modulus as u32) as u64)
        .collect();
    for u in 0..modulus {
        for v in 0..modulus {
            if u % p_small == 0 && v % p_small == 0 {
                continue;
            }
            if eval_mod(&coeffs, u, v, modulus) == 0 {
                return Some(false);
            }
        }
    }
    Some(true)
}

/// Horner evaluation of Σ cᵢ uⁱ v^(d−i) mod m, coefficients ascending.
/// All operands stay below 2³², so intermediate products fit in u64.
fn eval_mod(coeffs: &[u64], u: u64, v: u64, m: u64) -> u64 {
    let mut descending = coeffs.iter().rev();
    let mut acc = *descending.next().expect("nonzero polynomial") % m;
    let mut vpow = 1u64;
    for c in descending {
        vpow = vpow * v % m;
        acc = (acc * u % m + c * vpow % m) % m;
    }
    acc
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    /// u² + uv + v²: positive definite, ≡ (u−v)² mod 3, and on coprime
    /// pairs its 3-adic valuation never exceeds 1.
    fn eisenstein_norm() -> HomogPoly {
        HomogPoly::from_i64(2, &[1, 1, 1]).unwrap()
    }

    #[test]
    fn test_gcd_pairs() {
        assert_eq!(gcd_i64(0, 0), 0);
        assert_eq!(gcd_i64(1, 0), 1);
        assert_eq!(gcd_i64(0, -1), 1);
        assert_eq!(gcd_i64(-6, 4), 2);
    }

    #[test]
    fn test_eval_mod_matches_exact() {
        let g = HomogPoly::from_i64(3, &[-7, 5, 0, 2]).unwrap();
        let m = 729u64;
        let coeffs: Vec<u64> = g.coeffs().iter().map(|c| c.mod_u(m as u32) as u64).collect();
        for (u, v) in [(0u64, 1u64), (5, 7), (728, 3), (100, 200)] {
            let exact = g.eval(&Integer::from(u), &Integer::from(v));
            assert_eq!(eval_mod(&coeffs, u, v, m), exact.mod_u(m as u32) as u64);
        }
    }

    #[test]
    fn test_solve_finds_axis_and_unit_pairs() {
        let got = solve_power_of_p(&eisenstein_norm(), &Integer::from(3), 5, 8).unwrap();
        let has = |u, v, k, sign| got.contains(&PowerSolution { u, v, k, sign });
        assert!(has(1, 0, 0, 1));
        assert!(has(0, 1, 0, 1));
        assert!(has(1, -1, 0, 1));
        assert!(has(1, 1, 1, 1));
        assert!(has(2, -1, 1, 1));
        // Positive definite form: no negative values, valuation caps at 1.
        assert!(got.iter().all(|s| s.sign == 1 && s.k <= 1));
        // Deterministic order: u ascending, then v ascending.
        let mut sorted = got.clone();
        sorted.sort_by_key(|s| (s.u, s.v));
        assert_eq!(got, sorted);
    }

    #[test]
    fn test_solve_k_max_filters() {
        let linear = HomogPoly::from_i64(1, &[-2, 1]).unwrap(); // u − 2v
        let all = solve_power_of_p(&linear, &Integer::from(3), 3, 5).unwrap();
        assert!(all.contains(&PowerSolution { u: 1, v: -1, k: 1, sign: 1 }));
        assert!(all.contains(&PowerSolution { u: -1, v: 1, k: 1, sign: -1 }));
        let units_only = solve_power_of_p(&linear, &Integer::from(3), 0, 5).unwrap();
        assert!(units_only.iter().all(|s| s.k == 0));
        assert!(units_only.contains(&PowerSolution { u: 1, v: 0, k: 0, sign: 1 }));
    }

    #[test]
    fn test_solve_rejects_bad_input() {
        let zero = HomogPoly::from_i64(2, &[0, 0, 0]).unwrap();
        assert!(solve_power_of_p(&zero, &Integer::from(3), 1, 10).is_err());
        assert!(solve_power_of_p(&eisenstein_norm(), &Integer::from(3), 1, 1).is_err());
    }

    #[test]
    fn test_exclusion_on_eisenstein_norm() {
        let g = eisenstein_norm();
        let p = Integer::from(3);
        // Valuation 2 is impossible on coprime pairs...
        assert_eq!(congruence_exclusion(&g, &p, 1), Some(true));
        // ...but valuation 1 does occur (u = v = 1).
        assert_eq!(congruence_exclusion(&g, &p, 0), Some(false));
    }

    #[test]
    fn test_exclusion_detects_unbounded_valuation() {
        // (u−v)²: u ≡ v mod 9 with v a unit gives valuation ≥ 2.
        let square = HomogPoly::from_i64(2, &[1, -2, 1]).unwrap();
        assert_eq!(congruence_exclusion(&square, &Integer::from(3), 1), Some(false));
    }

    #[test]
    fn test_exclusion_precondition_gate() {
        // u² + v² is not ±(u−v)² mod 3.
        let g = HomogPoly::from_i64(2, &[1, 0, 1]).unwrap();
        assert_eq!(congruence_exclusion(&g, &Integer::from(3), 1), None);
    }

    #[test]
    fn test_exclusion_agrees_with_search() {
        // Every solution the box search finds respects the excluded
        // threshold.
        let g = eisenstein_norm();
        let p = Integer::from(3);
        assert_eq!(congruence_exclusion(&g, &p, 1), Some(true));
        let found = solve_power_of_p(&g, &p, 10, 40).unwrap();
        assert!(found.iter().all(|s| s.k <= 1));
    }
}
