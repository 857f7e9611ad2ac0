//! Exact resultants over ℤ via the subresultant polynomial remainder
//! sequence, with the textbook sign conventions (the result matches the
//! Sylvester-matrix determinant, which the tests use as an oracle).

use super::{HomogPoly, IntPoly};
use crate::arith::pure_power_of;
use crate::{Error, Result};
use rug::{ops::Pow, Integer};

/// Resultant of two nonzero univariate polynomials.
///
/// Conventions: Res(f, g) = lc(f)^deg(g) · Π g(αᵢ) over the roots αᵢ of
/// f; constants give Res(c, g) = c^deg(g); Res vanishes exactly when f
/// and g share a factor.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<Integer> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::BadPolynomial("resultant of the zero polynomial"));
    }
    let df = f.degree().expect("nonzero");
    let dg = g.degree().expect("nonzero");
    if df == 0 {
        return Ok(f.coeff(0).pow(dg as u32));
    }
    if dg == 0 {
        return Ok(g.coeff(0).pow(df as u32));
    }

    // Subresultant PRS (Cohen, Algorithm 3.3.7). Contents are pulled out
    // first and restored through t; s tracks the swap/parity sign.
    let ca = f.content();
    let cb = g.content();
    let mut a = exact_divide_poly(f, &ca);
    let mut b = exact_divide_poly(g, &cb);
    let mut s = 1i32;
    let t = ca.pow(dg as u32) * cb.pow(df as u32);
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if df % 2 == 1 && dg % 2 == 1 {
            s = -s;
        }
    }
    let mut g_lc = Integer::from(1);
    let mut h = Integer::from(1);
    loop {
        let da = a.degree().expect("nonzero through the loop");
        let db = b.degree().expect("nonzero through the loop");
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        let divisor = Integer::from(&g_lc * &h.clone().pow(delta));
        b = exact_divide_poly(&r, &divisor);
        g_lc = a.leading().expect("nonzero").clone();
        h = if delta == 0 {
            h
        } else {
            let num = g_lc.clone().pow(delta);
            exact_divide(&num, &h.clone().pow(delta - 1))
        };
        match b.degree() {
            None => return Ok(Integer::new()), // common factor → resultant 0
            Some(0) => break,
            Some(_) => continue,
        }
    }
    let q = a.degree().expect("nonzero") as u32;
    let num = b.coeff(0).pow(q);
    let res = exact_divide(&num, &h.pow(q - 1));
    Ok(res * t * s)
}

/// True iff the v=1 specializations of two forms have resultant ±pᵏ for
/// some k ≥ 0 — i.e. any common divisor of coprime-argument values is a
/// power of p.
pub fn resultant_pair_check(g1: &HomogPoly, g2: &HomogPoly, p: &Integer) -> Result<bool> {
    let r = resultant(&g1.specialize_checked()?, &g2.specialize_checked()?)?;
    Ok(pure_power_of(&r, p).is_some())
}

/// Pseudo-remainder: the unique R with lc(b)^(deg a − deg b + 1)·a = Qb + R.
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let da = a.degree().expect("nonzero");
    let db = b.degree().expect("nonzero");
    debug_assert!(da >= db);
    let lb = b.leading().expect("nonzero").clone();
    let mut r = a.clone();
    let mut applied = 0u32;
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let lr = r.leading().expect("nonzero").clone();
        r = r.scale(&lb).sub(&b.shift_up(dr - db).scale(&lr));
        applied += 1;
    }
    let total = (da - db + 1) as u32;
    debug_assert!(applied <= total);
    r.scale(&lb.pow(total - applied))
}

/// Exact integer division, panicking loudly if the theory-guaranteed
/// divisibility ever fails (which would indicate a bug, not bad input).
fn exact_divide(num: &Integer, den: &Integer) -> Integer {
    let (q, r) = num.clone().div_rem(den.clone());
    assert!(
        r.cmp0() == std::cmp::Ordering::Equal,
        "inexact division in subresultant sequence"
    );
    q
}

fn exact_divide_poly(p: &IntPoly, den: &Integer) -> IntPoly {
    if *den == 1 {
        return p.clone();
    }
    IntPoly::new(p.coeffs().iter().map(|c| exact_divide(c, den)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Oracle: Sylvester-matrix determinant via fraction-free (Bareiss)
    /// elimination.
    fn sylvester_resultant(f: &IntPoly, g: &IntPoly) -> Integer {
        let m = f.degree().unwrap();
        let n = g.degree().unwrap();
        if m == 0 {
            return f.coeff(0).pow(n as u32);
        }
        if n == 0 {
            return g.coeff(0).pow(m as u32);
        }
        let size = m + n;
        let mut mat = vec![vec![Integer::new(); size]; size];
        for r in 0..n {
            for i in 0..=m {
                mat[r][r + i] = f.coeff(m - i);
            }
        }
        for r in 0..m {
            for i in 0..=n {
                mat[n + r][r + i] = g.coeff(n - i);
            }
        }
        let mut sign = 1i32;
        let mut prev = Integer::from(1);
        for k in 0..size - 1 {
            if mat[k][k].cmp0() == std::cmp::Ordering::Equal {
                let Some(swap) = (k + 1..size).find(|&r| {
                    mat[r][k].cmp0() != std::cmp::Ordering::Equal
                }) else {
                    return Integer::new();
                };
                mat.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let prod = Integer::from(&mat[i][j] * &mat[k][k])
                        - Integer::from(&mat[i][k] * &mat[k][j]);
                    let (q, r) = prod.div_rem(prev.clone());
                    assert!(r.cmp0() == std::cmp::Ordering::Equal);
                    mat[i][j] = q;
                }
                mat[i][k] = Integer::new();
            }
            prev = mat[k][k].clone();
        }
        Integer::from(&mat[size - 1][size - 1] * sign)
    }

    #[test]
    fn test_rejects_zero_polynomial() {
        assert!(resultant(&IntPoly::zero(), &IntPoly::from_i64(&[1, 1])).is_err());
    }

    #[test]
    fn test_linear_cases() {
        // (x−1, x+1) ↦ 2; matches the Sylvester determinant by hand.
        let r = resultant(&IntPoly::from_i64(&[-1, 1]), &IntPoly::from_i64(&[1, 1])).unwrap();
        assert_eq!(r, 2);
        // Res(ax+b, g) = a^deg(g)·g(−b/a): (2x+1, x²+1) ↦ 4·(1/4+1) = 5.
        let r = resultant(&IntPoly::from_i64(&[1, 2]), &IntPoly::from_i64(&[1, 0, 1])).unwrap();
        assert_eq!(r, 5);
    }

    #[test]
    fn test_constant_cases() {
        let c = IntPoly::from_i64(&[3]);
        let g = IntPoly::from_i64(&[1, 4, 0, 1]);
        assert_eq!(resultant(&c, &g).unwrap(), 27);
        assert_eq!(resultant(&g, &c).unwrap(), 27);
        assert_eq!(resultant(&c, &c).unwrap(), 1);
    }

    #[test]
    fn test_common_factor_gives_zero() {
        let f = IntPoly::from_i64(&[-1, 0, 1]); // (x−1)(x+1)
        let g = IntPoly::from_i64(&[-1, 1]); // x−1
        assert_eq!(resultant(&f, &g).unwrap(), 0);
    }

    #[test]
    fn test_swap_sign_rule() {
        // Res(g,f) = (−1)^(deg f·deg g) Res(f,g).
        let f = IntPoly::from_i64(&[2, 0, 0, 1]); // odd degree
        let g = IntPoly::from_i64(&[-3, 1]); // odd degree
        let fg = resultant(&f, &g).unwrap();
        let gf = resultant(&g, &f).unwrap();
        assert_eq!(fg, -gf.clone());
        assert_eq!(gf, f.eval(&Integer::from(3)));
    }

    #[test]
    fn test_multiplicativity() {
        let f = IntPoly::from_i64(&[1, 3, 1]);
        let g = IntPoly::from_i64(&[-2, 1, 2]);
        let h = IntPoly::from_i64(&[5, -1, 0, 1]);
        let lhs = resultant(&f.mul(&g), &h).unwrap();
        let rhs = resultant(&f, &h).unwrap() * resultant(&g, &h).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn test_pair_check_powers_of_three() {
        let g43 = HomogPoly::from_i64(4, &[1, 2, 0, 2, 1]).unwrap();
        let g44 = HomogPoly::from_i64(8, &[1, -2, 4, 4, -5, 4, 4, -2, 1]).unwrap();
        let three = Integer::from(3);
        assert!(resultant_pair_check(&g43, &g44, &three).unwrap());
        // u−v vs u+v: resultant ±2, not a power of 3.
        let a = HomogPoly::from_i64(1, &[-1, 1]).unwrap();
        let b = HomogPoly::from_i64(1, &[1, 1]).unwrap();
        assert!(!resultant_pair_check(&a, &b, &three).unwrap());
    }

    proptest! {
        #[test]
        fn prop_prs_matches_sylvester(
            fc in proptest::collection::vec(-30i64..=30, 1..=7),
            gc in proptest::collection::vec(-30i64..=30, 1..=7),
        ) {
            let f = IntPoly::from_i64(&fc);
            let g = IntPoly::from_i64(&gc);
            prop_assume!(!f.is_zero() && !g.is_zero());
            let prs = resultant(&f, &g).unwrap();
            let syl = sylvester_resultant(&f, &g);
            prop_assert_eq!(prs, syl);
        }
    }
}
