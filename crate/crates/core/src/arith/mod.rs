//! Integer and rational scalar kernels: p-adic valuations, primality
//! testing, budgeted factorization, and small parsing helpers.
//!
//! All arithmetic is exact. The only verdict that is ever probabilistic is
//! primality above 2⁶⁴, and it is labelled as such ([`Primality::Probable`]);
//! nothing downstream silently upgrades a probable verdict to a proof.

mod factor;
mod primality;

pub use factor::{factor, FactorBudget, Factorization};
pub use primality::{is_prime, is_prime_power, primality, Primality};

use crate::{Error, Result};
use rug::{ops::Pow, Integer, Rational};

/// p-adic valuation of a non-zero integer.
///
/// Requires `p` prime and `n` non-zero.
pub fn padic_ord_int(n: &Integer, p: &Integer) -> Result<i64> {
    if n.cmp0() == std::cmp::Ordering::Equal {
        return Err(Error::ZeroArgument);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let mut rest = n.clone().abs();
    let mut ord = 0i64;
    while rest.is_divisible(p) {
        rest.div_exact_mut(p);
        ord += 1;
    }
    Ok(ord)
}

/// p-adic valuation `ord_p(x)` of a non-zero rational, i.e. the valuation of
/// the numerator minus the valuation of the denominator.
pub fn padic_ord(x: &Rational, p: &Integer) -> Result<i64> {
    if x.cmp0() == std::cmp::Ordering::Equal {
        return Err(Error::ZeroArgument);
    }
    Ok(padic_ord_int(x.numer(), p)? - padic_ord_int(x.denom(), p)?)
}

/// True when no cube of a prime divides `m`.
///
/// Only primes up to |m|^(1/3) can occur cubed, so plain trial division is
/// exact and cheap at any size this crate handles.
pub fn is_cube_free(m: &Integer) -> bool {
    let m = m.clone().abs();
    if m <= 1 {
        return true;
    }
    let bound = m.clone().root(3);
    let mut d = Integer::from(2);
    while d <= bound {
        let cube = d.clone().pow(3);
        if m.is_divisible(&cube) {
            return false;
        }
        d += 1;
    }
    true
}

/// Parse an exact integer or `num/den` string into a canonical rational.
///
/// The fraction need not be in lowest terms; the result always is.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<Integer> {
        Integer::parse(t)
            .map(Integer::from)
            .map_err(|_| Error::Parse(s.to_owned()))
    };
    match s.split_once('/') {
        None => Ok(Rational::from(parse_int(s)?)),
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den.cmp0() == std::cmp::Ordering::Equal {
                return Err(Error::Parse(s.to_owned()));
            }
            Ok(Rational::from((parse_int(num)?, den)))
        }
    }
}

/// Largest k with p^k dividing both n and the claim n = ±p^k, if any.
///
/// Returns `Some((k, sign))` when `n = sign · p^k` exactly (k may be 0, in
/// which case n = ±1).
pub fn pure_power_of(n: &Integer, p: &Integer) -> Option<(u32, i32)> {
    if n.cmp0() == std::cmp::Ordering::Equal {
        return None;
    }
    let sign = if n.cmp0() == std::cmp::Ordering::Less { -1 } else { 1 };
    let mut rest = n.clone().abs();
    let mut k = 0u32;
    while rest.is_divisible(p) {
        rest.div_exact_mut(p);
        k += 1;
    }
    if rest == 1 {
        Some((k, sign))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(n: i64) -> Integer {
        Integer::from(n)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn test_padic_ord_basics() {
        let p2 = int(2);
        let p3 = int(3);
        let p7 = int(7);
        assert_eq!(padic_ord(&rat(12, 1), &p2).unwrap(), 2);
        assert_eq!(padic_ord(&rat(12, 1), &p3).unwrap(), 1);
        // 37/21 has a simple pole at 7.
        assert_eq!(padic_ord(&rat(37, 21), &p7).unwrap(), -1);
        assert_eq!(padic_ord(&rat(-8, 27), &p3).unwrap(), -3);
    }

    #[test]
    fn test_padic_ord_rejects_bad_input() {
        assert!(matches!(
            padic_ord(&Rational::new(), &int(2)),
            Err(Error::ZeroArgument)
        ));
        assert!(matches!(
            padic_ord(&rat(1, 2), &int(6)),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn test_cube_free() {
        assert!(is_cube_free(&int(6)));
        assert!(is_cube_free(&int(20)));
        assert!(is_cube_free(&int(-94)));
        assert!(!is_cube_free(&int(8)));
        assert!(!is_cube_free(&int(-54)));
        assert!(!is_cube_free(&int(250_047))); // 63^3
        assert!(is_cube_free(&int(1)));
    }

    #[test]
    fn test_parse_rational() {
        assert_eq!(parse_rational("28").unwrap(), rat(28, 1));
        assert_eq!(parse_rational("-8").unwrap(), rat(-8, 1));
        assert_eq!(parse_rational("553/9").unwrap(), rat(553, 9));
        // Non-canonical input is reduced.
        assert_eq!(parse_rational("28/10").unwrap(), rat(14, 5));
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn test_pure_power_of() {
        let p3 = int(3);
        assert_eq!(pure_power_of(&int(243), &p3), Some((5, 1)));
        assert_eq!(pure_power_of(&int(-9), &p3), Some((2, -1)));
        assert_eq!(pure_power_of(&int(1), &p3), Some((0, 1)));
        assert_eq!(pure_power_of(&int(12), &p3), None);
        assert_eq!(pure_power_of(&int(0), &p3), None);
    }

    proptest! {
        // ord_p is additive: ord_p(x·y) = ord_p(x) + ord_p(y).
        #[test]
        fn prop_padic_ord_additive(
            a in 1i64..50_000, b in 1i64..50_000,
            c in 1i64..50_000, d in 1i64..50_000,
            p in prop::sample::select(vec![2i64, 3, 5, 7, 11, 13]),
        ) {
            let p = int(p);
            let x = rat(a, b);
            let y = rat(c, d);
            let xy = x.clone() * y.clone();
            prop_assert_eq!(
                padic_ord(&xy, &p).unwrap(),
                padic_ord(&x, &p).unwrap() + padic_ord(&y, &p).unwrap()
            );
        }
    }
}
