//! Exact integer-polynomial machinery for the small-index denominator
//! analysis: univariate and bivariate homogeneous polynomials, resultants,
//! p-adic Newton polygons, and bounded searches for g(u,v) = ±pᵏ.

mod newton;
mod resultant;
mod solve;

pub use crate::dataset::{CaseCoordinates, DenominatorCase};
pub use newton::{newton_polygon, valuation_bound, NewtonPolygon};
pub use resultant::{resultant, resultant_pair_check};
pub use solve::{congruence_exclusion, solve_power_of_p, PowerSolution};

use crate::{Error, Result};
use rug::Integer;

/// Numerators and factored denominator of the coordinates of the n-th
/// multiple of a point, for 2 ≤ n ≤ 5, from the embedded dataset.
pub fn denominator_polys(n: u32) -> Result<DenominatorCase> {
    crate::dataset::formulas()?.case(n).cloned()
}

/// Univariate polynomial over ℤ. Coefficients are stored constant term
/// first with no trailing zeros; the zero polynomial is an empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    /// Build from constant-first coefficients, trimming leading zeros.
    pub fn new(mut coeffs: Vec<Integer>) -> IntPoly {
        while coeffs.last().is_some_and(|c| c.cmp0() == std::cmp::Ordering::Equal) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// Convenience constructor for small coefficients.
    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Constant-first coefficient slice (no trailing zeros).
    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// Coefficient of xⁱ (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Leading coefficient, `None` for zero.
    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    /// Evaluate by Horner's rule.
    pub fn eval(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Gcd of all coefficients (zero polynomial → 0).
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
        }
        g
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| Integer::from(-c)).collect(),
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        IntPoly::new(out)
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &Integer) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| Integer::from(a * c)).collect())
    }

    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![Integer::new(); k];
        out.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: out }
    }

    /// The composition f(1 + x), computed exactly.
    pub fn shift_one(&self) -> IntPoly {
        // Horner over the ring ℤ[x]: acc ← acc·(1+x) + cᵢ.
        let one_plus_x = IntPoly::from_i64(&[1, 1]);
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&one_plus_x);
            acc = acc.add(&IntPoly::new(vec![c.clone()]));
        }
        acc
    }
}

/// Bivariate homogeneous form of a declared degree d. `coeffs[i]`
/// multiplies uⁱ·v^(d−i); the leading u-coefficient may be zero, so the
/// u-degree can be lower than the formal degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogPoly {
    degree: usize,
    coeffs: Vec<Integer>,
}

impl HomogPoly {
    /// Build from u-ascending coefficients; exactly degree+1 entries.
    pub fn new(degree: usize, coeffs: Vec<Integer>) -> Result<HomogPoly> {
        if coeffs.len() != degree + 1 {
            return Err(Error::BadPolynomial(
                "homogeneous form needs degree+1 coefficients",
            ));
        }
        Ok(HomogPoly { degree, coeffs })
    }

    /// Convenience constructor for small coefficients.
    pub fn from_i64(degree: usize, coeffs: &[i64]) -> Result<HomogPoly> {
        HomogPoly::new(degree, coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    /// The formal homogeneous degree.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// u-ascending coefficient slice, length degree+1.
    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.cmp0() == std::cmp::Ordering::Equal)
    }

    /// Degree in u alone (highest index with nonzero coefficient).
    pub fn u_degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| c.cmp0() != std::cmp::Ordering::Equal)
    }

    /// Evaluate at integers (u, v).
    pub fn eval(&self, u: &Integer, v: &Integer) -> Integer {
        // Horner in u, with the matching v-power folded into each step:
        // ((c_d·u + c_{d-1}·v)·u + c_{d-2}·v²)·u + … keeps every partial
        // sum homogeneous, so a single pass suffices.
        let mut acc = Integer::new();
        let mut vpow = Integer::from(1);
        for c in self.coeffs.iter().rev() {
            acc *= u;
            acc += Integer::from(c * &vpow);
            vpow *= v;
        }
        acc
    }

    /// Specialize v = 1; the coefficient layout is already constant-first.
    pub fn specialize(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    /// Specialize v = 1 for resultant work, asserting no information is
    /// lost: unit content and a nonzero constant term in u.
    pub fn specialize_checked(&self) -> Result<IntPoly> {
        let p = self.specialize();
        if p.coeff(0).cmp0() == std::cmp::Ordering::Equal {
            return Err(Error::BadPolynomial(
                "specialization requires a nonzero constant u-coefficient",
            ));
        }
        if p.content() != 1 {
            return Err(Error::BadPolynomial(
                "specialization requires unit content",
            ));
        }
        Ok(p)
    }

    /// Swap the roles of u and v.
    pub fn swap_uv(&self) -> HomogPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        HomogPoly {
            degree: self.degree,
            coeffs,
        }
    }

    pub fn neg(&self) -> HomogPoly {
        HomogPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| Integer::from(-c)).collect(),
        }
    }

    /// Sum of two forms of equal degree.
    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly> {
        if self.degree != other.degree {
            return Err(Error::BadPolynomial("degree mismatch in sum of forms"));
        }
        Ok(HomogPoly {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| Integer::from(a + b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.add(&other.neg())
    }

    /// Product of forms (degrees add).
    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        let degree = self.degree + other.degree;
        let mut coeffs = vec![Integer::new(); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += Integer::from(a * b);
            }
        }
        HomogPoly { degree, coeffs }
    }

    /// k-th power (k = 0 gives the constant form 1 of degree 0).
    pub fn pow(&self, k: u32) -> HomogPoly {
        let mut acc = HomogPoly {
            degree: 0,
            coeffs: vec![Integer::from(1)],
        };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &Integer) -> HomogPoly {
        HomogPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| Integer::from(a * c)).collect(),
        }
    }

    /// The monomial uᵃ·vᵇ as a form of degree a+b.
    pub fn monomial(a: usize, b: usize) -> HomogPoly {
        let mut coeffs = vec![Integer::new(); a + b + 1];
        coeffs[a] = Integer::from(1);
        HomogPoly {
            degree: a + b,
            coeffs,
        }
    }

    /// Gcd of all coefficients.
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
        }
        g
    }

    /// Whether self ≡ ±(u−v)^degree modulo `modulus` — the shape every
    /// stored denominator factor has modulo 3.
    pub fn is_power_of_u_minus_v_mod(&self, modulus: u32) -> bool {
        let u_minus_v = HomogPoly::from_i64(1, &[-1, 1]).expect("fixed shape");
        let target = u_minus_v.pow(self.degree as u32);
        let modulus = Integer::from(modulus);
        for sign in [1i32, -1] {
            let diff = match self.sub(&target.scale(&Integer::from(sign))) {
                Ok(d) => d,
                Err(_) => return false,
            };
            if diff
                .coeffs
                .iter()
                .all(|c| Integer::from(c % &modulus).cmp0() == std::cmp::Ordering::Equal)
            {
                return true;
            }
        }
        false
    }
}
