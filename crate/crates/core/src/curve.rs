//! The four exact curve models attached to a twist parameter m — the
//! plane cubic U³ + V³ = m, the auxiliary model u·v·(u + v) = m, and
//! the Mordell curves Y² = X³ − 432m² and y² = x³ + 16m² — together
//! with the coordinate changes, the degree-3 isogeny, and an exact
//! rational-point group law.

use crate::{Error, Result};
use rug::ops::{DivRounding, Pow};
use rug::{Integer, Rational};
use std::fmt;

/// Which of the four models a `Curve` value denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// U³ + V³ = m.
    Cubic,
    /// u·v·(u + v) = m; carried as a coordinate patch only, with no
    /// group operations.
    Auxiliary,
    /// Y² = X³ − 432 m², the Weierstrass form of the cubic.
    Mordell,
    /// y² = x³ + 16 m², tied to `Mordell` by a degree-3 isogeny.
    MordellIsogenous,
}

/// A point in affine coordinates, or the group identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurvePoint {
    Identity,
    Affine { x: Rational, y: Rational },
}

impl CurvePoint {
    pub fn affine(x: Rational, y: Rational) -> CurvePoint {
        CurvePoint::Affine { x, y }
    }

    pub fn from_i64(x: i64, y: i64) -> CurvePoint {
        CurvePoint::Affine {
            x: Rational::from(x),
            y: Rational::from(y),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, CurvePoint::Identity)
    }

    /// Affine coordinates, or an error at the identity.
    pub fn coordinates(&self) -> Result<(&Rational, &Rational)> {
        match self {
            CurvePoint::Identity => Err(Error::IdentityPoint),
            CurvePoint::Affine { x, y } => Ok((x, y)),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Identity => write!(f, "identity"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// Reject twist parameters for which the constructions degenerate:
/// m must be non-zero, cube-free and not ±1 or ±2.
pub fn check_admissible(m: &Integer) -> Result<()> {
    if m.cmp0() == std::cmp::Ordering::Equal {
        return Err(Error::InadmissibleM(m.clone(), "m must be non-zero"));
    }
    if *m.as_abs() <= 2u32 {
        return Err(Error::InadmissibleM(
            m.clone(),
            "|m| must be at least 3",
        ));
    }
    if !crate::arith::is_cube_free(m) {
        return Err(Error::InadmissibleM(m.clone(), "m must be cube-free"));
    }
    Ok(())
}

/// One model with its twist parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    model: Model,
    m: Integer,
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.m;
        match self.model {
            Model::Cubic => write!(f, "U^3 + V^3 = {m}"),
            Model::Auxiliary => write!(f, "u*v*(u+v) = {m}"),
            Model::Mordell => write!(f, "Y^2 = X^3 - 432*{m}^2"),
            Model::MordellIsogenous => write!(f, "y^2 = x^3 + 16*{m}^2"),
        }
    }
}

impl Curve {
    /// Curve with an admissible twist parameter.
    pub fn new(model: Model, m: Integer) -> Result<Curve> {
        check_admissible(&m)?;
        Ok(Curve { model, m })
    }

    /// Curve with any non-zero twist parameter. Identities proved by
    /// the formulas below hold for all non-zero m, so sampled checks
    /// may use parameters the sequence constructions would reject.
    pub fn new_unchecked(model: Model, m: Integer) -> Result<Curve> {
        if m.cmp0() == std::cmp::Ordering::Equal {
            return Err(Error::InadmissibleM(m, "m must be non-zero"));
        }
        Ok(Curve { model, m })
    }

    pub fn m(&self) -> &Integer {
        &self.m
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Same twist parameter, cubic model.
    pub fn cubic(&self) -> Curve {
        self.with_model(Model::Cubic)
    }

    /// Same twist parameter, auxiliary model.
    pub fn auxiliary(&self) -> Curve {
        self.with_model(Model::Auxiliary)
    }

    /// Same twist parameter, Mordell model.
    pub fn mordell(&self) -> Curve {
        self.with_model(Model::Mordell)
    }

    /// Same twist parameter, isogenous Mordell model.
    pub fn mordell_isogenous(&self) -> Curve {
        self.with_model(Model::MordellIsogenous)
    }

    fn with_model(&self, model: Model) -> Curve {
        Curve {
            model,
            m: self.m.clone(),
        }
    }

    /// Constant term of the Weierstrass equation y² = x³ + k.
    pub fn mordell_coefficient(&self) -> Result<Integer> {
        let m2 = Integer::from(&self.m * &self.m);
        match self.model {
            Model::Mordell => Ok(m2 * -432),
            Model::MordellIsogenous => Ok(m2 * 16),
            _ => Err(Error::UnsupportedFamily),
        }
    }

    /// Whether the point satisfies this model's equation. The identity
    /// belongs to every model except the auxiliary one, which is
    /// carried without a marked point.
    pub fn contains(&self, p: &CurvePoint) -> bool {
        let (x, y) = match p {
            CurvePoint::Identity => return self.model != Model::Auxiliary,
            CurvePoint::Affine { x, y } => (x, y),
        };
        let m = Rational::from(&self.m);
        match self.model {
            Model::Cubic => cube(x) + cube(y) == m,
            Model::Auxiliary => Rational::from(x * y) * Rational::from(x + y) == m,
            Model::Mordell | Model::MordellIsogenous => {
                let k = Rational::from(self.mordell_coefficient().expect("mordell model"));
                square(y) == cube(x) + k
            }
        }
    }

    fn require_member(&self, p: &CurvePoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            match p {
                CurvePoint::Identity => Err(Error::UnsupportedFamily),
                CurvePoint::Affine { x, y } => Err(Error::NotOnCurve {
                    m: self.m.clone(),
                    x: x.clone(),
                    y: y.clone(),
                }),
            }
        }
    }

    // ------------------------------------------------------------------
    // Group law
    // ------------------------------------------------------------------

    /// Group inverse.
    pub fn neg(&self, p: &CurvePoint) -> Result<CurvePoint> {
        self.require_member(p)?;
        if p.is_identity() {
            return Ok(CurvePoint::Identity);
        }
        let (x, y) = p.coordinates()?;
        match self.model {
            Model::Mordell | Model::MordellIsogenous => {
                Ok(CurvePoint::affine(x.clone(), Rational::from(-y)))
            }
            // Inversion through the flex at infinity swaps the
            // coordinates of the cubic.
            Model::Cubic => Ok(CurvePoint::affine(y.clone(), x.clone())),
            Model::Auxiliary => Err(Error::UnsupportedFamily),
        }
    }

    /// Group sum of two points of this curve.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.require_member(p)?;
        self.require_member(q)?;
        match self.model {
            Model::Mordell | Model::MordellIsogenous => Ok(self.weierstrass_add(p, q)),
            Model::Cubic => {
                let w = self.mordell();
                let sum = w.weierstrass_add(&self.to_mordell(p)?, &self.to_mordell(q)?);
                w.to_cubic(&sum)
            }
            Model::Auxiliary => Err(Error::UnsupportedFamily),
        }
    }

    /// Group double of a point.
    pub fn double(&self, p: &CurvePoint) -> Result<CurvePoint> {
        self.add(p, p)
    }

    /// n-th multiple of a point, any integer n.
    pub fn mul(&self, n: i64, p: &CurvePoint) -> Result<CurvePoint> {
        self.require_member(p)?;
        if self.model == Model::Auxiliary {
            return Err(Error::UnsupportedFamily);
        }
        if n == 0 || p.is_identity() {
            return Ok(CurvePoint::Identity);
        }
        let base = if n < 0 { self.neg(p)? } else { p.clone() };
        let n = n.unsigned_abs();
        let mut acc = CurvePoint::Identity;
        for bit in (0..64 - n.leading_zeros()).rev() {
            acc = self.add_unchecked(&acc, &acc)?;
            if n >> bit & 1 == 1 {
                acc = self.add_unchecked(&acc, &base)?;
            }
        }
        Ok(acc)
    }

    /// Group law without membership re-validation (inputs already on
    /// the curve).
    fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        match self.model {
            Model::Mordell | Model::MordellIsogenous => Ok(self.weierstrass_add(p, q)),
            Model::Cubic => {
                let w = self.mordell();
                let sum = w.weierstrass_add(&self.to_mordell(p)?, &self.to_mordell(q)?);
                w.to_cubic(&sum)
            }
            Model::Auxiliary => Err(Error::UnsupportedFamily),
        }
    }

    /// Chord-and-tangent sum on y² = x³ + k.
    fn weierstrass_add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1) = match p {
            CurvePoint::Identity => return q.clone(),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let (x2, y2) = match q {
            CurvePoint::Identity => return p.clone(),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let lambda = if x1 == x2 {
            if Rational::from(y1 + y2).cmp0() == std::cmp::Ordering::Equal {
                return CurvePoint::Identity;
            }
            // Tangent slope on a curve with no x² or x term.
            square(x1) * Rational::from(3) / Rational::from(y1 * 2)
        } else {
            Rational::from(y2 - y1) / Rational::from(x2 - x1)
        };
        let x3 = square(&lambda) - x1 - x2;
        let y3 = lambda * Rational::from(x1 - &x3) - y1;
        CurvePoint::affine(x3, y3)
    }

    // ------------------------------------------------------------------
    // Coordinate changes
    // ------------------------------------------------------------------

    /// Map a point of this model to the Mordell model.
    ///
    /// From the cubic, (U, V) ↦ (12m/(U+V), 36m(U−V)/(U+V)); affine
    /// points never have U + V = 0, so the map is total. From the
    /// auxiliary model, (u, v) ↦ (4(u²+uv+v²), 4(u−v)(2u+v)(u+2v)),
    /// the composition of the map below with the degree-3 isogeny.
    pub fn to_mordell(&self, p: &CurvePoint) -> Result<CurvePoint> {
        self.require_member(p)?;
        match self.model {
            Model::Mordell => Ok(p.clone()),
            Model::Cubic => {
                if p.is_identity() {
                    return Ok(CurvePoint::Identity);
                }
                let (u, v) = p.coordinates()?;
                let sum = Rational::from(u + v);
                debug_assert!(sum.cmp0() != std::cmp::Ordering::Equal);
                let m = Rational::from(&self.m);
                let x = Rational::from(12) * &m / &sum;
                let y = Rational::from(36) * &m * Rational::from(u - v) / &sum;
                let image = CurvePoint::affine(x, y);
                self.mordell().require_member(&image)?;
                Ok(image)
            }
            Model::Auxiliary => {
                let (u, v) = p.coordinates()?;
                let norm = square(u) + Rational::from(u * v) + square(v);
                let x = Rational::from(4) * norm;
                let y = Rational::from(4)
                    * Rational::from(u - v)
                    * (Rational::from(u * 2) + v)
                    * (Rational::from(v * 2) + u);
                let image = CurvePoint::affine(x, y);
                self.mordell().require_member(&image)?;
                Ok(image)
            }
            Model::MordellIsogenous => Err(Error::UnsupportedFamily),
        }
    }

    /// Inverse coordinate change Mordell → cubic,
    /// (X, Y) ↦ ((36m + Y)/(6X), (36m − Y)/(6X)); X is never zero on a
    /// rational point, so the map is total.
    pub fn to_cubic(&self, p: &CurvePoint) -> Result<CurvePoint> {
        if self.model != Model::Mordell {
            return Err(Error::UnsupportedFamily);
        }
        self.require_member(p)?;
        if p.is_identity() {
            return Ok(CurvePoint::Identity);
        }
        let (x, y) = p.coordinates()?;
        debug_assert!(x.cmp0() != std::cmp::Ordering::Equal);
        let c = Rational::from(36) * Rational::from(&self.m);
        let d = Rational::from(6) * x;
        let u = (c.clone() + y) / &d;
        let v = (c - y) / &d;
        let image = CurvePoint::affine(u, v);
        self.cubic().require_member(&image)?;
        Ok(image)
    }

    /// Coordinate change auxiliary → isogenous Mordell,
    /// (u, v) ↦ (−4uv, 4uv(u − v)).
    pub fn to_mordell_isogenous(&self, p: &CurvePoint) -> Result<CurvePoint> {
        if self.model != Model::Auxiliary {
            return Err(Error::UnsupportedFamily);
        }
        self.require_member(p)?;
        let (u, v) = p.coordinates()?;
        let uv = Rational::from(u * v);
        let x = Rational::from(-4) * &uv;
        let y = Rational::from(4) * uv * Rational::from(u - v);
        let image = CurvePoint::affine(x, y);
        self.mordell_isogenous().require_member(&image)?;
        Ok(image)
    }

    /// Inverse coordinate change isogenous Mordell → auxiliary,
    /// (x, y) ↦ ((−4m − y)/(2x), (y − 4m)/(2x)); undefined at the two
    /// points with x = 0 and at the identity, which correspond to the
    /// auxiliary model's points at infinity.
    pub fn to_auxiliary(&self, p: &CurvePoint) -> Result<CurvePoint> {
        if self.model != Model::MordellIsogenous {
            return Err(Error::UnsupportedFamily);
        }
        self.require_member(p)?;
        let (x, y) = p.coordinates()?;
        if x.cmp0() == std::cmp::Ordering::Equal {
            return Err(Error::TransformUndefined("x = 0 on the isogenous curve"));
        }
        let fm = Rational::from(4) * Rational::from(&self.m);
        let d = Rational::from(2) * x;
        let u = -(fm.clone() + y) / &d;
        let v = (Rational::from(y) - fm) / &d;
        let image = CurvePoint::affine(u, v);
        self.auxiliary().require_member(&image)?;
        Ok(image)
    }

    // ------------------------------------------------------------------
    // The degree-3 isogeny
    // ------------------------------------------------------------------

    /// The degree-3 isogeny from the isogenous Mordell model to the
    /// Mordell model: (x, y) ↦ ((x³ + 64m²)/x², y(x³ − 128m²)/x³).
    ///
    /// The identity maps to the identity; the two affine kernel points
    /// (0, ±4m) are rejected, because the rational map has a pole
    /// there.
    pub fn isogeny_forward(&self, p: &CurvePoint) -> Result<CurvePoint> {
        if self.model != Model::MordellIsogenous {
            return Err(Error::UnsupportedFamily);
        }
        self.require_member(p)?;
        if p.is_identity() {
            return Ok(CurvePoint::Identity);
        }
        let (x, y) = p.coordinates()?;
        if x.cmp0() == std::cmp::Ordering::Equal {
            return Err(Error::IsogenyUndefined);
        }
        let m2 = Rational::from(Integer::from(&self.m * &self.m));
        let x3 = cube(x);
        let big_x = (x3.clone() + Rational::from(64) * &m2) / square(x);
        let big_y = Rational::from(y) * (x3.clone() - Rational::from(128) * m2) / x3;
        let image = CurvePoint::affine(big_x, big_y);
        self.mordell().require_member(&image)?;
        Ok(image)
    }

    /// All rational points of the isogenous model mapping to `p` under
    /// the degree-3 isogeny, in ascending x order; between zero and
    /// three points.
    ///
    /// With p = (A/B², C/B³) in lowest terms, a preimage abscissa
    /// x = z/B² requires z³ − A z² + 64 m² B⁶ = 0, a monic integer
    /// cubic whose rational roots are integers; they are isolated by
    /// exact bisection on its monotone pieces.
    pub fn isogeny_preimages(&self, p: &CurvePoint) -> Result<Vec<CurvePoint>> {
        if self.model != Model::Mordell {
            return Err(Error::UnsupportedFamily);
        }
        self.require_member(p)?;
        let source = self.mordell_isogenous();
        if p.is_identity() {
            // Kernel of the isogeny: identity and (0, ±4m).
            let fm = Rational::from(4) * Rational::from(&self.m);
            let mut points = vec![
                CurvePoint::Identity,
                CurvePoint::affine(Rational::new(), -fm.clone()),
                CurvePoint::affine(Rational::new(), fm),
            ];
            points.dedup();
            return Ok(points);
        }
        let (a, b, _) = self.integral_form(p)?;
        let b6 = Integer::from((&b).pow(6));
        let constant = Integer::from(&self.m * &self.m) * 64 * b6;
        let mut preimages = Vec::new();
        for z in monic_cubic_integer_roots(&a, &constant) {
            let x = Rational::from((z, Integer::from((&b).pow(2))));
            let y2 = cube(&x) + Rational::from(16) * Rational::from(Integer::from(&self.m * &self.m));
            let Some(y) = rational_sqrt(&y2) else {
                continue;
            };
            for candidate in [
                CurvePoint::affine(x.clone(), y.clone()),
                CurvePoint::affine(x.clone(), -y.clone()),
            ] {
                if let Ok(image) = source.isogeny_forward(&candidate) {
                    if &image == p && !preimages.contains(&candidate) {
                        preimages.push(candidate);
                    }
                }
            }
        }
        Ok(preimages)
    }

    // ------------------------------------------------------------------
    // Printed multiplication formulas
    // ------------------------------------------------------------------

    /// Abscissa of the triple of a Mordell-model point with abscissa x:
    /// (x⁹ + 41472 m² x⁶ + 8957952 m⁴ x³ − 5159780352 m⁶) /
    /// (9 x² (x³ − 1728 m²)²).
    pub fn triple_x(&self, x: &Rational) -> Result<Rational> {
        if self.model != Model::Mordell {
            return Err(Error::UnsupportedFamily);
        }
        let m2 = Rational::from(Integer::from(&self.m * &self.m));
        let x3 = cube(x);
        let shifted = x3.clone() - Rational::from(1728) * &m2;
        if x.cmp0() == std::cmp::Ordering::Equal
            || shifted.cmp0() == std::cmp::Ordering::Equal
        {
            return Err(Error::TransformUndefined(
                "abscissa of a point of order dividing 3",
            ));
        }
        let m4 = square(&m2);
        let m6 = cube(&m2);
        let numerator = cube(&x3)
            + Rational::from(41472) * &m2 * square(&x3)
            + Rational::from(8957952) * m4 * &x3
            - Rational::from(5159780352i64) * m6;
        let denominator = Rational::from(9) * square(x) * square(&shifted);
        Ok(numerator / denominator)
    }

    /// Double of a cubic-model point by the closed formula
    /// (U, V) ↦ ((−2VU³ − V⁴)/(U³ − V³), (U⁴ + 2UV³)/(U³ − V³)); the
    /// pole U = V is exactly the 2-torsion, where the double is the
    /// identity.
    pub fn double_on_cubic(&self, p: &CurvePoint) -> Result<CurvePoint> {
        if self.model != Model::Cubic {
            return Err(Error::UnsupportedFamily);
        }
        self.require_member(p)?;
        if p.is_identity() {
            return Ok(CurvePoint::Identity);
        }
        let (u, v) = p.coordinates()?;
        if u == v {
            return Ok(CurvePoint::Identity);
        }
        let u3 = cube(u);
        let v3 = cube(v);
        let denom = u3.clone() - &v3;
        let two = Rational::from(2);
        let nu = -(two.clone() * v * &u3 + square(v) * square(v));
        let nv = square(u) * square(u) + two * u * v3;
        let image = CurvePoint::affine(nu / &denom, nv / &denom);
        self.require_member(&image)?;
        Ok(image)
    }

    // ------------------------------------------------------------------
    // Integral shape
    // ------------------------------------------------------------------

    /// Write an affine Mordell-model point as (A/B², C/B³) in lowest
    /// terms with B > 0, returning (A, B, C).
    pub fn integral_form(&self, p: &CurvePoint) -> Result<(Integer, Integer, Integer)> {
        match self.model {
            Model::Mordell | Model::MordellIsogenous => {}
            _ => return Err(Error::UnsupportedFamily),
        }
        self.require_member(p)?;
        let (x, y) = p.coordinates()?;
        let xd = x.denom();
        if !xd.is_perfect_square() {
            return Err(Error::TransformUndefined(
                "x denominator is not a perfect square",
            ));
        }
        let b = Integer::from(xd.sqrt_ref());
        if *y.denom() != Integer::from((&b).pow(3)) {
            return Err(Error::TransformUndefined(
                "y denominator is not the cube of the x denominator's root",
            ));
        }
        Ok((x.numer().clone(), b, y.numer().clone()))
    }
}

fn square(x: &Rational) -> Rational {
    Rational::from(x * x)
}

fn cube(x: &Rational) -> Rational {
    Rational::from(x * x) * x
}

/// Exact square root of a non-negative rational, if it is a square.
fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.cmp0() == std::cmp::Ordering::Less {
        return None;
    }
    if !r.numer().is_perfect_square() || !r.denom().is_perfect_square() {
        return None;
    }
    Some(Rational::from((
        Integer::from(r.numer().sqrt_ref()),
        Integer::from(r.denom().sqrt_ref()),
    )))
}

/// Integer roots of z³ − a z² + c, distinct and ascending, by exact
/// bisection on the monotone pieces split at the critical points 0 and
/// 2a/3.
fn monic_cubic_integer_roots(a: &Integer, c: &Integer) -> Vec<Integer> {
    let f = |z: &Integer| -> Integer {
        let z2 = Integer::from(z * z);
        Integer::from(&z2 * z) - z2 * a + c
    };
    // All real roots lie within the Cauchy bound 1 + max |coefficient|.
    let bound = Integer::from(1) + std::cmp::max(a.clone().abs(), c.clone().abs());
    // Critical points 0 and 2a/3, rounded inward so each closed integer
    // interval lies in a single monotone piece.
    let double_a = Integer::from(a * 2i32);
    let two_thirds_lo = double_a.clone().div_floor(3i32);
    let two_thirds_hi = double_a.div_ceil(3i32);
    let (c1_lo, c1_hi, c2_lo, c2_hi) = if *a >= 0 {
        (Integer::new(), Integer::new(), two_thirds_lo, two_thirds_hi)
    } else {
        (two_thirds_lo, two_thirds_hi, Integer::new(), Integer::new())
    };
    let intervals = [
        (Integer::from(-&bound), c1_lo),
        (c1_hi, c2_lo),
        (c2_hi, bound.clone()),
    ];
    let mut roots: Vec<Integer> = Vec::new();
    for (lo, hi) in intervals {
        if lo > hi {
            continue;
        }
        if let Some(root) = bisect_monotone(&f, lo, hi) {
            if !roots.contains(&root) {
                roots.push(root);
            }
        }
    }
    roots.sort();
    roots
}

/// The unique integer zero of a function monotone on [lo, hi], if any.
fn bisect_monotone(
    f: &dyn Fn(&Integer) -> Integer,
    mut lo: Integer,
    mut hi: Integer,
) -> Option<Integer> {
    use std::cmp::Ordering::*;
    let flo = f(&lo);
    if flo.cmp0() == Equal {
        return Some(lo);
    }
    let fhi = f(&hi);
    if fhi.cmp0() == Equal {
        return Some(hi);
    }
    if flo.cmp0() == fhi.cmp0() {
        return None;
    }
    let lo_sign = flo.cmp0();
    while Integer::from(&hi - &lo) > 1 {
        let mid = Integer::from(&lo + &hi) >> 1;
        let fm = f(&mid);
        match fm.cmp0() {
            Equal => return Some(mid),
            s if s == lo_sign => lo = mid,
            _ => hi = mid,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn curve(model: Model, m: i64) -> Curve {
        Curve::new(model, Integer::from(m)).unwrap()
    }

    fn curve_unchecked(model: Model, m: i64) -> Curve {
        Curve::new_unchecked(model, Integer::from(m)).unwrap()
    }

    #[test]
    fn test_admissibility_gate() {
        for m in [0i64, 1, -1, 2, -2, 8, 24, -27] {
            assert!(Curve::new(Model::Cubic, Integer::from(m)).is_err(), "m = {m}");
        }
        for m in [6i64, 7, 12, -6, 94] {
            assert!(Curve::new(Model::Cubic, Integer::from(m)).is_ok(), "m = {m}");
        }
        // Unchecked construction admits everything but zero.
        assert!(Curve::new_unchecked(Model::Cubic, Integer::from(2)).is_ok());
        assert!(Curve::new_unchecked(Model::Cubic, Integer::from(0)).is_err());
    }

    #[test]
    fn test_membership_per_model() {
        assert!(curve(Model::Mordell, 6).contains(&CurvePoint::from_i64(28, 80)));
        assert!(!curve(Model::Mordell, 6).contains(&CurvePoint::from_i64(28, 81)));
        assert!(curve(Model::MordellIsogenous, 6).contains(&CurvePoint::from_i64(-8, 8)));
        assert!(curve(Model::Cubic, 7).contains(&CurvePoint::from_i64(2, -1)));
        assert!(curve(Model::Cubic, 7)
            .contains(&CurvePoint::affine(rat(5, 3), rat(4, 3))));
        assert!(curve(Model::Auxiliary, 6).contains(&CurvePoint::from_i64(2, 1)));
        assert!(curve(Model::Auxiliary, 6).contains(&CurvePoint::from_i64(1, 2)));
        assert!(!curve(Model::Auxiliary, 6).contains(&CurvePoint::Identity));
        assert!(curve(Model::Mordell, 6).contains(&CurvePoint::Identity));
    }

    #[test]
    fn test_weierstrass_group_axioms() {
        let e = curve(Model::Mordell, 6);
        let p = CurvePoint::from_i64(28, 80);
        let o = CurvePoint::Identity;
        assert_eq!(e.add(&p, &o).unwrap(), p);
        assert_eq!(e.add(&p, &e.neg(&p).unwrap()).unwrap(), o);
        let two_p = e.double(&p).unwrap();
        assert!(e.contains(&two_p));
        assert_eq!(
            two_p,
            CurvePoint::affine(rat(16009, 100), rat(-2021723, 1000))
        );
        // 3P two ways.
        assert_eq!(
            e.mul(3, &p).unwrap(),
            e.add(&p, &two_p).unwrap()
        );
        // Associativity spot check: (P + 2P) + 3P = 2P + (P + 3P).
        let three_p = e.mul(3, &p).unwrap();
        assert_eq!(
            e.add(&e.add(&p, &two_p).unwrap(), &three_p).unwrap(),
            e.add(&two_p, &e.add(&p, &three_p).unwrap()).unwrap()
        );
        assert_eq!(e.mul(-2, &p).unwrap(), e.neg(&two_p).unwrap());
        assert_eq!(e.mul(0, &p).unwrap(), o);
    }

    #[test]
    fn test_two_torsion_doubles_to_identity() {
        // y² = x³ + 64 (unchecked m = 2) has the 2-torsion point (−4, 0).
        let e = curve_unchecked(Model::MordellIsogenous, 2);
        let t = CurvePoint::from_i64(-4, 0);
        assert!(e.contains(&t));
        assert_eq!(e.double(&t).unwrap(), CurvePoint::Identity);
        assert_eq!(e.mul(2, &t).unwrap(), CurvePoint::Identity);
        assert_eq!(e.mul(3, &t).unwrap(), t);
    }

    #[test]
    fn test_cubic_mordell_roundtrip() {
        let c = curve(Model::Cubic, 7);
        let r = CurvePoint::from_i64(2, -1);
        let image = c.to_mordell(&r).unwrap();
        assert_eq!(image, CurvePoint::from_i64(84, 756));
        assert_eq!(c.mordell().to_cubic(&image).unwrap(), r);
        // Negation commutes with the change of coordinates.
        let neg_image = c.to_mordell(&c.neg(&r).unwrap()).unwrap();
        assert_eq!(neg_image, c.mordell().neg(&image).unwrap());
    }

    #[test]
    fn test_cubic_group_law_through_transport() {
        let c = curve(Model::Cubic, 7);
        let r = CurvePoint::from_i64(2, -1);
        let double = c.double(&r).unwrap();
        assert_eq!(double, CurvePoint::affine(rat(5, 3), rat(4, 3)));
        // R + (−R) is the identity.
        assert_eq!(
            c.add(&r, &CurvePoint::from_i64(-1, 2)).unwrap(),
            CurvePoint::Identity
        );
        assert_eq!(c.mul(2, &r).unwrap(), double);
        assert!(c.contains(&c.mul(5, &r).unwrap()));
    }

    #[test]
    fn test_closed_doubling_formula_matches_group_law() {
        let c = curve(Model::Cubic, 7);
        for point in [
            CurvePoint::from_i64(2, -1),
            CurvePoint::from_i64(-1, 2),
            CurvePoint::affine(rat(5, 3), rat(4, 3)),
        ] {
            assert_eq!(
                c.double_on_cubic(&point).unwrap(),
                c.double(&point).unwrap()
            );
        }
        // 2-torsion pole: on an unchecked curve with m = 2u³ the point
        // (u, u) doubles to the identity.
        let t = curve_unchecked(Model::Cubic, 16);
        let p = CurvePoint::from_i64(2, 2);
        assert!(t.contains(&p));
        assert_eq!(t.double_on_cubic(&p).unwrap(), CurvePoint::Identity);
    }

    #[test]
    fn test_auxiliary_transforms() {
        let a = curve(Model::Auxiliary, 6);
        let p = CurvePoint::from_i64(2, 1);
        // Direct map to the Mordell model…
        assert_eq!(a.to_mordell(&p).unwrap(), CurvePoint::from_i64(28, 80));
        // …equals the isogeny applied to the isogenous image.
        let iso = a.to_mordell_isogenous(&p).unwrap();
        assert_eq!(iso, CurvePoint::from_i64(-8, 8));
        assert_eq!(
            a.mordell_isogenous().isogeny_forward(&iso).unwrap(),
            CurvePoint::from_i64(28, 80)
        );
        // Round trip back to the auxiliary model.
        assert_eq!(a.mordell_isogenous().to_auxiliary(&iso).unwrap(), p);
        // Swapping the auxiliary coordinates negates the isogenous point.
        let swapped = a.to_mordell_isogenous(&CurvePoint::from_i64(1, 2)).unwrap();
        assert_eq!(
            swapped,
            a.mordell_isogenous().neg(&iso).unwrap()
        );
    }

    #[test]
    fn test_isogeny_rejects_kernel_and_off_curve() {
        let e = curve(Model::MordellIsogenous, 6);
        let kernel = CurvePoint::from_i64(0, 24);
        assert!(e.contains(&kernel));
        assert!(matches!(
            e.isogeny_forward(&kernel),
            Err(Error::IsogenyUndefined)
        ));
        assert!(e.isogeny_forward(&CurvePoint::from_i64(1, 1)).is_err());
        assert_eq!(
            e.isogeny_forward(&CurvePoint::Identity).unwrap(),
            CurvePoint::Identity
        );
    }

    #[test]
    fn test_isogeny_preimages_complete() {
        let e = curve(Model::Mordell, 6);
        let p = CurvePoint::from_i64(28, 80);
        let pre = e.isogeny_preimages(&p).unwrap();
        // z³ − 28z² + 2304 = (z + 8)(z − 12)(z − 24): all three
        // preimages are rational here.
        assert_eq!(pre.len(), 3);
        assert!(pre.contains(&CurvePoint::from_i64(-8, 8)));
        let source = e.mordell_isogenous();
        for q in &pre {
            assert_eq!(source.isogeny_forward(q).unwrap(), p);
        }
        // Preimages of the identity form the kernel.
        let kernel = e.isogeny_preimages(&CurvePoint::Identity).unwrap();
        assert_eq!(kernel.len(), 3);
        assert!(kernel.contains(&CurvePoint::from_i64(0, 24)));
        // The preimages of −P are the negatives of the preimages of P.
        let pre_neg = e.isogeny_preimages(&e.neg(&p).unwrap()).unwrap();
        assert_eq!(pre_neg.len(), 3);
        for q in &pre {
            assert!(pre_neg.contains(&source.neg(q).unwrap()));
        }
    }

    #[test]
    fn test_isogeny_scales_multiplication() {
        // σ(2P′) = 2σ(P′).
        let source = curve(Model::MordellIsogenous, 6);
        let p = CurvePoint::from_i64(-8, 8);
        let double = source.double(&p).unwrap();
        assert_eq!(
            source.isogeny_forward(&double).unwrap(),
            source
                .mordell()
                .double(&source.isogeny_forward(&p).unwrap())
                .unwrap()
        );
    }

    #[test]
    fn test_triple_abscissa_matches_group_law() {
        let e = curve(Model::Mordell, 6);
        let p = CurvePoint::from_i64(28, 80);
        for q in [p.clone(), e.double(&p).unwrap(), e.mul(4, &p).unwrap()] {
            let (x, _) = q.coordinates().unwrap();
            let tripled = e.mul(3, &q).unwrap();
            let (x3, _) = tripled.coordinates().unwrap();
            assert_eq!(&e.triple_x(x).unwrap(), x3);
        }
        // 3-torsion abscissa is a pole: on the unchecked curve with
        // m = 1, the point (12, 36) has order 3.
        let t = curve_unchecked(Model::Mordell, 1);
        assert!(t.contains(&CurvePoint::from_i64(12, 36)));
        assert_eq!(t.mul(3, &CurvePoint::from_i64(12, 36)).unwrap(), CurvePoint::Identity);
        assert!(t.triple_x(&rat(12, 1)).is_err());
    }

    #[test]
    fn test_integral_form_and_rescaling() {
        let e = curve(Model::Mordell, 6);
        let p = CurvePoint::from_i64(28, 80);
        assert_eq!(
            e.integral_form(&p).unwrap(),
            (Integer::from(28), Integer::from(1), Integer::from(80))
        );
        let two_p = e.double(&p).unwrap();
        let (a, b, c) = e.integral_form(&two_p).unwrap();
        assert_eq!(a, 16009);
        assert_eq!(b, 10);
        assert_eq!(c, -2021723);
        // A³ − 432 m² B⁶ = C².
        let lhs = Integer::from((&a).pow(3))
            - Integer::from(432) * 36 * Integer::from((&b).pow(6));
        assert_eq!(lhs, Integer::from((&c).pow(2)));
    }

    #[test]
    fn test_monic_cubic_roots_isolation() {
        // (z + 8)(z − 12)(z − 24) = z³ − 28z² + 2304.
        assert_eq!(
            monic_cubic_integer_roots(&Integer::from(28), &Integer::from(2304)),
            vec![Integer::from(-8), Integer::from(12), Integer::from(24)]
        );
        // No integer roots.
        assert!(monic_cubic_integer_roots(&Integer::from(0), &Integer::from(2)).is_empty());
        // Repeated root: z³ − 3z² + 4 = (z + 1)(z − 2)².
        assert_eq!(
            monic_cubic_integer_roots(&Integer::from(3), &Integer::from(4)),
            vec![Integer::from(-1), Integer::from(2)]
        );
        // Negative leading critical point: z³ + 3z² − 4 = (z − 1)(z + 2)².
        assert_eq!(
            monic_cubic_integer_roots(&Integer::from(-3), &Integer::from(-4)),
            vec![Integer::from(-2), Integer::from(1)]
        );
    }

    #[test]
    fn test_display_formats() {
        assert_eq!(curve(Model::Cubic, 7).to_string(), "U^3 + V^3 = 7");
        assert_eq!(
            curve(Model::Mordell, 6).to_string(),
            "Y^2 = X^3 - 432*6^2"
        );
        assert_eq!(CurvePoint::from_i64(2, -1).to_string(), "(2, -1)");
        assert_eq!(CurvePoint::Identity.to_string(), "identity");
        assert_eq!(CurvePoint::affine(rat(5, 3), rat(4, 3)).to_string(), "(5/3, 4/3)");
    }

    proptest::proptest! {
        // The cubic ↔ Weierstrass transports are mutually inverse
        // wherever both are defined.
        #[test]
        fn prop_cubic_transport_round_trips(u in -30i64..=30, v in -30i64..=30) {
            let m = Integer::from(u).pow(3) + Integer::from(v).pow(3);
            proptest::prop_assume!(check_admissible(&m).is_ok());
            let cubic = Curve::new(Model::Cubic, m).unwrap();
            let p = CurvePoint::from_i64(u, v);
            let w = cubic.to_mordell(&p).unwrap();
            proptest::prop_assert!(cubic.mordell().contains(&w));
            proptest::prop_assert_eq!(&cubic.mordell().to_cubic(&w).unwrap(), &p);
        }

        // Likewise for the auxiliary model and its Weierstrass form.
        #[test]
        fn prop_auxiliary_transport_round_trips(u in 1i64..=25, v in 1i64..=25) {
            let m = Integer::from(u * v * (u + v));
            proptest::prop_assume!(check_admissible(&m).is_ok());
            let aux = Curve::new(Model::Auxiliary, m).unwrap();
            let p = CurvePoint::from_i64(u, v);
            let w = aux.to_mordell_isogenous(&p).unwrap();
            proptest::prop_assert!(aux.mordell_isogenous().contains(&w));
            proptest::prop_assert_eq!(&aux.mordell_isogenous().to_auxiliary(&w).unwrap(), &p);
        }
    }
}
