//! p-adic Newton polygons with exact rational slopes, and the valuation
//! bound they imply for values of a homogeneous form at unit arguments.

use super::{HomogPoly, IntPoly};
use crate::arith::padic_ord_int;
use rug::{Integer, Rational};

/// The p-adic Newton polygon of a polynomial: valuation data per
/// exponent, the lower convex hull, and its slopes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// (exponent, ord_p of the coefficient); `None` marks a zero
    /// coefficient (valuation +∞, never on the lower hull).
    pub points: Vec<(usize, Option<u64>)>,
    /// Vertices of the lower convex hull, left to right.
    pub hull_vertices: Vec<(usize, u64)>,
    /// Slopes of consecutive hull segments with their horizontal spans;
    /// weakly increasing. The spans sum to degree − (order at x = 0).
    pub slopes: Vec<(Rational, usize)>,
}

impl NewtonPolygon {
    /// Whether the hull is one segment of the given slope.
    pub fn single_slope(&self, slope: &Rational) -> bool {
        self.slopes.len() == 1 && &self.slopes[0].0 == slope
    }
}

/// Compute the Newton polygon of `f` at the prime `p`.
///
/// The hull is the lower convex hull of the finite points
/// (i, ord_p(cᵢ)); slopes are exact rationals.
pub fn newton_polygon(f: &IntPoly, p: &Integer) -> NewtonPolygon {
    assert!(!f.is_zero(), "Newton polygon of the zero polynomial");
    let mut points = Vec::new();
    let mut finite = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate() {
        if c.cmp0() == std::cmp::Ordering::Equal {
            points.push((i, None));
        } else {
            let v = padic_ord_int(c, p).expect("nonzero coefficient, prime ≥ 2") as u64;
            points.push((i, Some(v)));
            finite.push((i, v));
        }
    }
    // Monotone-chain lower hull; exact slope comparison via cross
    // products in ℤ. Collinear middle points are dropped, so each
    // segment appears once with its full horizontal span.
    let mut hull: Vec<(usize, u64)> = Vec::new();
    for &(x, y) in &finite {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // Keep (x2,y2) only if it lies strictly below the chord
            // (x1,y1)–(x,y): (y2−y1)(x−x1) < (y−y1)(x2−x1).
            let lhs = (y2 as i128 - y1 as i128) * (x as i128 - x1 as i128);
            let rhs = (y as i128 - y1 as i128) * (x2 as i128 - x1 as i128);
            if lhs < rhs {
                break;
            }
            hull.pop();
        }
        hull.push((x, y));
    }
    let slopes = hull
        .windows(2)
        .map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            let slope = Rational::from((
                Integer::from(y2 as i64 - y1 as i64),
                Integer::from((x2 - x1) as i64),
            ));
            (slope, x2 - x1)
        })
        .collect();
    NewtonPolygon {
        points,
        hull_vertices: hull,
        slopes,
    }
}

/// Maximum possible ord_p of g(u, v) over coprime integer pairs whose
/// coordinates are p-adic units, namely deg(g)·(−max slope), where the
/// slopes are those of the polygon of g(1+X, 1) at p.
///
/// Only valid when every slope lies strictly between −1 and 0 (all roots
/// then sit at fractional distance from 1, so every factor of the value
/// contributes exactly the root's valuation); returns `None` otherwise,
/// and callers fall back to the congruence method.
pub fn valuation_bound(g: &HomogPoly, p: &Integer) -> Option<Rational> {
    let shifted = g.specialize().shift_one();
    if shifted.is_zero() {
        return None;
    }
    // The bound reasons about all deg(g) roots, so the specialization
    // must not drop degree.
    if g.u_degree() != Some(g.degree()) {
        return None;
    }
    let polygon = newton_polygon(&shifted, p);
    let zero = Rational::new();
    let minus_one = Rational::from(-1);
    let mut max_slope: Option<Rational> = None;
    for (slope, _) in &polygon.slopes {
        if *slope <= minus_one || *slope >= zero {
            return None;
        }
        if max_slope.as_ref().is_none_or(|m| slope > m) {
            max_slope = Some(slope.clone());
        }
    }
    let max_slope = max_slope?;
    Some(-max_slope * Rational::from(g.degree() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn test_collinear_hull_single_slope() {
        // x² + px + p²: points (0,2),(1,1),(2,0) collinear, slope −1.
        let f = IntPoly::from_i64(&[25, 5, 1]);
        let np = newton_polygon(&f, &Integer::from(5));
        assert_eq!(np.hull_vertices, vec![(0, 2), (2, 0)]);
        assert_eq!(np.slopes, vec![(rat(-1, 1), 2)]);
        assert!(np.single_slope(&rat(-1, 1)));
    }

    #[test]
    fn test_zero_coefficients_are_infinite() {
        // x³ + p: gap exponents 1,2 are infinite; hull (0,1)–(3,0).
        let f = IntPoly::from_i64(&[7, 0, 0, 1]);
        let np = newton_polygon(&f, &Integer::from(7));
        assert_eq!(np.points[1], (1, None));
        assert_eq!(np.points[2], (2, None));
        assert_eq!(np.hull_vertices, vec![(0, 1), (3, 0)]);
        assert_eq!(np.slopes, vec![(rat(-1, 3), 3)]);
    }

    #[test]
    fn test_two_segment_polygon() {
        // p² + x + x²: vertices (0,2),(1,0),(2,0), slopes −2 then 0.
        let f = IntPoly::from_i64(&[9, 1, 1]);
        let np = newton_polygon(&f, &Integer::from(3));
        assert_eq!(np.hull_vertices, vec![(0, 2), (1, 0), (2, 0)]);
        assert_eq!(np.slopes, vec![(rat(-2, 1), 1), (rat(0, 1), 1)]);
    }

    #[test]
    fn test_span_accounts_for_degree_minus_low_order() {
        // x·(x+3)² = 9x + 6x² + x³: low order 1, degree 3.
        let f = IntPoly::from_i64(&[0, 9, 6, 1]);
        let np = newton_polygon(&f, &Integer::from(3));
        let span: usize = np.slopes.iter().map(|(_, s)| s).sum();
        assert_eq!(span, 3 - 1);
        assert_eq!(np.hull_vertices.first(), Some(&(1, 2)));
    }

    #[test]
    fn test_valuation_bound_gates() {
        // Integer slope −1 → bound unavailable.
        let g = HomogPoly::from_i64(2, &[9, 5, 1]).unwrap();
        // g(1+X,1) = 1·X² + 7X + 15: ords (0,1),(1,0),(2,0) → slopes −1, 0.
        assert_eq!(valuation_bound(&g, &Integer::from(3)), None);
        // Degenerate leading coefficient → unavailable.
        let lopsided = HomogPoly::from_i64(2, &[1, 1, 0]).unwrap();
        assert_eq!(valuation_bound(&lopsided, &Integer::from(3)), None);
    }

    #[test]
    fn test_valuation_bound_fractional_slope() {
        // g(u,v) with g(1+X,1) = X⁴ + 3·(…): build from a quartic whose
        // shift has hull (0,1)–(4,0), slope −1/4, bound 4·(1/4) = 1.
        // g(u,v) = (u−v)⁴ + 3v⁴ has shift X⁴ + 3.
        let g = HomogPoly::from_i64(4, &[4, -4, 6, -4, 1]).unwrap();
        let bound = valuation_bound(&g, &Integer::from(3)).unwrap();
        assert_eq!(bound, rat(1, 1));
    }
}
