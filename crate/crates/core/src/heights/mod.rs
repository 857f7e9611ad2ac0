//! Naive and canonical heights on the Mordell models.
//!
//! The canonical height is the doubling limit ĥ(P) = lim h(2ᵏP)/4ᵏ,
//! where h(Q) = log max(|A|, B²) is the naive height of Q = (A/B², C/B³)
//! in lowest terms. The error of the k-th iterate is (h − ĥ)(2ᵏP)/4ᵏ,
//! which the height-gap inequality bounds by gap_max/4ᵏ, so k is chosen
//! up front from the requested tolerance and the result is deterministic.
//!
//! Raw coordinates double in size every step and would reach 10⁸ digits
//! before the default tolerance is met, so they are never stored.
//! Instead each doubling is performed on a projective pair tracked two
//! ways at once: extended-precision floats carry the archimedean size
//! (renormalized each step, with the log accumulated separately), and
//! exact residues modulo high prime powers carry, for each of the
//! finitely many primes where cancellation can occur, the exact power
//! cleared from the pair. A prime can divide both duplication values
//! only if it divides their resultant 2⁸3⁶b⁴ (b the curve coefficient),
//! so the finite list {2, 3, p | m} and the per-step cap ord_p(2⁸3⁶b⁴)
//! are both rigorous, and the float pair follows the genuinely reduced
//! orbit while only ever holding numbers of modest size.
//!
//! The module also evaluates the gap constants themselves, the closed
//! lower bound on generator heights, and the index thresholds beyond
//! which the sequence denominators are forced past 1.

use crate::arith::{factor, padic_ord_int, FactorBudget};
use crate::curve::{check_admissible, Curve, CurvePoint, Model};
use crate::{Error, Result};
use rug::{ops::Pow, Float, Integer};

/// Default tolerance for canonical-height computations.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Float precision (bits) for the first attempt; doubled on the rare
/// catastrophic-cancellation alarm, up to [`MAX_PRECISION`].
const BASE_PRECISION: u32 = 192;
const MAX_PRECISION: u32 = 3072;

/// Hard cap on doubling steps; reached only for absurd tolerances.
const MAX_DOUBLINGS: u32 = 48;

/// Heights of one point with the gap bounds they must respect.
#[derive(Debug, Clone, Copy)]
pub struct HeightReport {
    /// Naive height h = log max(|A|, B²).
    pub naive: f64,
    /// Canonical height ĥ, within `precision` of the true value.
    pub canonical: f64,
    /// Lower bound for h − ĥ on this curve.
    pub gap_lower: f64,
    /// Upper bound for h − ĥ on this curve.
    pub gap_upper: f64,
    /// Tolerance the canonical height was computed to.
    pub precision: f64,
}

impl HeightReport {
    /// Whether h − ĥ falls inside the gap bounds, allowing `precision`
    /// of slack for the computed ĥ.
    pub fn silverman_verified(&self) -> bool {
        let diff = self.naive - self.canonical;
        diff >= self.gap_lower - self.precision && diff <= self.gap_upper + self.precision
    }
}

fn require_weierstrass(curve: &Curve, point: &CurvePoint) -> Result<()> {
    match curve.model() {
        Model::Mordell | Model::MordellIsogenous => {}
        _ => return Err(Error::UnsupportedFamily),
    }
    check_admissible(curve.m())?;
    if point.is_identity() {
        return Err(Error::IdentityPoint);
    }
    Ok(())
}

fn ln_to_f64(v: &Integer) -> f64 {
    Float::with_val(BASE_PRECISION, v).ln().to_f64()
}

/// Naive height h(P) = log max(|A|, B²) for P = (A/B², C/B³) reduced.
pub fn naive_height(curve: &Curve, point: &CurvePoint) -> Result<f64> {
    require_weierstrass(curve, point)?;
    let (a, b, _) = curve.integral_form(point)?;
    let max = std::cmp::max(a.abs(), Integer::from((&b).pow(2)));
    Ok(ln_to_f64(&max))
}

/// Bounds for h − ĥ valid at every rational point of the curve: with
/// j = 0 the inequality reads −(1/6)log|Δ| − 2.14 ≤ h − ĥ ≤
/// (1/6)log|Δ| + 1.946, in the doubled height normalization used
/// throughout this crate. |Δ| is 2¹²3⁹m⁴ for the main model and
/// 2¹²3³m⁴ for the isogenous one.
pub fn silverman_gap(curve: &Curve) -> Result<(f64, f64)> {
    check_admissible(curve.m())?;
    let log_disc = log_abs_discriminant(curve)?;
    Ok((-log_disc / 6.0 - 2.14, log_disc / 6.0 + 1.946))
}

fn log_abs_discriminant(curve: &Curve) -> Result<f64> {
    let three_exp = match curve.model() {
        Model::Mordell => 9u32,
        Model::MordellIsogenous => 3,
        _ => return Err(Error::UnsupportedFamily),
    };
    let abs_m = curve.m().clone().abs();
    let disc = Integer::from(Integer::from(2).pow(12))
        * Integer::from(Integer::from(3).pow(three_exp))
        * Integer::from((&abs_m).pow(4));
    Ok(ln_to_f64(&disc))
}

/// The two duplication forms for y² = x³ + b, reduced modulo n:
/// φ = X⁴ − 8bXZ³ and ψ = 4Z(X³ + bZ³), so x(2Q) = φ/ψ.
fn duplication_mod(x: &Integer, z: &Integer, b: &Integer, n: &Integer) -> (Integer, Integer) {
    let x2 = Integer::from(x * x) % n;
    let x3 = Integer::from(&x2 * x) % n;
    let z2 = Integer::from(z * z) % n;
    let z3 = Integer::from(&z2 * z) % n;
    let bz3 = Integer::from(b * &z3) % n;
    let phi = (Integer::from(&x3 * x) - Integer::from(&bz3 * x) * 8i32) % n;
    let sum = Integer::from(&x3 + &bz3);
    let psi = (Integer::from(z * &sum) * 4i32) % n;
    (phi, psi)
}

fn normalize_mod(mut v: Integer, n: &Integer) -> Integer {
    v %= n;
    if v.cmp0() == std::cmp::Ordering::Less {
        v += n;
    }
    v
}

/// Exact per-prime bookkeeping for one doubling orbit: residues of the
/// reduced projective pair modulo p^digits, plus the cap no single
/// step's cancellation may exceed.
struct PrimeTrack {
    p: Integer,
    modulus: Integer,
    step_cap: u32,
    x: Integer,
    z: Integer,
    /// Once p divides the denominator, no later step cancels at p.
    alive: bool,
}

impl PrimeTrack {
    fn new(p: Integer, steps: u32, b: &Integer, x0: &Integer, z0: &Integer) -> Result<PrimeTrack> {
        // Joint divisibility at p is capped by ord_p of the resultant
        // 2⁸3⁶b⁴ of the two duplication forms.
        let abs_b = b.clone().abs();
        let resultant = Integer::from(256i32) * Integer::from(729i32) * Integer::from((&abs_b).pow(4));
        let step_cap = padic_ord_int(&resultant, &p)? as u32;
        let digits = (steps + 2) * (step_cap + 1) + 8;
        let modulus = Integer::from((&p).pow(digits));
        let x = normalize_mod(x0.clone(), &modulus);
        let z = normalize_mod(z0.clone(), &modulus);
        let alive = !z.is_divisible(&p);
        Ok(PrimeTrack {
            p,
            modulus,
            step_cap,
            x,
            z,
            alive,
        })
    }

    /// Order of `v` at p, capped at `limit`; residues are only trusted
    /// up to the cap, which stays far below the working precision.
    fn capped_ord(&self, v: &Integer, limit: u32) -> u32 {
        let mut v = v.clone();
        for k in 0..limit {
            if !v.is_divisible(&self.p) {
                return k;
            }
            v.div_exact_mut(&self.p);
        }
        limit
    }

    /// Advance one doubling step; returns the exact power of p dividing
    /// both new coordinates, which is also cleared from the track.
    fn step(&mut self, b: &Integer) -> u32 {
        if !self.alive {
            return 0;
        }
        let (phi, psi) = duplication_mod(&self.x, &self.z, b, &self.modulus);
        let cap = self.step_cap + 1;
        let c = self.capped_ord(&phi, cap).min(self.capped_ord(&psi, cap));
        assert!(
            c <= self.step_cap,
            "cancellation at p = {} exceeded its resultant bound",
            self.p
        );
        let (mut fx, mut fz) = (phi, psi);
        if c > 0 {
            let pc = Integer::from((&self.p).pow(c));
            fx.div_exact_mut(&pc);
            fz.div_exact_mut(&pc);
        }
        self.x = normalize_mod(fx, &self.modulus);
        self.z = normalize_mod(fz, &self.modulus);
        if self.z.is_divisible(&self.p) {
            // Denominator branch reached: the numerator is a p-unit and
            // both duplication forms stay units, so cancellation is over.
            self.alive = false;
        }
        c
    }
}

/// Canonical height ĥ(P) to within `tol`, by the doubling limit.
///
/// Deterministic for a fixed tolerance: the number of doublings is the
/// smallest k with gap_max/4ᵏ below tol, where gap_max bounds |h − ĥ|
/// over the whole curve.
pub fn canonical_height(curve: &Curve, point: &CurvePoint, tol: f64) -> Result<f64> {
    require_weierstrass(curve, point)?;
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::BadIndex("tolerance must be positive and finite"));
    }
    if !curve.contains(point) {
        let (x, y) = point.coordinates()?;
        return Err(Error::NotOnCurve {
            m: curve.m().clone(),
            x: x.clone(),
            y: y.clone(),
        });
    }

    let (lo, hi) = silverman_gap(curve)?;
    let gap_max = lo.abs().max(hi.abs());
    let mut steps = 1u32;
    while gap_max / 4f64.powi(steps as i32) >= tol * 0.9 {
        steps += 1;
        if steps > MAX_DOUBLINGS {
            return Err(Error::HeightConvergence(
                "tolerance requires more doubling steps than are supported",
            ));
        }
    }

    let b = curve.mordell_coefficient()?;
    let (a0, b0, _) = curve.integral_form(point)?;
    let z0 = Integer::from((&b0).pow(2));

    // Primes where the duplication pair can share a factor: 2, 3 and
    // the primes of m. The twist must factor completely for the
    // bookkeeping to be exhaustive.
    let m_factored = factor(&curve.m().clone().abs(), &FactorBudget::default())?;
    if !m_factored.is_complete() {
        return Err(Error::HeightConvergence(
            "twist parameter too hard to factor for exact height bookkeeping",
        ));
    }
    let mut bad_primes: Vec<Integer> = vec![Integer::from(2), Integer::from(3)];
    for p in m_factored.distinct_primes() {
        if *p > 3 {
            bad_primes.push(p.clone());
        }
    }

    let mut precision = BASE_PRECISION;
    loop {
        let mut tracks = bad_primes
            .iter()
            .map(|p| PrimeTrack::new(p.clone(), steps, &b, &a0, &z0))
            .collect::<Result<Vec<_>>>()?;
        if let Some(log_height) = doubling_orbit_log(&b, &a0, &z0, &mut tracks, steps, precision) {
            // log_height = log max(|A_k|, B_k²) of the reduced 2ᵏP.
            let scale = Float::with_val(precision, 4).pow(steps);
            return Ok((log_height / scale).to_f64());
        }
        precision *= 2;
        if precision > MAX_PRECISION {
            return Err(Error::HeightConvergence(
                "catastrophic cancellation persisted at maximum float precision",
            ));
        }
    }
}

/// Run the doubling orbit and return the log of the reduced naive
/// height at the end, or None on a cancellation alarm (the caller then
/// retries at doubled precision).
fn doubling_orbit_log(
    b: &Integer,
    a0: &Integer,
    z0: &Integer,
    tracks: &mut [PrimeTrack],
    steps: u32,
    precision: u32,
) -> Option<Float> {
    let bf = Float::with_val(precision, b);
    let eight_b = Float::with_val(precision, Integer::from(b * 8i32));
    // Alarm threshold: the duplication values of a normalized pair are
    // O(8|b| + 1), so a drop far below that scale means the floats
    // cancelled away too many bits to trust.
    let scale_exp = eight_b.get_exp().unwrap_or(1).max(1);

    let mut xf = Float::with_val(precision, a0);
    let mut zf = Float::with_val(precision, z0);
    let m0 = max_abs(&xf, &zf);
    let mut acc = m0.clone().ln();
    xf /= &m0;
    zf /= &m0;

    for _ in 0..steps {
        let x3 = Float::with_val(precision, &xf * &xf) * &xf;
        let z3 = Float::with_val(precision, &zf * &zf) * &zf;
        let mut phi = Float::with_val(precision, &x3 * &xf)
            - Float::with_val(precision, &eight_b * &xf) * &z3;
        let mut psi =
            Float::with_val(precision, &zf * 4i32) * (x3 + Float::with_val(precision, &bf * &z3));

        // Exact side: clear the shared prime powers from both values.
        let mut cleared = Integer::from(1);
        for track in tracks.iter_mut() {
            let c = track.step(b);
            if c > 0 {
                cleared *= Integer::from((&track.p).pow(c));
            }
        }
        if cleared != 1 {
            let g = Float::with_val(precision, &cleared);
            phi /= &g;
            psi /= &g;
        }

        let s = max_abs(&phi, &psi);
        let s_exp = s.get_exp().unwrap_or(i32::MIN);
        if !s.is_finite() || s.is_zero() || s_exp < scale_exp + 4 - (precision as i32) / 2 {
            return None;
        }
        acc = acc * 4i32 + s.clone().ln();
        xf = phi / &s;
        zf = psi / &s;
    }
    Some(acc)
}

fn max_abs(a: &Float, b: &Float) -> Float {
    let aa = a.clone().abs();
    let bb = b.clone().abs();
    if aa > bb {
        aa
    } else {
        bb
    }
}

/// Naive height, canonical height and the gap bounds in one record.
pub fn height_report(curve: &Curve, point: &CurvePoint, tol: f64) -> Result<HeightReport> {
    let naive = naive_height(curve, point)?;
    let canonical = canonical_height(curve, point, tol)?;
    let (gap_lower, gap_upper) = silverman_gap(curve)?;
    Ok(HeightReport {
        naive,
        canonical,
        gap_lower,
        gap_upper,
        precision: tol,
    })
}

/// Closed lower bound (1/81)·log m − 0.039 for the canonical height of
/// a generator of the isogenous curve, valid for admissible m ≥ 1.
pub fn height_lower_bound(m: &Integer) -> Result<f64> {
    check_admissible(m)?;
    if *m < 1 {
        return Err(Error::BadIndex("lower bound is stated for positive m"));
    }
    Ok(ln_to_f64(m) / 81.0 - 0.039)
}

/// Left side of the index gate minus its right side: positive means the
/// n-th term's denominator is forced past 1 whenever every generator
/// height is at least h_min.
fn index_gate_margin(n: u32, m: &Integer, h_min: f64) -> f64 {
    let ln_m = ln_to_f64(m);
    let ln_8m = ln_to_f64(&Integer::from(m * 8i32));
    h_min * f64::from(n) * f64::from(n) - (2.0 / 3.0) * ln_m - 0.5 * 48f64.ln() - 2.14 - ln_8m
}

/// Smallest N such that the index gate holds for every n > N, using
/// [`height_lower_bound`] as the height floor.
///
/// Unavailable (error) when that bound is not positive — for m ≤ 23 the
/// gate can never fire and callers fall back to a finite scan.
pub fn bn_index_bound(m: &Integer) -> Result<u32> {
    check_admissible(m)?;
    if *m < 1 {
        return Err(Error::BadIndex("index bound is stated for positive m"));
    }
    let h_min = height_lower_bound(m)?;
    if h_min <= 0.0 {
        return Err(Error::HeightConvergence(
            "height lower bound not positive at this m; use the finite scan instead",
        ));
    }
    let mut n = 1u32;
    while index_gate_margin(n, m, h_min) <= 0.0 {
        n += 1;
        if n > 1_000_000 {
            return Err(Error::HeightConvergence(
                "index gate did not fire within a million terms",
            ));
        }
    }
    // The left side grows like n², so once the gate fires it stays
    // fired; spot-check the margin is still growing.
    assert!(index_gate_margin(n + 1, m, h_min) > index_gate_margin(n, m, h_min));
    Ok(n - 1)
}

/// The index gate with an explicit height floor h_min (callers default
/// it to 40/3): true iff
/// h_min·n² − (2/3)log m − (1/2)log 48 − 2.14 > log(8m).
pub fn appendix_height_bound(n: u32, m: &Integer, h_min: f64) -> Result<bool> {
    if n == 0 {
        return Err(Error::BadIndex("index gate needs n ≥ 1"));
    }
    if *m < 1 {
        return Err(Error::BadIndex("index gate is stated for positive m"));
    }
    Ok(index_gate_margin(n, m, h_min) > 0.0)
}
