//! Suite-level verification harnesses tying the other layers together:
//! generator-table integrity, prime-power exclusion along a sequence,
//! denominator-growth scans, the prime-doubling search over consecutive
//! cubes, the cube-multiplier rescaling demonstration, integrality
//! hypothesis reports, and the small-index polynomial claim suite.
//!
//! Every harness returns a structured report whose verdicts are
//! deterministic for a fixed input and budget: parallel workers only
//! speed the row checks up, the merged order and every detail string
//! are independent of the schedule.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::arith::{factor, is_cube_free, is_prime, is_prime_power, padic_ord_int, FactorBudget};
use crate::curve::{check_admissible, Curve, CurvePoint, Model};
use crate::heights;
use crate::dataset::{FormulaCorpus, Table1, Table1Row};
use crate::eds::{self, PrimitiveDivisor};
use crate::{Error, Result};
use crate::polytools::{newton_polygon, resultant, congruence_exclusion, solve_power_of_p,
    HomogPoly, IntPoly};

/// Outcome of a single named check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// The claim was confirmed with the required evidence.
    Pass,
    /// The claim is false for this input, or the evidence contradicts it.
    Fail,
    /// The budget ran out before evidence either way was found.
    Indeterminate,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Indeterminate => "indeterminate",
        })
    }
}

/// One named check inside a report, with its evidence.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Verdict {
    /// Stable identifier, e.g. `"m=6"` or `"n=2"`.
    pub id: String,
    pub outcome: Outcome,
    /// Exact observed values, witnesses, or residuals.
    pub detail: String,
}

/// Outcome bundle for one verification suite.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyReport {
    /// What was verified, e.g. `"table1"` or `"expupc m=6"`.
    pub subject: String,
    /// Per-item verdicts in input order, independent of scheduling.
    pub verdicts: Vec<Verdict>,
    /// Warnings that do not decide a verdict, e.g. unfactored cofactors.
    pub flags: Vec<String>,
    /// True when every passing verdict rests on complete evidence:
    /// no truncated factorization stands behind a primality claim.
    pub complete: bool,
    /// Wall-clock time; informational only and never serialized, so
    /// emitted reports stay byte-identical across runs.
    #[serde(skip)]
    pub elapsed_ms: u64,
}

impl VerifyReport {
    fn new(subject: impl Into<String>) -> VerifyReport {
        VerifyReport {
            subject: subject.into(),
            verdicts: Vec::new(),
            flags: Vec::new(),
            complete: true,
            elapsed_ms: 0,
        }
    }

    fn push(&mut self, id: impl Into<String>, outcome: Outcome, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            id: id.into(),
            outcome,
            detail: detail.into(),
        });
    }

    fn finish(mut self, start: Instant) -> VerifyReport {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }

    /// True when no verdict failed. Indeterminate verdicts do not fail
    /// a report; they clear `complete` and are listed in `flags`.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.outcome != Outcome::Fail)
    }

    /// The failing verdicts, in order.
    pub fn failures(&self) -> Vec<&Verdict> {
        self.verdicts
            .iter()
            .filter(|v| v.outcome == Outcome::Fail)
            .collect()
    }

    /// Number of verdicts left undecided by the budget.
    pub fn indeterminate_count(&self) -> usize {
        self.verdicts
            .iter()
            .filter(|v| v.outcome == Outcome::Indeterminate)
            .count()
    }

    /// Verdict with the given id, if present.
    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }
}

fn point_from(coords: &(Rational, Rational)) -> CurvePoint {
    CurvePoint::affine(coords.0.clone(), coords.1.clone())
}

// ----------------------------------------------------------------------
// Generator-table integrity
// ----------------------------------------------------------------------

/// Check every table row exactly: the point lies on Y² = X³ − 432m²,
/// the companion point lies on y² = x³ + 16m², and the degree-3 isogeny
/// carries the companion to the point. Any failure reports the exact
/// residual, so a single corrupted digit is caught mechanically.
pub fn verify_table1(table: &Table1) -> VerifyReport {
    let start = Instant::now();
    let mut report = VerifyReport::new("table1");
    let verdicts: Vec<Verdict> = table
        .rows
        .par_iter()
        .map(table1_row_verdict)
        .collect();
    report.verdicts = verdicts;
    report.finish(start)
}

fn table1_row_verdict(row: &Table1Row) -> Verdict {
    let id = format!("m={}", row.m);
    let p = point_from(&row.point);
    let pp = point_from(&row.isogenous_point);
    let mut problems = Vec::new();

    let mordell = match Curve::new(Model::Mordell, row.m.clone()) {
        Ok(c) => c,
        Err(e) => {
            return Verdict {
                id,
                outcome: Outcome::Fail,
                detail: format!("twist parameter rejected: {e}"),
            }
        }
    };
    let isogenous = mordell.mordell_isogenous();

    if !mordell.contains(&p) {
        problems.push(format!(
            "point off the curve, residual {}",
            curve_residual(&mordell, &row.point)
        ));
    }
    if !isogenous.contains(&pp) {
        problems.push(format!(
            "companion point off the curve, residual {}",
            curve_residual(&isogenous, &row.isogenous_point)
        ));
    }
    if problems.is_empty() {
        match isogenous.isogeny_forward(&pp) {
            Ok(image) if image == p => {}
            Ok(image) => problems.push(format!(
                "isogeny image differs: expected ({}, {}), got {:?}",
                row.point.0, row.point.1, image
            )),
            Err(e) => problems.push(format!("isogeny undefined on companion point: {e}")),
        }
    }

    if problems.is_empty() {
        Verdict {
            id,
            outcome: Outcome::Pass,
            detail: "point on curve; companion on curve; isogeny image matches".into(),
        }
    } else {
        Verdict {
            id,
            outcome: Outcome::Fail,
            detail: problems.join("; "),
        }
    }
}

/// Defining-equation residual of a coordinate pair, as an exact rational.
fn curve_residual(curve: &Curve, coords: &(Rational, Rational)) -> Rational {
    let (x, y) = coords;
    let x3 = Rational::from(x * x) * x;
    let y2 = Rational::from(y * y);
    let m2 = Integer::from(curve.m() * curve.m());
    match curve.model() {
        Model::MordellIsogenous => y2 - x3 - Integer::from(&m2 * 16i32),
        _ => y2 - x3 + Integer::from(&m2 * 432i32),
    }
}

// ----------------------------------------------------------------------
// Prime-power exclusion along a sequence
// ----------------------------------------------------------------------

/// Confirm that no term W₂…W_{n_max} of the row's sequence is a prime
/// power. See [`verify_expupc_point`]; this wrapper reads the curve and
/// generator from a table row.
pub fn verify_expupc(row: &Table1Row, n_max: u32, budget: &FactorBudget) -> Result<VerifyReport> {
    verify_expupc_point(&row.m, &point_from(&row.point), n_max, budget)
}

/// Confirm that no term W₂…W_{n_max} is a prime power, index by index.
///
/// Evidence per index, in order of preference: a coprime factor pair
/// (two coprime divisors above 1 force two distinct primes), a direct
/// prime or prime-power identification (which *fails* the claim), or a
/// coprime split assembled from one fully-extracted prime factor. An
/// index passes only with such evidence; when the budget finds nothing
/// the verdict is indeterminate and flagged, never passed. The first
/// term is exempt and reported informationally.
pub fn verify_expupc_point(
    m: &Integer,
    point: &CurvePoint,
    n_max: u32,
    budget: &FactorBudget,
) -> Result<VerifyReport> {
    if n_max < 22 {
        return Err(Error::BadIndex("the exclusion window extends to index 22"));
    }
    let start = Instant::now();
    let curve = Curve::new(Model::Mordell, m.clone())?;
    // Fails fast when the point is absent from the curve.
    let first = eds::cubic_term(&curve, point, 1)?;

    let mut report = VerifyReport::new(format!("expupc m={m}"));
    report.push("n=1", Outcome::Pass, first_term_note(&first.w));

    let rows: Vec<(Verdict, bool, Option<String>)> = (2..=n_max)
        .into_par_iter()
        .map(|n| expupc_index_verdict(&curve, point, n, budget))
        .collect();
    for (verdict, complete, flag) in rows {
        report.complete &= complete;
        if let Some(f) = flag {
            report.flags.push(f);
        }
        report.verdicts.push(verdict);
    }
    Ok(report.finish(start))
}

fn first_term_note(w1: &Integer) -> String {
    let shape = if *w1 == 1 {
        "trivial".to_string()
    } else if is_prime(w1) {
        "prime".to_string()
    } else if let Some((p, k)) = is_prime_power(w1) {
        format!("the prime power {p}^{k}")
    } else {
        "composite".to_string()
    };
    format!("W1 = {w1} is {shape}; the first term is exempt from the claim")
}

fn expupc_index_verdict(
    curve: &Curve,
    point: &CurvePoint,
    n: u32,
    budget: &FactorBudget,
) -> (Verdict, bool, Option<String>) {
    let id = format!("n={n}");
    let fail = |detail: String| {
        (
            Verdict {
                id: id.clone(),
                outcome: Outcome::Fail,
                detail,
            },
            true,
            None,
        )
    };

    match eds::coprime_factor_witness(curve, point, n) {
        Err(e) => fail(format!("sequence error: {e}")),
        Ok(Some((f1, f2))) => (
            Verdict {
                id,
                outcome: Outcome::Pass,
                detail: format!("coprime witness ({f1}, {f2})"),
            },
            true,
            None,
        ),
        Ok(None) => {
            let w = match eds::cubic_term(curve, point, n) {
                Ok(t) => t.w,
                Err(e) => return fail(format!("sequence error: {e}")),
            };
            if w == 1 {
                return (
                    Verdict {
                        id,
                        outcome: Outcome::Pass,
                        detail: "trivial term W = 1 has no prime divisor".into(),
                    },
                    true,
                    None,
                );
            }
            if is_prime(&w) {
                return fail(format!("W = {w} is prime"));
            }
            if let Some((p, k)) = is_prime_power(&w) {
                return fail(format!("W = {p}^{k} is a prime power"));
            }
            let factored = match factor(&w, budget) {
                Ok(f) => f,
                Err(e) => return fail(format!("factorization error: {e}")),
            };
            match factored.factors.first() {
                Some((p, e)) => {
                    let f1 = Integer::from(p.pow(*e));
                    let f2 = Integer::from(&w / &f1);
                    debug_assert_eq!(Integer::from(f1.gcd_ref(&f2)), 1);
                    debug_assert!(f2 > 1);
                    let flag = if factored.is_complete() {
                        None
                    } else {
                        Some(format!(
                            "n={n}: factorization incomplete; split uses the exact \
                             multiplicity of {p}"
                        ))
                    };
                    let complete = factored.is_complete();
                    (
                        Verdict {
                            id,
                            outcome: Outcome::Pass,
                            detail: format!("coprime split {f1} × {f2}"),
                        },
                        complete,
                        flag,
                    )
                }
                None => (
                    Verdict {
                        id,
                        outcome: Outcome::Indeterminate,
                        detail: format!(
                            "composite, not a pure power, but no factor found within budget \
                             ({} digits)",
                            w.to_string().len()
                        ),
                    },
                    false,
                    Some(format!("n={n}: undecided within the factorization budget")),
                ),
            }
        }
    }
}

// ----------------------------------------------------------------------
// Denominator-growth scan
// ----------------------------------------------------------------------

/// The generator table as (twist, generator) pairs for [`appendix_scan`].
pub fn table1_generators(table: &Table1) -> Vec<(Integer, CurvePoint)> {
    table
        .rows
        .iter()
        .map(|r| (r.m.clone(), point_from(&r.point)))
        .collect()
}

/// Smallest bound past the exempt first index: 1 when every denominator
/// B₂…B_{n_max} exceeds 1, otherwise the largest index with Bₙ = 1.
const SCAN_RANGE_MAX: u32 = 353;

/// Scan externally supplied (twist, generator) pairs and report, per
/// curve, the bound N₀ past which every denominator Bₙ exceeds 1.
///
/// N₀ = max(1, largest n ≤ n_max with Bₙ = 1); the first index never
/// counts against the bound, so a curve passes exactly when N₀ = 1.
/// Pairs with a non-cube-free twist, or a twist outside 3..=353, are
/// rejected row-wise rather than failing the scan.
pub fn appendix_scan(generators: &[(Integer, CurvePoint)], n_max: u32) -> Result<VerifyReport> {
    if n_max < 2 {
        return Err(Error::BadIndex("the scan needs at least two indices"));
    }
    let start = Instant::now();
    let mut report = VerifyReport::new("appendix scan");
    report.verdicts = generators
        .par_iter()
        .map(|(m, point)| appendix_row_verdict(m, point, n_max))
        .collect();
    Ok(report.finish(start))
}

fn appendix_row_verdict(m: &Integer, point: &CurvePoint, n_max: u32) -> Verdict {
    let id = format!("m={m}");
    let reject = |detail: String| Verdict {
        id: id.clone(),
        outcome: Outcome::Fail,
        detail,
    };
    if !is_cube_free(m) {
        return reject("rejected: twist parameter is not cube-free".into());
    }
    if *m < 3 || *m > SCAN_RANGE_MAX {
        return reject(format!("rejected: twist outside the scan range 3..={SCAN_RANGE_MAX}"));
    }
    let curve = match Curve::new(Model::Mordell, m.clone()) {
        Ok(c) => c,
        Err(e) => return reject(format!("rejected: {e}")),
    };
    let terms = match eds::mordell_sequence(&curve, point, n_max) {
        Ok(t) => t,
        Err(e) => return reject(format!("rejected: {e}")),
    };
    let integral: Vec<u32> = terms.iter().filter(|t| t.b == 1).map(|t| t.n).collect();
    let n0 = integral.iter().copied().max().unwrap_or(1).max(1);
    if n0 == 1 {
        Verdict {
            id,
            outcome: Outcome::Pass,
            detail: format!("N0 = 1; B_n > 1 for 2 <= n <= {n_max}"),
        }
    } else {
        Verdict {
            id,
            outcome: Outcome::Fail,
            detail: format!(
                "N0 = {n0}; integral multiples beyond the first at n = {:?}",
                integral.iter().filter(|&&n| n > 1).collect::<Vec<_>>()
            ),
        }
    }
}

// ----------------------------------------------------------------------
// Strong-divisibility and valuation grids
// ----------------------------------------------------------------------

/// Check gcd(W_r, W_n) = W_{gcd(r,n)} for every pair 1 ≤ r ≤ n ≤ max.
pub fn strong_divisibility_grid(
    curve: &Curve,
    point: &CurvePoint,
    max_index: u32,
) -> Result<VerifyReport> {
    if max_index < 1 {
        return Err(Error::BadIndex("the grid needs at least one index"));
    }
    let start = Instant::now();
    let mut report = VerifyReport::new(format!("strong divisibility m={}", curve.m()));
    let pairs: Vec<(u32, u32)> = (1..=max_index)
        .flat_map(|r| (r..=max_index).map(move |n| (r, n)))
        .collect();
    let verdicts: Vec<Verdict> = pairs
        .par_iter()
        .map(|&(r, n)| {
            let id = format!("r={r} n={n}");
            match eds::check_strong_divisibility(curve, point, r, n) {
                Ok(true) => Verdict {
                    id,
                    outcome: Outcome::Pass,
                    detail: format!("gcd(W_{r}, W_{n}) = W_{}", gcd_u32(r, n)),
                },
                Ok(false) => Verdict {
                    id,
                    outcome: Outcome::Fail,
                    detail: format!("gcd(W_{r}, W_{n}) differs from W_{}", gcd_u32(r, n)),
                },
                Err(e) => Verdict {
                    id,
                    outcome: Outcome::Fail,
                    detail: format!("error: {e}"),
                },
            }
        })
        .collect();
    report.verdicts = verdicts;
    Ok(report.finish(start))
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// Replay the five valuation laws on every checkable (n, k, p) with
/// n·k ≤ product_max and k ≥ 2.
///
/// Candidate primes for a base index n are those found by budgeted
/// factorization of Aₙ, Bₙ, and Wₙ, plus 2 and 3. A prime hiding in an
/// unfactored cofactor cannot be enumerated; such cofactors are flagged
/// and clear the `complete` bit, but every enumerated triple is checked
/// exactly.
pub fn valuation_grid(
    curve: &Curve,
    point: &CurvePoint,
    product_max: u32,
    budget: &FactorBudget,
) -> Result<VerifyReport> {
    if product_max < 2 {
        return Err(Error::BadIndex("the grid needs room for one doubled index"));
    }
    let start = Instant::now();
    let mut report = VerifyReport::new(format!("valuation laws m={}", curve.m()));
    let n_top = product_max / 2;
    let wterms = eds::mordell_sequence(curve, point, n_top)?;
    let cterms = eds::w_sequence(curve, point, n_top)?;

    for n in 1..=n_top {
        let a = &wterms[(n - 1) as usize].a;
        let b = &wterms[(n - 1) as usize].b;
        let w = &cterms[(n - 1) as usize].w;
        let mut candidates: BTreeSet<Integer> = BTreeSet::new();
        candidates.insert(Integer::from(2));
        candidates.insert(Integer::from(3));
        for (label, value) in [("A", a), ("B", b), ("W", w)] {
            let factored = factor(value, budget)?;
            if !factored.is_complete() {
                report.complete = false;
                report.flags.push(format!(
                    "n={n}: cofactor of the {label}-part unfactored; its primes are not enumerated"
                ));
            }
            for (p, _) in &factored.factors {
                candidates.insert(p.clone());
            }
        }
        for k in 2..=(product_max / n) {
            for p in &candidates {
                let rep = eds::check_valuation_laws(curve, point, n, k, p)?;
                let applicable = rep.checks.iter().filter(|c| c.applicable).count();
                if applicable == 0 {
                    continue;
                }
                let id = format!("n={n} k={k} p={p}");
                if rep.all_agree() {
                    report.push(id, Outcome::Pass, format!("{applicable} law(s) agree"));
                } else {
                    let failing: Vec<&str> = rep
                        .checks
                        .iter()
                        .filter(|c| c.applicable && !c.agrees())
                        .map(|c| c.law)
                        .collect();
                    report.push(
                        id,
                        Outcome::Fail,
                        format!("laws disagree: {}", failing.join(", ")),
                    );
                }
            }
        }
    }
    Ok(report.finish(start))
}

// ----------------------------------------------------------------------
// Prime-doubling search over consecutive cubes
// ----------------------------------------------------------------------

/// One row of [`daylight_search`]: the point (u, u−1) on the cubic with
/// m = u³ + (u−1)³, whose doubled denominator is f(u) = 3u² − 3u + 1
/// whenever no cancellation occurs.
#[derive(Debug, Clone)]
pub struct DaylightFinding {
    pub u: i64,
    /// f(u) = 3u² − 3u + 1, the denominator before cancellation.
    pub f: Integer,
    /// Twist parameter u³ + (u−1)³ = (2u − 1)·f(u).
    pub m: Integer,
    pub f_is_prime: bool,
    pub m_cube_free: bool,
    /// Reduced common denominator of the doubled point, for qualifying u.
    pub w2: Option<Integer>,
    pub w2_is_prime: Option<bool>,
}

/// Findings plus the two resultant identities that rule cancellation out.
#[derive(Debug, Clone)]
pub struct DaylightReport {
    pub findings: Vec<DaylightFinding>,
    /// Res_v(u² + uv + v², 2u³ + v³) = 9u⁶, confirmed on more sample
    /// points than its degree.
    pub resultant_u_matches: bool,
    /// The symmetric identity eliminating u instead: 9v⁶.
    pub resultant_v_matches: bool,
}

/// For each 2 ≤ u ≤ u_max, report whether f(u) = 3u² − 3u + 1 is prime
/// and m = u³ + (u−1)³ cube-free; when both hold, double R = (u, u−1)
/// on the cubic and report the primality of the reduced denominator W₂.
///
/// The accompanying resultant identities bound any cancellation between
/// f(u) and the numerators by a power of 3 coprime to f(u), which is
/// why W₂ = f(u) whenever the search qualifies a u.
pub fn daylight_search(u_max: i64) -> Result<DaylightReport> {
    if u_max < 2 {
        return Err(Error::BadIndex("the search starts at u = 2"));
    }
    let mut findings = Vec::new();
    for u in 2..=u_max {
        let f = Integer::from(3 * u * u - 3 * u + 1);
        let m = Integer::from(u).pow(3) + Integer::from(u - 1).pow(3);
        let f_is_prime = is_prime(&f);
        let m_cube_free = is_cube_free(&m);
        let (w2, w2_is_prime) = if f_is_prime && m_cube_free {
            let curve = Curve::new(Model::Cubic, m.clone())?;
            let r = CurvePoint::from_i64(u, u - 1);
            let doubled = curve.double_on_cubic(&r)?;
            let (x, y) = doubled.coordinates()?;
            let w = Integer::from(x.denom().lcm_ref(y.denom()));
            // Cross-check against the sequence machinery.
            let mordell = curve.mordell();
            let transported = curve.to_mordell(&r)?;
            let term = eds::cubic_term(&mordell, &transported, 2)?;
            assert_eq!(term.w, w, "doubled denominator disagrees with the sequence");
            let prime = is_prime(&w);
            (Some(w), Some(prime))
        } else {
            (None, None)
        };
        findings.push(DaylightFinding {
            u,
            f,
            m,
            f_is_prime,
            m_cube_free,
            w2,
            w2_is_prime,
        });
    }
    Ok(DaylightReport {
        findings,
        resultant_u_matches: resultant_eliminating_v_is_nine_u6()?,
        resultant_v_matches: resultant_eliminating_u_is_nine_v6()?,
    })
}

/// Res_v(u² + uv + v², 2u³ + v³) as a polynomial in u has degree at
/// most 6 (a Sylvester determinant with entries of total degree ≤ 6),
/// so agreement with 9u⁶ at eight points proves the identity.
fn resultant_eliminating_v_is_nine_u6() -> Result<bool> {
    for u0 in 0..=7i64 {
        let u = Integer::from(u0);
        let f = IntPoly::new(vec![Integer::from((&u).pow(2)), u.clone(), Integer::from(1)]);
        let g = IntPoly::new(vec![
            Integer::from((&u).pow(3)) * 2i32,
            Integer::from(0),
            Integer::from(0),
            Integer::from(1),
        ]);
        let expected = Integer::from((&u).pow(6)) * 9i32;
        if resultant(&f, &g)? != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The symmetric check: Res_u = 9v⁶, again on more points than degree.
fn resultant_eliminating_u_is_nine_v6() -> Result<bool> {
    for v0 in 0..=7i64 {
        let v = Integer::from(v0);
        let f = IntPoly::new(vec![Integer::from((&v).pow(2)), v.clone(), Integer::from(1)]);
        let g = IntPoly::new(vec![
            Integer::from((&v).pow(3)),
            Integer::from(0),
            Integer::from(0),
            Integer::from(2),
        ]);
        let expected = Integer::from((&v).pow(6)) * 9i32;
        if resultant(&f, &g)? != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

// ----------------------------------------------------------------------
// Cube-multiplier rescaling demonstration
// ----------------------------------------------------------------------

/// One rescaled index: W_l = removed_part · primitive^exponent, and on
/// the rescaled curve the denominator collapses to the primitive part.
#[derive(Debug, Clone)]
pub struct RescaleEntry {
    pub index: u32,
    /// Original reduced denominator W_l.
    pub w: Integer,
    /// Smallest prime of W_l dividing no earlier term.
    pub primitive: Integer,
    pub exponent: u32,
    /// W_l with the primitive prime divided out; a factor of the scale.
    pub removed_part: Integer,
    /// Denominator after rescaling: W_l / gcd(W_l, scale).
    pub rescaled_w: Integer,
    /// Whether the rescaled denominator equals primitive^exponent.
    pub confirmed_prime_power: bool,
}

/// Outcome of [`rescale_demo`]: the scale M, the rescaled twist m·M³,
/// and per-index evidence that each chosen denominator became a prime
/// power — the reason a cube-free twist is insisted on everywhere else.
#[derive(Debug, Clone)]
pub struct RescaleReport {
    pub m: Integer,
    pub indices: Vec<u32>,
    /// M = product of the removed parts.
    pub scale: Integer,
    /// m · M³, the deliberately non-cube-free twist.
    pub rescaled_m: Integer,
    pub entries: Vec<RescaleEntry>,
    /// Indices contributing nothing: index 1, or a trivial W_l = 1.
    pub trivial: Vec<u32>,
    /// Indices dropped because the factorization budget ran out.
    pub aborted: Vec<u32>,
}

impl RescaleReport {
    /// True when no index aborted and every entry became a prime power.
    pub fn demonstrated(&self) -> bool {
        self.aborted.is_empty() && self.entries.iter().all(|e| e.confirmed_prime_power)
    }
}

/// Multiply the twist by a cube M³ so that each chosen denominator W_l
/// collapses to a prime power.
///
/// For each index l, W_l is split as w_l · p^e with p its smallest
/// primitive prime; M is the product of the w_l. Scaling the point's
/// coordinates by M moves it to U³ + V³ = m·M³ and divides each W_l by
/// gcd(W_l, M), which removes every non-primitive prime (a primitive
/// prime divides no other chosen term, because the indices are pairwise
/// coprime and gcd(W_r, W_n) = W_{gcd(r,n)}). Indices must be pairwise
/// coprime; index 1 is exempt everywhere and contributes nothing.
pub fn rescale_demo(
    m: &Integer,
    point: &CurvePoint,
    indices: &[u32],
    budget: &FactorBudget,
) -> Result<RescaleReport> {
    if indices.is_empty() {
        return Err(Error::BadIndex("choose at least one index"));
    }
    if indices.contains(&0) {
        return Err(Error::BadIndex("indices start at 1"));
    }
    let mut sorted: Vec<u32> = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for i in 0..sorted.len() {
        for j in (i + 1)..sorted.len() {
            if gcd_u32(sorted[i], sorted[j]) != 1 {
                return Err(Error::BadIndex("indices must be pairwise coprime"));
            }
        }
    }

    let curve = Curve::new(Model::Mordell, m.clone())?;
    let l_max = *sorted.last().expect("nonempty");
    let terms = eds::w_sequence(&curve, point, l_max)?;
    let history: Vec<_> = terms
        .iter()
        .map(|t| factor(&t.w, budget))
        .collect::<Result<Vec<_>>>()?;

    let mut entries = Vec::new();
    let mut trivial = Vec::new();
    let mut aborted = Vec::new();
    let mut scale = Integer::from(1);
    for &l in &sorted {
        let w = &terms[(l - 1) as usize].w;
        if l == 1 || *w == 1 {
            trivial.push(l);
            continue;
        }
        let before = &history[..(l - 1) as usize];
        match eds::primitive_divisor_of(w, before, budget)? {
            PrimitiveDivisor::Found(p) => {
                let e = padic_ord_int(w, &p)? as u32;
                let removed = Integer::from(w / Integer::from((&p).pow(e)));
                scale *= &removed;
                entries.push(RescaleEntry {
                    index: l,
                    w: w.clone(),
                    primitive: p,
                    exponent: e,
                    removed_part: removed,
                    rescaled_w: Integer::new(),
                    confirmed_prime_power: false,
                });
            }
            PrimitiveDivisor::Absent | PrimitiveDivisor::Indeterminate => aborted.push(l),
        }
    }

    let rescaled_m = Integer::from(m * Integer::from((&scale).pow(3)));
    for entry in &mut entries {
        let g = Integer::from(entry.w.gcd_ref(&scale));
        entry.rescaled_w = Integer::from(&entry.w / &g);
        let expected = Integer::from((&entry.primitive).pow(entry.exponent));
        entry.confirmed_prime_power = entry.rescaled_w == expected;
        // The scaled point stays in lowest terms and on the new cubic.
        let term = &terms[(entry.index - 1) as usize];
        let carry = Integer::from(&scale / &g);
        let nu = Integer::from(&term.u * &carry);
        let nv = Integer::from(&term.v * &carry);
        let lhs = Integer::from((&nu).pow(3)) + Integer::from((&nv).pow(3));
        let rhs = Integer::from(&rescaled_m * Integer::from((&entry.rescaled_w).pow(3)));
        assert_eq!(lhs, rhs, "rescaled point left the rescaled cubic");
    }

    Ok(RescaleReport {
        m: m.clone(),
        indices: sorted,
        scale,
        rescaled_m,
        entries,
        trivial,
        aborted,
    })
}

// ----------------------------------------------------------------------
// Integrality hypothesis report
// ----------------------------------------------------------------------

/// Hypothesis-by-hypothesis report for the conditional uniqueness bound
/// on prime-power terms, plus the observed count it predicts.
#[derive(Debug, Clone)]
pub struct ThesisReport {
    pub m: Integer,
    /// m mod 9, normalized to 0..=8.
    pub residue_mod_9: u32,
    /// Whether the residue lies in the classes ±1, ±3, ±4 of nine.
    pub congruence_holds: bool,
    /// gcd(A₁, m) = 1.
    pub coprime_numerator: bool,
    /// B₂ > 1, i.e. the doubled point is not integral.
    pub double_fractional: bool,
    /// B₃ > 1.
    pub triple_fractional: bool,
    /// All four hypotheses hold, so the bound below applies.
    pub applicable: bool,
    /// Indices 2 ≤ n ≤ 22 whose Wₙ is a prime or prime power.
    pub prime_power_indices: Vec<u32>,
    /// True unless the bound applies and more than one index violates it.
    pub consistent: bool,
}

/// Residue classes ±1, ±3, ±4 modulo 9, as least non-negative residues.
const CONGRUENCE_CLASSES: [u32; 6] = [1, 3, 4, 5, 6, 8];

/// Report which hypotheses of the conditional at-most-one-prime-power
/// bound hold for (m, P), and count the prime-power terms among
/// W₂…W₂₂. When a hypothesis fails the bound is silent and the count is
/// informational. Prime-power detection uses primality and exact root
/// extraction, so no factorization budget is involved.
pub fn thesis_hypothesis_check(m: &Integer, point: &CurvePoint) -> Result<ThesisReport> {
    let curve = Curve::new(Model::Mordell, m.clone())?;
    let wterms = eds::mordell_sequence(&curve, point, 22)?;
    let cterms = eds::w_sequence(&curve, point, 22)?;

    let mut residue = Integer::from(m % 9i32).to_i32().expect("small residue");
    if residue < 0 {
        residue += 9;
    }
    let residue = residue as u32;
    let congruence_holds = CONGRUENCE_CLASSES.contains(&residue);
    let coprime_numerator = Integer::from(wterms[0].a.gcd_ref(m)) == 1;
    let double_fractional = wterms[1].b > 1;
    let triple_fractional = wterms[2].b > 1;
    let applicable = congruence_holds && coprime_numerator && double_fractional && triple_fractional;

    let mut prime_power_indices = Vec::new();
    for t in &cterms[1..] {
        if t.w > 1 && (is_prime(&t.w) || is_prime_power(&t.w).is_some()) {
            prime_power_indices.push(t.n);
        }
    }
    let consistent = !applicable || prime_power_indices.len() <= 1;

    Ok(ThesisReport {
        m: m.clone(),
        residue_mod_9: residue,
        congruence_holds,
        coprime_numerator,
        double_fractional,
        triple_fractional,
        applicable,
        prime_power_indices,
        consistent,
    })
}

// ----------------------------------------------------------------------
// Canonical-height identity suite
// ----------------------------------------------------------------------

/// Threshold for |ĥ(nP) − n²·ĥ(P)|; generous against the ±tol error of
/// each computed height for n ≤ 8.
pub const HEIGHT_QUAD_TOL: f64 = 1e-5;
/// Threshold for |ĥ(image of P′) − 3·ĥ(P′)| across the degree-3 isogeny.
pub const HEIGHT_ISOGENY_TOL: f64 = 1e-6;

/// Check the canonical-height identities for a generator: the
/// naive-minus-canonical gap containment for P and every computed
/// multiple, quadratic scaling ĥ(nP) = n²·ĥ(P) for 2 ≤ n ≤ n_max, and —
/// when a companion point on y² = x³ + 16m² is supplied — the factor-3
/// scaling under the isogeny. `tol` is the precision each canonical
/// height is computed to; the identity thresholds are the pinned
/// constants above.
pub fn heights_suite(
    m: &Integer,
    point: &CurvePoint,
    companion: Option<&CurvePoint>,
    n_max: u32,
    tol: f64,
) -> Result<VerifyReport> {
    if n_max < 2 {
        return Err(Error::BadIndex("the suite needs at least the double"));
    }
    let start = Instant::now();
    let curve = Curve::new(Model::Mordell, m.clone())?;
    let mut report = VerifyReport::new(format!("heights m={m}"));

    let base = heights::height_report(&curve, point, tol)?;
    report.push(
        "n=1",
        if base.silverman_verified() {
            Outcome::Pass
        } else {
            Outcome::Fail
        },
        format!(
            "hhat = {:.12} (tol {:.1e}), h - hhat = {:.12} within [{:.6}, {:.6}]",
            base.canonical,
            base.precision,
            base.naive - base.canonical,
            base.gap_lower,
            base.gap_upper
        ),
    );

    for n in 2..=n_max {
        let np = curve.mul(n as i64, point)?;
        let rep = heights::height_report(&curve, &np, tol)?;
        let expected = (n as f64) * (n as f64) * base.canonical;
        let quad_err = (rep.canonical - expected).abs();
        let ok = quad_err < HEIGHT_QUAD_TOL && rep.silverman_verified();
        report.push(
            format!("n={n}"),
            if ok { Outcome::Pass } else { Outcome::Fail },
            format!(
                "|hhat(nP) - n^2 hhat(P)| = {:.3e} (limit {:.1e}); gap {}",
                quad_err,
                HEIGHT_QUAD_TOL,
                if rep.silverman_verified() {
                    "contained"
                } else {
                    "violated"
                }
            ),
        );
    }

    if let Some(pp) = companion {
        let isogenous = curve.mordell_isogenous();
        let image = isogenous.isogeny_forward(pp)?;
        let h_image = heights::canonical_height(&curve, &image, tol)?;
        let h_comp = heights::canonical_height(&isogenous, pp, tol)?;
        let err = (h_image - 3.0 * h_comp).abs();
        report.push(
            "isogeny",
            if err < HEIGHT_ISOGENY_TOL {
                Outcome::Pass
            } else {
                Outcome::Fail
            },
            format!(
                "|hhat(image) - 3 hhat(companion)| = {:.3e} (limit {:.1e})",
                err, HEIGHT_ISOGENY_TOL
            ),
        );
    }

    Ok(report.finish(start))
}

// ----------------------------------------------------------------------
// Small-index polynomial claim suite
// ----------------------------------------------------------------------

/// Number of random integral points at which each multiplication
/// formula is replayed against the group law.
const SPOT_POINTS: usize = 10;
/// Default stream for the spot-check sampler; any seed works, and a
/// fixed one keeps reports bit-identical run to run.
pub const DEFAULT_SPOT_SEED: u64 = 0x5eed_f3c5;

/// Replay every recorded claim of the polynomial dataset: denominator
/// factorizations, the linear-factor identity, all resultant values,
/// congruence exclusions, shifted-polynomial slope claims, power-value
/// solution lists (searched over |u|, |v| ≤ solution_box), and the
/// multiplication formulas themselves against the group law at seeded
/// random integral points.
pub fn check_formulas(data: &FormulaCorpus, solution_box: i64, seed: u64) -> Result<VerifyReport> {
    let start = Instant::now();
    let mut report = VerifyReport::new("formula corpus");

    check_denominator_products(data, &mut report)?;
    check_linear_identities(data, &mut report)?;
    check_resultant_claims(data, &mut report)?;
    check_congruence_claims(data, &mut report);
    check_newton_claims(data, &mut report)?;
    check_solution_claims(data, solution_box, &mut report)?;
    check_multiplication_formulas(data, seed, &mut report)?;

    Ok(report.finish(start))
}

fn check_denominator_products(data: &FormulaCorpus, report: &mut VerifyReport) -> Result<()> {
    for case in data.cases() {
        let id = format!("case n={}: denominator product", case.n);
        match (case.assembled_denominator(), &case.full_denominator) {
            (Some(assembled), Some(full)) => {
                let equal = assembled.sub(full).map(|d| d.is_zero()).unwrap_or(false);
                report.push(
                    id,
                    if equal { Outcome::Pass } else { Outcome::Fail },
                    if equal {
                        "factored form expands to the recorded denominator".to_string()
                    } else {
                        "factored form does not expand to the recorded denominator".to_string()
                    },
                );
            }
            _ => {
                report.push(
                    id,
                    Outcome::Pass,
                    "no expanded denominator recorded; nothing to compare".to_string(),
                );
            }
        }
    }
    Ok(())
}

fn check_linear_identities(data: &FormulaCorpus, report: &mut VerifyReport) -> Result<()> {
    for identity in data.linear_identities() {
        let (a_id, b_id) = &identity.difference_of;
        let a = data.poly(a_id)?;
        let b = data.poly(b_id)?;
        let c = data.poly(&identity.equals)?;
        let equal = a.sub(b)?.sub(c).map(|d| d.is_zero()).unwrap_or(false);
        report.push(
            format!("identity {} - {} = {}", a_id, b_id, identity.equals),
            if equal { Outcome::Pass } else { Outcome::Fail },
            if equal {
                "exact".to_string()
            } else {
                "difference is nonzero".to_string()
            },
        );
    }
    Ok(())
}

fn check_resultant_claims(data: &FormulaCorpus, report: &mut VerifyReport) -> Result<()> {
    for claim in data.resultant_claims() {
        let id = format!("Res({}, {})", claim.a, claim.b);
        let a = data.resolve(&claim.a)?;
        let b = data.resolve(&claim.b)?;
        let value = resultant(&a.specialize_checked()?, &b.specialize_checked()?)?;
        let expected = Integer::from(claim.p.clone().pow(claim.exact_exp));
        let matches = value == expected || value == Integer::from(-&expected);
        report.push(
            id,
            if matches { Outcome::Pass } else { Outcome::Fail },
            format!(
                "observed {value}, expected ±{}^{}",
                claim.p, claim.exact_exp
            ),
        );
    }
    Ok(())
}

fn check_congruence_claims(data: &FormulaCorpus, report: &mut VerifyReport) {
    for claim in data.congruence_claims() {
        let id = format!("ord_{}({}) <= {}", claim.p, claim.g, claim.k_threshold);
        let g = match data.resolve(&claim.g) {
            Ok(g) => g,
            Err(e) => {
                report.push(id, Outcome::Fail, format!("unresolvable form: {e}"));
                continue;
            }
        };
        match congruence_exclusion(&g, &claim.p, claim.k_threshold) {
            Some(true) => report.push(
                id,
                Outcome::Pass,
                "established by exhaustive residue enumeration".to_string(),
            ),
            Some(false) => report.push(
                id,
                Outcome::Fail,
                "a coprime residue pair exceeds the claimed order".to_string(),
            ),
            None => {
                report.complete = false;
                report.flags.push(format!("{id}: enumeration inconclusive"));
                report.push(id, Outcome::Indeterminate, "enumeration inconclusive".to_string());
            }
        }
    }
}

fn check_newton_claims(data: &FormulaCorpus, report: &mut VerifyReport) -> Result<()> {
    for claim in data.newton_claims() {
        let h = data.poly(&claim.h)?.specialize();
        let shifted = data.poly(&claim.shift_of)?.specialize().shift_one();
        let is_shift = h.sub(&shifted).is_zero();
        report.push(
            format!("{} is {} shifted by one", claim.h, claim.shift_of),
            if is_shift { Outcome::Pass } else { Outcome::Fail },
            if is_shift {
                "exact".to_string()
            } else {
                "shift mismatch".to_string()
            },
        );

        let polygon = newton_polygon(&h, &claim.p);
        let single = polygon.single_slope(&claim.slope);
        report.push(
            format!("{} slope at p={}", claim.h, claim.p),
            if single { Outcome::Pass } else { Outcome::Fail },
            format!("expected single slope {}", claim.slope),
        );
    }
    Ok(())
}

fn check_solution_claims(
    data: &FormulaCorpus,
    solution_box: i64,
    report: &mut VerifyReport,
) -> Result<()> {
    for claim in data.solution_claims() {
        let g = data.resolve(&claim.g)?;
        let found = solve_power_of_p(&g, &claim.p, claim.k_max, solution_box)?;
        let expected = claim.expected_solutions();
        let matches = found == expected;
        report.push(
            format!("{} = ±{}^k solutions, box {}", claim.g, claim.p, solution_box),
            if matches { Outcome::Pass } else { Outcome::Fail },
            format!("found {} pairs, expected {}", found.len(), expected.len()),
        );
    }
    Ok(())
}

/// Replay the recorded coordinate formulas for 2R, 3R, 4R against the
/// group law at seeded random integral points, and check the recorded
/// fifth-index denominator factors divide the true denominator away
/// from 3.
fn check_multiplication_formulas(
    data: &FormulaCorpus,
    seed: u64,
    report: &mut VerifyReport,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // The n = 2 formulas take an integral point (u, v) on the model
    // u·v·(u+v) = m and return the doubled image point 2R on the cubic
    // itself, where R is the image of (u, v) under the degree-3 map.
    let case2 = data.case(2)?;
    if let (Some((nu, nv)), Some(full)) = (&case2.numerators, &case2.full_denominator) {
        let mut checked = 0usize;
        let mut ok = true;
        let mut note = String::new();
        while checked < SPOT_POINTS {
            let u: i64 = rng.gen_range(1..=12);
            let v: i64 = rng.gen_range(1..=12);
            let m = Integer::from(u * v * (u + v));
            if check_admissible(&m).is_err() {
                continue;
            }
            let aux = Curve::new(Model::Auxiliary, m)?;
            let r_aux = CurvePoint::from_i64(u, v);
            let doubled = (|| -> Result<CurvePoint> {
                let lifted = aux.to_mordell_isogenous(&r_aux)?;
                let image = aux.mordell_isogenous().isogeny_forward(&lifted)?;
                let r = aux.mordell().to_cubic(&image)?;
                aux.cubic().double_on_cubic(&r)
            })();
            let doubled = match doubled {
                Ok(p) => p,
                Err(_) => continue, // sample sits over a map puncture
            };
            let (ui, vi) = (Integer::from(u), Integer::from(v));
            let den = full.eval(&ui, &vi);
            if den == 0 {
                continue;
            }
            let expected_u = Rational::from((nu.eval(&ui, &vi), den.clone()));
            let expected_v = Rational::from((nv.eval(&ui, &vi), den));
            let (x, y) = doubled.coordinates()?;
            if *x != expected_u || *y != expected_v {
                ok = false;
                note = format!("mismatch at (u, v) = ({u}, {v})");
                break;
            }
            checked += 1;
        }
        report.push(
            "case n=2: formulas match the group law",
            if ok { Outcome::Pass } else { Outcome::Fail },
            if ok {
                format!("{SPOT_POINTS} random integral points")
            } else {
                note
            },
        );
    }

    // n = 3 and 4 live on the cubic itself.
    for n in [3u32, 4] {
        let case = data.case(n)?;
        let (nu, nv) = case
            .numerators
            .as_ref()
            .ok_or(Error::Dataset(format!("case n = {n} lacks numerators")))?;
        let full = case
            .full_denominator
            .as_ref()
            .ok_or(Error::Dataset(format!("case n = {n} lacks a denominator")))?;
        let mut checked = 0usize;
        let mut ok = true;
        let mut note = String::new();
        while checked < SPOT_POINTS {
            let (u, v, m) = match sample_cubic_point(&mut rng) {
                Some(s) => s,
                None => continue,
            };
            let curve = Curve::new(Model::Cubic, m)?;
            let r = CurvePoint::from_i64(u, v);
            let q = curve.mul(n as i64, &r)?;
            let (ui, vi) = (Integer::from(u), Integer::from(v));
            let den = full.eval(&ui, &vi);
            if den == 0 {
                continue;
            }
            let expected_u = Rational::from((nu.eval(&ui, &vi), den.clone()));
            let expected_v = Rational::from((nv.eval(&ui, &vi), den));
            let (x, y) = q.coordinates()?;
            if *x != expected_u || *y != expected_v {
                ok = false;
                note = format!("mismatch at (u, v) = ({u}, {v})");
                break;
            }
            checked += 1;
        }
        report.push(
            format!("case n={n}: formulas match the group law"),
            if ok { Outcome::Pass } else { Outcome::Fail },
            if ok {
                format!("{SPOT_POINTS} random integral points")
            } else {
                note
            },
        );
    }

    // n = 5 records only denominator factors: away from 3, their product
    // must be divisible by the true reduced denominator.
    let case5 = data.case(5)?;
    let mut product = HomogPoly::monomial(0, 0);
    for (_, f) in &case5.factors {
        product = product.mul(f);
    }
    let mut checked = 0usize;
    let mut ok = true;
    let mut note = String::new();
    while checked < SPOT_POINTS {
        let (u, v, m) = match sample_cubic_point(&mut rng) {
            Some(s) => s,
            None => continue,
        };
        let cubic = Curve::new(Model::Cubic, m.clone())?;
        let mordell = Curve::new(Model::Mordell, m)?;
        let r = CurvePoint::from_i64(u, v);
        let transported = cubic.to_mordell(&r)?;
        let w5 = eds::cubic_term(&mordell, &transported, 5)?.w;
        let value = Integer::from(product.eval(&Integer::from(u), &Integer::from(v)).abs_ref());
        if value == 0 {
            continue;
        }
        let w5_off3 = strip_threes(w5);
        let value_off3 = strip_threes(value);
        if !value_off3.is_divisible(&w5_off3) {
            ok = false;
            note = format!("divisibility fails at (u, v) = ({u}, {v})");
            break;
        }
        checked += 1;
    }
    report.push(
        "case n=5: recorded factors cover the denominator away from 3",
        if ok { Outcome::Pass } else { Outcome::Fail },
        if ok {
            format!("{SPOT_POINTS} random integral points")
        } else {
            note
        },
    );

    Ok(())
}

/// A random integral cubic point: coordinates in −9..=9 whose cube sum
/// is an admissible twist.
fn sample_cubic_point(rng: &mut ChaCha8Rng) -> Option<(i64, i64, Integer)> {
    let u: i64 = rng.gen_range(-9..=9);
    let v: i64 = rng.gen_range(-9..=9);
    let m = Integer::from(u).pow(3) + Integer::from(v).pow(3);
    if check_admissible(&m).is_err() {
        return None;
    }
    Some((u, v, m))
}

fn strip_threes(mut x: Integer) -> Integer {
    while x.is_divisible_u(3) && x != 0 {
        x.div_exact_u_mut(3);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset;

    fn table() -> &'static Table1 {
        dataset::table1().expect("embedded table loads")
    }

    fn m6_generator() -> (Curve, CurvePoint) {
        let curve = Curve::new(Model::Mordell, Integer::from(6)).unwrap();
        (curve, CurvePoint::from_i64(28, 80))
    }

    #[test]
    fn test_table1_all_rows_verified() {
        let report = verify_table1(table());
        assert_eq!(report.verdicts.len(), 22);
        assert!(report.passed(), "failures: {:?}", report.failures());
        assert!(report.complete);
        assert_eq!(report.verdict("m=6").unwrap().outcome, Outcome::Pass);
        assert_eq!(report.verdict("m=94").unwrap().outcome, Outcome::Pass);
    }

    #[test]
    fn test_table1_tampered_row_fails_with_residual() {
        let mut tampered = table().clone();
        let y = &mut tampered.rows[0].point.1;
        *y += 1;
        let report = verify_table1(&tampered);
        assert!(!report.passed());
        let bad = report.verdict("m=6").unwrap();
        assert_eq!(bad.outcome, Outcome::Fail);
        assert!(bad.detail.contains("residual"), "detail: {}", bad.detail);
        // The other rows are untouched.
        assert_eq!(report.failures().len(), 1);
    }

    #[test]
    fn test_expupc_demands_full_window() {
        let row = &table().rows[0];
        let err = verify_expupc(row, 21, &FactorBudget::default()).unwrap_err();
        assert!(matches!(err, Error::BadIndex(_)));
    }

    #[test]
    fn test_expupc_m6_confirms_every_index() {
        let row = table().row(&Integer::from(6)).unwrap();
        let report = verify_expupc(row, 22, &FactorBudget::default()).unwrap();
        assert_eq!(report.verdicts.len(), 22); // n = 1 note plus 2..=22
        assert!(report.passed(), "failures: {:?}", report.failures());
        assert!(report.complete);
        assert_eq!(report.indeterminate_count(), 0);
        let first = report.verdict("n=1").unwrap();
        assert!(first.detail.contains("exempt"));
        let second = report.verdict("n=2").unwrap();
        assert_eq!(second.outcome, Outcome::Pass);
        assert!(second.detail.contains("coprime witness"));
    }

    #[test]
    fn test_expupc_reports_first_term_informationally() {
        let row = table().row(&Integer::from(20)).unwrap();
        let report = verify_expupc(row, 22, &FactorBudget::default()).unwrap();
        let first = report.verdict("n=1").unwrap();
        assert_eq!(first.outcome, Outcome::Pass);
        assert!(first.detail.contains("W1 = 7"));
        assert!(first.detail.contains("prime"));
        assert!(first.detail.contains("exempt"));
        assert!(report.passed());
    }

    #[test]
    fn test_expupc_flags_prime_terms_as_failures() {
        // The doubled point for m = 7 is integral with W2 = 3, a prime:
        // exactly the situation the sequence claims rule out for the
        // tabulated curves, so it must surface as a failure here.
        let report = verify_expupc_point(
            &Integer::from(7),
            &CurvePoint::from_i64(84, 756),
            22,
            &FactorBudget::default(),
        )
        .unwrap();
        let second = report.verdict("n=2").unwrap();
        assert_eq!(second.outcome, Outcome::Fail);
        assert!(second.detail.contains("W = 3 is prime"));
        assert!(!report.passed());
    }

    #[test]
    fn test_expupc_starved_budget_yields_indeterminate_not_pass() {
        // With no trial primes and no rho the composite W3 = 38 for
        // m = 7 (an integral multiple, so no coprime witness exists)
        // cannot be split, and the verdict must stay undecided.
        let starved = FactorBudget {
            trial_bound: 1,
            rho_iterations: 0,
            rho_attempts: 0,
        };
        let report = verify_expupc_point(
            &Integer::from(7),
            &CurvePoint::from_i64(84, 756),
            22,
            &starved,
        )
        .unwrap();
        let third = report.verdict("n=3").unwrap();
        assert_eq!(third.outcome, Outcome::Indeterminate);
        assert!(!report.complete);
        assert!(report.flags.iter().any(|f| f.starts_with("n=3")));
    }

    #[test]
    fn test_appendix_scan_table1_rows_all_bound_one() {
        let report = appendix_scan(&table1_generators(table()), 22).unwrap();
        assert_eq!(report.verdicts.len(), 22);
        assert!(report.passed(), "failures: {:?}", report.failures());
        for v in &report.verdicts {
            assert!(v.detail.starts_with("N0 = 1"), "{}: {}", v.id, v.detail);
        }
    }

    #[test]
    fn test_appendix_scan_reports_integral_multiples() {
        // m = 7 with generator (84, 756) has integral multiples up to
        // 4P, so the scan reports N0 = 4 — reported, not an error.
        let rows = vec![(Integer::from(7), CurvePoint::from_i64(84, 756))];
        let report = appendix_scan(&rows, 22).unwrap();
        let verdict = report.verdict("m=7").unwrap();
        assert_eq!(verdict.outcome, Outcome::Fail);
        assert!(verdict.detail.starts_with("N0 = 4"), "{}", verdict.detail);
        assert!(verdict.detail.contains('2'));
        assert!(verdict.detail.contains('3'));
        assert!(verdict.detail.contains('4'));
    }

    #[test]
    fn test_appendix_scan_rejects_bad_rows() {
        let rows = vec![
            (Integer::from(8), CurvePoint::from_i64(1, 1)),
            (Integer::from(354), CurvePoint::from_i64(1, 1)),
        ];
        let report = appendix_scan(&rows, 22).unwrap();
        assert!(report.verdict("m=8").unwrap().detail.contains("cube-free"));
        assert!(report
            .verdict("m=354")
            .unwrap()
            .detail
            .contains("scan range"));
    }

    #[test]
    fn test_appendix_scan_needs_two_indices() {
        let err = appendix_scan(&[], 1).unwrap_err();
        assert!(matches!(err, Error::BadIndex(_)));
    }

    #[test]
    fn test_strong_divisibility_grid_m6() {
        let (curve, point) = m6_generator();
        let report = strong_divisibility_grid(&curve, &point, 8).unwrap();
        assert_eq!(report.verdicts.len(), 36);
        assert!(report.passed(), "failures: {:?}", report.failures());
        assert!(report
            .verdict("r=2 n=6")
            .unwrap()
            .detail
            .contains("W_2"));
    }

    #[test]
    fn test_valuation_grid_m6_small_window() {
        let (curve, point) = m6_generator();
        let report =
            valuation_grid(&curve, &point, 8, &FactorBudget::trial_only(100_000)).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures());
        // 7 divides A1 = 28, so the laws about numerator primes apply
        // at the very first index.
        let v = report.verdict("n=1 k=2 p=7").unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        // 2 divides W2, so the denominator laws apply at n = 2.
        assert!(report.verdict("n=2 k=2 p=2").is_some());
    }

    #[test]
    fn test_daylight_search_through_one_hundred() {
        let report = daylight_search(100).unwrap();
        assert!(report.resultant_u_matches);
        assert!(report.resultant_v_matches);
        assert_eq!(report.findings.len(), 99);

        let qualifying: Vec<&DaylightFinding> = report
            .findings
            .iter()
            .filter(|f| f.f_is_prime && f.m_cube_free)
            .collect();
        assert_eq!(qualifying.len(), 36);
        // Every qualifying doubled denominator survives uncancelled and
        // is the prime f(u) itself.
        for f in &qualifying {
            assert_eq!(f.w2.as_ref(), Some(&f.f), "u = {}", f.u);
            assert_eq!(f.w2_is_prime, Some(true), "u = {}", f.u);
        }

        let first = &report.findings[0];
        assert_eq!(first.u, 2);
        assert_eq!(first.f, 7);
        assert_eq!(first.m, 9);
        assert_eq!(first.w2.as_ref().unwrap(), &Integer::from(7));

        let third = &report.findings[1];
        assert_eq!(third.u, 3);
        assert_eq!(third.f, 19);
        assert_eq!(third.m, 35);
        assert_eq!(third.w2.as_ref().unwrap(), &Integer::from(19));

        // u = 5 has prime f(5) = 61 but m = 189 = 3³·7 is not cube-free.
        let fifth = report.findings.iter().find(|f| f.u == 5).unwrap();
        assert!(fifth.f_is_prime);
        assert!(!fifth.m_cube_free);
        assert!(fifth.w2.is_none());
    }

    #[test]
    fn test_daylight_rejects_trivial_bound() {
        assert!(matches!(daylight_search(1), Err(Error::BadIndex(_))));
    }

    #[test]
    fn test_rescale_single_doubled_index() {
        let (_, point) = m6_generator();
        let report = rescale_demo(
            &Integer::from(6),
            &point,
            &[2],
            &FactorBudget::default(),
        )
        .unwrap();
        assert!(report.demonstrated());
        assert_eq!(report.scale, 240135);
        assert_eq!(
            report.rescaled_m,
            Integer::from(6) * Integer::from(240135u64).pow(3)
        );
        let entry = &report.entries[0];
        assert_eq!(entry.index, 2);
        assert_eq!(entry.w, 960540);
        assert_eq!(entry.primitive, 2);
        assert_eq!(entry.exponent, 2);
        assert_eq!(entry.rescaled_w, 4);
        assert!(entry.confirmed_prime_power);
    }

    #[test]
    fn test_rescale_first_index_is_trivial() {
        let (_, point) = m6_generator();
        let report = rescale_demo(
            &Integer::from(6),
            &point,
            &[1],
            &FactorBudget::default(),
        )
        .unwrap();
        assert!(report.demonstrated());
        assert_eq!(report.scale, 1);
        assert_eq!(report.rescaled_m, 6);
        assert!(report.entries.is_empty());
        assert_eq!(report.trivial, vec![1]);
    }

    #[test]
    fn test_rescale_two_coprime_indices() {
        let (_, point) = m6_generator();
        let report = rescale_demo(
            &Integer::from(6),
            &point,
            &[2, 3],
            &FactorBudget::default(),
        )
        .unwrap();
        assert!(report.demonstrated());
        // W3 = 3²·7·17·37·2971·955477 with 17 its smallest new prime.
        let third = report.entries.iter().find(|e| e.index == 3).unwrap();
        assert_eq!(third.primitive, 17);
        assert_eq!(third.exponent, 1);
        assert_eq!(third.rescaled_w, 17);
        let second = report.entries.iter().find(|e| e.index == 2).unwrap();
        assert_eq!(second.rescaled_w, 4);
        assert_eq!(
            report.scale,
            Integer::from(240135u64) * Integer::from(6617061371277u64)
        );
    }

    #[test]
    fn test_rescale_rejects_non_coprime_indices() {
        let (_, point) = m6_generator();
        let err = rescale_demo(
            &Integer::from(6),
            &point,
            &[2, 4],
            &FactorBudget::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::BadIndex(_)));
    }

    #[test]
    fn test_thesis_report_m6() {
        let (_, point) = m6_generator();
        let report = thesis_hypothesis_check(&Integer::from(6), &point).unwrap();
        assert_eq!(report.residue_mod_9, 6);
        // 6 ≡ −3 (mod 9), which lies in the classes ±1, ±3, ±4.
        assert!(report.congruence_holds);
        // gcd(A1, m) = gcd(28, 6) = 2, so the coprimality hypothesis fails.
        assert!(!report.coprime_numerator);
        assert!(report.double_fractional);
        assert!(report.triple_fractional);
        assert!(!report.applicable);
        assert!(report.prime_power_indices.is_empty());
        assert!(report.consistent);
    }

    #[test]
    fn test_thesis_report_m7_counts_the_prime_doubling() {
        let report =
            thesis_hypothesis_check(&Integer::from(7), &CurvePoint::from_i64(84, 756)).unwrap();
        assert_eq!(report.residue_mod_9, 7);
        assert!(!report.congruence_holds);
        assert!(!report.coprime_numerator); // gcd(84, 7) = 7
        assert!(!report.double_fractional); // 2P is integral
        assert!(!report.applicable);
        assert_eq!(report.prime_power_indices, vec![2]); // W2 = 3
        assert!(report.consistent);
    }

    #[test]
    fn test_thesis_congruence_residues() {
        // 12 ≡ 3 and 15 ≡ 6 ≡ −3 both satisfy the congruence; residues
        // 0 and ±2 do not.
        let row12 = table().row(&Integer::from(12)).unwrap();
        let r12 = thesis_hypothesis_check(&row12.m, &point_from(&row12.point)).unwrap();
        assert_eq!(r12.residue_mod_9, 3);
        assert!(r12.congruence_holds);

        let row15 = table().row(&Integer::from(15)).unwrap();
        let r15 = thesis_hypothesis_check(&row15.m, &point_from(&row15.point)).unwrap();
        assert_eq!(r15.residue_mod_9, 6);
        assert!(r15.congruence_holds);

        assert!(!CONGRUENCE_CLASSES.contains(&0));
        assert!(!CONGRUENCE_CLASSES.contains(&2));
        assert!(!CONGRUENCE_CLASSES.contains(&7));
    }

    #[test]
    fn test_heights_suite_m6() {
        let row = table().row(&Integer::from(6)).unwrap();
        let report = heights_suite(
            &Integer::from(6),
            &point_from(&row.point),
            Some(&point_from(&row.isogenous_point)),
            4,
            heights::DEFAULT_TOL,
        )
        .unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures());
        assert_eq!(report.verdicts.len(), 5); // n = 1..=4 plus the isogeny
        let iso = report.verdict("isogeny").unwrap();
        assert!(iso.detail.contains("3 hhat"), "{}", iso.detail);
    }

    #[test]
    fn test_formulas_claim_suite() {
        let data = dataset::formulas().unwrap();
        let report = check_formulas(data, 60, DEFAULT_SPOT_SEED).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures());
        assert!(report.complete);
        // Every claim family contributed verdicts.
        assert!(report.verdict("Res(f4p, g43)").is_some());
        assert!(report
            .verdicts
            .iter()
            .any(|v| v.id.starts_with("ord_3(g22)")));
        assert!(report.verdict("h51 slope at p=3").is_some());
        assert!(report
            .verdicts
            .iter()
            .any(|v| v.id.contains("g3 = ±3^k solutions")));
        assert!(report
            .verdict("case n=4: formulas match the group law")
            .is_some());
        assert!(report
            .verdict("case n=5: recorded factors cover the denominator away from 3")
            .is_some());
    }
}
