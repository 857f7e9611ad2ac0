//! Division-sequence terms attached to a rational point.
//!
//! A non-torsion rational point P on y² = x³ − 432m² generates, through
//! its multiples nP, two intertwined integer sequences: the Mordell-model
//! data (Aₙ, Bₙ, Cₙ) with nP = (Aₙ/Bₙ², Cₙ/Bₙ³) in lowest terms, and the
//! cubic-model data (Uₙ, Vₙ, Wₙ) with the corresponding point of
//! U³ + V³ = m written over a common positive denominator Wₙ. The map
//! between the models clears a predictable gcd dₙ from 6AₙBₙ; this module
//! computes dₙ both literally and from its closed-form prediction and
//! treats any disagreement as a hard failure.
//!
//! On top of term generation the module checks the structural facts the
//! rest of the crate leans on: (Wₙ) is a strong divisibility sequence,
//! prime valuations grow with ord_p of the index multiplier, every term
//! past the first has a primitive prime divisor, and each Wₙ with Bₙ > 1
//! splits into two coprime factors exceeding 1.

use crate::arith::{
    factor, is_prime, is_prime_power, padic_ord_int, primality, FactorBudget, Factorization,
};
use crate::curve::{check_admissible, Curve, CurvePoint, Model};
use crate::{Error, Result};
use rug::{ops::Pow, Integer};

/// One term in Mordell coordinates: nP = (a/b², c/b³) in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WTerm {
    /// Index n ≥ 1.
    pub n: u32,
    /// Numerator of x(nP); positive, since x³ = y² + 432m² > 0.
    pub a: Integer,
    /// Positive square root of the denominator of x(nP).
    pub b: Integer,
    /// Numerator of y(nP).
    pub c: Integer,
}

/// One term in cubic coordinates: nR = (u/w, v/w) with w > 0, plus the
/// cancellation d that was cleared from the raw numerators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CTerm {
    /// Index n ≥ 1.
    pub n: u32,
    /// Numerator of the first cubic coordinate.
    pub u: Integer,
    /// Numerator of the second cubic coordinate.
    pub v: Integer,
    /// Common positive denominator.
    pub w: Integer,
    /// The gcd cleared from (36mb³ ± c)/(6ab); always divides 72m.
    pub d: Integer,
}

/// Outcome of a primitive-divisor search for one sequence term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimitiveDivisor {
    /// Smallest prime dividing this term but none of the earlier ones.
    Found(Integer),
    /// Complete factorization found no new prime (never observed for
    /// the sequences built here; kept so absence is reportable).
    Absent,
    /// Factorization ran out of budget; no claim either way.
    Indeterminate,
}

/// Multiplicative shape of a single positive term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermClass {
    /// The term itself is prime (deterministic below 2⁶⁴, otherwise a
    /// Baillie–PSW probable prime).
    Prime,
    /// A proper prime power pᵏ with k ≥ 2.
    PrimePower { p: Integer, k: u32 },
    /// Neither prime nor prime power. `distinct_primes` counts the
    /// primes actually found, a lower bound unless `complete`.
    Composite { distinct_primes: usize, complete: bool },
}

/// Verdict for one valuation law at a specific (n, k, p).
#[derive(Debug, Clone)]
pub struct LawCheck {
    /// Stable identifier naming what the law asserts.
    pub law: &'static str,
    /// Whether the law's side conditions hold for this input.
    pub applicable: bool,
    /// Why the law was skipped, when it was.
    pub skip_reason: Option<&'static str>,
    /// Valuation actually measured (only when applicable).
    pub observed: Option<i64>,
    /// Valuation the law predicts (only when applicable).
    pub predicted: Option<i64>,
}

impl LawCheck {
    /// An inapplicable law agrees vacuously.
    pub fn agrees(&self) -> bool {
        !self.applicable || self.observed == self.predicted
    }

    fn skipped(law: &'static str, reason: &'static str) -> LawCheck {
        LawCheck {
            law,
            applicable: false,
            skip_reason: Some(reason),
            observed: None,
            predicted: None,
        }
    }

    fn checked(law: &'static str, observed: i64, predicted: i64) -> LawCheck {
        LawCheck {
            law,
            applicable: true,
            skip_reason: None,
            observed: Some(observed),
            predicted: Some(predicted),
        }
    }
}

/// All valuation laws evaluated at one (n, k, p) triple.
#[derive(Debug, Clone)]
pub struct ValuationReport {
    /// Base index of the term the laws start from.
    pub n: u32,
    /// Index multiplier relating the compared terms.
    pub k: u32,
    /// Prime at which valuations are taken.
    pub p: Integer,
    /// One entry per law, in a fixed order.
    pub checks: Vec<LawCheck>,
}

impl ValuationReport {
    /// True when every applicable law matched its prediction.
    pub fn all_agree(&self) -> bool {
        self.checks.iter().all(LawCheck::agrees)
    }

    /// Look up a single law's verdict by its identifier.
    pub fn check(&self, law: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == law)
    }
}

/// Validate that (curve, point) is a legal sequence generator: Mordell
/// model, admissible twist, affine point on the curve.
fn require_generator(curve: &Curve, point: &CurvePoint) -> Result<()> {
    if curve.model() != Model::Mordell {
        return Err(Error::UnsupportedFamily);
    }
    check_admissible(curve.m())?;
    if point.is_identity() {
        return Err(Error::IdentityPoint);
    }
    if !curve.contains(point) {
        let (x, y) = point.coordinates()?;
        return Err(Error::NotOnCurve {
            m: curve.m().clone(),
            x: x.clone(),
            y: y.clone(),
        });
    }
    Ok(())
}

fn term_from_multiple(curve: &Curve, np: &CurvePoint, n: u32) -> Result<WTerm> {
    if np.is_identity() {
        return Err(Error::BadIndex(
            "nP is the identity, so the generator is torsion",
        ));
    }
    let (a, b, c) = curve.integral_form(np)?;
    Ok(WTerm { n, a, b, c })
}

/// The n-th term in Mordell coordinates: nP = (a/b², c/b³) reduced,
/// b > 0, with the sign of c matching y(nP).
pub fn weierstrass_term(curve: &Curve, point: &CurvePoint, n: u32) -> Result<WTerm> {
    require_generator(curve, point)?;
    if n == 0 {
        return Err(Error::BadIndex("term index must be at least 1"));
    }
    let np = curve.mul(i64::from(n), point)?;
    term_from_multiple(curve, &np, n)
}

/// The n-th term in cubic coordinates, with the cancellation d recorded.
///
/// The raw coordinates are (36mb³ + c)/(6ab) and (36mb³ − c)/(6ab); d is
/// the literal gcd cleared from the second pair and is cross-checked
/// against [`predicted_cancellation`]. A mismatch panics: the prediction
/// is one of the claims this crate exists to verify, so it must never be
/// silently masked.
pub fn cubic_term(curve: &Curve, point: &CurvePoint, n: u32) -> Result<CTerm> {
    let term = weierstrass_term(curve, point, n)?;
    cubic_from_weierstrass(curve.m(), &term)
}

/// Transport an already-computed Mordell term to cubic coordinates.
pub fn cubic_from_weierstrass(m: &Integer, term: &WTerm) -> Result<CTerm> {
    let scaled = Integer::from(m * 36i32) * Integer::from((&term.b).pow(3));
    let num_u = Integer::from(&scaled + &term.c);
    let num_v = scaled - &term.c;
    let den = Integer::from(&term.a * &term.b) * 6i32;
    let d = Integer::from(num_v.gcd_ref(&den));

    let predicted = cancellation_from_numerator(m, &term.a)?;
    assert_eq!(
        d, predicted,
        "cancellation prediction failed at n = {}: literal {} vs predicted {}",
        term.n, d, predicted
    );
    assert!(
        num_u.is_divisible(&d),
        "cancellation {} does not divide both numerators at n = {}",
        d,
        term.n
    );
    assert!(
        Integer::from(m * 72i32).is_divisible(&d),
        "cancellation {} at n = {} does not divide 72m",
        d,
        term.n
    );

    let u = num_u.div_exact(&d);
    let v = num_v.div_exact(&d);
    let w = den.div_exact(&d);
    assert!(w > 0, "denominator must be positive");
    assert_eq!(Integer::from(u.gcd_ref(&w)), 1);
    assert_eq!(Integer::from(v.gcd_ref(&w)), 1);
    let lhs = Integer::from((&u).pow(3)) + Integer::from((&v).pow(3));
    assert_eq!(
        lhs,
        Integer::from(m * Integer::from((&w).pow(3))),
        "cubic-model identity failed at n = {}",
        term.n
    );

    Ok(CTerm {
        n: term.n,
        u,
        v,
        w,
        d,
    })
}

/// Predict the cancellation d for the n-th term without performing the
/// coordinate change. Equals the literal gcd on every input.
pub fn predicted_cancellation(curve: &Curve, point: &CurvePoint, n: u32) -> Result<Integer> {
    let term = weierstrass_term(curve, point, n)?;
    cancellation_from_numerator(curve.m(), &term.a)
}

/// Closed form for the cancellation, from the x-numerator a alone:
/// primes p ≤ 3 dividing a contribute p^(ord_p(a)+1); primes p > 3
/// dividing both a and m contribute p^ord_p(m); nothing else divides it.
pub fn cancellation_from_numerator(m: &Integer, a: &Integer) -> Result<Integer> {
    if a.cmp0() == std::cmp::Ordering::Equal {
        return Err(Error::ZeroArgument);
    }
    let mut d = Integer::from(1);
    for q in [2u32, 3] {
        let q_int = Integer::from(q);
        if a.is_divisible(&q_int) {
            let e = padic_ord_int(a, &q_int)?;
            d *= q_int.pow(e as u32 + 1);
        }
    }
    // The part of |m| coprime to 6 and supported on primes dividing a,
    // taken with the full exponents of m: start from gcd(m', a) and
    // absorb leftover prime powers of m' until the exponents saturate.
    let mut m_prime = m.clone().abs();
    for q in [2u32, 3] {
        while m_prime.is_divisible_u(q) {
            m_prime.div_exact_u_mut(q);
        }
    }
    let mut s = Integer::from(m_prime.gcd_ref(a));
    loop {
        let g = m_prime.clone().div_exact(&s).gcd(&s);
        if g == 1 {
            break;
        }
        s *= g;
    }
    Ok(d * s)
}

/// Mordell-coordinate terms for n = 1..n_max by incremental addition.
pub fn mordell_sequence(curve: &Curve, point: &CurvePoint, n_max: u32) -> Result<Vec<WTerm>> {
    require_generator(curve, point)?;
    if n_max == 0 {
        return Err(Error::BadIndex("sequence length must be at least 1"));
    }
    let mut terms = Vec::with_capacity(n_max as usize);
    let mut acc = point.clone();
    for n in 1..=n_max {
        terms.push(term_from_multiple(curve, &acc, n)?);
        if n < n_max {
            acc = curve.add(&acc, point)?;
        }
    }
    Ok(terms)
}

/// Cubic-coordinate terms for n = 1..n_max, cancellations verified.
pub fn w_sequence(curve: &Curve, point: &CurvePoint, n_max: u32) -> Result<Vec<CTerm>> {
    mordell_sequence(curve, point, n_max)?
        .iter()
        .map(|t| cubic_from_weierstrass(curve.m(), t))
        .collect()
}

/// Whether gcd(W_r, W_n) = W_gcd(r,n) holds exactly for this generator.
pub fn check_strong_divisibility(
    curve: &Curve,
    point: &CurvePoint,
    r: u32,
    n: u32,
) -> Result<bool> {
    if r == 0 || n == 0 {
        return Err(Error::BadIndex("indices must be at least 1"));
    }
    let g = gcd_u32(r, n);
    let w_r = cubic_term(curve, point, r)?.w;
    let w_n = cubic_term(curve, point, n)?.w;
    let w_g = cubic_term(curve, point, g)?.w;
    Ok(w_r.gcd(&w_n) == w_g)
}

fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Identifiers for the five valuation laws, in report order.
pub const LAW_W_SCALES: &str = "w_scales_with_index_factor";
pub const LAW_A_SCALES: &str = "a_scales_with_index_factor";
pub const LAW_B_SCALES: &str = "b_scales_with_index_factor";
pub const LAW_B_TRIPLE: &str = "b_of_triple_index_from_a";
pub const LAW_W_FROM_A: &str = "w_balances_a_against_m";

/// Evaluate the five valuation laws at base index n, multiplier k and
/// prime p. Laws whose side conditions fail are reported as skipped
/// with a reason; applicable laws carry observed and predicted values.
///
/// The laws, writing ord for ord_p and (Aⱼ, Bⱼ) / Wⱼ for the term data:
/// - if p | Wₙ then ord(W_nk) = ord(Wₙ) + ord(k);
/// - if p > 3, p | Aₙ and 3 ∤ k then ord(A_nk) = ord(Aₙ) + ord(k);
/// - if p | Bₙ then ord(B_nk) = ord(Bₙ) + ord(k);
/// - if p > 3 and p | Aₙ then ord(B_3n) = ord(Aₙ) − ord(m);
/// - if p > 3 and p | Aₙ then ord(Wₙ) = ord(Aₙ) − ord(m).
pub fn check_valuation_laws(
    curve: &Curve,
    point: &CurvePoint,
    n: u32,
    k: u32,
    p: &Integer,
) -> Result<ValuationReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    if n == 0 || k == 0 {
        return Err(Error::BadIndex("indices must be at least 1"));
    }
    let base = weierstrass_term(curve, point, n)?;
    let base_cubic = cubic_from_weierstrass(curve.m(), &base)?;
    let ord_w_n = padic_ord_int(&base_cubic.w, p)?;
    let ord_a_n = padic_ord_int(&base.a, p)?;
    let ord_b_n = if base.b == 1 {
        0
    } else {
        padic_ord_int(&base.b, p)?
    };
    let ord_m = padic_ord_int(curve.m(), p)?;
    let ord_k = padic_ord_int(&Integer::from(k), p)?;
    let p_exceeds_3 = *p > 3;

    let scaled = if ord_w_n > 0 || ord_b_n > 0 || (p_exceeds_3 && ord_a_n > 0 && k % 3 != 0) {
        let t = weierstrass_term(curve, point, n * k)?;
        let c = cubic_from_weierstrass(curve.m(), &t)?;
        Some((t, c))
    } else {
        None
    };

    let mut checks = Vec::with_capacity(5);

    if ord_w_n > 0 {
        let (_, c) = scaled.as_ref().expect("scaled term computed");
        let observed = padic_ord_int(&c.w, p)?;
        checks.push(LawCheck::checked(LAW_W_SCALES, observed, ord_w_n + ord_k));
    } else {
        checks.push(LawCheck::skipped(LAW_W_SCALES, "p does not divide W(n)"));
    }

    if !p_exceeds_3 {
        checks.push(LawCheck::skipped(LAW_A_SCALES, "law stated only for p > 3"));
    } else if ord_a_n == 0 {
        checks.push(LawCheck::skipped(LAW_A_SCALES, "p does not divide A(n)"));
    } else if k % 3 == 0 {
        checks.push(LawCheck::skipped(
            LAW_A_SCALES,
            "law excludes multipliers divisible by 3",
        ));
    } else {
        let (t, _) = scaled.as_ref().expect("scaled term computed");
        let observed = padic_ord_int(&t.a, p)?;
        checks.push(LawCheck::checked(LAW_A_SCALES, observed, ord_a_n + ord_k));
    }

    if ord_b_n > 0 {
        let (t, _) = scaled.as_ref().expect("scaled term computed");
        let observed = padic_ord_int(&t.b, p)?;
        checks.push(LawCheck::checked(LAW_B_SCALES, observed, ord_b_n + ord_k));
    } else {
        checks.push(LawCheck::skipped(LAW_B_SCALES, "p does not divide B(n)"));
    }

    if !p_exceeds_3 {
        checks.push(LawCheck::skipped(LAW_B_TRIPLE, "law stated only for p > 3"));
        checks.push(LawCheck::skipped(LAW_W_FROM_A, "law stated only for p > 3"));
    } else if ord_a_n == 0 {
        checks.push(LawCheck::skipped(LAW_B_TRIPLE, "p does not divide A(n)"));
        checks.push(LawCheck::skipped(LAW_W_FROM_A, "p does not divide A(n)"));
    } else {
        let triple = weierstrass_term(curve, point, 3 * n)?;
        let observed = padic_ord_int(&triple.b, p)?;
        checks.push(LawCheck::checked(LAW_B_TRIPLE, observed, ord_a_n - ord_m));
        checks.push(LawCheck::checked(LAW_W_FROM_A, ord_w_n, ord_a_n - ord_m));
    }

    Ok(ValuationReport {
        n,
        k,
        p: p.clone(),
        checks,
    })
}

/// Smallest prime dividing the n-th term but none of the earlier ones.
///
/// `history` must hold complete factorizations of terms 1..n−1 in index
/// order; any incompleteness, there or in factoring the n-th term, makes
/// the verdict [`PrimitiveDivisor::Indeterminate`] rather than a guess.
pub fn primitive_divisor(
    curve: &Curve,
    point: &CurvePoint,
    n: u32,
    history: &[Factorization],
    budget: &FactorBudget,
) -> Result<PrimitiveDivisor> {
    if n < 2 {
        return Err(Error::BadIndex(
            "primitive divisors are defined from the second term on",
        ));
    }
    if history.len() != (n - 1) as usize {
        return Err(Error::BadIndex(
            "history must cover exactly the terms before n",
        ));
    }
    let w = cubic_term(curve, point, n)?.w;
    primitive_divisor_of(&w, history, budget)
}

/// Primitive-divisor search on a bare value against factored history.
pub fn primitive_divisor_of(
    value: &Integer,
    history: &[Factorization],
    budget: &FactorBudget,
) -> Result<PrimitiveDivisor> {
    if history.iter().any(|f| !f.is_complete()) {
        return Ok(PrimitiveDivisor::Indeterminate);
    }
    let factored = factor(value, budget)?;
    if !factored.is_complete() {
        return Ok(PrimitiveDivisor::Indeterminate);
    }
    let earlier: Vec<Integer> = history.iter().map(|f| f.value().abs()).collect();
    for (p, _) in &factored.factors {
        if earlier.iter().all(|w| !w.is_divisible(p)) {
            return Ok(PrimitiveDivisor::Found(p.clone()));
        }
    }
    Ok(PrimitiveDivisor::Absent)
}

/// Classify a term W > 1 as prime, proper prime power, or composite.
///
/// Primality and prime-power detection need no factorization, so they
/// stay decisive even when W is far beyond factoring range; only the
/// composite prime count depends on the budget.
pub fn classify_term(w: &Integer, budget: &FactorBudget) -> Result<TermClass> {
    if *w <= 1 {
        return Err(Error::BadIndex("classification needs a term above 1"));
    }
    if primality(w).is_prime() {
        return Ok(TermClass::Prime);
    }
    if let Some((p, k)) = is_prime_power(w) {
        return Ok(TermClass::PrimePower { p, k });
    }
    let factored = factor(w, budget)?;
    Ok(TermClass::Composite {
        distinct_primes: factored.factors.len(),
        complete: factored.is_complete(),
    })
}

/// Split Wₙ into two coprime factors both exceeding 1, when possible.
///
/// The second factor is Bₙ; the first is 6Aₙ/dₙ with every factor it
/// shares with Bₙ divided out. Returns `None` when Bₙ = 1 or the first
/// factor degenerates to 1 — callers then fall back on [`classify_term`].
pub fn coprime_factor_witness(
    curve: &Curve,
    point: &CurvePoint,
    n: u32,
) -> Result<Option<(Integer, Integer)>> {
    let term = weierstrass_term(curve, point, n)?;
    if term.b == 1 {
        return Ok(None);
    }
    let cubic = cubic_from_weierstrass(curve.m(), &term)?;
    let mut f1 = Integer::from(&term.a * 6i32).div_exact(&cubic.d);
    let f2 = term.b.clone();
    loop {
        let g = Integer::from(f1.gcd_ref(&f2));
        if g == 1 {
            break;
        }
        f1.div_exact_mut(&g);
    }
    if f1 <= 1 {
        return Ok(None);
    }
    assert_eq!(Integer::from(f1.gcd_ref(&f2)), 1);
    assert!(
        cubic.w.is_divisible(&Integer::from(&f1 * &f2)),
        "witness product must divide W({n})"
    );
    Ok(Some((f1, f2)))
}
