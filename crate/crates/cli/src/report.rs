//! Serializable output shapes and the three renderers (JSON, CSV,
//! aligned table). Every renderer works from the same data in the same
//! order, so the bytes written for a given invocation never depend on
//! scheduling.

use anyhow::Result;
use serde::{Deserialize, Serialize};

use fermat_eds::polytools::PowerSolution;
use fermat_eds::verify::{DaylightReport, RescaleReport, ThesisReport, VerifyReport};

/// One sequence term with every exact field the library derives for it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeqRecord {
    pub n: u32,
    /// Numerator A of the Weierstrass X-coordinate A/B².
    pub a: String,
    /// Denominator root B (so the term is integral exactly when B = 1).
    pub b: String,
    /// Numerator C of the Weierstrass Y-coordinate C/B³.
    pub c: String,
    /// Cubic-model numerators U, V and reduced denominator W.
    pub u: String,
    pub v: String,
    pub w: String,
    /// Cancellation divisor linking the two coordinate systems.
    pub d: String,
    /// Multiplicative shape of W: trivial, prime, prime-power, composite.
    pub classification: String,
    /// Smallest prime of W dividing no earlier term, if determined.
    pub primitive_divisor: String,
}

/// One named check with its outcome and evidence.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictDto {
    pub id: String,
    pub outcome: String,
    pub detail: String,
}

/// Uniform report shape shared by every verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDto {
    pub subject: String,
    pub verdicts: Vec<VerdictDto>,
    pub flags: Vec<String>,
    pub complete: bool,
}

impl ReportDto {
    pub fn any_failure(&self) -> bool {
        self.verdicts.iter().any(|v| v.outcome == "fail")
    }

    fn counts(&self) -> (usize, usize, usize) {
        let mut pass = 0;
        let mut fail = 0;
        let mut indeterminate = 0;
        for v in &self.verdicts {
            match v.outcome.as_str() {
                "pass" => pass += 1,
                "fail" => fail += 1,
                _ => indeterminate += 1,
            }
        }
        (pass, fail, indeterminate)
    }
}

impl From<&VerifyReport> for ReportDto {
    fn from(r: &VerifyReport) -> ReportDto {
        ReportDto {
            subject: r.subject.clone(),
            verdicts: r
                .verdicts
                .iter()
                .map(|v| VerdictDto {
                    id: v.id.clone(),
                    outcome: v.outcome.to_string(),
                    detail: v.detail.clone(),
                })
                .collect(),
            flags: r.flags.clone(),
            complete: r.complete,
        }
    }
}

fn pass_fail(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.to_string()
}

/// Flatten the doubling-denominator search into the uniform shape:
/// the two resultant identities first, then one verdict per qualifying
/// u; disqualified u values are only counted in a flag.
pub fn daylight_report(r: &DaylightReport) -> ReportDto {
    let mut verdicts = vec![
        VerdictDto {
            id: "resultant-u".into(),
            outcome: pass_fail(r.resultant_u_matches),
            detail: "eliminating v gives 9u^6, checked on more points than the degree".into(),
        },
        VerdictDto {
            id: "resultant-v".into(),
            outcome: pass_fail(r.resultant_v_matches),
            detail: "eliminating u gives 9v^6, checked on more points than the degree".into(),
        },
    ];
    let mut disqualified = 0usize;
    for f in &r.findings {
        if !(f.f_is_prime && f.m_cube_free) {
            disqualified += 1;
            continue;
        }
        let (outcome, detail) = match (&f.w2, f.w2_is_prime) {
            (Some(w2), Some(prime)) => {
                let uncancelled = *w2 == f.f;
                let note = if uncancelled && prime {
                    " = f(u), prime"
                } else if !uncancelled {
                    " != f(u): cancellation occurred"
                } else {
                    ", not prime"
                };
                (
                    pass_fail(uncancelled && prime),
                    format!(
                        "f = {} prime, m = {} cube-free, W2 = {}{}",
                        f.f, f.m, w2, note
                    ),
                )
            }
            _ => (
                "fail".to_string(),
                "qualified but no doubled denominator was computed".to_string(),
            ),
        };
        verdicts.push(VerdictDto {
            id: format!("u={}", f.u),
            outcome,
            detail,
        });
    }
    ReportDto {
        subject: "daylight search".into(),
        verdicts,
        flags: vec![format!(
            "{disqualified} of {} candidate u values disqualified (composite f(u) or non-cube-free m)",
            r.findings.len()
        )],
        complete: true,
    }
}

/// Flatten the cube-multiplier rescaling demonstration.
pub fn rescale_report(r: &RescaleReport) -> ReportDto {
    let mut verdicts = vec![VerdictDto {
        id: "scale".into(),
        outcome: "pass".into(),
        detail: format!("M = {}; rescaled twist m*M^3 = {}", r.scale, r.rescaled_m),
    }];
    for l in &r.indices {
        if r.trivial.contains(l) {
            verdicts.push(VerdictDto {
                id: format!("l={l}"),
                outcome: "pass".into(),
                detail: "exempt index; contributes no factor to the scale".into(),
            });
        } else if let Some(e) = r.entries.iter().find(|e| e.index == *l) {
            verdicts.push(VerdictDto {
                id: format!("l={l}"),
                outcome: pass_fail(e.confirmed_prime_power),
                detail: format!(
                    "W = {} = {} * {}^{}; rescaled W' = {} {}",
                    e.w,
                    e.removed_part,
                    e.primitive,
                    e.exponent,
                    e.rescaled_w,
                    if e.confirmed_prime_power {
                        "(prime power, as predicted)"
                    } else {
                        "(NOT the predicted prime power)"
                    }
                ),
            });
        } else {
            verdicts.push(VerdictDto {
                id: format!("l={l}"),
                outcome: "indeterminate".into(),
                detail: "factorization budget exhausted; index dropped from the scale".into(),
            });
        }
    }
    ReportDto {
        subject: format!("rescale m={} indices={:?}", r.m, r.indices),
        verdicts,
        flags: r
            .aborted
            .iter()
            .map(|l| format!("l={l}: factorization incomplete; index dropped from the scale"))
            .collect(),
        complete: r.aborted.is_empty(),
    }
}

/// Flatten the hypothesis report. Hypothesis rows are observations, so
/// they always carry outcome "pass" with the finding in the detail; the
/// only row that can fail is the prediction itself.
pub fn thesis_report(r: &ThesisReport) -> ReportDto {
    let observed = |id: &str, holds: bool, desc: String| VerdictDto {
        id: id.into(),
        outcome: "pass".into(),
        detail: format!(
            "{desc}: {}",
            if holds { "holds" } else { "does not hold" }
        ),
    };
    let prediction_detail = if r.applicable {
        format!(
            "all hypotheses hold, so at most one prime-power index is expected; observed {:?}",
            r.prime_power_indices
        )
    } else {
        format!(
            "hypotheses not all met; observed prime-power indices {:?} (informational)",
            r.prime_power_indices
        )
    };
    ReportDto {
        subject: format!("thesis hypotheses m={}", r.m),
        verdicts: vec![
            observed(
                "congruence",
                r.congruence_holds,
                format!(
                    "m = {} (mod 9), need one of {{1, 3, 4, 5, 6, 8}}",
                    r.residue_mod_9
                ),
            ),
            observed("coprime-numerator", r.coprime_numerator, "gcd(A1, m) = 1".into()),
            observed("double-fractional", r.double_fractional, "B2 > 1".into()),
            observed("triple-fractional", r.triple_fractional, "B3 > 1".into()),
            VerdictDto {
                id: "prediction".into(),
                outcome: pass_fail(r.consistent),
                detail: prediction_detail,
            },
        ],
        flags: Vec::new(),
        complete: true,
    }
}

/// Newton-polygon output of `poly newton`.
#[derive(Debug, Clone, Serialize)]
pub struct NewtonOutput {
    pub id: String,
    pub p: String,
    /// Lower-hull vertices (exponent, valuation).
    pub vertices: Vec<(usize, u64)>,
    pub slopes: Vec<SlopeOutput>,
    /// Set when the polygon has exactly one slope.
    pub single_slope: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeOutput {
    pub slope: String,
    /// Horizontal run of this slope segment.
    pub run: usize,
}

/// Resultant output of `poly resultant`.
#[derive(Debug, Clone, Serialize)]
pub struct ResultantOutput {
    pub a: String,
    pub b: String,
    pub value: String,
    /// "±p^k" when the value is (up to sign) a prime power.
    pub prime_power: Option<String>,
}

/// Solution-list output of `poly solve3k`.
#[derive(Debug, Clone, Serialize)]
pub struct SolveOutput {
    pub id: String,
    pub p: String,
    pub kmax: u32,
    #[serde(rename = "box")]
    pub box_bound: i64,
    pub solutions: Vec<PowerSolution>,
}

/// Everything the CLI can print, with one renderer per format.
pub enum Rendered {
    Report(ReportDto),
    Newton(NewtonOutput),
    Resultant(ResultantOutput),
    Solve(SolveOutput),
}

impl Rendered {
    pub fn to_json(&self) -> Result<String> {
        let text = match self {
            Rendered::Report(r) => serde_json::to_string_pretty(r)?,
            Rendered::Newton(n) => serde_json::to_string_pretty(n)?,
            Rendered::Resultant(r) => serde_json::to_string_pretty(r)?,
            Rendered::Solve(s) => serde_json::to_string_pretty(s)?,
        };
        Ok(text + "\n")
    }

    pub fn to_csv(&self) -> Result<String> {
        match self {
            Rendered::Report(r) => rows_to_csv(&r.verdicts),
            Rendered::Newton(n) => rows_to_csv(&n.slopes),
            Rendered::Resultant(r) => rows_to_csv(std::slice::from_ref(r)),
            Rendered::Solve(s) => rows_to_csv(&s.solutions),
        }
    }

    pub fn to_table(&self) -> String {
        match self {
            Rendered::Report(r) => report_table(r),
            Rendered::Newton(n) => newton_table(n),
            Rendered::Resultant(r) => resultant_table(r),
            Rendered::Solve(s) => solve_table(s),
        }
    }
}

fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for row in rows {
        wtr.serialize(row)?;
    }
    Ok(String::from_utf8(wtr.into_inner()?)?)
}

/// Left-aligned columns, two spaces between, last column unpadded.
fn aligned(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let push_row = |cells: Vec<&str>, out: &mut String| {
        for (i, cell) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                out.push_str(cell);
            } else {
                out.push_str(&format!("{cell:<width$}  ", width = widths[i]));
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    push_row(headers.to_vec(), &mut out);
    for row in rows {
        push_row(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn report_table(r: &ReportDto) -> String {
    let rows: Vec<Vec<String>> = r
        .verdicts
        .iter()
        .map(|v| vec![v.id.clone(), v.outcome.clone(), v.detail.clone()])
        .collect();
    let (pass, fail, indeterminate) = r.counts();
    let mut out = format!("subject: {}\n", r.subject);
    out.push_str(&aligned(&["id", "outcome", "detail"], &rows));
    out.push_str(&format!(
        "summary: {pass} pass, {fail} fail, {indeterminate} indeterminate ({})\n",
        if r.complete {
            "complete evidence"
        } else {
            "incomplete evidence; see warnings"
        }
    ));
    out
}

pub fn records_csv(records: &[SeqRecord]) -> Result<String> {
    rows_to_csv(records)
}

pub fn records_table(records: &[SeqRecord]) -> String {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.a.clone(),
                r.b.clone(),
                r.c.clone(),
                r.u.clone(),
                r.v.clone(),
                r.w.clone(),
                r.d.clone(),
                r.classification.clone(),
                r.primitive_divisor.clone(),
            ]
        })
        .collect();
    aligned(
        &["n", "A", "B", "C", "U", "V", "W", "d", "classification", "primitive"],
        &rows,
    )
}

fn newton_table(n: &NewtonOutput) -> String {
    let mut out = format!("newton polygon of {} at p = {}\n", n.id, n.p);
    let vertices: Vec<String> = n
        .vertices
        .iter()
        .map(|(i, v)| format!("({i}, {v})"))
        .collect();
    out.push_str(&format!("vertices: {}\n", vertices.join(" -> ")));
    for s in &n.slopes {
        out.push_str(&format!("slope {} over run {}\n", s.slope, s.run));
    }
    match &n.single_slope {
        Some(s) => out.push_str(&format!("single slope: {s}\n")),
        None => out.push_str("multiple slopes\n"),
    }
    out
}

fn resultant_table(r: &ResultantOutput) -> String {
    match &r.prime_power {
        Some(pp) => format!("Res({}, {}) = {} = {}\n", r.a, r.b, r.value, pp),
        None => format!("Res({}, {}) = {}\n", r.a, r.b, r.value),
    }
}

fn solve_table(s: &SolveOutput) -> String {
    let mut out = format!(
        "solutions of {}(u, v) = +/-{}^k, k <= {}, |u|,|v| <= {}\n",
        s.id, s.p, s.kmax, s.box_bound
    );
    if s.solutions.is_empty() {
        out.push_str("none\n");
        return out;
    }
    for sol in &s.solutions {
        let sign = if sol.sign < 0 { "-" } else { "+" };
        out.push_str(&format!(
            "({}, {}) -> {}{}^{}\n",
            sol.u, sol.v, sign, s.p, sol.k
        ));
    }
    out.push_str(&format!("{} solution(s)\n", s.solutions.len()));
    out
}
