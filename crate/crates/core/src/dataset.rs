//! Embedded reference data: a table of curve generators and the
//! polynomial dataset behind the small-index denominator analysis.
//!
//! Both JSON files ship inside the binary and are checked against
//! pinned SHA-256 digests on first use. Setting the environment
//! variable `FERMAT_EDS_DATA` to a directory substitutes any file of
//! the same name found there (verified against a sibling `.sha256`
//! file when one exists). The variable is read once per process; later
//! changes have no effect on the cached tables.

use crate::polytools::HomogPoly;
use crate::polytools::PowerSolution;
use crate::{Error, Result};
use rug::{Integer, Rational};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

/// Directory override for the embedded data files.
pub const DATA_DIR_ENV: &str = "FERMAT_EDS_DATA";

const TABLE1_JSON: &str = include_str!("../../../data/table1.json");
const TABLE1_SHA: &str = include_str!("../../../data/table1.sha256");
const FORMULAS_JSON: &str = include_str!("../../../data/formulas.json");
const FORMULAS_SHA: &str = include_str!("../../../data/formulas.sha256");

/// One generator row: a twist parameter with a rational point on each
/// side of the 3-isogeny.
#[derive(Debug, Clone)]
pub struct Table1Row {
    /// Twist parameter m.
    pub m: Integer,
    /// Point (X, Y) on Y² = X³ − 432 m².
    pub point: (Rational, Rational),
    /// Point (x, y) on y² = x³ + 16 m² mapping to `point` under the
    /// degree-3 isogeny.
    pub isogenous_point: (Rational, Rational),
}

/// The full generator table, ordered by increasing m.
#[derive(Debug, Clone)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
}

impl Table1 {
    /// Row for a given twist parameter, if present.
    pub fn row(&self, m: &Integer) -> Option<&Table1Row> {
        self.rows.iter().find(|r| &r.m == m)
    }
}

/// Which model the coordinates of a multiplication case refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseCoordinates {
    /// The auxiliary model u·v·(u + v) = m.
    Auxiliary,
    /// The plane cubic u³ + v³ = m.
    Cubic,
}

/// Numerators and factored denominator of the coordinates of nR as
/// homogeneous forms in the coordinates of R.
#[derive(Debug, Clone)]
pub struct DenominatorCase {
    /// Multiplier n.
    pub n: u32,
    /// Model the formulas are written on.
    pub coordinates: CaseCoordinates,
    /// Numerator forms of the two coordinates, when recorded.
    pub numerators: Option<(HomogPoly, HomogPoly)>,
    /// Constant factor of the denominator, when recorded.
    pub constant: Option<Integer>,
    /// Exponents (a, b) of the monomial factor u^a v^b.
    pub monomial: (u32, u32),
    /// Named non-monomial denominator factors, in product order.
    pub factors: Vec<(String, HomogPoly)>,
    /// The expanded full denominator, when recorded.
    pub full_denominator: Option<HomogPoly>,
}

impl DenominatorCase {
    /// Product constant · u^a · v^b · Π factors, when the constant is
    /// recorded; the factored counterpart of `full_denominator`.
    pub fn assembled_denominator(&self) -> Option<HomogPoly> {
        let constant = self.constant.as_ref()?;
        let (a, b) = self.monomial;
        let mut product = HomogPoly::monomial(a as usize, b as usize).scale(constant);
        for (_, f) in &self.factors {
            product = product.mul(f);
        }
        Some(product)
    }
}

/// Claim that Res(a, b) = ±p^exact_exp, with an optional divisibility
/// cap gcd(a, b) | p^max_exp.
#[derive(Debug, Clone)]
pub struct ResultantClaim {
    pub a: String,
    pub b: String,
    pub p: Integer,
    pub exact_exp: u32,
    pub max_exp: Option<u32>,
}

/// Claim that ord_p(g(u, v)) ≤ k_threshold on coprime pairs, provable
/// by residue enumeration mod p^(k_threshold+1).
#[derive(Debug, Clone)]
pub struct CongruenceClaim {
    pub g: String,
    pub p: Integer,
    pub k_threshold: u32,
}

/// Claim that h = (shift of g by u → 1 + X at v = 1) has a p-adic
/// Newton polygon with the single slope recorded here.
#[derive(Debug, Clone)]
pub struct NewtonClaim {
    pub h: String,
    pub shift_of: String,
    pub p: Integer,
    pub slope: Rational,
}

/// Group of solutions sharing one value sign · p^k.
#[derive(Debug, Clone, Deserialize)]
pub struct SolutionBlock {
    pub k: u32,
    pub sign: i32,
    pub pairs: Vec<(i64, i64)>,
}

/// Complete list of coprime pairs with g(u, v) = ±p^k, k ≤ k_max,
/// split into the originally published list and pairs found beyond it.
#[derive(Debug, Clone)]
pub struct SolutionClaim {
    pub g: String,
    pub p: Integer,
    pub k_max: u32,
    pub published: Vec<SolutionBlock>,
    pub additional: Vec<SolutionBlock>,
}

impl SolutionClaim {
    /// Union of published and additional pairs, ordered by u then v —
    /// the exact expected output of a box search.
    pub fn expected_solutions(&self) -> Vec<PowerSolution> {
        let mut all: Vec<PowerSolution> = self
            .published
            .iter()
            .chain(&self.additional)
            .flat_map(|block| {
                block.pairs.iter().map(|&(u, v)| PowerSolution {
                    u,
                    v,
                    k: block.k,
                    sign: block.sign,
                })
            })
            .collect();
        all.sort_by_key(|s| (s.u, s.v));
        all
    }
}

/// Identity stating that one linear factor is the difference of two
/// others.
#[derive(Debug, Clone)]
pub struct LinearIdentity {
    pub difference_of: (String, String),
    pub equals: String,
}

/// The polynomial dataset: named forms, per-multiplier cases, and the
/// divisibility claims the verification suites replay.
#[derive(Debug)]
pub struct FormulaCorpus {
    polys: BTreeMap<String, HomogPoly>,
    named_products: BTreeMap<String, Vec<String>>,
    cases: Vec<DenominatorCase>,
    linear_identities: Vec<LinearIdentity>,
    resultant_claims: Vec<ResultantClaim>,
    congruence_claims: Vec<CongruenceClaim>,
    newton_claims: Vec<NewtonClaim>,
    solution_claims: Vec<SolutionClaim>,
}

impl FormulaCorpus {
    /// Directly stored form with this id.
    pub fn poly(&self, id: &str) -> Result<&HomogPoly> {
        self.polys
            .get(id)
            .ok_or_else(|| Error::Dataset(format!("unknown polynomial id {id:?}")))
    }

    /// Stored form or named product of stored forms.
    pub fn resolve(&self, id: &str) -> Result<HomogPoly> {
        if let Some(p) = self.polys.get(id) {
            return Ok(p.clone());
        }
        if let Some(factor_ids) = self.named_products.get(id) {
            let mut product = HomogPoly::monomial(0, 0);
            for fid in factor_ids {
                product = product.mul(self.poly(fid)?);
            }
            return Ok(product);
        }
        Err(Error::Dataset(format!("unknown polynomial id {id:?}")))
    }

    /// Ids of directly stored forms, ascending.
    pub fn poly_ids(&self) -> Vec<&str> {
        self.polys.keys().map(String::as_str).collect()
    }

    /// Ids resolvable as named products, ascending.
    pub fn product_ids(&self) -> Vec<&str> {
        self.named_products.keys().map(String::as_str).collect()
    }

    /// Case for multiplier n (2 ≤ n ≤ 5).
    pub fn case(&self, n: u32) -> Result<&DenominatorCase> {
        self.cases
            .iter()
            .find(|c| c.n == n)
            .ok_or(Error::BadIndex("no denominator case for this multiplier"))
    }

    pub fn cases(&self) -> &[DenominatorCase] {
        &self.cases
    }

    pub fn linear_identities(&self) -> &[LinearIdentity] {
        &self.linear_identities
    }

    pub fn resultant_claims(&self) -> &[ResultantClaim] {
        &self.resultant_claims
    }

    pub fn congruence_claims(&self) -> &[CongruenceClaim] {
        &self.congruence_claims
    }

    pub fn newton_claims(&self) -> &[NewtonClaim] {
        &self.newton_claims
    }

    pub fn solution_claims(&self) -> &[SolutionClaim] {
        &self.solution_claims
    }
}

/// The generator table, loaded and cached on first use.
pub fn table1() -> Result<&'static Table1> {
    static CELL: OnceLock<std::result::Result<Table1, Error>> = OnceLock::new();
    CELL.get_or_init(|| load_table1(env_dir().as_deref()))
        .as_ref()
        .map_err(Clone::clone)
}

/// The polynomial dataset, loaded and cached on first use.
pub fn formulas() -> Result<&'static FormulaCorpus> {
    static CELL: OnceLock<std::result::Result<FormulaCorpus, Error>> = OnceLock::new();
    CELL.get_or_init(|| load_formulas(env_dir().as_deref()))
        .as_ref()
        .map_err(Clone::clone)
}

fn env_dir() -> Option<std::path::PathBuf> {
    std::env::var_os(DATA_DIR_ENV).map(std::path::PathBuf::from)
}

/// Load the generator table, from `dir` when given, else embedded.
pub fn load_table1(dir: Option<&Path>) -> std::result::Result<Table1, Error> {
    let text = data_text(dir, "table1.json", TABLE1_JSON, TABLE1_SHA)?;
    let raw: RawTable1 = serde_json::from_str(&text)
        .map_err(|e| Error::Dataset(format!("table1.json: {e}")))?;
    let mut rows = Vec::with_capacity(raw.rows.len());
    for r in raw.rows {
        let m = Integer::from(r.m);
        if !crate::arith::is_cube_free(&m) || r.m.abs() <= 2 {
            return Err(Error::Dataset(format!("table1.json: inadmissible m = {m}")));
        }
        rows.push(Table1Row {
            m,
            point: (parse_rat(&r.p.0)?, parse_rat(&r.p.1)?),
            isogenous_point: (parse_rat(&r.p_isogenous.0)?, parse_rat(&r.p_isogenous.1)?),
        });
    }
    if !rows.windows(2).all(|w| w[0].m < w[1].m) {
        return Err(Error::Dataset("table1.json: rows not sorted by m".into()));
    }
    Ok(Table1 { rows })
}

/// Load the polynomial dataset, from `dir` when given, else embedded.
pub fn load_formulas(dir: Option<&Path>) -> std::result::Result<FormulaCorpus, Error> {
    let text = data_text(dir, "formulas.json", FORMULAS_JSON, FORMULAS_SHA)?;
    let raw: RawFormulas = serde_json::from_str(&text)
        .map_err(|e| Error::Dataset(format!("formulas.json: {e}")))?;

    let mut polys = BTreeMap::new();
    for (id, rp) in raw.polys {
        let coeffs = rp
            .coeffs
            .iter()
            .map(|s| parse_int(s))
            .collect::<Result<Vec<_>>>()?;
        let poly = HomogPoly::new(rp.degree, coeffs)
            .map_err(|e| Error::Dataset(format!("polynomial {id:?}: {e}")))?;
        polys.insert(id, poly);
    }

    let mut named_products = BTreeMap::new();
    let mut linear_identities = Vec::new();
    let mut cases = Vec::new();
    for rc in raw.cases {
        let coordinates = match rc.coordinates.as_str() {
            "auxiliary" => CaseCoordinates::Auxiliary,
            "cubic" => CaseCoordinates::Cubic,
            other => {
                return Err(Error::Dataset(format!("unknown coordinate system {other:?}")))
            }
        };
        let lookup = |id: &str| -> Result<HomogPoly> {
            polys
                .get(id)
                .cloned()
                .ok_or_else(|| Error::Dataset(format!("case n = {}: unknown id {id:?}", rc.n)))
        };
        let numerators = match (&rc.numerator_u, &rc.numerator_v) {
            (Some(u), Some(v)) => Some((lookup(u)?, lookup(v)?)),
            (None, None) => None,
            _ => {
                return Err(Error::Dataset(format!(
                    "case n = {}: one numerator without the other",
                    rc.n
                )))
            }
        };
        let constant = rc
            .denominator
            .constant
            .as_deref()
            .map(parse_int)
            .transpose()?;
        let factors = rc
            .denominator
            .factor_names
            .iter()
            .map(|id| Ok((id.clone(), lookup(id)?)))
            .collect::<Result<Vec<_>>>()?;
        let full_denominator = rc.denominator_full.as_deref().map(&lookup).transpose()?;
        for (name, factor_ids) in rc.named_products {
            if polys.contains_key(&name) {
                return Err(Error::Dataset(format!(
                    "named product {name:?} collides with a stored polynomial"
                )));
            }
            for fid in &factor_ids {
                lookup(fid)?;
            }
            named_products.insert(name, factor_ids);
        }
        if let Some(li) = rc.linear_identity {
            lookup(&li.difference_of.0)?;
            lookup(&li.difference_of.1)?;
            lookup(&li.equals)?;
            linear_identities.push(LinearIdentity {
                difference_of: li.difference_of,
                equals: li.equals,
            });
        }
        cases.push(DenominatorCase {
            n: rc.n,
            coordinates,
            numerators,
            constant,
            monomial: (rc.denominator.monomial_u, rc.denominator.monomial_v),
            factors,
            full_denominator,
        });
    }

    let corpus = FormulaCorpus {
        polys,
        named_products,
        cases,
        linear_identities,
        resultant_claims: raw
            .resultant_claims
            .into_iter()
            .map(|c| ResultantClaim {
                a: c.a,
                b: c.b,
                p: Integer::from(c.p),
                exact_exp: c.exact_exp,
                max_exp: c.max_exp,
            })
            .collect(),
        congruence_claims: raw
            .congruence_claims
            .into_iter()
            .map(|c| CongruenceClaim {
                g: c.g,
                p: Integer::from(c.p),
                k_threshold: c.k_threshold,
            })
            .collect(),
        newton_claims: raw
            .newton_claims
            .iter()
            .map(|c| {
                Ok(NewtonClaim {
                    h: c.h.clone(),
                    shift_of: c.shift_of.clone(),
                    p: Integer::from(c.p),
                    slope: parse_rat(&c.slope)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
        solution_claims: raw
            .solution_claims
            .into_iter()
            .map(|c| SolutionClaim {
                g: c.g,
                p: Integer::from(c.p),
                k_max: c.k_max,
                published: c.solutions,
                additional: c.additional_solutions,
            })
            .collect(),
    };

    // Every id a claim references must resolve.
    for c in &corpus.resultant_claims {
        corpus.resolve(&c.a)?;
        corpus.resolve(&c.b)?;
    }
    for c in &corpus.congruence_claims {
        corpus.resolve(&c.g)?;
    }
    for c in &corpus.newton_claims {
        corpus.resolve(&c.h)?;
        corpus.resolve(&c.shift_of)?;
    }
    for c in &corpus.solution_claims {
        corpus.resolve(&c.g)?;
    }
    Ok(corpus)
}

fn parse_int(s: &str) -> Result<Integer> {
    s.parse::<Integer>().map_err(|_| Error::Parse(s.to_owned()))
}

fn parse_rat(s: &str) -> Result<Rational> {
    crate::arith::parse_rational(s)
}

/// Text of a data file: the override copy when `dir` holds one, else
/// the embedded copy checked against its pinned digest. Override
/// copies are checked only when a sibling `.sha256` file exists.
fn data_text(
    dir: Option<&Path>,
    name: &str,
    embedded: &'static str,
    embedded_sha: &'static str,
) -> Result<String> {
    if let Some(dir) = dir {
        // An explicit directory override must actually supply the file;
        // silently falling back to the embedded copy would defeat the
        // point of overriding.
        let path = dir.join(name);
        if !path.exists() {
            return Err(Error::Dataset(format!("{}: not found", path.display())));
        }
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Dataset(format!("{}: {e}", path.display())))?;
        let sha_path = path.with_extension("sha256");
        if sha_path.exists() {
            let expected = std::fs::read_to_string(&sha_path)
                .map_err(|e| Error::Dataset(format!("{}: {e}", sha_path.display())))?;
            check_digest(name, &text, expected.trim())?;
        }
        return Ok(text);
    }
    check_digest(name, embedded, embedded_sha.trim())?;
    Ok(embedded.to_owned())
}

fn check_digest(name: &str, text: &str, expected: &str) -> Result<()> {
    let digest = Sha256::digest(text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    if hex != expected {
        return Err(Error::Dataset(format!(
            "{name}: checksum mismatch (expected {expected}, got {hex})"
        )));
    }
    Ok(())
}

#[derive(Deserialize)]
struct RawTable1 {
    #[allow(dead_code)]
    version: u32,
    rows: Vec<RawRow>,
}

#[derive(Deserialize)]
struct RawRow {
    m: i64,
    p: (String, String),
    p_isogenous: (String, String),
}

#[derive(Deserialize)]
struct RawFormulas {
    #[allow(dead_code)]
    version: u32,
    polys: BTreeMap<String, RawPoly>,
    cases: Vec<RawCase>,
    resultant_claims: Vec<RawResultantClaim>,
    congruence_claims: Vec<RawCongruenceClaim>,
    newton_claims: Vec<RawNewtonClaim>,
    solution_claims: Vec<RawSolutionClaim>,
}

#[derive(Deserialize)]
struct RawPoly {
    degree: usize,
    coeffs: Vec<String>,
}

#[derive(Deserialize)]
struct RawCase {
    n: u32,
    coordinates: String,
    numerator_u: Option<String>,
    numerator_v: Option<String>,
    denominator: RawDenominator,
    denominator_full: Option<String>,
    #[serde(default)]
    named_products: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    linear_identity: Option<RawLinearIdentity>,
}

#[derive(Deserialize)]
struct RawDenominator {
    constant: Option<String>,
    monomial_u: u32,
    monomial_v: u32,
    factor_names: Vec<String>,
}

#[derive(Deserialize)]
struct RawLinearIdentity {
    difference_of: (String, String),
    equals: String,
}

#[derive(Deserialize)]
struct RawResultantClaim {
    a: String,
    b: String,
    p: u32,
    exact_exp: u32,
    max_exp: Option<u32>,
}

#[derive(Deserialize)]
struct RawCongruenceClaim {
    g: String,
    p: u32,
    k_threshold: u32,
}

#[derive(Deserialize)]
struct RawNewtonClaim {
    h: String,
    shift_of: String,
    p: u32,
    slope: String,
}

#[derive(Deserialize)]
struct RawSolutionClaim {
    g: String,
    p: u32,
    k_max: u32,
    solutions: Vec<SolutionBlock>,
    #[serde(default)]
    additional_solutions: Vec<SolutionBlock>,
}
