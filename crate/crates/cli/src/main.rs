//! Command-line driver for the divisibility-sequence library: construct
//! sequences term by term, run the verification suites, and replay the
//! polynomial claims, with exact values throughout.
//!
//! Output is deterministic: the same arguments (including `--seed`)
//! produce byte-identical stdout. Wall-clock timings are only available
//! through `--timings`, which writes to stderr so the canonical output
//! stream is unaffected.
//!
//! Exit codes: 0 = verified (possibly with flagged indeterminate
//! verdicts, which are warned about on stderr), 1 = a verification
//! failure, 2 = bad input, 3 = required dataset missing or corrupt.

mod report;

use std::process::ExitCode;
use std::str::FromStr;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::ops::Pow;
use rug::Integer;

use fermat_eds::arith::{is_prime, is_prime_power, parse_rational, FactorBudget};
use fermat_eds::curve::{Curve, CurvePoint, Model};
use fermat_eds::{dataset, eds, heights, polytools, verify, Error};

use report::{
    daylight_report, rescale_report, thesis_report, NewtonOutput, Rendered, ReportDto,
    ResultantOutput, SeqRecord, SlopeOutput, SolveOutput,
};

const EXIT_PASS: u8 = 0;
const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_MISSING_DATA: u8 = 3;

/// Exact-arithmetic toolkit for divisibility sequences on U³ + V³ = m.
#[derive(Parser)]
#[command(name = "fermat-eds", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for stdout.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Worker threads (0 keeps the library default).
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,

    /// Seed for the sampled spot checks; inert for fully exhaustive
    /// commands.
    #[arg(long, default_value_t = verify::DEFAULT_SPOT_SEED, global = true)]
    seed: u64,

    /// Report wall-clock time on stderr. Timings vary run to run, which
    /// is why they are never part of stdout.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the first terms of the sequence attached to (m, P).
    Seq(SeqArgs),
    /// Run a verification suite and report per-item verdicts.
    #[command(subcommand)]
    Verify(VerifySuite),
    /// Replay a single polynomial computation from the claim dataset.
    #[command(subcommand)]
    Poly(PolyOp),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct SeqArgs {
    /// Twist parameter m: cube-free and not 0, ±1, ±2.
    #[arg(long, allow_hyphen_values = true)]
    m: String,

    /// Generator "X,Y" on Y² = X³ − 432 m², with exact integer or
    /// num/den coordinates.
    #[arg(long, allow_hyphen_values = true)]
    p: String,

    /// Number of terms to construct.
    #[arg(long, default_value_t = 10)]
    n_max: u32,

    #[command(flatten)]
    budget: BudgetArgs,
}

/// Factorization effort knobs shared by every command that factors.
#[derive(Args)]
struct BudgetArgs {
    /// Trial-divide by primes up to this bound.
    #[arg(long, default_value_t = 1_000_000)]
    trial_bound: u64,

    /// Pollard-rho iterations allowed per stubborn composite.
    #[arg(long, default_value_t = 500_000)]
    rho_iterations: u64,

    /// Pollard-rho polynomial retries before giving up.
    #[arg(long, default_value_t = 4)]
    rho_attempts: u32,
}

impl BudgetArgs {
    fn to_budget(&self) -> FactorBudget {
        FactorBudget {
            trial_bound: self.trial_bound,
            rho_iterations: self.rho_iterations,
            rho_attempts: self.rho_attempts,
        }
    }
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Check every generator-table row exactly: both points satisfy
    /// their curve equations and the isogeny carries one to the other.
    Table1,

    /// Confirm that no term W₂…W_n_max for one curve is a prime power,
    /// with a coprime witness or factorization evidence per index.
    Expupc {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Generator "X,Y"; defaults to the table row for this m.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, default_value_t = 22)]
        n_max: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },

    /// Scan the generator table for integral multiples beyond the
    /// first: every row should report the bound N0 = 1.
    Appendix {
        #[arg(long, default_value_t = 22)]
        n_max: u32,
    },

    /// Check gcd(W_r, W_n) = W_gcd(r,n) over all pairs up to a bound.
    Strongdiv {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_index: u32,
    },

    /// Replay the per-prime valuation laws on every checkable (n, k, p)
    /// with n·k bounded.
    Valuation {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, default_value_t = 24)]
        product_max: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },

    /// Search points (u, u−1) whose doubled denominator is the prime
    /// 3u² − 3u + 1, and confirm the resultant identities behind it.
    Daylight {
        #[arg(long, default_value_t = 100)]
        u_max: i64,
    },

    /// Multiply the twist by a cube so chosen denominators collapse to
    /// prime powers; indices must be pairwise coprime.
    Rescale {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Comma-separated sequence indices, e.g. 2,3.
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<u32>,
        #[command(flatten)]
        budget: BudgetArgs,
    },

    /// Report which hypotheses of the conditional at-most-one
    /// prime-power bound hold, and whether the observed count obeys it.
    Thesis {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
    },

    /// Check the canonical-height identities: gap containment,
    /// quadratic scaling in n, and the factor-3 isogeny scaling.
    Heights {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Generator "X,Y"; defaults to the table row (whose companion
        /// point then also enables the isogeny check).
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        /// Precision each canonical height is computed to.
        #[arg(long, default_value_t = heights::DEFAULT_TOL)]
        tolerance: f64,
    },

    /// Replay every recorded polynomial claim: denominator products,
    /// resultants, congruences, slopes, solution lists, and the
    /// multiplication formulas against the group law.
    Formulas {
        /// Half-width of the solution search box |u|, |v| ≤ box.
        #[arg(long = "box", default_value_t = 1000)]
        solution_box: i64,
    },
}

#[derive(Subcommand)]
enum PolyOp {
    /// p-adic Newton polygon of a stored form, specialized at v = 1.
    Newton {
        /// Polynomial id from the claim dataset, e.g. h51.
        #[arg(long)]
        id: String,
        #[arg(long, default_value = "3")]
        p: String,
    },

    /// Resultant of two stored forms (specialized at v = 1).
    Resultant {
        /// Exactly two comma-separated ids, e.g. f4p,g43.
        #[arg(long, value_delimiter = ',')]
        id: Vec<String>,
    },

    /// All solutions of g(u, v) = ±p^k, k ≤ kmax, within the box.
    Solve3k {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 1)]
        kmax: u32,
        /// Half-width of the search box |u|, |v| ≤ box.
        #[arg(long = "box", default_value_t = 1000)]
        box_bound: i64,
        #[arg(long, default_value = "3")]
        p: String,
    },
}

/// User-supplied value that is syntactically valid to clap but
/// semantically unusable; maps to the bad-input exit code.
#[derive(Debug)]
struct BadInput(String);

impl std::fmt::Display for BadInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadInput {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<BadInput>().is_some() {
        return EXIT_BAD_INPUT;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Dataset(_)) => EXIT_MISSING_DATA,
        _ => EXIT_BAD_INPUT,
    }
}

fn run(cli: &Cli) -> Result<u8> {
    if cli.threads > 0 {
        // A second invocation in-process would fail; the CLI only
        // configures the pool once, so the error can be ignored.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let start = std::time::Instant::now();
    let code = match &cli.command {
        Command::Seq(args) => cmd_seq(args, cli.format)?,
        Command::Verify(suite) => cmd_verify(suite, cli)?,
        Command::Poly(op) => cmd_poly(op, cli.format)?,
    };
    if cli.timings {
        eprintln!(
            "timing: {} ms (non-deterministic; excluded from stdout)",
            start.elapsed().as_millis()
        );
    }
    Ok(code)
}

// ----------------------------------------------------------------------
// Input parsing
// ----------------------------------------------------------------------

fn parse_m(s: &str) -> Result<Integer> {
    Integer::from_str(s).map_err(|_| Error::Parse(s.to_string()).into())
}

fn parse_point(s: &str) -> Result<CurvePoint> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| BadInput(format!("point {s:?} must be \"X,Y\"")))?;
    Ok(CurvePoint::affine(parse_rational(x)?, parse_rational(y)?))
}

fn parse_prime(s: &str) -> Result<Integer> {
    let p = parse_m(s)?;
    if !is_prime(&p) {
        return Err(BadInput(format!("p = {p} is not prime")).into());
    }
    Ok(p)
}

/// Resolve (m, generator) for a suite: a supplied point is validated on
/// the curve before any computation; with no point, the generator table
/// supplies the row for m.
fn resolve_generator(m_str: &str, p: &Option<String>) -> Result<(Integer, CurvePoint)> {
    let m = parse_m(m_str)?;
    let curve = Curve::new(Model::Mordell, m.clone())?;
    let point = match p {
        Some(s) => {
            let pt = parse_point(s)?;
            ensure_on_curve(&curve, &pt)?;
            pt
        }
        None => {
            let row = dataset::table1()?.row(&m).ok_or_else(|| {
                BadInput(format!("m = {m} is not in the generator table; pass --p"))
            })?;
            CurvePoint::affine(row.point.0.clone(), row.point.1.clone())
        }
    };
    Ok((m, point))
}

fn ensure_on_curve(curve: &Curve, point: &CurvePoint) -> Result<()> {
    if curve.contains(point) {
        return Ok(());
    }
    let (x, y) = point.coordinates()?;
    Err(Error::NotOnCurve {
        m: curve.m().clone(),
        x: x.clone(),
        y: y.clone(),
    }
    .into())
}

fn resolve_user_poly(data: &dataset::FormulaCorpus, id: &str) -> Result<polytools::HomogPoly> {
    data.resolve(id)
        .map_err(|_| BadInput(format!("unknown polynomial id {id:?}")).into())
}

// ----------------------------------------------------------------------
// seq
// ----------------------------------------------------------------------

fn cmd_seq(args: &SeqArgs, format: Format) -> Result<u8> {
    if args.n_max < 1 {
        return Err(BadInput("need at least one term".into()).into());
    }
    let m = parse_m(&args.m)?;
    let curve = Curve::new(Model::Mordell, m.clone())?;
    let point = parse_point(&args.p)?;
    ensure_on_curve(&curve, &point)?;

    let budget = args.budget.to_budget();
    let wterms = eds::mordell_sequence(&curve, &point, args.n_max)?;
    let cterms = eds::w_sequence(&curve, &point, args.n_max)?;

    let mut history = Vec::new();
    let mut records = Vec::with_capacity(args.n_max as usize);
    for (wt, ct) in wterms.iter().zip(&cterms) {
        let classification = if ct.w == 1 {
            "trivial".to_string()
        } else {
            match eds::classify_term(&ct.w, &budget)? {
                eds::TermClass::Prime => "prime".to_string(),
                eds::TermClass::PrimePower { p, k } => format!("prime-power {p}^{k}"),
                eds::TermClass::Composite {
                    distinct_primes,
                    complete,
                } => format!(
                    "composite ({distinct_primes} distinct prime{} {})",
                    if distinct_primes == 1 { "" } else { "s" },
                    if complete { "found" } else { "found so far" }
                ),
            }
        };
        let primitive_divisor = match eds::primitive_divisor_of(&ct.w, &history, &budget)? {
            eds::PrimitiveDivisor::Found(p) => p.to_string(),
            eds::PrimitiveDivisor::Absent => "none".to_string(),
            eds::PrimitiveDivisor::Indeterminate => "unknown".to_string(),
        };
        history.push(fermat_eds::arith::factor(&ct.w, &budget)?);
        records.push(SeqRecord {
            n: wt.n,
            a: wt.a.to_string(),
            b: wt.b.to_string(),
            c: wt.c.to_string(),
            u: ct.u.to_string(),
            v: ct.v.to_string(),
            w: ct.w.to_string(),
            d: ct.d.to_string(),
            classification,
            primitive_divisor,
        });
    }

    // Every emitted batch is re-read from its own JSON serialization and
    // the defining identities re-checked, so a formatting bug cannot
    // silently corrupt published values.
    let json = serde_json::to_string_pretty(&records)?;
    recheck_roundtrip(&m, &json)?;

    match format {
        Format::Json => println!("{json}"),
        Format::Csv => print!("{}", report::records_csv(&records)?),
        Format::Table => print!("{}", report::records_table(&records)),
    }
    Ok(EXIT_PASS)
}

/// Parse the JSON back and confirm U³ + V³ = m·W³ and
/// C² = A³ − 432 m² B⁶ for every record.
fn recheck_roundtrip(m: &Integer, json: &str) -> Result<()> {
    let records: Vec<SeqRecord> = serde_json::from_str(json)?;
    for r in &records {
        let big = |s: &str| -> Result<Integer> {
            Integer::from_str(s).map_err(|_| Error::Parse(s.to_string()).into())
        };
        let (a, b, c) = (big(&r.a)?, big(&r.b)?, big(&r.c)?);
        let (u, v, w) = (big(&r.u)?, big(&r.v)?, big(&r.w)?);
        let cubic_lhs = Integer::from((&u).pow(3)) + Integer::from((&v).pow(3));
        let cubic_rhs = Integer::from(m * Integer::from((&w).pow(3)));
        let weier_lhs = Integer::from((&c).pow(2));
        let weier_rhs = Integer::from((&a).pow(3))
            - Integer::from(m * m) * 432 * Integer::from((&b).pow(6));
        if cubic_lhs != cubic_rhs || weier_lhs != weier_rhs {
            anyhow::bail!("round-trip identity check failed at n = {}", r.n);
        }
    }
    Ok(())
}

// ----------------------------------------------------------------------
// verify
// ----------------------------------------------------------------------

fn cmd_verify(suite: &VerifySuite, cli: &Cli) -> Result<u8> {
    let dto = match suite {
        VerifySuite::Table1 => ReportDto::from(&verify::verify_table1(dataset::table1()?)),
        VerifySuite::Expupc {
            m,
            p,
            n_max,
            budget,
        } => {
            let (m, point) = resolve_generator(m, p)?;
            ReportDto::from(&verify::verify_expupc_point(
                &m,
                &point,
                *n_max,
                &budget.to_budget(),
            )?)
        }
        VerifySuite::Appendix { n_max } => {
            let rows = verify::table1_generators(dataset::table1()?);
            ReportDto::from(&verify::appendix_scan(&rows, *n_max)?)
        }
        VerifySuite::Strongdiv { m, p, max_index } => {
            let (m, point) = resolve_generator(m, p)?;
            let curve = Curve::new(Model::Mordell, m)?;
            ReportDto::from(&verify::strong_divisibility_grid(&curve, &point, *max_index)?)
        }
        VerifySuite::Valuation {
            m,
            p,
            product_max,
            budget,
        } => {
            let (m, point) = resolve_generator(m, p)?;
            let curve = Curve::new(Model::Mordell, m)?;
            ReportDto::from(&verify::valuation_grid(
                &curve,
                &point,
                *product_max,
                &budget.to_budget(),
            )?)
        }
        VerifySuite::Daylight { u_max } => daylight_report(&verify::daylight_search(*u_max)?),
        VerifySuite::Rescale {
            m,
            p,
            indices,
            budget,
        } => {
            let (m, point) = resolve_generator(m, p)?;
            rescale_report(&verify::rescale_demo(
                &m,
                &point,
                indices,
                &budget.to_budget(),
            )?)
        }
        VerifySuite::Thesis { m, p } => {
            let (m, point) = resolve_generator(m, p)?;
            thesis_report(&verify::thesis_hypothesis_check(&m, &point)?)
        }
        VerifySuite::Heights {
            m,
            p,
            n_max,
            tolerance,
        } => {
            let (m, point) = resolve_generator(m, p)?;
            let companion = match p {
                Some(_) => None,
                None => dataset::table1()?.row(&m).map(|row| {
                    CurvePoint::affine(
                        row.isogenous_point.0.clone(),
                        row.isogenous_point.1.clone(),
                    )
                }),
            };
            ReportDto::from(&verify::heights_suite(
                &m,
                &point,
                companion.as_ref(),
                *n_max,
                *tolerance,
            )?)
        }
        VerifySuite::Formulas { solution_box } => ReportDto::from(&verify::check_formulas(
            dataset::formulas()?,
            *solution_box,
            cli.seed,
        )?),
    };

    for flag in &dto.flags {
        eprintln!("warning: {flag}");
    }
    emit(&Rendered::Report(dto.clone()), cli.format)?;
    Ok(if dto.any_failure() {
        EXIT_VERIFY_FAIL
    } else {
        EXIT_PASS
    })
}

// ----------------------------------------------------------------------
// poly
// ----------------------------------------------------------------------

fn cmd_poly(op: &PolyOp, format: Format) -> Result<u8> {
    match op {
        PolyOp::Newton { id, p } => {
            let data = dataset::formulas()?;
            let g = resolve_user_poly(data, id)?;
            let p = parse_prime(p)?;
            let polygon = polytools::newton_polygon(&g.specialize(), &p);
            let single = match polygon.slopes.as_slice() {
                [(slope, _)] => Some(slope.to_string()),
                _ => None,
            };
            let out = NewtonOutput {
                id: id.clone(),
                p: p.to_string(),
                vertices: polygon.hull_vertices.clone(),
                slopes: polygon
                    .slopes
                    .iter()
                    .map(|(slope, run)| SlopeOutput {
                        slope: slope.to_string(),
                        run: *run,
                    })
                    .collect(),
                single_slope: single,
            };
            emit(&Rendered::Newton(out), format)?;
        }
        PolyOp::Resultant { id } => {
            let [a_id, b_id] = id.as_slice() else {
                return Err(
                    BadInput("pass exactly two ids, e.g. --id f4p,g43".into()).into(),
                );
            };
            let data = dataset::formulas()?;
            let a = resolve_user_poly(data, a_id)?;
            let b = resolve_user_poly(data, b_id)?;
            let value =
                polytools::resultant(&a.specialize_checked()?, &b.specialize_checked()?)?;
            let prime_power = prime_power_form(&value);
            let out = ResultantOutput {
                a: a_id.clone(),
                b: b_id.clone(),
                value: value.to_string(),
                prime_power,
            };
            emit(&Rendered::Resultant(out), format)?;
        }
        PolyOp::Solve3k {
            id,
            kmax,
            box_bound,
            p,
        } => {
            let data = dataset::formulas()?;
            let g = resolve_user_poly(data, id)?;
            let p = parse_prime(p)?;
            let solutions = polytools::solve_power_of_p(&g, &p, *kmax, *box_bound)?;
            let out = SolveOutput {
                id: id.clone(),
                p: p.to_string(),
                kmax: *kmax,
                box_bound: *box_bound,
                solutions,
            };
            emit(&Rendered::Solve(out), format)?;
        }
    }
    Ok(EXIT_PASS)
}

/// "±p^k" annotation when |value| is a prime power, e.g. "-3^16".
fn prime_power_form(value: &Integer) -> Option<String> {
    let abs = Integer::from(value.abs_ref());
    let sign = if *value < 0 { "-" } else { "" };
    if is_prime(&abs) {
        return Some(format!("{sign}{abs}^1"));
    }
    is_prime_power(&abs).map(|(p, k)| format!("{sign}{p}^{k}"))
}

fn emit(rendered: &Rendered, format: Format) -> Result<()> {
    let text = match format {
        Format::Json => rendered.to_json()?,
        Format::Csv => rendered.to_csv()?,
        Format::Table => rendered.to_table(),
    };
    print!("{text}");
    Ok(())
}
