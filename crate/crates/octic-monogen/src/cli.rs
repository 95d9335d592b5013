//! Command line front end: argument parsing, JSON reports, exit codes.
//!
//! Every subcommand emits a single JSON report with the fixed envelope
//! `{schema, tool_version, command, config, results, status, timings}`.
//! Big integers are rendered as decimal strings so the reports survive any
//! JSON parser. Timings are `null` unless `--timings` is passed, which makes
//! repeat runs byte-identical and easy to diff.
//!
//! Exit codes: `0` for clean runs, including `HYPOTHESIS_UNMET` (the tool
//! ran fine, the parameters are just outside the proven range); `1` for
//! usage and validation problems; `2` for substantive violations (a PIB
//! found inside the proven range, an oracle/candidate mismatch, or an
//! internal invariant failure).

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use crate::families::{
    twisted_element, FamilyError, FamilyKind, FamilySpec, PipelineReport, TheoremReport, Verdict,
    VerdictStatus,
};
use crate::indexcore::IndexError;
use crate::quadring::{parse_quadint, QuadInt};
use crate::quartsolve::{index_form_norm, resolvent_forms, thue_bounded_search, ThueClass};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_VIOLATION: i32 = 2;

#[derive(Debug)]
enum CliError {
    /// Bad flags, bad parameters, unreadable files: exit 1.
    Usage(String),
    /// Broken invariants or theorem violations: exit 2.
    Violation(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Family construction failures are almost always the caller's parameters;
/// the arithmetic-invariant flavors point at the library instead.
fn family_err(e: FamilyError) -> CliError {
    match e {
        FamilyError::InvalidParams(_)
        | FamilyError::DegenerateParameters(_)
        | FamilyError::CompositeNeedsIngest
        | FamilyError::NotAUnit(_)
        | FamilyError::Quad(_)
        | FamilyError::Index(IndexError::ObviousRoot(_)) => CliError::Usage(e.to_string()),
        other => CliError::Violation(other.to_string()),
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "octic-monogen",
    version,
    about = "Exact index computations and power-integral-basis verdicts for three families of octic orders"
)]
struct Cli {
    /// TOML file supplying defaults for --bound, --jobs, --seed, --samples.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads for the candidate sweep (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Record wall-clock timings in the report (omitted by default so that
    /// repeat runs produce identical bytes).
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the power-integral-basis verdict sweep for a family instance.
    Verify(VerifyArgs),
    /// D4 end to end: split F, solve the Thue equation in a box, parametrize
    /// the orbits and compare with the closed-form candidate list.
    Pipeline(PipelineArgs),
    /// Bounded search for the quartic Thue equation behind the D4 family.
    Thue(ThueArgs),
    /// Print the degree-16 J-polynomial of one candidate class.
    Jpoly(JpolyArgs),
    /// Randomized self-checks of the index machinery under a fixed seed.
    Oracle(OracleArgs),
    /// Validate an external COMPOSITE candidate file and report per-line
    /// diagnostics.
    Ingest(IngestArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyArg {
    D4,
    Composite,
    Param1,
    Param2,
}

#[derive(Args, Debug)]
struct FamilyParams {
    /// Which family to instantiate.
    #[arg(long, value_enum)]
    family: FamilyArg,

    /// D4 parameter, a single integer or an inclusive range `LO..HI`.
    #[arg(long = "T", value_name = "T|LO..HI", allow_hyphen_values = true)]
    t: Option<String>,

    /// Squarefree d of the quadratic field (composite, param1, param2).
    #[arg(long)]
    d: Option<u64>,

    /// Fourth-power-free m with g = x^4 - m (composite only).
    #[arg(long)]
    m: Option<u64>,

    /// Rational part of t (param1, param2).
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<i64>,

    /// mu-coefficient of t (param1, param2).
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    t2: i64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    params: FamilyParams,

    /// JSONL candidate file (required for the composite family).
    #[arg(long, value_name = "FILE")]
    candidates: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    /// D4 parameter T (single value).
    #[arg(long = "T", value_name = "T", allow_hyphen_values = true)]
    t: i64,

    /// Thue search box; defaults to 3|T| which covers every closed-form
    /// solution.
    #[arg(long, allow_hyphen_values = true)]
    bound: Option<i64>,
}

#[derive(Args, Debug)]
struct ThueArgs {
    /// D4 parameter T (single value).
    #[arg(long = "T", value_name = "T", allow_hyphen_values = true)]
    t: i64,

    /// Search box for N(P), N(Q).
    #[arg(long, allow_hyphen_values = true)]
    bound: Option<i64>,
}

#[derive(Args, Debug)]
struct JpolyArgs {
    #[command(flatten)]
    params: FamilyParams,

    /// JSONL candidate file (composite only).
    #[arg(long, value_name = "FILE")]
    candidates: Option<PathBuf>,

    /// Index into the family's candidate list.
    #[arg(long, default_value_t = 0)]
    candidate: usize,

    /// Unit twist, in the coordinate syntax of the field (e.g. "1", "-w").
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    eps: String,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// RNG seed; reports are reproducible for a fixed seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Number of random (order, element) samples.
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Args, Debug)]
struct IngestArgs {
    /// JSONL file with one candidate row per line:
    /// {"d": 3, "m": 2, "x": "1", "y": "0", "z": "0"}.
    #[arg(long, value_name = "FILE")]
    file: PathBuf,
}

/// Optional defaults loaded from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    bound: Option<i64>,
    jobs: Option<usize>,
    seed: Option<u64>,
    samples: Option<u64>,
}

fn load_config(path: Option<&PathBuf>) -> Result<ConfigFile, CliError> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("bad config {}: {e}", path.display())))
}

/// Parses `--T`: either one integer or an inclusive range `LO..HI`.
fn parse_t_values(s: &str) -> Result<Vec<i64>, CliError> {
    let bad = || usage(format!("cannot parse T value '{s}' (expected N or LO..HI)"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(usage(format!("empty T range {lo}..{hi}")));
        }
        if hi - lo > 1000 {
            return Err(usage(format!("T range {lo}..{hi} is too large (max 1001 values)")));
        }
        Ok((lo..=hi).collect())
    } else {
        Ok(vec![s.trim().parse().map_err(|_| bad())?])
    }
}

fn build_specs(p: &FamilyParams) -> Result<Vec<FamilySpec>, CliError> {
    match p.family {
        FamilyArg::D4 => {
            let t = p.t.as_deref().ok_or_else(|| usage("--T is required for --family d4"))?;
            parse_t_values(t)?
                .into_iter()
                .map(|t| FamilySpec::new(FamilyKind::D4 { t }).map_err(family_err))
                .collect()
        }
        FamilyArg::Composite => {
            let d = p.d.ok_or_else(|| usage("--d is required for --family composite"))?;
            let m = p.m.ok_or_else(|| usage("--m is required for --family composite"))?;
            Ok(vec![
                FamilySpec::new(FamilyKind::Composite { d, m }).map_err(family_err)?,
            ])
        }
        FamilyArg::Param1 | FamilyArg::Param2 => {
            let d = p.d.ok_or_else(|| usage("--d is required for this family"))?;
            let t1 = p.t1.ok_or_else(|| usage("--t1 is required for this family"))?;
            let kind = if p.family == FamilyArg::Param1 {
                FamilyKind::ParamI { d, t1, t2: p.t2 }
            } else {
                FamilyKind::ParamII { d, t1, t2: p.t2 }
            };
            Ok(vec![FamilySpec::new(kind).map_err(family_err)?])
        }
    }
}

/// One row of an external candidate file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidateRow {
    d: u64,
    m: u64,
    x: String,
    y: String,
    z: String,
}

/// Result of validating a JSONL candidate file.
#[derive(Debug)]
pub struct IngestOutcome {
    /// `(d, m, [X, Y, Z])` for every row that checked out.
    pub accepted: Vec<(u64, u64, [QuadInt; 3])>,
    /// `(1-based line, reason)` for every row that did not.
    pub rejected: Vec<(usize, String)>,
}

/// Validates candidate rows: JSON shape, family parameters, coordinate
/// syntax, and the requirement that the class really has relative index 1.
pub fn ingest_candidates(text: &str) -> IngestOutcome {
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: CandidateRow = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                rejected.push((lineno, format!("invalid JSON: {e}")));
                continue;
            }
        };
        let spec = match FamilySpec::new(FamilyKind::Composite { d: row.d, m: row.m }) {
            Ok(s) => s,
            Err(e) => {
                rejected.push((lineno, e.to_string()));
                continue;
            }
        };
        let field = spec.field();
        let coords: Result<Vec<QuadInt>, _> = [&row.x, &row.y, &row.z]
            .iter()
            .map(|s| parse_quadint(field, s))
            .collect();
        let coords = match coords {
            Ok(c) => c,
            Err(e) => {
                rejected.push((lineno, e.to_string()));
                continue;
            }
        };
        let cand = [coords[0].clone(), coords[1].clone(), coords[2].clone()];
        let elem = twisted_element(spec.order(), &cand, &field.one(), 0, 0);
        match elem.rel_index() {
            Ok(v) if v.is_one() => accepted.push((row.d, row.m, cand)),
            Ok(v) => rejected.push((
                lineno,
                format!("relative index is {v}, candidates must have index 1"),
            )),
            Err(e) => rejected.push((lineno, format!("not a relative generator: {e}"))),
        }
    }
    IngestOutcome { accepted, rejected }
}

fn read_candidate_file(path: &PathBuf) -> Result<IngestOutcome, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read candidate file {}: {e}", path.display())))?;
    Ok(ingest_candidates(&text))
}

fn quad_str(q: &QuadInt) -> Value {
    Value::String(q.to_string())
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "candidate": [quad_str(&v.candidate[0]), quad_str(&v.candidate[1]), quad_str(&v.candidate[2])],
        "eps": v.eps.to_string(),
        "rel_index_one": v.rel_index_one,
        "divisibility": v.divisibility,
        "pib_solutions": v.pib_solutions.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "status": v.status.as_str(),
    })
}

fn theorem_json(r: &TheoremReport) -> Value {
    json!({
        "family": r.family,
        "hypothesis_met": r.hypothesis_met,
        "overall": r.overall.as_str(),
        "verdicts": r.verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
    })
}

fn thue_class_json(c: &ThueClass) -> Value {
    json!({
        "p": [c.p.0, c.p.1],
        "q": [c.q.0, c.q.1],
        "unit": [c.unit.0, c.unit.1],
    })
}

fn pipeline_json(r: &PipelineReport) -> Value {
    json!({
        "family": r.family,
        "bound": r.bound,
        "uv_solutions": r.uv_solutions.iter().map(|s| json!({
            "u": s.u.to_string(),
            "v": s.v.to_string(),
            "eps": s.eps.to_string(),
        })).collect::<Vec<_>>(),
        "thue_classes": r.thue_classes.iter().map(thue_class_json).collect::<Vec<_>>(),
        "oracle_classes": r.oracle_classes,
        "candidate_classes": r.candidate_classes,
        "extras": r.extras,
        "missing": r.missing,
        "theorem": theorem_json(&r.theorem),
    })
}

/// Worst-first aggregation over instance statuses.
fn combine_status(statuses: &[VerdictStatus]) -> VerdictStatus {
    if statuses.contains(&VerdictStatus::PibFound) {
        VerdictStatus::PibFound
    } else if statuses.contains(&VerdictStatus::HypothesisUnmet) {
        VerdictStatus::HypothesisUnmet
    } else {
        VerdictStatus::NoPib
    }
}

struct CmdOutput {
    config: Value,
    results: Value,
    status: String,
    exit: i32,
}

fn cmd_verify(args: &VerifyArgs, cfg: &ConfigFile) -> Result<CmdOutput, CliError> {
    let _ = cfg;
    let specs = build_specs(&args.params)?;
    let external = match (&args.params.family, &args.candidates) {
        (FamilyArg::Composite, Some(path)) => Some(read_candidate_file(path)?),
        (FamilyArg::Composite, None) => {
            return Err(usage(
                "--family composite needs --candidates FILE (external candidate lists)",
            ))
        }
        (_, Some(_)) => {
            return Err(usage("--candidates only applies to --family composite"))
        }
        _ => None,
    };

    let mut reports = Vec::new();
    let mut statuses = Vec::new();
    for spec in &specs {
        let report = match (spec.kind(), external.as_ref()) {
            (FamilyKind::Composite { d, m }, Some(outcome)) => {
                if !outcome.rejected.is_empty() {
                    let lines: Vec<String> = outcome
                        .rejected
                        .iter()
                        .map(|(n, r)| format!("line {n}: {r}"))
                        .collect();
                    return Err(usage(format!(
                        "candidate file has invalid rows: {}",
                        lines.join("; ")
                    )));
                }
                let cands: Vec<[QuadInt; 3]> = outcome
                    .accepted
                    .iter()
                    .filter(|(rd, rm, _)| rd == d && rm == m)
                    .map(|(_, _, c)| c.clone())
                    .collect();
                if cands.is_empty() {
                    return Err(usage(format!(
                        "candidate file has no rows for d={d} m={m}"
                    )));
                }
                spec.verify_theorem_with_candidates(&cands).map_err(family_err)?
            }
            _ => spec.verify_theorem().map_err(family_err)?,
        };
        statuses.push(report.overall);
        reports.push(theorem_json(&report));
    }
    let overall = combine_status(&statuses);
    let exit = if overall == VerdictStatus::PibFound {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    };
    Ok(CmdOutput {
        config: json!({
            "family": format!("{:?}", args.params.family).to_lowercase(),
            "T": args.params.t,
            "d": args.params.d,
            "m": args.params.m,
            "t1": args.params.t1,
            "t2": args.params.t2,
            "candidates": args.candidates.as_ref().map(|p| p.display().to_string()),
        }),
        results: Value::Array(reports),
        status: overall.as_str().to_string(),
        exit,
    })
}

fn cmd_pipeline(args: &PipelineArgs, cfg: &ConfigFile) -> Result<CmdOutput, CliError> {
    let bound = args
        .bound
        .or(cfg.bound)
        .unwrap_or_else(|| 3 * args.t.abs().max(1));
    let spec = FamilySpec::new(FamilyKind::D4 { t: args.t }).map_err(family_err)?;
    let report = spec.relative_pipeline(bound).map_err(family_err)?;
    let status = report.theorem.overall;
    let exit = if status == VerdictStatus::PibFound {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    };
    Ok(CmdOutput {
        config: json!({"family": "d4", "T": args.t, "bound": bound}),
        results: pipeline_json(&report),
        status: status.as_str().to_string(),
        exit,
    })
}

fn cmd_thue(args: &ThueArgs, cfg: &ConfigFile) -> Result<CmdOutput, CliError> {
    let bound = args
        .bound
        .or(cfg.bound)
        .unwrap_or_else(|| 3 * args.t.abs().max(1));
    let classes = thue_bounded_search(args.t, bound)
        .map_err(|e| usage(format!("thue search: {e}")))?;
    Ok(CmdOutput {
        config: json!({"T": args.t, "bound": bound}),
        results: json!({
            "count": classes.len(),
            "classes": classes.iter().map(thue_class_json).collect::<Vec<_>>(),
        }),
        status: "OK".into(),
        exit: EXIT_OK,
    })
}

fn cmd_jpoly(args: &JpolyArgs, _cfg: &ConfigFile) -> Result<CmdOutput, CliError> {
    let specs = build_specs(&args.params)?;
    if specs.len() != 1 {
        return Err(usage("jpoly needs a single family instance, not a range"));
    }
    let spec = &specs[0];
    let cands = match spec.kind() {
        FamilyKind::Composite { d, m } => {
            let path = args.candidates.as_ref().ok_or_else(|| {
                usage("--family composite needs --candidates FILE for jpoly")
            })?;
            let outcome = read_candidate_file(path)?;
            let cands: Vec<[QuadInt; 3]> = outcome
                .accepted
                .iter()
                .filter(|(rd, rm, _)| rd == d && rm == m)
                .map(|(_, _, c)| c.clone())
                .collect();
            if cands.is_empty() {
                return Err(usage(format!("candidate file has no rows for d={d} m={m}")));
            }
            cands
        }
        _ => spec.candidates().map_err(family_err)?,
    };
    let cand = cands
        .get(args.candidate)
        .ok_or_else(|| usage(format!("--candidate {} out of range 0..{}", args.candidate, cands.len())))?;
    let eps = parse_quadint(spec.field(), &args.eps)
        .map_err(|e| usage(format!("bad --eps: {e}")))?;
    let jp = spec.jpoly(cand, &eps).map_err(family_err)?;
    Ok(CmdOutput {
        config: json!({
            "family": spec.describe(),
            "candidate": args.candidate,
            "eps": eps.to_string(),
        }),
        results: json!({
            "candidate": [quad_str(&cand[0]), quad_str(&cand[1]), quad_str(&cand[2])],
            "eps": jp.eps.to_string(),
            "rel_index_one": jp.rel_index_one,
            "degree": 16,
            "coeffs_constant_first": jp.poly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }),
        status: "OK".into(),
        exit: EXIT_OK,
    })
}

fn cmd_oracle(args: &OracleArgs, cfg: &ConfigFile) -> Result<CmdOutput, CliError> {
    let seed = args.seed.or(cfg.seed).unwrap_or(1);
    let samples = args.samples.or(cfg.samples).unwrap_or(25);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut failures: Vec<String> = Vec::new();
    let mut n_factorization = 0u64;
    let mut n_index_form = 0u64;
    let mut n_disc = 0u64;
    let mut n_skipped = 0u64;

    const COMPOSITE_D_POOL: [u64; 4] = [3, 7, 11, 19];
    const PARAM_D_POOL: [u64; 4] = [1, 2, 5, 6];

    for sample in 0..samples {
        // Draw family kinds until one validates; rejection keeps the
        // distribution simple and the stream reproducible.
        let spec = loop {
            let kind = match rng.gen_range(0u8..4) {
                0 => {
                    let mut t = rng.gen_range(-9i64..=9);
                    if t == 0 {
                        t = 2;
                    }
                    FamilyKind::D4 { t }
                }
                1 => FamilyKind::Composite {
                    d: COMPOSITE_D_POOL[rng.gen_range(0..COMPOSITE_D_POOL.len())],
                    m: rng.gen_range(2u64..=60),
                },
                2 => FamilyKind::ParamI {
                    d: PARAM_D_POOL[rng.gen_range(0..PARAM_D_POOL.len())],
                    t1: rng.gen_range(-6i64..=6),
                    t2: rng.gen_range(-3i64..=3),
                },
                _ => FamilyKind::ParamII {
                    d: PARAM_D_POOL[rng.gen_range(0..PARAM_D_POOL.len())],
                    t1: rng.gen_range(-6i64..=6),
                    t2: rng.gen_range(-3i64..=3),
                },
            };
            if let Ok(s) = FamilySpec::new(kind) {
                break s;
            }
        };
        let order = spec.order();
        match order.check_disc_relation() {
            Ok(true) => n_disc += 1,
            Ok(false) => failures.push(format!(
                "sample {sample}: discriminant relation failed for {}",
                spec.describe()
            )),
            Err(e) => failures.push(format!(
                "sample {sample}: discriminant relation errored for {}: {e}",
                spec.describe()
            )),
        }

        let mut coord = || (rng.gen_range(-4i64..=4), rng.gen_range(-4i64..=4));
        let a = coord();
        let x = coord();
        let y = coord();
        let z = coord();
        let elem = order.element_i64(a, x, y, z);

        match elem.abs_index() {
            Ok(rep) => {
                if rep.abs_index == &rep.rel_index * &rep.j_value
                    && rep.primitive_rel
                    && rep.primitive_abs
                {
                    n_factorization += 1;
                } else {
                    failures.push(format!(
                        "sample {sample}: index factorization failed for {} at {a:?},{x:?},{y:?},{z:?}",
                        spec.describe()
                    ));
                }
            }
            Err(
                IndexError::NotPrimitive
                | IndexError::NotPrimitiveAbs
                | IndexError::DegenerateOrder,
            ) => n_skipped += 1,
            Err(e) => failures.push(format!(
                "sample {sample}: abs_index errored for {}: {e}",
                spec.describe()
            )),
        }

        // The resolvent identity: the index form evaluated on the cubic
        // coordinates has absolute norm equal to the relative index.
        let forms = resolvent_forms(order.g()).map_err(|e| CliError::Violation(e.to_string()))?;
        let f = spec.field();
        let norm = index_form_norm(&forms, &f.int(x.0, x.1), &f.int(y.0, y.1), &f.int(z.0, z.1));
        match elem.rel_index() {
            Ok(idx) => {
                if norm == idx {
                    n_index_form += 1;
                } else {
                    failures.push(format!(
                        "sample {sample}: index form norm {norm} != relative index {idx} for {}",
                        spec.describe()
                    ));
                }
            }
            Err(IndexError::NotPrimitive) => {
                if norm.is_zero() {
                    n_index_form += 1;
                } else {
                    failures.push(format!(
                        "sample {sample}: non-primitive element has nonzero index form {norm} for {}",
                        spec.describe()
                    ));
                }
            }
            Err(IndexError::DegenerateOrder) => n_skipped += 1,
            Err(e) => failures.push(format!(
                "sample {sample}: rel_index errored for {}: {e}",
                spec.describe()
            )),
        }
    }

    let ok = failures.is_empty();
    Ok(CmdOutput {
        config: json!({"seed": seed, "samples": samples}),
        results: json!({
            "checks": {
                "index_factorization": n_factorization,
                "index_form_identity": n_index_form,
                "disc_relation": n_disc,
                "skipped_nonprimitive": n_skipped,
            },
            "failures": failures,
        }),
        status: if ok { "OK".into() } else { "FAILED".into() },
        exit: if ok { EXIT_OK } else { EXIT_VIOLATION },
    })
}

fn cmd_ingest(args: &IngestArgs, _cfg: &ConfigFile) -> Result<CmdOutput, CliError> {
    let outcome = read_candidate_file(&args.file)?;
    Ok(CmdOutput {
        config: json!({"file": args.file.display().to_string()}),
        results: json!({
            "accepted": outcome.accepted.iter().map(|(d, m, c)| json!({
                "d": d,
                "m": m,
                "x": c[0].to_string(),
                "y": c[1].to_string(),
                "z": c[2].to_string(),
            })).collect::<Vec<_>>(),
            "rejected": outcome.rejected.iter().map(|(line, reason)| json!({
                "line": line,
                "reason": reason,
            })).collect::<Vec<_>>(),
            "accepted_count": outcome.accepted.len(),
            "rejected_count": outcome.rejected.len(),
        }),
        status: "OK".into(),
        exit: EXIT_OK,
    })
}

fn execute(cli: &Cli) -> Result<CmdOutput, CliError> {
    let cfg = load_config(cli.config.as_ref())?;
    if let Some(jobs) = cli.jobs.or(cfg.jobs) {
        if jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        // Only the first configuration wins; later calls are a no-op.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match &cli.cmd {
        Cmd::Verify(a) => cmd_verify(a, &cfg),
        Cmd::Pipeline(a) => cmd_pipeline(a, &cfg),
        Cmd::Thue(a) => cmd_thue(a, &cfg),
        Cmd::Jpoly(a) => cmd_jpoly(a, &cfg),
        Cmd::Oracle(a) => cmd_oracle(a, &cfg),
        Cmd::Ingest(a) => cmd_ingest(a, &cfg),
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Verify(_) => "verify",
        Cmd::Pipeline(_) => "pipeline",
        Cmd::Thue(_) => "thue",
        Cmd::Jpoly(_) => "jpoly",
        Cmd::Oracle(_) => "oracle",
        Cmd::Ingest(_) => "ingest",
    }
}

/// Parses the command line, runs the requested command, writes the JSON
/// report, and returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let out = match execute(&cli) {
        Ok(o) => o,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
        Err(CliError::Violation(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_VIOLATION;
        }
    };
    let timings = if cli.timings {
        json!({"total_ms": started.elapsed().as_millis() as u64})
    } else {
        Value::Null
    };
    let report = json!({
        "schema": "octic-monogen/1",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command_name(&cli.cmd),
        "config": out.config,
        "results": out.results,
        "status": out.status,
        "timings": timings,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{text}"),
    }
    out.exit
}
