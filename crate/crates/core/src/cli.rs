//! Command-line front end: every library operation is exposed as a
//! subcommand that reads JSON arguments and writes a deterministic JSON
//! report to stdout (human-readable progress goes to stderr).
//!
//! Conventions:
//!
//! * divisor classes are JSON arrays `[d, m_1, ..., m_r]` whose entries
//!   are integers or exact-rational strings;
//! * every rational in a report is a string, never a float;
//! * mathematical "no" answers (not nef, not contained, ...) are data and
//!   exit 0; exit 2 flags bad input, exit 3 an internal inconsistency;
//! * identical arguments and seed produce byte-identical reports. Wall
//!   clock timing is emitted only under `--timings`, since it would break
//!   that guarantee.
//!
//! The `lattice` subcommands are plain calculators and print the bare
//! value; all other subcommands print a full report object carrying the
//! command echo, an input digest, the results, and the seed.

use crate::cones::{
    cone_generators, decompose_effective, enumerate_neg_one_classes, is_nef, ConeError,
    ConfigurationTag, EffectiveMembership,
};
use crate::fatpoints::field::{FieldOps, PrimeField, RationalField};
use crate::fatpoints::{BhOutcome, Containment, FatPointError, FatPointScheme};
use crate::lattice::{DivisorClass, LatticeContext, LatticeError};
use crate::rat::{parse_rat, rat_string};
use crate::seshadri::{
    ample_from_unloading, epsilon_exact, epsilon_lower_unloading, gamma_exact, lambda_l,
    nagata_search, prove_nef, CandidateOutcome, EffectivityExponent, PointConfiguration,
    ProveNefOptions, SeshadriCertificate, SeshadriError, SeshadriValue, SpanningChoice,
    DEFAULT_INTERPOLATION_PRIME,
};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use std::time::Instant;

/// Entry point for the `blowup` binary.
pub fn run() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    run_args(&args)
}

/// Runs the CLI on an explicit argument list (no program name) and
/// returns the process exit code.
pub fn run_args(args: &[String]) -> i32 {
    let parsed = Cli::try_parse_from(std::iter::once("blowup".to_string()).chain(args.iter().cloned()));
    let cli = match parsed {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    match dispatch(&cli) {
        Ok(CommandOutput::Bare(text)) => {
            println!("{text}");
            0
        }
        Ok(CommandOutput::Report {
            results,
            config_bytes,
        }) => {
            let digest = digest_hex(args, config_bytes.as_deref());
            let timing = if cli.timings {
                json!({ "millis": started.elapsed().as_millis() as u64 })
            } else {
                Value::Null
            };
            let report = json!({
                "command": args,
                "inputs_digest": digest,
                "results": results,
                "seed": cli.seed,
                "timing": timing,
            });
            println!("{report}");
            0
        }
        Err(err) => {
            let payload = json!({ "error": { "code": err.code, "message": err.message } });
            println!("{payload}");
            eprintln!("error[{}]: {}", err.code, err.message);
            err.exit
        }
    }
}

// ---------------------------------------------------------------------------
// Argument grammar
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "blowup",
    version,
    about = "Exact positivity invariants for blow-ups of the plane and fat-point ideals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every randomized step (interpolation trials, point sampling).
    #[arg(long, global = true, default_value_t = crate::seshadri::DEFAULT_SEED)]
    seed: u64,
    /// Default coefficient field when not fixed by a configuration file:
    /// "Q" or a prime number.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Number of random configurations a generic-position check must agree on.
    #[arg(long, global = true, default_value_t = crate::seshadri::DEFAULT_TRIALS)]
    trials: u32,
    /// Include wall-clock timing in the report (trades away byte-identical reruns).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection-lattice calculator; prints the bare value.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Effective/nef cone data for tabulated configurations.
    Cone {
        #[command(subcommand)]
        op: ConeOp,
    },
    /// Seshadri constants: exact values, lower bounds, nef-ness proofs.
    Seshadri {
        #[command(subcommand)]
        op: SeshadriOp,
    },
    /// The asymptotic uniform degree ratio gamma with witnesses.
    Gamma(TagArgs),
    /// Initial degree of a symbolic power of a fat-point ideal.
    Alpha(AlphaArgs),
    /// Castelnuovo-Mumford regularity data of a fat-point ideal.
    Reg(ConfigOnlyArgs),
    /// Symbolic-in-ordinary power containment, with consistency checks.
    Containment(ContainmentArgs),
    /// Resurgence bounds from Waldschmidt-constant estimates.
    Resurgence(ResurgenceArgs),
    /// Characteristic-p containment I^(2q-1) in I^q.
    Frobenius(FrobeniusArgs),
    /// Abnormal-class search for more than nine general points.
    Nagata(NagataArgs),
    /// Nef-ness prover for uniform classes on general points.
    ProveNef(ProveNefArgs),
}

#[derive(Subcommand)]
enum LatticeOp {
    /// Intersection number of two classes; prints the exact value.
    Pair {
        #[arg(long)]
        r: usize,
        /// First class as a JSON array [d, m_1, ..., m_r].
        #[arg(long)]
        a: String,
        /// Second class as a JSON array.
        #[arg(long)]
        b: String,
    },
    /// Arithmetic genus from adjunction; prints the integer.
    Genus {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: String,
    },
    /// Euler characteristic chi(O(C)); prints the exact value.
    Chi {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: String,
    },
    /// Abnormality test; prints true or false.
    Abnormal {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: String,
    },
}

#[derive(Subcommand)]
enum ConeOp {
    /// Generators of the effective and nef cones.
    Gens {
        #[arg(long)]
        tag: String,
        #[arg(long)]
        r: usize,
    },
    /// Nef-ness of a class against the effective generators.
    Nef {
        #[arg(long)]
        tag: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: String,
    },
    /// Effective-monoid membership with certificate.
    Eff {
        #[arg(long)]
        tag: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: String,
    },
    /// All (-1)-classes for r general points.
    NegOne {
        #[arg(long)]
        r: usize,
    },
}

#[derive(Subcommand)]
enum SeshadriOp {
    /// Exact value (or rigorous enclosure) with certificate.
    Exact(TagArgs),
    /// Unloading lower bound for n general points.
    Bound(BoundArgs),
    /// Nef-ness prover (same as top-level prove-nef).
    ProveNef(ProveNefArgs),
    /// Abnormal-class search (same as top-level nagata).
    Nagata(NagataArgs),
    /// Ampleness evidence for a uniform class from the unloading bound.
    Ample(AmpleArgs),
    /// The lambda invariant: min C^2/(C.L)^2 over negative primes meeting L.
    Lambda(TagArgs),
}

#[derive(Args)]
struct TagArgs {
    /// Configuration tag: collinear, conic, generic, three-collinear-plus-one.
    #[arg(long)]
    tag: String,
    /// Number of points (ignored for three-collinear-plus-one).
    #[arg(long, default_value_t = 0)]
    r: usize,
}

#[derive(Args)]
struct BoundArgs {
    /// Number of general points.
    #[arg(long)]
    n: u64,
    /// Largest unloading parameter d to try (defaults to max(n, 10)).
    #[arg(long = "search-bound")]
    search_bound: Option<u64>,
}

#[derive(Args)]
struct ProveNefArgs {
    /// Number of general points (r >= 2).
    #[arg(long)]
    r: usize,
    /// Target class as a JSON array [d, m, ..., m].
    #[arg(long)]
    f: String,
    /// Explicit effectivity exponent s (default: least s with chi(sF) >= 1).
    #[arg(long)]
    s: Option<i64>,
    /// JSON array of classes summing to sF, each certified effective.
    #[arg(long = "s-cert")]
    s_cert: Option<String>,
    /// Ladder head degree h0 (default: from the unloading bound).
    #[arg(long)]
    h0: Option<i64>,
    /// Candidate box: "ladder" (default) or "lines".
    #[arg(long, default_value = "ladder")]
    spanning: String,
}

#[derive(Args)]
struct NagataArgs {
    /// Number of general points (r > 9).
    #[arg(long)]
    r: usize,
    /// Largest candidate degree to sweep.
    #[arg(long = "degree-bound", default_value_t = 20)]
    degree_bound: i64,
}

#[derive(Args)]
struct AmpleArgs {
    /// Number of general points.
    #[arg(long)]
    n: usize,
    /// Uniform class as a JSON array [a, b, ..., b].
    #[arg(long)]
    f: String,
    /// Largest unloading parameter d to try (defaults to max(n, 10)).
    #[arg(long = "search-bound")]
    search_bound: Option<u64>,
}

#[derive(Args)]
struct AlphaArgs {
    /// Point-configuration JSON file.
    #[arg(long)]
    config: String,
    /// Symbolic-power exponent.
    #[arg(short, long, default_value_t = 1)]
    m: u32,
}

#[derive(Args)]
struct ConfigOnlyArgs {
    #[arg(long)]
    config: String,
}

#[derive(Args)]
struct ContainmentArgs {
    #[arg(long)]
    config: String,
    /// Symbolic-power exponent m in I^(m).
    #[arg(short, long)]
    m: u32,
    /// Ordinary-power exponent r in I^r.
    #[arg(short, long)]
    r: u32,
}

#[derive(Args)]
struct ResurgenceArgs {
    #[arg(long)]
    config: String,
    /// Largest m sampled for alpha(I^(m))/m.
    #[arg(long = "m-max", default_value_t = 4)]
    m_max: u32,
    /// Optional per-point positivity lower bound (exact rational) used to
    /// bound the Waldschmidt constant from below.
    #[arg(long)]
    eps: Option<String>,
}

#[derive(Args)]
struct FrobeniusArgs {
    #[arg(long)]
    config: String,
    /// Power of the field characteristic.
    #[arg(short, long)]
    q: u64,
}

// ---------------------------------------------------------------------------
// Errors and output plumbing
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct CliError {
    code: &'static str,
    message: String,
    exit: i32,
}

impl CliError {
    fn bad_input(message: impl Into<String>) -> Self {
        CliError {
            code: "bad-input",
            message: message.into(),
            exit: 2,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::bad_input(e.to_string())
    }
}

impl From<ConeError> for CliError {
    fn from(e: ConeError) -> Self {
        let code = match &e {
            ConeError::UnknownTag { .. } | ConeError::NotFinitelyGenerated { .. } => "unsupported",
            ConeError::TooFewPoints { .. } => "precondition",
            ConeError::Lattice(_) | ConeError::NotIntegral { .. } => "bad-input",
        };
        CliError {
            code,
            message: e.to_string(),
            exit: 2,
        }
    }
}

impl From<FatPointError> for CliError {
    fn from(e: FatPointError) -> Self {
        match &e {
            FatPointError::Internal(_) => CliError {
                code: "internal",
                message: e.to_string(),
                exit: 3,
            },
            _ => CliError::bad_input(e.to_string()),
        }
    }
}

impl From<SeshadriError> for CliError {
    fn from(e: SeshadriError) -> Self {
        match e {
            SeshadriError::Unsupported(_) => CliError {
                code: "unsupported",
                message: e.to_string(),
                exit: 2,
            },
            SeshadriError::Precondition(_) => CliError {
                code: "precondition",
                message: e.to_string(),
                exit: 2,
            },
            SeshadriError::TooLarge(_) => CliError {
                code: "too-large",
                message: e.to_string(),
                exit: 2,
            },
            SeshadriError::Lattice(inner) => inner.into(),
            SeshadriError::Cone(inner) => inner.into(),
            SeshadriError::FatPoints(inner) => inner.into(),
            SeshadriError::Internal(_) => CliError {
                code: "internal",
                message: e.to_string(),
                exit: 3,
            },
        }
    }
}

enum CommandOutput {
    /// Bare value on stdout (lattice calculator).
    Bare(String),
    /// Full report; `config_bytes` feed the input digest when a file was read.
    Report {
        results: Value,
        config_bytes: Option<Vec<u8>>,
    },
}

fn report(results: Value) -> Result<CommandOutput, CliError> {
    Ok(CommandOutput::Report {
        results,
        config_bytes: None,
    })
}

/// FNV-1a 64-bit digest of the argument list plus any configuration file
/// contents, so reports identify their inputs.
fn digest_hex(args: &[String], config_bytes: Option<&[u8]>) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    for a in args {
        eat(a.as_bytes());
        eat(&[0x1f]);
    }
    if let Some(bytes) = config_bytes {
        eat(&[0x1e]);
        eat(bytes);
    }
    format!("fnv1a64:{h:016x}")
}

// ---------------------------------------------------------------------------
// Shared parsing helpers
// ---------------------------------------------------------------------------

fn parse_class(s: &str, r: usize) -> Result<DivisorClass, CliError> {
    let c: DivisorClass = serde_json::from_str(s)
        .map_err(|e| CliError::bad_input(format!("bad divisor class '{s}': {e}")))?;
    if c.r() != r {
        return Err(CliError::bad_input(format!(
            "class {c} has {} multiplicities but r = {r}",
            c.r()
        )));
    }
    Ok(c)
}

fn class_json(c: &DivisorClass) -> Value {
    serde_json::to_value(c).expect("divisor classes serialize")
}

fn classes_json(cs: &[DivisorClass]) -> Value {
    Value::Array(cs.iter().map(class_json).collect())
}

#[derive(Clone, Copy)]
enum FieldChoice {
    Q,
    Fp(u64),
}

fn parse_field_flag(s: &str) -> Result<FieldChoice, CliError> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldChoice::Q);
    }
    let stripped = s.strip_prefix("Fp:").or_else(|| s.strip_prefix("fp:")).unwrap_or(s);
    stripped
        .parse::<u64>()
        .map(FieldChoice::Fp)
        .map_err(|_| CliError::bad_input(format!("bad field '{s}': expected Q or a prime")))
}

/// Point-configuration file: number of variables beyond the first, the
/// coefficient field, homogeneous point coordinates as strings, and
/// multiplicities (defaulting to all 1).
#[derive(Deserialize)]
struct ConfigJson {
    n: usize,
    #[serde(default)]
    field: Option<FieldEntry>,
    points: Vec<Vec<String>>,
    #[serde(default)]
    multiplicities: Option<Vec<u32>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FieldEntry {
    Name(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u64,
    },
}

fn load_config(path: &str) -> Result<(ConfigJson, Vec<u8>), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::bad_input(format!("cannot read config '{path}': {e}")))?;
    let cfg: ConfigJson = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::bad_input(format!("bad config '{path}': {e}")))?;
    if cfg.points.is_empty() {
        return Err(CliError::bad_input("config has no points"));
    }
    Ok((cfg, bytes))
}

/// The configuration file's field wins; the global flag is the fallback;
/// without either, exact rationals.
fn resolve_field(cfg: &ConfigJson, flag: &Option<String>) -> Result<FieldChoice, CliError> {
    if let Some(entry) = &cfg.field {
        return match entry {
            FieldEntry::Name(s) if s.eq_ignore_ascii_case("q") => Ok(FieldChoice::Q),
            FieldEntry::Name(s) => Err(CliError::bad_input(format!(
                "bad field name '{s}' in config: expected \"Q\" or {{\"Fp\": p}}"
            ))),
            FieldEntry::Prime { fp } => Ok(FieldChoice::Fp(*fp)),
        };
    }
    match flag {
        Some(s) => parse_field_flag(s),
        None => Ok(FieldChoice::Q),
    }
}

fn interpolation_prime(flag: &Option<String>) -> Result<u64, CliError> {
    match flag {
        Some(s) => match parse_field_flag(s)? {
            FieldChoice::Fp(p) => Ok(p),
            FieldChoice::Q => Err(CliError::bad_input(
                "interpolation checks need a prime field; pass --field <prime>",
            )),
        },
        None => Ok(DEFAULT_INTERPOLATION_PRIME),
    }
}

fn build_scheme<F: FieldOps>(
    field: F,
    cfg: &ConfigJson,
) -> Result<FatPointScheme<F>, CliError> {
    let mut points = Vec::with_capacity(cfg.points.len());
    for (i, coords) in cfg.points.iter().enumerate() {
        let mut row = Vec::with_capacity(coords.len());
        for s in coords {
            row.push(
                field
                    .parse_elem(s)
                    .map_err(|e| CliError::bad_input(format!("point {i}: {e}")))?,
            );
        }
        points.push(row);
    }
    let mults = cfg
        .multiplicities
        .clone()
        .unwrap_or_else(|| vec![1; cfg.points.len()]);
    Ok(FatPointScheme::new(field, cfg.n, points, mults)?)
}

fn new_prime_field(p: u64) -> Result<PrimeField, CliError> {
    PrimeField::new(p).map_err(CliError::bad_input)
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

fn dispatch(cli: &Cli) -> Result<CommandOutput, CliError> {
    match &cli.command {
        Command::Lattice { op } => lattice_cmd(op),
        Command::Cone { op } => cone_cmd(op),
        Command::Seshadri { op } => match op {
            SeshadriOp::Exact(args) => seshadri_exact_cmd(args),
            SeshadriOp::Bound(args) => bound_cmd(args),
            SeshadriOp::ProveNef(args) => prove_nef_cmd(args, cli),
            SeshadriOp::Nagata(args) => nagata_cmd(args, cli),
            SeshadriOp::Ample(args) => ample_cmd(args),
            SeshadriOp::Lambda(args) => lambda_cmd(args),
        },
        Command::Gamma(args) => gamma_cmd(args),
        Command::Alpha(args) => alpha_cmd(args, cli),
        Command::Reg(args) => reg_cmd(args, cli),
        Command::Containment(args) => containment_cmd(args, cli),
        Command::Resurgence(args) => resurgence_cmd(args, cli),
        Command::Frobenius(args) => frobenius_cmd(args, cli),
        Command::Nagata(args) => nagata_cmd(args, cli),
        Command::ProveNef(args) => prove_nef_cmd(args, cli),
    }
}

fn lattice_cmd(op: &LatticeOp) -> Result<CommandOutput, CliError> {
    match op {
        LatticeOp::Pair { r, a, b } => {
            let ctx = LatticeContext::new(*r);
            let a = parse_class(a, *r)?;
            let b = parse_class(b, *r)?;
            Ok(CommandOutput::Bare(rat_string(&ctx.intersect(&a, &b)?)))
        }
        LatticeOp::Genus { r, c } => {
            let ctx = LatticeContext::new(*r);
            let c = parse_class(c, *r)?;
            Ok(CommandOutput::Bare(ctx.adjunction_genus(&c)?.to_string()))
        }
        LatticeOp::Chi { r, c } => {
            let ctx = LatticeContext::new(*r);
            let c = parse_class(c, *r)?;
            Ok(CommandOutput::Bare(rat_string(&ctx.riemann_roch_chi(&c)?)))
        }
        LatticeOp::Abnormal { r, c } => {
            let ctx = LatticeContext::new(*r);
            let c = parse_class(c, *r)?;
            Ok(CommandOutput::Bare(ctx.is_abnormal(&c)?.to_string()))
        }
    }
}

fn cone_cmd(op: &ConeOp) -> Result<CommandOutput, CliError> {
    match op {
        ConeOp::Gens { tag, r } => {
            let tag = ConfigurationTag::parse(tag)?;
            let desc = cone_generators(tag, *r)?;
            report(json!({
                "tag": desc.tag.to_string(),
                "r": desc.r,
                "effective_generators": classes_json(&desc.effective_generators),
                "nef_generators": classes_json(&desc.nef_generators),
            }))
        }
        ConeOp::Nef { tag, r, c } => {
            let tag = ConfigurationTag::parse(tag)?;
            let c = parse_class(c, *r)?;
            let nef = is_nef(tag, *r, &c)?;
            report(json!({
                "tag": tag.to_string(),
                "r": r,
                "class": class_json(&c),
                "nef": nef,
            }))
        }
        ConeOp::Eff { tag, r, c } => {
            let tag = ConfigurationTag::parse(tag)?;
            let c = parse_class(c, *r)?;
            let membership = decompose_effective(tag, *r, &c)?;
            let (status, certificate, separating) = match membership {
                EffectiveMembership::Certificate(parts) => {
                    let cert: Vec<Value> = parts
                        .iter()
                        .map(|(g, k)| json!([class_json(g), k.to_string()]))
                        .collect();
                    ("member", Value::Array(cert), Value::Null)
                }
                EffectiveMembership::NotInCone { separating_nef } => {
                    ("not-in-cone", Value::Null, class_json(&separating_nef))
                }
                EffectiveMembership::Unresolved => ("unresolved", Value::Null, Value::Null),
            };
            report(json!({
                "tag": tag.to_string(),
                "r": r,
                "class": class_json(&c),
                "status": status,
                "member": status == "member",
                "certificate": certificate,
                "separating_nef": separating,
            }))
        }
        ConeOp::NegOne { r } => {
            let classes = enumerate_neg_one_classes(*r);
            report(json!({
                "r": r,
                "count": classes.len(),
                "classes": classes_json(&classes),
            }))
        }
    }
}

fn parse_config_tag(args: &TagArgs) -> Result<PointConfiguration, CliError> {
    Ok(PointConfiguration::parse(&args.tag, args.r)?)
}

fn value_json(v: &SeshadriValue) -> Value {
    match v {
        SeshadriValue::Exact(x) => json!({ "exact": rat_string(x) }),
        SeshadriValue::Surd { num, den, radicand } => {
            json!({ "surd": { "num": num, "den": den, "radicand": radicand } })
        }
        SeshadriValue::Interval { lower, upper } => {
            json!({ "interval": { "lower": rat_string(lower), "upper": rat_string(upper) } })
        }
    }
}

fn certificate_witnesses(cert: &SeshadriCertificate) -> Value {
    match cert {
        SeshadriCertificate::OrthogonalPair { nef, effective } => json!({
            "nef": class_json(nef),
            "effective": class_json(effective),
        }),
        SeshadriCertificate::AbnormalClass { class } => json!({ "class": class_json(class) }),
        SeshadriCertificate::Unloading { d, r, n, rule } => json!({
            "d": d,
            "r": r,
            "n": n,
            "rule": rule.to_string(),
        }),
        SeshadriCertificate::GeneratorTable | SeshadriCertificate::None => Value::Null,
    }
}

fn seshadri_exact_cmd(args: &TagArgs) -> Result<CommandOutput, CliError> {
    let config = parse_config_tag(args)?;
    let res = epsilon_exact(&config)?;
    let epsilon = res
        .value
        .exact()
        .map(|v| Value::String(rat_string(&v)))
        .unwrap_or(Value::Null);
    report(json!({
        "configuration": config.to_string(),
        "r": config.r(),
        "epsilon": epsilon,
        "value": value_json(&res.value),
        "value_string": res.value.to_string(),
        "certificate": res.certificate.kind(),
        "witnesses": certificate_witnesses(&res.certificate),
    }))
}

fn bound_cmd(args: &BoundArgs) -> Result<CommandOutput, CliError> {
    let search_bound = args.search_bound.unwrap_or_else(|| args.n.max(10));
    let res = epsilon_lower_unloading(args.n, search_bound)?;
    let value = res.value.exact().expect("unloading bounds are exact");
    report(json!({
        "n": args.n,
        "search_bound": search_bound,
        "epsilon_lower": rat_string(&value),
        "certificate": res.certificate.kind(),
        "witnesses": certificate_witnesses(&res.certificate),
    }))
}

fn lambda_cmd(args: &TagArgs) -> Result<CommandOutput, CliError> {
    let config = parse_config_tag(args)?;
    let (value, witness) = lambda_l(&config)?;
    report(json!({
        "configuration": config.to_string(),
        "r": config.r(),
        "lambda": rat_string(&value),
        "witness": class_json(&witness),
    }))
}

fn gamma_cmd(args: &TagArgs) -> Result<CommandOutput, CliError> {
    let config = parse_config_tag(args)?;
    let res = gamma_exact(&config)?;
    report(json!({
        "configuration": config.to_string(),
        "r": config.r(),
        "gamma": rat_string(&res.value),
        "lower_nef": class_json(&res.lower_nef),
        "upper_effective": class_json(&res.upper_effective),
    }))
}

fn outcome_json(outcome: &CandidateOutcome) -> Value {
    match outcome {
        CandidateOutcome::PairingNonNegative { value } => {
            json!({ "step": "pairing", "value": value })
        }
        CandidateOutcome::AdjunctionViolation { value } => {
            json!({ "step": "adjunction", "value": value })
        }
        CandidateOutcome::ReducedToNonEffective { terminal } => {
            json!({ "step": "reduction", "terminal": terminal })
        }
        CandidateOutcome::InterpolationFullRank {
            conditions,
            monomials,
            trials,
        } => json!({
            "step": "interpolation",
            "conditions": conditions,
            "monomials": monomials,
            "trials": trials,
        }),
        CandidateOutcome::Unresolved => json!({ "step": "unresolved" }),
    }
}

fn prove_nef_cmd(args: &ProveNefArgs, cli: &Cli) -> Result<CommandOutput, CliError> {
    let f = parse_class(&args.f, args.r)?;
    let spanning = match args.spanning.as_str() {
        "ladder" => SpanningChoice::Ladder { h0: args.h0 },
        "lines" => {
            if args.h0.is_some() {
                return Err(CliError::bad_input("--h0 only applies to --spanning ladder"));
            }
            SpanningChoice::Lines
        }
        other => {
            return Err(CliError::bad_input(format!(
                "bad spanning '{other}': expected ladder or lines"
            )))
        }
    };
    let exponent = match (&args.s, &args.s_cert) {
        (None, None) => EffectivityExponent::ChiMinimal,
        (Some(s), None) => EffectivityExponent::Explicit {
            s: *s,
            certificate: None,
        },
        (Some(s), Some(cert)) => {
            let parts: Vec<DivisorClass> = serde_json::from_str(cert)
                .map_err(|e| CliError::bad_input(format!("bad --s-cert: {e}")))?;
            EffectivityExponent::Explicit {
                s: *s,
                certificate: Some(parts),
            }
        }
        (None, Some(_)) => {
            return Err(CliError::bad_input("--s-cert requires --s"));
        }
    };
    let options = ProveNefOptions {
        spanning,
        exponent,
        hints: None,
        seed: cli.seed,
        trials: cli.trials,
        prime: interpolation_prime(&cli.field)?,
    };
    let proof = prove_nef(args.r, &f, &options)?;
    for line in &proof.log {
        eprintln!("{line}");
    }
    let candidates: Vec<Value> = proof
        .records
        .iter()
        .map(|rec| {
            json!({
                "d": rec.params.d,
                "m": rec.params.m,
                "k": rec.params.k,
                "class": class_json(&rec.class),
                "outcome": outcome_json(&rec.outcome),
            })
        })
        .collect();
    let post: Vec<Value> = proof
        .post_filter_triples()
        .iter()
        .map(|(d, m, k)| json!([d, m, k]))
        .collect();
    report(json!({
        "f": class_json(&proof.f),
        "r": proof.r,
        "s": proof.s,
        "h0": proof.h0,
        "assumed_effectivity": proof.assumed_effectivity,
        "nef_proved": proof.nef_proved,
        "candidates": candidates,
        "post_filter": post,
        "unresolved": classes_json(&proof.unresolved()),
        "log": proof.log,
    }))
}

fn nagata_cmd(args: &NagataArgs, cli: &Cli) -> Result<CommandOutput, CliError> {
    let prime = interpolation_prime(&cli.field)?;
    let rep = nagata_search(args.r, args.degree_bound, cli.seed, cli.trials, prime)?;
    report(json!({
        "r": rep.r,
        "degree_bound": rep.degree_bound,
        "square_shortcircuit": rep.square_shortcircuit,
        "known_value": rep.known_value.as_ref().map(rat_string),
        "candidates_checked": rep.candidates_checked,
        "adjunction_killed": rep.adjunction_killed,
        "interpolation_killed": rep.interpolation_killed,
        "survivors": classes_json(&rep.survivors),
    }))
}

fn ample_cmd(args: &AmpleArgs) -> Result<CommandOutput, CliError> {
    let f = parse_class(&args.f, args.n)?;
    let search_bound = args.search_bound.unwrap_or_else(|| (args.n as u64).max(10));
    let ev = ample_from_unloading(args.n, &f, search_bound)?;
    let bound_value = ev.bound.value.exact().expect("unloading bounds are exact");
    report(json!({
        "f": class_json(&ev.f),
        "n": ev.n,
        "ample": ev.ample,
        "epsilon_lower": rat_string(&bound_value),
        "bound_witnesses": certificate_witnesses(&ev.bound.certificate),
        "nef_class": class_json(&ev.nef_class),
        "identity": {
            "mu": ev.mu,
            "c": ev.c,
            "excess": ev.excess,
        },
        "f_squared": rat_string(&ev.f_squared),
        "exceptional_pairings": ev
            .exceptional_pairings
            .iter()
            .map(|p| Value::String(rat_string(p)))
            .collect::<Vec<_>>(),
    }))
}

// ---------------------------------------------------------------------------
// Fat-point commands
// ---------------------------------------------------------------------------

fn alpha_cmd(args: &AlphaArgs, cli: &Cli) -> Result<CommandOutput, CliError> {
    let (cfg, bytes) = load_config(&args.config)?;
    let results = match resolve_field(&cfg, &cli.field)? {
        FieldChoice::Q => alpha_results(&build_scheme(RationalField, &cfg)?, args.m)?,
        FieldChoice::Fp(p) => alpha_results(&build_scheme(new_prime_field(p)?, &cfg)?, args.m)?,
    };
    Ok(CommandOutput::Report {
        results,
        config_bytes: Some(bytes),
    })
}

fn alpha_results<F: FieldOps>(
    scheme: &FatPointScheme<F>,
    m: u32,
) -> Result<Value, CliError> {
    let alpha = scheme.alpha_symbolic(m)?;
    Ok(json!({
        "m": m,
        "alpha": alpha,
        "points": scheme.num_points(),
        "scheme_degree": scheme.degree(),
    }))
}

fn reg_cmd(args: &ConfigOnlyArgs, cli: &Cli) -> Result<CommandOutput, CliError> {
    let (cfg, bytes) = load_config(&args.config)?;
    let results = match resolve_field(&cfg, &cli.field)? {
        FieldChoice::Q => reg_results(&build_scheme(RationalField, &cfg)?)?,
        FieldChoice::Fp(p) => reg_results(&build_scheme(new_prime_field(p)?, &cfg)?)?,
    };
    Ok(CommandOutput::Report {
        results,
        config_bytes: Some(bytes),
    })
}

fn reg_results<F: FieldOps>(scheme: &FatPointScheme<F>) -> Result<Value, CliError> {
    let reg = scheme.regularity();
    let alpha = scheme.alpha()?;
    let hf: Vec<usize> = (0..=reg).map(|t| scheme.hilbert_function(t)).collect();
    Ok(json!({
        "regularity": reg,
        "alpha": alpha,
        "scheme_degree": scheme.degree(),
        "hilbert_function": hf,
    }))
}

fn containment_json(c: &Containment, bh: Option<&BhOutcome>) -> Value {
    let mut obj = Map::new();
    obj.insert("m".into(), json!(c.m));
    obj.insert("r".into(), json!(c.r));
    obj.insert("contained".into(), json!(c.contained));
    obj.insert("rule".into(), json!(c.rule.as_str()));
    obj.insert("checked_degrees".into(), json!(c.checked_degrees));
    obj.insert("first_failing_degree".into(), json!(c.first_failing_degree));
    obj.insert("witness".into(), json!(c.witness));
    if let Some(bh) = bh {
        let detail = match bh {
            BhOutcome::FailsByAlpha {
                alpha_symbolic,
                r_alpha,
            } => json!({
                "outcome": bh.as_str(),
                "alpha_symbolic": alpha_symbolic,
                "r_alpha": r_alpha,
            }),
            BhOutcome::HoldsByReg {
                r_reg,
                alpha_symbolic,
            } => json!({
                "outcome": bh.as_str(),
                "r_reg": r_reg,
                "alpha_symbolic": alpha_symbolic,
            }),
            BhOutcome::Indeterminate {
                alpha_symbolic,
                r_alpha,
                r_reg,
            } => json!({
                "outcome": bh.as_str(),
                "alpha_symbolic": alpha_symbolic,
                "r_alpha": r_alpha,
                "r_reg": r_reg,
            }),
        };
        obj.insert("bh".into(), detail);
    }
    Value::Object(obj)
}

fn containment_cmd(args: &ContainmentArgs, cli: &Cli) -> Result<CommandOutput, CliError> {
    let (cfg, bytes) = load_config(&args.config)?;
    let results = match resolve_field(&cfg, &cli.field)? {
        FieldChoice::Q => {
            containment_results(&build_scheme(RationalField, &cfg)?, args.m, args.r)?
        }
        FieldChoice::Fp(p) => {
            containment_results(&build_scheme(new_prime_field(p)?, &cfg)?, args.m, args.r)?
        }
    };
    Ok(CommandOutput::Report {
        results,
        config_bytes: Some(bytes),
    })
}

fn containment_results<F: FieldOps>(
    scheme: &FatPointScheme<F>,
    m: u32,
    r: u32,
) -> Result<Value, CliError> {
    let (direct, bh) = scheme.containment_with_consistency(m, r)?;
    Ok(containment_json(&direct, Some(&bh)))
}

fn resurgence_cmd(args: &ResurgenceArgs, cli: &Cli) -> Result<CommandOutput, CliError> {
    let (cfg, bytes) = load_config(&args.config)?;
    let eps = match &args.eps {
        Some(s) => Some(parse_rat(s).map_err(|e| CliError::bad_input(format!("bad --eps: {e}")))?),
        None => None,
    };
    let results = match resolve_field(&cfg, &cli.field)? {
        FieldChoice::Q => {
            resurgence_results(&build_scheme(RationalField, &cfg)?, args.m_max, eps.as_ref())?
        }
        FieldChoice::Fp(p) => resurgence_results(
            &build_scheme(new_prime_field(p)?, &cfg)?,
            args.m_max,
            eps.as_ref(),
        )?,
    };
    Ok(CommandOutput::Report {
        results,
        config_bytes: Some(bytes),
    })
}

fn resurgence_results<F: FieldOps>(
    scheme: &FatPointScheme<F>,
    m_max: u32,
    eps: Option<&crate::rat::Rat>,
) -> Result<Value, CliError> {
    let est = scheme.waldschmidt_estimate(m_max, eps)?;
    let (lo, hi) = scheme.resurgence_bounds(&est.lower, &est.upper)?;
    let samples: Vec<Value> = est
        .samples
        .iter()
        .map(|s| {
            json!({
                "m": s.m,
                "alpha": s.alpha,
                "ratio": rat_string(&s.ratio),
            })
        })
        .collect();
    let rho = if lo == hi {
        Value::String(rat_string(&lo))
    } else {
        Value::Null
    };
    Ok(json!({
        "m_max": m_max,
        "alpha": scheme.alpha()?,
        "regularity": scheme.regularity(),
        "samples": samples,
        "waldschmidt": {
            "lower": rat_string(&est.lower),
            "upper": rat_string(&est.upper),
        },
        "resurgence": {
            "lower": rat_string(&lo),
            "upper": rat_string(&hi),
        },
        "rho": rho,
    }))
}

fn frobenius_cmd(args: &FrobeniusArgs, cli: &Cli) -> Result<CommandOutput, CliError> {
    let (cfg, bytes) = load_config(&args.config)?;
    let results = match resolve_field(&cfg, &cli.field)? {
        FieldChoice::Q => {
            return Err(CliError::bad_input(
                "frobenius containment needs positive characteristic; use an Fp config",
            ))
        }
        FieldChoice::Fp(p) => {
            let scheme = build_scheme(new_prime_field(p)?, &cfg)?;
            let c = scheme.frobenius_containment_check(args.q)?;
            let mut v = containment_json(&c, None);
            if let Value::Object(obj) = &mut v {
                obj.insert("q".into(), json!(args.q));
                obj.insert("characteristic".into(), json!(p));
            }
            v
        }
    };
    Ok(CommandOutput::Report {
        results,
        config_bytes: Some(bytes),
    })
}
