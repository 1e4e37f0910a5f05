use std::collections::BTreeMap;
use std::ffi::OsString;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rpp_core::cayley::{
    confinement_probability, lambda, lambda_by_characters, lambda_numeric, random_walk, walk_endpoints, CayleyGraph,
};
use rpp_core::group::{dimension, distance_to_subgroup, feasibility_check, GroupSpec, Subgroup, Tuple};
use rpp_core::perm::{coset_prefix_count, schreier_sims, PermGroup, Permutation};
use rpp_core::smallbias::{construct_for_group, measure_bias, BiasedSpace, BIAS_TOLERANCE};
use rpp_core::solver::{solve, verify_solution, Mode, RppInstance, SolveOptions, Strategy};
use serde_json::{json, Value};

use crate::input::{default_cap, parse_group, parse_ratio, parse_tuple, read_json};
use crate::manifest::RunManifest;
use crate::suite::{self, Profile};

#[derive(Parser, Debug)]
#[command(name = "rpp", version, about = "Remote points in finite groups G^n")]
struct Cli {
    /// Write a run manifest (command line, seed, digests) to this path.
    #[arg(long, global = true)]
    manifest: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Arithmetic and Hamming geometry in G^n.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Permutation groups via Schreier-Sims.
    #[command(subcommand)]
    Perm(PermCmd),
    /// ε-biased multisets.
    #[command(subcommand)]
    Smallbias(SmallbiasCmd),
    /// Cayley graph spectra and random walks.
    #[command(subcommand)]
    Cayley(CayleyCmd),
    /// Solve and verify remote point instances.
    #[command(subcommand)]
    Rpp(RppCmd),
    /// Property suites.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    /// Order, kind and generators of a group.
    Info {
        /// `Z6`, `Z2+Z4`, `S3`, or a group JSON (inline or file).
        #[arg(long)]
        group: String,
    },
    /// Coordinatewise product of two tuples.
    Mul {
        /// `Z6`, `Z2+Z4`, `S3`, or a group JSON (inline or file).
        #[arg(long)]
        group: String,
        /// Tuple: `0101`, `0,1,0,1` or `[0,1,0,1]`.
        #[arg(long)]
        a: String,
        /// Tuple: `0101`, `0,1,0,1` or `[0,1,0,1]`.
        #[arg(long)]
        b: String,
    },
    /// Order and dimension of a subgroup.
    Dimension {
        /// `Z6`, `Z2+Z4`, `S3`, or a group JSON (inline or file).
        #[arg(long)]
        group: String,
        /// Generator list such as `[[1,1,0]]`, or a subgroup JSON (inline or file).
        #[arg(long)]
        subgroup: String,
    },
    /// Exact distance from a tuple to a subgroup by enumeration.
    Distance {
        /// `Z6`, `Z2+Z4`, `S3`, or a group JSON (inline or file).
        #[arg(long)]
        group: String,
        /// Generator list such as `[[1,1,0]]`, or a subgroup JSON (inline or file).
        #[arg(long)]
        subgroup: String,
        /// Tuple: `0101`, `0,1,0,1` or `[0,1,0,1]`.
        #[arg(long)]
        x: String,
        /// Enumeration cap; defaults to $RPP_CAP or the library default.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Counting-argument feasibility of a remote point.
    Feasibility {
        /// `Z6`, `Z2+Z4`, `S3`, or a group JSON (inline or file).
        #[arg(long)]
        group: String,
        /// Number of coordinates.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0.01)]
        slack: f64,
    },
}

#[derive(Args, Debug)]
struct PermGens {
    /// JSON list of image arrays, inline or as a file.
    #[arg(long)]
    gens: String,
    /// Degree, needed only when there are no generators.
    #[arg(long)]
    degree: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum PermCmd {
    /// Group order, base and strong generators.
    Order(PermGens),
    /// Membership of a permutation.
    Member {
        #[command(flatten)]
        gens: PermGens,
        #[arg(long)]
        perm: String,
    },
    /// Pointwise stabilizer of a list of points.
    Stab {
        #[command(flatten)]
        gens: PermGens,
        #[arg(long)]
        points: String,
    },
    /// Number of elements of a subgroup of G^n extending a prefix.
    Cosetcount {
        /// `Z6`, `Z2+Z4`, `S3`, or a group JSON (inline or file).
        #[arg(long)]
        group: String,
        /// Generator list such as `[[1,1,0]]`, or a subgroup JSON (inline or file).
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        prefix: String,
    },
}

#[derive(Subcommand, Debug)]
enum SmallbiasCmd {
    /// Construct an ε-biased multiset in G^n.
    Gen {
        /// `Z6`, `Z2+Z4`, `S3`, or a group JSON (inline or file).
        #[arg(long)]
        group: String,
        /// Number of coordinates.
        #[arg(long)]
        n: usize,
        /// Target bias: `1/4`, `0.25`, ...
        #[arg(long)]
        eps: String,
    },
    /// Recompute the bias of a multiset exhaustively.
    Verify {
        /// Biased space JSON (inline or file), as printed by `smallbias gen`.
        #[arg(long)]
        space: String,
        /// Target to check against; defaults to the space's own target.
        #[arg(long)]
        eps: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LambdaMethod {
    Auto,
    Character,
    Numeric,
}

#[derive(Subcommand, Debug)]
enum CayleyCmd {
    /// Normalized second eigenvalue of C(G^n, S).
    Lambda {
        /// Biased space JSON (inline or file), as printed by `smallbias gen`.
        #[arg(long)]
        space: String,
        #[arg(long, value_enum, default_value = "auto")]
        method: LambdaMethod,
    },
    /// Seeded random walks of length t.
    Walk {
        /// Biased space JSON (inline or file), as printed by `smallbias gen`.
        #[arg(long)]
        space: String,
        /// Walk length.
        #[arg(long)]
        t: usize,
        /// Number of independent walks.
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Probability that a walk stays in a coset `x·H`.
    Confine {
        /// Biased space JSON (inline or file), as printed by `smallbias gen`.
        #[arg(long)]
        space: String,
        /// Generator list such as `[[1,1,0]]`, or a subgroup JSON (inline or file).
        #[arg(long)]
        subgroup: String,
        /// Coset representative; the identity when omitted.
        #[arg(long)]
        coset: Option<String>,
        /// Walk length.
        #[arg(long)]
        t: usize,
        /// Sampled walks in addition to the exact value; 0 for exact only.
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Auto,
    #[value(alias = "hitting")]
    AbelianHitting,
    #[value(alias = "greedy")]
    GeneralGreedy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Auto,
    HalfDim,
    GeneralK,
}

#[derive(Subcommand, Debug)]
enum RppCmd {
    /// Find x with Δ(x, H) > r and verify it.
    Solve {
        /// Instance JSON (inline or file).
        #[arg(long)]
        instance: String,
        /// Overrides the instance's mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
        /// Constant of the cover and block sizes, e.g. 1/4.
        #[arg(long)]
        c: Option<String>,
        /// Recorded in the manifest; the solvers are deterministic.
        #[arg(long)]
        seed: Option<u64>,
        /// Largest |H| for the exact distance check.
        /// Enumeration cap; defaults to $RPP_CAP or the library default.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Re-check a solution's certificate and, when |H| ≤ cap, its distance.
    Verify {
        /// Instance JSON (inline or file).
        #[arg(long)]
        instance: String,
        /// Solution JSON (inline or file), as printed by `rpp solve`.
        #[arg(long)]
        solution: String,
        /// Enumeration cap; defaults to $RPP_CAP or the library default.
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum SuiteCmd {
    /// Run the property suites and print a summary.
    Run {
        /// Reduced instance counts; runs in well under a minute.
        /// Reduced instance counts; runs in well under a minute.
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        /// Standard sizes plus large eigensolve cross-checks.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Comma-separated item ids; all items when omitted.
        #[arg(long, value_delimiter = ',')]
        items: Vec<u32>,
    },
}

/// Result of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// A result that ran to completion but did not check out.
#[derive(Debug)]
struct Failed(Value);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "check failed")
    }
}

impl std::error::Error for Failed {}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn error_json(kind: &str, detail: String) -> String {
    pretty(&json!({ "error": kind, "detail": detail }))
}

fn classify(err: &anyhow::Error) -> (u8, &'static str) {
    use rpp_core::Error as E;
    if err.downcast_ref::<Failed>().is_some() {
        return (1, "verification_failed");
    }
    match err.downcast_ref::<E>() {
        Some(E::VerificationFailed(_)) => (1, "verification_failed"),
        Some(E::InvalidGroup(_) | E::InvalidElement(_) | E::DimensionMismatch { .. } | E::Parameter(_) | E::NotPrime(_)) => {
            (2, "invalid_input")
        }
        Some(E::NotAbelian) => (1, "not_abelian"),
        Some(E::NotSymmetric) => (2, "not_symmetric"),
        Some(E::CapExceeded { .. }) => (1, "cap_exceeded"),
        Some(E::TooLarge(_)) => (1, "too_large"),
        Some(E::BiasTooHigh { .. }) => (1, "bias_too_high"),
        Some(E::RegimeViolation(_)) => (1, "regime_violation"),
        Some(E::NoHit) => (1, "no_hit"),
        Some(E::EstimatorStuck { .. }) => (1, "estimator_stuck"),
        None => (2, "invalid_input"),
    }
}

/// Parse `argv` and run the command. JSON goes to `stdout`; errors are
/// `{error, detail}` objects. Exit codes: 0 success, 1 failed check or
/// solver error, 2 usage or input error.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: error_json("usage", e.kind().to_string()),
                    stderr: text,
                },
            };
        }
    };
    let start = Instant::now();
    let seed = match &cli.command {
        Command::Suite(SuiteCmd::Run { seed, .. }) => Some(*seed),
        Command::Cayley(CayleyCmd::Walk { seed, .. } | CayleyCmd::Confine { seed, .. }) => Some(*seed),
        Command::Rpp(RppCmd::Solve { seed, .. }) => *seed,
        _ => None,
    };
    let mut outcome = match run(cli.command) {
        Ok(v) => Outcome {
            code: 0,
            stdout: pretty(&v),
            stderr: String::new(),
        },
        Err(err) => match err.downcast::<Failed>() {
            Ok(Failed(v)) => Outcome {
                code: 1,
                stdout: pretty(&v),
                stderr: String::new(),
            },
            Err(err) => {
                let (code, kind) = classify(&err);
                Outcome {
                    code,
                    stdout: error_json(kind, format!("{err:#}")),
                    stderr: String::new(),
                }
            }
        },
    };
    if let Some(path) = cli.manifest {
        let command_line = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        let m = RunManifest::new(command_line, &path, seed, &outcome.stdout, start.elapsed().as_millis() as u64);
        let text = serde_json::to_string_pretty(&m).expect("serializable");
        if let Err(e) = std::fs::write(&path, text + "\n") {
            outcome.stderr.push_str(&format!("cannot write manifest {path}: {e}\n"));
        }
    }
    outcome
}

fn run(cmd: Command) -> Result<Value> {
    match cmd {
        Command::Group(c) => group_cmd(c),
        Command::Perm(c) => perm_cmd(c),
        Command::Smallbias(c) => smallbias_cmd(c),
        Command::Cayley(c) => cayley_cmd(c),
        Command::Rpp(c) => rpp_cmd(c),
        Command::Suite(c) => suite_cmd(c),
    }
}

/// A subgroup object, or a bare nonempty list of generator tuples.
fn subgroup_for(group: &GroupSpec, arg: &str) -> Result<Subgroup> {
    let h = match read_json::<Value>(arg)? {
        Value::Array(items) => {
            let gens: Vec<Tuple> = serde_json::from_value(Value::Array(items))?;
            let n = gens.first().map(Tuple::len).ok_or_else(|| rpp_core::Error::Parameter("empty generator list needs the subgroup form with n".into()))?;
            Subgroup::new(n, gens)
        }
        other => serde_json::from_value(other)?,
    };
    h.validate(group)?;
    Ok(h)
}

fn group_cmd(cmd: GroupCmd) -> Result<Value> {
    match cmd {
        GroupCmd::Info { group } => {
            let g = parse_group(&group)?;
            Ok(json!({
                "group": g,
                "order": g.order(),
                "abelian": g.is_commutative(),
                "invariant_factors": g.invariant_factors(),
                "identity": g.identity(),
                "generators": g.generators(),
            }))
        }
        GroupCmd::Mul { group, a, b } => {
            let g = parse_group(&group)?;
            Ok(json!({ "product": g.mul(&parse_tuple(&a)?, &parse_tuple(&b)?)? }))
        }
        GroupCmd::Dimension { group, subgroup } => {
            let g = parse_group(&group)?;
            let h = subgroup_for(&g, &subgroup)?;
            let d = dimension(&g, &h)?;
            Ok(json!({ "order": exact_integer(&d.order), "delta": d.delta, "exact": d.exact }))
        }
        GroupCmd::Distance { group, subgroup, x, cap } => {
            let g = parse_group(&group)?;
            let h = subgroup_for(&g, &subgroup)?;
            let d = distance_to_subgroup(&g, &parse_tuple(&x)?, &h, cap.unwrap_or_else(default_cap))?;
            Ok(json!({ "distance": d }))
        }
        GroupCmd::Feasibility { group, n, k, r, slack } => {
            let g = parse_group(&group)?;
            Ok(serde_json::to_value(feasibility_check(n, k, r, slack, g.order())?)?)
        }
    }
}

fn perm_group(gens: &PermGens) -> Result<PermGroup> {
    let perms: Vec<Permutation> = read_json(&gens.gens)?;
    let degree = match (perms.first(), gens.degree) {
        (Some(p), _) => p.degree(),
        (None, Some(d)) => d,
        (None, None) => bail!(rpp_core::Error::Parameter("--degree is required without generators".into())),
    };
    Ok(schreier_sims(degree, &perms, None)?)
}

fn perm_summary(g: &PermGroup) -> Value {
    json!({
        "degree": g.degree(),
        "order": exact_integer(&g.order()),
        "base": g.base(),
        "strong_generators": g.strong_generators(),
    })
}

fn perm_cmd(cmd: PermCmd) -> Result<Value> {
    match cmd {
        PermCmd::Order(gens) => Ok(perm_summary(&perm_group(&gens)?)),
        PermCmd::Member { gens, perm } => {
            let g = perm_group(&gens)?;
            let p: Permutation = read_json(&perm)?;
            Ok(json!({ "member": g.member(&p)? }))
        }
        PermCmd::Stab { gens, points } => {
            let g = perm_group(&gens)?;
            let pts: Vec<usize> = read_json(&points)?;
            Ok(perm_summary(&g.pointwise_stabilizer(&pts)?))
        }
        PermCmd::Cosetcount { group, subgroup, prefix } => {
            let g = parse_group(&group)?;
            let h = subgroup_for(&g, &subgroup)?;
            let count = coset_prefix_count(&g, &h, &parse_tuple(&prefix)?)?;
            Ok(json!({ "count": exact_integer(&count) }))
        }
    }
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn smallbias_cmd(cmd: SmallbiasCmd) -> Result<Value> {
    match cmd {
        SmallbiasCmd::Gen { group, n, eps } => {
            let g = parse_group(&group)?;
            let space = construct_for_group(&g, n, parse_ratio(&eps)?)?;
            Ok(serde_json::to_value(&space)?)
        }
        SmallbiasCmd::Verify { space, eps } => {
            let s: BiasedSpace = read_json(&space)?;
            let target = match eps {
                Some(e) => Some(parse_ratio(&e)?),
                None => s.target_epsilon,
            };
            let bias = measure_bias(&s)?;
            let within = target.map(|t| bias <= ratio_f64(t) + BIAS_TOLERANCE);
            let report = json!({
                "size": s.size(),
                "distinct": s.distinct(),
                "symmetric": s.is_symmetric(),
                "measured_bias": bias,
                "target_epsilon": target.map(|t| t.to_string()),
                "within_target": within,
            });
            if within == Some(false) {
                return Err(Failed(report).into());
            }
            Ok(report)
        }
    }
}

fn cayley_cmd(cmd: CayleyCmd) -> Result<Value> {
    match cmd {
        CayleyCmd::Lambda { space, method } => {
            let g = CayleyGraph::new(read_json(&space)?)?;
            let report = match method {
                LambdaMethod::Auto => lambda(&g)?,
                LambdaMethod::Character => lambda_by_characters(&g)?,
                LambdaMethod::Numeric => lambda_numeric(&g)?,
            };
            Ok(json!({ "degree": g.degree(), "vertices": g.vertex_count(), "report": report }))
        }
        CayleyCmd::Walk { space, t, trials, seed } => {
            let g = CayleyGraph::new(read_json(&space)?)?;
            let first = random_walk(&g, t, seed);
            let mut endpoints: BTreeMap<String, u64> = BTreeMap::new();
            for x in walk_endpoints(&g, t, trials, seed) {
                *endpoints.entry(serde_json::to_string(&x)?).or_default() += 1;
            }
            Ok(json!({ "t": t, "trials": trials, "seed": seed, "first_walk": first, "endpoint_counts": endpoints }))
        }
        CayleyCmd::Confine { space, subgroup, coset, t, trials, seed } => {
            let g = CayleyGraph::new(read_json(&space)?)?;
            let group = g.group().clone();
            let h = subgroup_for(&group, &subgroup)?;
            if h.n != g.n() {
                bail!(rpp_core::Error::DimensionMismatch { expected: g.n(), got: h.n });
            }
            let chain = rpp_core::perm::SubgroupChain::new(&group, &h)?;
            let rep = match coset {
                Some(c) => parse_tuple(&c)?,
                None => group.identity_tuple(g.n()),
            };
            group.check_tuple(&rep)?;
            let rep_inv = group.inv(&rep);
            let inside = |x: &Tuple| chain.contains(&group.mul_unchecked(&rep_inv, x));
            let report = confinement_probability(&g, &inside, t, trials, seed)?;
            let respects = report.respects_bound();
            Ok(json!({
                "report": report,
                // The exact value wins when the graph is small enough.
                "estimate": report.exact.or(report.monte_carlo.as_ref().map(|m| m.estimate)),
                "estimate_source": if report.exact.is_some() { "exact" } else { "monte_carlo" },
                "interval": report.monte_carlo.as_ref().map(|m| [m.lower, m.upper]),
                "reference_bound": report.bound,
                "respects_bound": respects,
            }))
        }
    }
}

fn rpp_cmd(cmd: RppCmd) -> Result<Value> {
    match cmd {
        RppCmd::Solve { instance, mode, strategy, c, seed: _, cap } => {
            let mut inst: RppInstance = read_json(&instance)?;
            if let Some(m) = mode {
                inst.mode = match m {
                    ModeArg::Auto => Mode::Auto,
                    ModeArg::AbelianHitting => Mode::AbelianHitting,
                    ModeArg::GeneralGreedy => Mode::GeneralGreedy,
                };
            }
            let opts = SolveOptions {
                c: c.as_deref().map(parse_ratio).transpose()?,
                strategy: match strategy {
                    StrategyArg::Auto => Strategy::Auto,
                    StrategyArg::HalfDim => Strategy::HalfDim,
                    StrategyArg::GeneralK => Strategy::GeneralK,
                },
                ..SolveOptions::default()
            };
            let mut sol = solve(&inst, &opts)?;
            let report = verify_solution(&inst, &sol, cap.unwrap_or_else(default_cap))?;
            sol.verified_distance = report.distance;
            let mut out = serde_json::to_value(&sol)?;
            out["params"] = json!({
                "mode": inst.mode,
                "strategy": opts.strategy,
                "c": opts.c.map(|c| c.to_string()),
                "r": inst.r,
            });
            Ok(out)
        }
        RppCmd::Verify { instance, solution, cap } => {
            let inst: RppInstance = read_json(&instance)?;
            let sol = read_json(&solution)?;
            Ok(serde_json::to_value(verify_solution(&inst, &sol, cap.unwrap_or_else(default_cap))?)?)
        }
    }
}

fn suite_cmd(cmd: SuiteCmd) -> Result<Value> {
    let SuiteCmd::Run { quick, full, seed, items } = cmd;
    let profile = match (quick, full) {
        (true, _) => Profile::Quick,
        (_, true) => Profile::Full,
        _ => Profile::Standard,
    };
    let ids = if items.is_empty() { suite::ITEM_IDS.to_vec() } else { items };
    if let Some(bad) = ids.iter().find(|i| !suite::ITEM_IDS.contains(i)) {
        bail!(rpp_core::Error::Parameter(format!("unknown suite item {bad}")));
    }
    let summary = suite::run(profile, seed, &ids, |item, elapsed| {
        eprintln!(
            "item {:>2} {:<26} {} ({:.1} s)",
            item.id,
            item.name,
            if item.passed { "pass" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    });
    let value = serde_json::to_value(&summary)?;
    if summary.passed {
        Ok(value)
    } else {
        Err(Failed(value).into())
    }
}

/// Convert an exact integer to JSON, as a string beyond 2^53.
pub fn exact_integer(v: &num_bigint::BigUint) -> Value {
    match v.to_u64().filter(|&x| x < 1 << 53) {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}
