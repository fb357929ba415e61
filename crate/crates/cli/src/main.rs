//! `ramsey-mult` command-line front end.
//!
//! Exit codes: 0 when the computation finished and the checked claim holds,
//! 1 when it finished and the claim fails, 2 when nothing could be computed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use ramsey_mult::additive_search::{export_cnf_to_path, find_threshold, AdditiveSystem, SystemKind};
use ramsey_mult::constructions::{build_named_runs, build_omega, lift_runs, LiftSpec, Named, RunColouring};
use ramsey_mult::counting::{count_solutions_with, CountQuery};
use ramsey_mult::exec::with_jobs;
use ramsey_mult::real_intervals::{certify_interval_lower_bound, RationalIntervalColouring, SumFreeOutcome};
use ramsey_mult::verify::{
    auxiliary_t, check_witness, find_in_pattern_m, find_in_pattern_m_general, minimize, stability_check,
    verify_lemma31, PatternM, StabilityStatus, DEFAULT_BUDGET,
};
use ramsey_mult::{parse_colouring, DiscreteColouring, EquationSpec, Exec};

#[derive(Parser, Debug)]
#[command(name = "ramsey-mult", version, about = "Monochromatic solutions of multiplicative equations")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "RAMSEY_MULT_JOBS")]
    jobs: Option<usize>,
    /// Write the canonical JSON result to PATH, or to standard output when no
    /// path is given.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "-", value_name = "PATH")]
    json: Option<String>,
    /// Write a run manifest (arguments, seed, versions, wall time, digest).
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count (monochromatic) solutions over an interval.
    Count(CountArgs),
    /// Build a named construction, a lift of a real template, or an Omega colouring.
    Construct(ConstructArgs),
    /// Schur, shifted Schur and Rado numbers by exhaustive search.
    Search(SearchArgs),
    /// Decide whether a rational interval colouring is solution-free.
    IntervalCheck(IntervalArgs),
    /// Executable pattern lemmas.
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
    /// Exact minimum number of monochromatic solutions over all colourings.
    Minimize(MinimizeArgs),
    /// Stability check for a 2-colouring of [2, N].
    Stability(StabilityArgs),
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long, default_value = "1,1")]
    eq: EquationSpec,
    /// Inclusive range `lo..hi`.
    #[arg(long, value_parser = parse_range)]
    range: (u64, u64),
    #[arg(long)]
    colouring: Option<PathBuf>,
    #[arg(long)]
    non_degenerate: bool,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, conflicts_with_all = ["lift", "omega"])]
    name: Option<Named>,
    /// Real template JSON: a list of {lo, hi, colour} pieces.
    #[arg(long, value_name = "TEMPLATE.json", conflicts_with = "omega")]
    lift: Option<PathBuf>,
    /// Threshold for the lift; defaults to the least M with M^T >= N.
    #[arg(long, requires = "lift")]
    m: Option<u64>,
    /// Colour word indexed from 1, applied to the number of prime factors.
    #[arg(long, value_name = "WORD")]
    omega: Option<String>,
    #[arg(long)]
    n: u64,
    /// Write the colouring in the text format.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    system: SystemKind,
    #[arg(long)]
    eq: Option<EquationSpec>,
    #[arg(long)]
    colours: u8,
    #[arg(long, default_value_t = 127)]
    limit: u64,
    /// Include every extremal colouring in the report.
    #[arg(long)]
    enumerate_extremals: bool,
    /// Export the DIMACS CNF of `[N]`, with N the threshold unless `--cnf-n` is set.
    #[arg(long, value_name = "PATH")]
    cnf: Option<PathBuf>,
    #[arg(long, requires = "cnf")]
    cnf_n: Option<u64>,
}

#[derive(Args, Debug)]
struct IntervalArgs {
    #[arg(long, default_value = "1,1")]
    eq: EquationSpec,
    #[arg(long)]
    template: PathBuf,
    /// Colours allowed in the certificate; defaults to the template's.
    #[arg(long)]
    colours: Option<u8>,
    #[arg(long, value_name = "PATH")]
    certify: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Exhaustive check over the 2-colourings of T_{a,l,k}.
    Lemma31 {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        k: u64,
    },
    /// Runs the pattern finder on random colourings and re-verifies every witness.
    PatternM(PatternArgs),
}

#[derive(Args, Debug)]
struct PatternArgs {
    #[arg(long, default_value_t = 3)]
    b: u64,
    #[arg(long)]
    s: u32,
    #[arg(long)]
    w: u32,
    #[arg(long, default_value_t = 2)]
    colours: u8,
    /// Equation for the general finder; `1,1` uses the product-Schur finder.
    #[arg(long, default_value = "1,1")]
    eq: EquationSpec,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct MinimizeArgs {
    #[arg(long, default_value = "1,1")]
    eq: EquationSpec,
    #[arg(long)]
    colours: u8,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    #[arg(long)]
    colouring: PathBuf,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let lo = lo.trim().parse().map_err(|_| format!("bad lower end {lo:?}"))?;
    let hi = hi.trim().trim_start_matches('=').parse().map_err(|_| format!("bad upper end {hi:?}"))?;
    Ok((lo, hi))
}

/// Outcome of one subcommand: a human summary, the JSON result and whether the
/// checked claim held.
struct Outcome {
    text: String,
    result: Value,
    holds: bool,
    seed: Option<u64>,
}

impl Outcome {
    fn ok(text: String, result: Value) -> Self {
        Self { text, result, holds: true, seed: None }
    }
}

/// Could not compute: reported with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    Ok(serde_json::to_value(v)?)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_colouring(path: &Path) -> Result<DiscreteColouring, Failure> {
    parse_colouring(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// Sorted keys (serde_json's default map is ordered), two-space indent, LF.
fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn run_count(a: &CountArgs, exec: Exec) -> Result<Outcome, Failure> {
    let (lo, hi) = a.range;
    let colouring = a.colouring.as_deref().map(read_colouring).transpose()?;
    let mut q = CountQuery::new(a.eq.clone(), lo, hi).non_degenerate(a.non_degenerate);
    if let Some(c) = &colouring {
        q = q.with_colouring(c);
    }
    let report = count_solutions_with(&q, exec)?;
    let text = format!(
        "eq {} on [{lo}, {hi}]{}: total {}, non-degenerate {}",
        a.eq,
        if colouring.is_some() { " (monochromatic)" } else { "" },
        report.total,
        report.non_degenerate
    );
    let result = json!({
        "eq": a.eq,
        "lo": lo,
        "hi": hi,
        "coloured": colouring.is_some(),
        "non_degenerate_only": a.non_degenerate,
        "total": report.total,
        "non_degenerate": report.non_degenerate,
        "per_colour": to_value(&report.per_colour)?,
    });
    Ok(Outcome::ok(text, result))
}

fn write_colouring(runs: &RunColouring, out: Option<&Path>) -> Result<(), Failure> {
    if let Some(path) = out {
        let text = runs.to_dense().to_text()?;
        fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn run_construct(a: &ConstructArgs, exec: Exec) -> Result<Outcome, Failure> {
    let (label, runs) = if let Some(name) = a.name {
        (name.to_string(), build_named_runs(name, a.n)?)
    } else if let Some(path) = &a.lift {
        let xi = RationalIntervalColouring::from_json(&read(path)?)?;
        let spec = match a.m {
            Some(m) => LiftSpec::new(xi, m, a.n),
            None => LiftSpec::with_default_threshold(xi, a.n),
        };
        (format!("lift (M = {})", spec.m), lift_runs(&spec)?)
    } else if let Some(word) = &a.omega {
        let letters = word.chars().collect::<std::collections::BTreeSet<_>>().len() as u8;
        let xi = DiscreteColouring::from_word(1, letters.max(1), word)?;
        (format!("omega {word}"), RunColouring::from(&build_omega(&xi, a.n)?))
    } else {
        return Err(Failure("one of --name, --lift or --omega is required".into()));
    };
    write_colouring(&runs, a.out.as_deref())?;
    let report = runs.count_xy(exec);
    let text = format!(
        "{label} on [{}, {}] with {} colours in {} runs: {} monochromatic xy = z ({} non-degenerate)",
        runs.lo(),
        runs.hi(),
        runs.r(),
        runs.runs().len(),
        report.total,
        report.non_degenerate
    );
    let result = json!({
        "construction": label,
        "lo": runs.lo(),
        "hi": runs.hi(),
        "r": runs.r(),
        "runs": runs.runs(),
        "monochromatic": report.total,
        "non_degenerate": report.non_degenerate,
        "per_colour": to_value(&report.per_colour)?,
    });
    Ok(Outcome::ok(text, result))
}

fn run_search(a: &SearchArgs, exec: Exec) -> Result<Outcome, Failure> {
    let system = AdditiveSystem::from_kind(a.system, a.eq.clone())?;
    let mut report = find_threshold(&system, a.colours, a.limit, exec)?;
    if !a.enumerate_extremals {
        report.extremals = None;
    }
    let mut text = format!(
        "{system}, r = {}: threshold {} ({} extremal colourings of [{}] up to permutation, {} raw), {} nodes",
        a.colours,
        report.threshold,
        report.extremal_count,
        report.threshold - 1,
        report.raw_extremal_count,
        report.nodes_visited
    );
    if let Some(ex) = &report.extremals {
        for c in ex {
            text.push_str(&format!("\n  {}", c.to_word()));
        }
    }
    let mut result = to_value(&report)?;
    if let Some(path) = &a.cnf {
        let n = a.cnf_n.unwrap_or(report.threshold);
        let stats = export_cnf_to_path(&system, a.colours, n, path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        text.push_str(&format!("\nCNF for N = {n}: {} variables, {} clauses", stats.variables, stats.clauses));
        result["cnf"] = json!({ "n": n, "variables": stats.variables, "clauses": stats.clauses });
    }
    Ok(Outcome::ok(text, result))
}

fn run_interval(a: &IntervalArgs) -> Result<Outcome, Failure> {
    let col = RationalIntervalColouring::from_json(&read(&a.template)?)?;
    let r = a.colours.unwrap_or(col.r());
    let cert = certify_interval_lower_bound(&a.eq, r, &col);
    if let Some(path) = &a.certify {
        let text = canonical(&to_value(&cert)?);
        fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    let text = match &cert.witness {
        None if cert.verified => format!("{col}\nfree for eq {}: I_eq({r}) >= {}", a.eq, cert.bound),
        None => format!("{col}\nfree for eq {}, but uses {} > {r} colours", a.eq, col.r()),
        Some(w) => format!(
            "{col}\nmonochromatic solution in colour {}: xs = [{}], y = {}",
            w.colour,
            w.xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
            w.y
        ),
    };
    let outcome = match &cert.witness {
        None => SumFreeOutcome::Free,
        Some(w) => SumFreeOutcome::Witness(w.clone()),
    };
    let mut result = to_value(&cert)?;
    result["outcome"] = to_value(&outcome)?;
    Ok(Outcome { text, result, holds: cert.verified, seed: None })
}

#[derive(Serialize)]
struct PatternSummary {
    b: u64,
    s: u32,
    w: u32,
    r: u8,
    eq: EquationSpec,
    seed: u64,
    trials: u64,
    auxiliary_t: Option<u32>,
    witnesses: u64,
    case_one: u64,
    case_two: u64,
    violations: u64,
    first_violation: Option<Value>,
}

fn run_pattern(a: &PatternArgs) -> Result<Outcome, Failure> {
    let general = a.eq != EquationSpec::schur();
    let t = if general { Some(auxiliary_t(&a.eq, a.colours, 64)?) } else { None };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut summary = PatternSummary {
        b: a.b,
        s: a.s,
        w: a.w,
        r: a.colours,
        eq: a.eq.clone(),
        seed: a.seed,
        trials: a.trials,
        auxiliary_t: t,
        witnesses: 0,
        case_one: 0,
        case_two: 0,
        violations: 0,
        first_violation: None,
    };
    for trial in 0..a.trials {
        let m = PatternM::random(a.b, a.s, a.w, a.colours, &mut rng)?;
        let found = match t {
            Some(t) => find_in_pattern_m_general(&a.eq, &m, t)?,
            None => find_in_pattern_m(&m),
        };
        let Some(found) = found else { continue };
        summary.witnesses += 1;
        if found.case == 1 {
            summary.case_one += 1;
        } else {
            summary.case_two += 1;
        }
        let check = check_witness(&a.eq, &m, &found.solution);
        if !check.ok() {
            summary.violations += 1;
            if summary.first_violation.is_none() {
                summary.first_violation = Some(json!({ "trial": trial, "witness": found, "check": check }));
            }
        }
    }
    let text = format!(
        "pattern finder for eq {} (b = {}, S = {}, W = {}, r = {}, seed {}): {} of {} trials gave a witness (case 1: {}, case 2: {}), {} violations",
        a.eq, a.b, a.s, a.w, a.colours, a.seed, summary.witnesses, a.trials, summary.case_one, summary.case_two, summary.violations
    );
    let holds = summary.violations == 0;
    Ok(Outcome { text, result: to_value(&summary)?, holds, seed: Some(a.seed) })
}

fn run_verify(v: &VerifyCommand) -> Result<Outcome, Failure> {
    match v {
        VerifyCommand::Lemma31 { a, l, k } => {
            let rep = verify_lemma31(*a, *l, *k)?;
            let holds = rep.holds && rep.nondegenerate_holds != Some(false);
            let text = format!(
                "T({a}, {l}, {k}) = {:?}: {} colourings, {}{}",
                rep.pattern.distinct(),
                rep.colourings,
                if rep.holds { "every one has a monochromatic xy = z with a | z" } else { "FAILS" },
                match rep.nondegenerate_holds {
                    Some(true) => "; non-degenerate solutions always exist",
                    Some(false) => "; a colouring without non-degenerate solution exists",
                    None => "; side conditions do not hold",
                }
            );
            Ok(Outcome { text, result: to_value(&rep)?, holds, seed: None })
        }
        VerifyCommand::PatternM(a) => run_pattern(a),
    }
}

fn run_minimize(a: &MinimizeArgs, exec: Exec) -> Result<Outcome, Failure> {
    let rep = minimize(&a.eq, a.colours, a.n, a.budget, exec)?;
    let text = format!(
        "minimum over {}-colourings of [2, {}] for eq {}: {} ({} participating elements, {} nodes)\nwitness {}",
        a.colours,
        a.n,
        a.eq,
        rep.minimum,
        rep.participating,
        rep.nodes,
        rep.witness.to_word()
    );
    let holds = rep.recounted == rep.minimum;
    Ok(Outcome { text, result: to_value(&rep)?, holds, seed: None })
}

fn run_stability(a: &StabilityArgs, exec: Exec) -> Result<Outcome, Failure> {
    let c = read_colouring(&a.colouring)?;
    let rep = stability_check(&c, exec)?;
    let text = match rep.status {
        StabilityStatus::NotApplicable => format!("N = {}: no monochromatic solutions, not applicable", rep.n),
        status => format!(
            "N = {}: M = {}, prefix [2, {}]{}: {}",
            rep.n,
            rep.monochromatic,
            rep.prefix_end.unwrap_or(0),
            if rep.vacuous { " (vacuous)" } else { "" },
            if status == StabilityStatus::Pass { "monochromatic" } else { "NOT monochromatic" }
        ),
    };
    let holds = rep.status != StabilityStatus::Fail;
    Ok(Outcome { text, result: to_value(&rep)?, holds, seed: None })
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Count(_) => "count",
        Command::Construct(_) => "construct",
        Command::Search(_) => "search",
        Command::IntervalCheck(_) => "interval-check",
        Command::Verify { which: VerifyCommand::Lemma31 { .. } } => "verify lemma31",
        Command::Verify { which: VerifyCommand::PatternM(_) } => "verify pattern-m",
        Command::Minimize(_) => "minimize",
        Command::Stability(_) => "stability",
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let exec = Exec::default();
    match &cli.command {
        Command::Count(a) => run_count(a, exec),
        Command::Construct(a) => run_construct(a, exec),
        Command::Search(a) => run_search(a, exec),
        Command::IntervalCheck(a) => run_interval(a),
        Command::Verify { which } => run_verify(which),
        Command::Minimize(a) => run_minimize(a, exec),
        Command::Stability(a) => run_stability(a, exec),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let outcome = match with_jobs(cli.jobs, || dispatch(&cli)) {
        Ok(o) => o,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed();
    let body = canonical(&outcome.result);
    let hash = digest(&body);
    match cli.json.as_deref() {
        Some("-") => print!("{body}"),
        Some(path) => {
            if let Err(e) = fs::write(path, &body) {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(2);
            }
            println!("{}", outcome.text);
        }
        None => println!("{}", outcome.text),
    }
    if let Some(path) = &cli.manifest {
        let manifest = json!({
            "subcommand": subcommand_name(&cli.command),
            "args": std::env::args().skip(1).collect::<Vec<_>>(),
            "seed": outcome.seed,
            "versions": { "ramsey-mult": ramsey_mult::VERSION, "ramsey-mult-cli": env!("CARGO_PKG_VERSION") },
            "jobs": cli.jobs,
            "wall_time_ms": elapsed.as_secs_f64() * 1e3,
            "digest": hash,
        });
        if let Err(e) = fs::write(path, canonical(&manifest)) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.json.as_deref() != Some("-") {
        println!("digest {hash}  ({:.3} s)", elapsed.as_secs_f64());
    }
    ExitCode::from(if outcome.holds { 0 } else { 1 })
}
