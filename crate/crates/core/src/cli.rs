//! Command-line front end: data generation, solver comparisons, SVM training,
//! and trace auditing.
//!
//! Every file the commands write is byte-reproducible for a fixed seed: trace
//! files get their wall-clock column zeroed (timings go to stdout instead),
//! and all floats are serialized at full precision.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical failure,
//! 3 audit hard-check failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audit::{audit_trace, estimate_f_star, AuditOptions};
use crate::data_io::{
    format_float, generate_classification, generate_regression, read_regression,
    read_sparse_classification, read_trace, subsample, write_regression, write_trace,
    SyntheticSpec,
};
use crate::error::{Error, Result};
use crate::linalg::DenseVector;
use crate::problems::{
    build_group_lasso, build_lasso, build_trace_norm, default_lambda, RegressionData,
};
use crate::prox::GroupPartition;
use crate::solver::{solve, IterationRecord, ProblemSpec, Rule, SolveResult, SolverConfig, StepPolicy};
use crate::svm::{
    build_linear_kernel, classification_accuracy, linear_primal, solve_svm, SvmConfig, SvmRule,
};

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Diverged(_)
        | Error::StepUnderflow(_)
        | Error::SvdNoConverge { .. }
        | Error::FlatDirection(_)
        | Error::FeasibilityStall { .. } => 2,
        _ => 1,
    }
}

#[derive(Parser)]
#[command(
    name = "rapid",
    version,
    about = "Accelerated proximal gradient solvers with a scaling line search"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic regression instance
    Generate(GenerateArgs),
    /// Run solver rules on a regression problem and record traces
    Solve(SolveArgs),
    /// Run several rules and emit aligned convergence curves
    Compare(SolveArgs),
    /// Train a kernel SVM through its dual
    Svm(SvmArgs),
    /// Check a recorded trace against the solver's guarantees
    Audit(AuditArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Number of target columns (tasks)
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Planted-model noise level (only with --planted)
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Draw targets from a sparse planted model instead of pure noise
    #[arg(long)]
    planted: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegressionKind {
    Lasso,
    GroupLasso,
    TraceNorm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StepArg {
    /// Constant step 1/L
    Fixed,
    /// Halve the step until the local upper bound holds
    Backtracking,
}

#[derive(Args)]
struct SolveArgs {
    /// Regression container file; omitted means synthetic data from --n/--d
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, value_enum, default_value_t = RegressionKind::Lasso)]
    problem: RegressionKind,
    /// Coordinates per group (contiguous partition, group-lasso only)
    #[arg(long)]
    group_size: Option<usize>,
    /// Regularization weight; default 0.1 * ||A^T y||_inf
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Update rule; repeat or comma-separate for several
    #[arg(long = "rule", value_delimiter = ',')]
    rules: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-7, allow_negative_numbers = true)]
    rel_tol: f64,
    #[arg(long, value_enum, default_value_t = StepArg::Fixed)]
    step: StepArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long)]
    planted: bool,
    /// Reference-run budget for the shared f* (compare only); default 10x max_iter
    #[arg(long)]
    oracle_budget: Option<usize>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SvmArgs {
    /// Sparse `label idx:val` classification file; omitted means synthetic blobs
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Class separation of the synthetic blobs
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    separation: f64,
    /// Box bound C of the dual
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    /// apg, rapid1, or rapid2; repeat or comma-separate for several
    #[arg(long = "rule", value_delimiter = ',', default_value = "rapid2")]
    rules: Vec<String>,
    /// Fraction of rows used for training
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    fraction: f64,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-7, allow_negative_numbers = true)]
    rel_tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    manifest: PathBuf,
    /// Re-run this rule to collect the rate-bound diagnostic series
    #[arg(long)]
    rule: Option<String>,
    /// Reference-run budget; default 10x the audited run's iteration budget
    #[arg(long)]
    budget: Option<usize>,
    /// Externally known optimum value (skips the reference estimate)
    #[arg(long, allow_negative_numbers = true)]
    f_star: Option<f64>,
    /// Random pairs for the quadratic-upper-bound check
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Emit key=value records instead of the text table
    #[arg(long)]
    kv: bool,
}

/// Parse and run a full command line (first element is the program name).
/// Returns the process exit code instead of exiting, so tests can call it.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests land here too; only real parse
            // errors are usage failures.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.cmd {
        Cmd::Generate(a) => cmd_generate(&a),
        Cmd::Solve(a) => cmd_solve(&a, false),
        Cmd::Compare(a) => cmd_solve(&a, true),
        Cmd::Svm(a) => cmd_svm(&a),
        Cmd::Audit(a) => cmd_audit(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

/// Problem kind as recorded in a run manifest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Lasso,
    GroupLasso,
    TraceNorm,
    Svm,
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Lasso => "lasso",
            ProblemKind::GroupLasso => "group-lasso",
            ProblemKind::TraceNorm => "trace-norm",
            ProblemKind::Svm => "svm",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lasso" => Ok(ProblemKind::Lasso),
            "group-lasso" => Ok(ProblemKind::GroupLasso),
            "trace-norm" => Ok(ProblemKind::TraceNorm),
            "svm" => Ok(ProblemKind::Svm),
            other => Err(Error::BadArgument(format!("unknown problem kind '{other}'"))),
        }
    }
}

impl From<RegressionKind> for ProblemKind {
    fn from(k: RegressionKind) -> Self {
        match k {
            RegressionKind::Lasso => ProblemKind::Lasso,
            RegressionKind::GroupLasso => ProblemKind::GroupLasso,
            RegressionKind::TraceNorm => ProblemKind::TraceNorm,
        }
    }
}

/// Everything needed to reproduce a run: the audit command rebuilds the
/// problem from this record, so it carries resolved values (the actual
/// lambda, not "default").
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub kind: ProblemKind,
    /// Present when the data came from a file; absent means synthetic.
    pub data_path: Option<String>,
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub seed: u64,
    pub noise: f64,
    pub planted: bool,
    pub group_size: Option<usize>,
    pub lambda: Option<f64>,
    pub c: Option<f64>,
    pub separation: Option<f64>,
    pub fraction: Option<f64>,
    pub rules: Vec<String>,
    pub max_iter: usize,
    pub rel_tol: f64,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kind={}", self.kind.name());
        if let Some(p) = &self.data_path {
            let _ = writeln!(out, "data_path={p}");
        }
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "d={}", self.d);
        let _ = writeln!(out, "m={}", self.m);
        let _ = writeln!(out, "seed={}", self.seed);
        let _ = writeln!(out, "noise={}", format_float(self.noise));
        let _ = writeln!(out, "planted={}", self.planted);
        if let Some(g) = self.group_size {
            let _ = writeln!(out, "group_size={g}");
        }
        if let Some(l) = self.lambda {
            let _ = writeln!(out, "lambda={}", format_float(l));
        }
        if let Some(c) = self.c {
            let _ = writeln!(out, "c={}", format_float(c));
        }
        if let Some(s) = self.separation {
            let _ = writeln!(out, "separation={}", format_float(s));
        }
        if let Some(f) = self.fraction {
            let _ = writeln!(out, "fraction={}", format_float(f));
        }
        let _ = writeln!(out, "rules={}", self.rules.join(","));
        let _ = writeln!(out, "max_iter={}", self.max_iter);
        let _ = writeln!(out, "rel_tol={}", format_float(self.rel_tol));
        out
    }
}

pub fn write_manifest(path: &Path, man: &RunManifest) -> Result<()> {
    write_text(path, &man.render())
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let pathname = path.display().to_string();
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: pathname.clone(),
        line,
        msg,
    };

    let mut kind = None;
    let mut data_path = None;
    let mut n = None;
    let mut d = None;
    let mut m = None;
    let mut seed = None;
    let mut noise = 0.0;
    let mut planted = false;
    let mut group_size = None;
    let mut lambda = None;
    let mut c = None;
    let mut separation = None;
    let mut fraction = None;
    let mut rules = None;
    let mut max_iter = None;
    let mut rel_tol = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(lineno, format!("expected key=value, got '{line}'")))?;
        let bad = |what: &str| parse_err(lineno, format!("bad {what} '{value}'"));
        match key {
            "kind" => kind = Some(ProblemKind::parse(value).map_err(|e| parse_err(lineno, e.to_string()))?),
            "data_path" => data_path = Some(value.to_string()),
            "n" => n = Some(value.parse::<usize>().map_err(|_| bad("count"))?),
            "d" => d = Some(value.parse::<usize>().map_err(|_| bad("count"))?),
            "m" => m = Some(value.parse::<usize>().map_err(|_| bad("count"))?),
            "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad("seed"))?),
            "noise" => noise = value.parse::<f64>().map_err(|_| bad("float"))?,
            "planted" => planted = value.parse::<bool>().map_err(|_| bad("flag"))?,
            "group_size" => group_size = Some(value.parse::<usize>().map_err(|_| bad("count"))?),
            "lambda" => lambda = Some(value.parse::<f64>().map_err(|_| bad("float"))?),
            "c" => c = Some(value.parse::<f64>().map_err(|_| bad("float"))?),
            "separation" => separation = Some(value.parse::<f64>().map_err(|_| bad("float"))?),
            "fraction" => fraction = Some(value.parse::<f64>().map_err(|_| bad("float"))?),
            "rules" => {
                rules = Some(
                    value
                        .split(',')
                        .filter(|s| !s.is_empty())
                        .map(|s| s.to_string())
                        .collect::<Vec<_>>(),
                )
            }
            "max_iter" => max_iter = Some(value.parse::<usize>().map_err(|_| bad("count"))?),
            "rel_tol" => rel_tol = Some(value.parse::<f64>().map_err(|_| bad("float"))?),
            other => return Err(parse_err(lineno, format!("unknown key '{other}'"))),
        }
    }

    let missing = |what: &str| Error::Parse {
        path: pathname.clone(),
        line: 0,
        msg: format!("missing key '{what}'"),
    };
    Ok(RunManifest {
        kind: kind.ok_or_else(|| missing("kind"))?,
        data_path,
        n: n.ok_or_else(|| missing("n"))?,
        d: d.ok_or_else(|| missing("d"))?,
        m: m.ok_or_else(|| missing("m"))?,
        seed: seed.ok_or_else(|| missing("seed"))?,
        noise,
        planted,
        group_size,
        lambda,
        c,
        separation,
        fraction,
        rules: rules.ok_or_else(|| missing("rules"))?,
        max_iter: max_iter.ok_or_else(|| missing("max_iter"))?,
        rel_tol: rel_tol.ok_or_else(|| missing("rel_tol"))?,
    })
}

/// Rebuild the regression problem a manifest describes. SVM manifests are
/// rejected: the audit checks apply to the composite-objective solver.
pub fn build_problem_from_manifest(man: &RunManifest) -> Result<ProblemSpec> {
    if man.kind == ProblemKind::Svm {
        return Err(Error::BadArgument(
            "audit supports lasso, group-lasso, and trace-norm manifests".to_string(),
        ));
    }
    let (a, target) = match &man.data_path {
        Some(p) => read_regression(Path::new(p))?,
        None => {
            let mut spec = SyntheticSpec::new(man.n, man.d, man.m, man.seed);
            spec.noise_sigma = man.noise;
            spec.planted = man.planted;
            generate_regression(&spec)?
        }
    };
    let lambda = man
        .lambda
        .ok_or_else(|| Error::BadArgument("manifest lacks lambda".to_string()))?;
    match man.kind {
        ProblemKind::Lasso => build_lasso(RegressionData {
            a,
            target,
            lambda,
            groups: None,
        }),
        ProblemKind::GroupLasso => {
            let gs = man
                .group_size
                .ok_or_else(|| Error::BadArgument("manifest lacks group_size".to_string()))?;
            let cols = a.cols();
            build_group_lasso(RegressionData {
                a,
                target,
                lambda,
                groups: Some(GroupPartition::contiguous(cols, gs)?),
            })
        }
        ProblemKind::TraceNorm => build_trace_norm(RegressionData {
            a,
            target,
            lambda,
            groups: None,
        }),
        ProblemKind::Svm => unreachable!("rejected above"),
    }
}

/// One rule's solve inside a comparison.
#[derive(Debug, Clone)]
pub struct RuleRun {
    pub rule: Rule,
    pub result: SolveResult,
}

/// Aligned multi-rule comparison against a shared reference value.
#[derive(Debug, Clone)]
pub struct CompareOutcome {
    pub f_star: f64,
    pub runs: Vec<RuleRun>,
}

/// Solve the same problem under every rule and compute a shared `f*`: the
/// best of a long reference run and everything the compared runs themselves
/// observed (so no error column can go negative by more than round-off).
pub fn compare_rules(
    p: &ProblemSpec,
    rules: &[Rule],
    base: &SolverConfig,
    oracle_budget: usize,
) -> Result<CompareOutcome> {
    if rules.is_empty() {
        return Err(Error::BadArgument("no rules to compare".to_string()));
    }
    let x0 = DenseVector::zeros(p.dim());
    let mut runs = Vec::with_capacity(rules.len());
    for &rule in rules {
        let mut cfg = *base;
        cfg.rule = rule;
        cfg.record_trace = true;
        let result = solve(p, &cfg, &x0)?;
        runs.push(RuleRun { rule, result });
    }
    let mut f_star = estimate_f_star(p, oracle_budget)?;
    for run in &runs {
        for rec in &run.result.trace {
            f_star = f_star.min(rec.f_theta_x).min(rec.f_x);
        }
    }
    Ok(CompareOutcome { f_star, runs })
}

/// Running minimum of the scaled-iterate objective: the paper-style
/// presentation that never lets a curve tick upward.
pub fn monotone_envelope(trace: &[IterationRecord]) -> Vec<f64> {
    let mut best = f64::INFINITY;
    trace
        .iter()
        .map(|r| {
            best = best.min(r.f_theta_x);
            best
        })
        .collect()
}

/// First iteration whose monotone envelope drops to `threshold` above
/// `f_star`, if any.
pub fn iterations_to_threshold(
    trace: &[IterationRecord],
    f_star: f64,
    threshold: f64,
) -> Option<usize> {
    let env = monotone_envelope(trace);
    trace
        .iter()
        .zip(env.iter())
        .find(|(_, &e)| e - f_star <= threshold)
        .map(|(r, _)| r.t)
}

/// Displayed errors are floored here so log-scale plots stay defined when a
/// curve touches the reference value exactly.
const PLOT_FLOOR: f64 = 1e-18;

/// Long-format comparison CSV: `rule,t,objective_error,monotone_error`.
pub fn render_compare_csv(outcome: &CompareOutcome) -> String {
    let mut out = String::from("rule,t,objective_error,monotone_error\n");
    for run in &outcome.runs {
        let env = monotone_envelope(&run.result.trace);
        for (rec, &e) in run.result.trace.iter().zip(env.iter()) {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                run.rule.name(),
                rec.t,
                format_float((rec.f_theta_x - outcome.f_star).max(PLOT_FLOOR)),
                format_float((e - outcome.f_star).max(PLOT_FLOOR)),
            );
        }
    }
    out
}

/// Gnuplot script plotting the monotone error column of [`render_compare_csv`]
/// output, one curve per rule, straight from the long-format file.
pub fn render_compare_gnuplot(csv_name: &str, rules: &[Rule]) -> String {
    let rule_list = rules
        .iter()
        .map(|r| r.name())
        .collect::<Vec<_>>()
        .join(" ");
    format!(
        "set datafile separator ','\n\
         set logscale y\n\
         set xlabel 'iteration t'\n\
         set ylabel 'f - f*'\n\
         set grid\n\
         set key top right\n\
         plot for [rule in \"{rule_list}\"] '{csv_name}' every ::1 \\\n\
         \x20   using 2:(strcol(1) eq rule ? column(4) : 1/0) with lines title rule\n"
    )
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

fn ensure_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))
}

/// Wall-clock timings stay on stdout; recorded traces are reproducible.
fn zero_elapsed(trace: &mut [IterationRecord]) {
    for r in trace.iter_mut() {
        r.elapsed_ns = 0;
    }
}

fn cmd_generate(args: &GenerateArgs) -> Result<i32> {
    let mut spec = SyntheticSpec::new(args.n, args.d, args.m, args.seed);
    spec.noise_sigma = args.noise;
    spec.planted = args.planted;
    let (a, target) = generate_regression(&spec)?;
    ensure_out_dir(&args.out)?;
    let path = args.out.join("data.txt");
    write_regression(&path, &a, &target)?;
    println!(
        "generated n={} d={} m={} seed={} -> {}",
        args.n,
        args.d,
        args.m,
        args.seed,
        path.display()
    );
    Ok(0)
}

fn parse_rules(names: &[String]) -> Result<Vec<Rule>> {
    let mut rules = Vec::with_capacity(names.len());
    for name in names {
        rules.push(Rule::parse(name)?);
    }
    Ok(rules)
}

/// Resolve the data source and build the problem plus its manifest record.
fn load_regression(args: &SolveArgs, rule_names: &[String]) -> Result<(ProblemSpec, RunManifest)> {
    let (a, target, data_path, n, d) = match &args.data {
        Some(path) => {
            let (a, target) = read_regression(path)?;
            let (n, d) = (a.rows(), a.cols());
            (a, target, Some(path.display().to_string()), n, d)
        }
        None => {
            let n = args
                .n
                .ok_or_else(|| Error::BadArgument("--n is required without --data".to_string()))?;
            let d = args
                .d
                .ok_or_else(|| Error::BadArgument("--d is required without --data".to_string()))?;
            let mut spec = SyntheticSpec::new(n, d, args.m, args.seed);
            spec.noise_sigma = args.noise;
            spec.planted = args.planted;
            let (a, target) = generate_regression(&spec)?;
            (a, target, None, n, d)
        }
    };
    let m = target.tasks();
    if args.problem == RegressionKind::TraceNorm && m < 2 {
        return Err(Error::BadArgument(
            "trace-norm needs a multitask target (--m at least 2)".to_string(),
        ));
    }
    let lambda = match args.lambda {
        Some(l) => l,
        None => default_lambda(&a, &target)?,
    };
    let mut group_size = None;
    let problem = match args.problem {
        RegressionKind::Lasso => build_lasso(RegressionData {
            a,
            target,
            lambda,
            groups: None,
        })?,
        RegressionKind::GroupLasso => {
            let gs = args.group_size.ok_or_else(|| {
                Error::BadArgument("group-lasso needs --group-size".to_string())
            })?;
            group_size = Some(gs);
            let cols = a.cols();
            build_group_lasso(RegressionData {
                a,
                target,
                lambda,
                groups: Some(GroupPartition::contiguous(cols, gs)?),
            })?
        }
        RegressionKind::TraceNorm => build_trace_norm(RegressionData {
            a,
            target,
            lambda,
            groups: None,
        })?,
    };
    let manifest = RunManifest {
        kind: args.problem.into(),
        data_path,
        n,
        d,
        m,
        seed: args.seed,
        noise: args.noise,
        planted: args.planted,
        group_size,
        lambda: Some(lambda),
        c: None,
        separation: None,
        fraction: None,
        rules: rule_names.to_vec(),
        max_iter: args.max_iter,
        rel_tol: args.rel_tol,
    };
    Ok((problem, manifest))
}

fn cmd_solve(args: &SolveArgs, compare: bool) -> Result<i32> {
    let rule_names: Vec<String> = if args.rules.is_empty() {
        if compare {
            vec!["fista".into(), "rapid1".into(), "rapid2".into()]
        } else {
            vec!["rapid2".into()]
        }
    } else {
        args.rules.clone()
    };
    let rules = parse_rules(&rule_names)?;
    if compare && rules.len() < 2 {
        return Err(Error::BadArgument(
            "compare needs at least two rules".to_string(),
        ));
    }

    let (problem, manifest) = load_regression(args, &rule_names)?;
    ensure_out_dir(&args.out)?;

    let mut base = SolverConfig::new(rules[0]);
    base.max_iter = args.max_iter;
    base.rel_tol = args.rel_tol;
    base.step = match args.step {
        StepArg::Fixed => StepPolicy::FixedInverseL,
        StepArg::Backtracking => StepPolicy::Backtracking { shrink: 0.5 },
    };

    let x0 = DenseVector::zeros(problem.dim());
    let mut runs = Vec::with_capacity(rules.len());
    for &rule in &rules {
        let mut cfg = base;
        cfg.rule = rule;
        let t0 = Instant::now();
        let result = solve(&problem, &cfg, &x0)?;
        let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
        let objective = problem.objective(&result.point)?;
        println!(
            "rule={} iterations={} converged={} objective={} wall_ms={wall_ms:.3}",
            rule.name(),
            result.iterations,
            result.converged,
            format_float(objective),
        );
        runs.push(RuleRun { rule, result });
    }

    for run in &mut runs {
        let mut trace = std::mem::take(&mut run.result.trace);
        zero_elapsed(&mut trace);
        write_trace(
            &args.out.join(format!("trace_{}.csv", run.rule.name())),
            &trace,
        )?;
        run.result.trace = trace;
    }
    write_manifest(&args.out.join("manifest.txt"), &manifest)?;

    if compare {
        let budget = args.oracle_budget.unwrap_or(args.max_iter * 10);
        let mut f_star = estimate_f_star(&problem, budget)?;
        for run in &runs {
            for rec in &run.result.trace {
                f_star = f_star.min(rec.f_theta_x).min(rec.f_x);
            }
        }
        let outcome = CompareOutcome { f_star, runs };
        write_text(&args.out.join("compare.csv"), &render_compare_csv(&outcome))?;
        write_text(
            &args.out.join("compare.gp"),
            &render_compare_gnuplot("compare.csv", &rules),
        )?;
        println!("f_star={}", format_float(outcome.f_star));
        let threshold = 1e-6 * (1.0 + outcome.f_star.abs());
        for run in &outcome.runs {
            match iterations_to_threshold(&run.result.trace, outcome.f_star, threshold) {
                Some(t) => println!("rule={} reaches_1e-6_at={t}", run.rule.name()),
                None => println!("rule={} reaches_1e-6_at=never", run.rule.name()),
            }
        }
    }
    Ok(0)
}

fn cmd_svm(args: &SvmArgs) -> Result<i32> {
    let (x, y) = match &args.data {
        Some(path) => read_sparse_classification(path)?,
        None => {
            let n = args
                .n
                .ok_or_else(|| Error::BadArgument("--n is required without --data".to_string()))?;
            let d = args
                .d
                .ok_or_else(|| Error::BadArgument("--d is required without --data".to_string()))?;
            generate_classification(n, d, args.separation, args.seed)?
        }
    };
    let split = subsample(&x, &y, args.fraction, args.seed)?;
    let problem = build_linear_kernel(&split.train_x, &split.train_y, args.c)?;
    ensure_out_dir(&args.out)?;

    for name in &args.rules {
        let rule = SvmRule::parse(name)?;
        let mut cfg = SvmConfig::new(rule);
        cfg.max_iter = args.max_iter;
        cfg.rel_tol = args.rel_tol;
        let t0 = Instant::now();
        let res = solve_svm(&problem, &cfg)?;
        let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
        let (w, b) = linear_primal(&split.train_x, &split.train_y, &res.alpha, args.c)?;
        let accuracy = classification_accuracy(&split.test_x, &split.test_y, &w, b)?;
        let mut trace = res.trace;
        zero_elapsed(&mut trace);
        write_trace(&args.out.join(format!("trace_svm_{}.csv", rule.name())), &trace)?;
        println!(
            "rule={} iterations={} converged={} objective={} train={} test={} accuracy={:.4} wall_ms={wall_ms:.3}",
            rule.name(),
            res.iterations,
            res.converged,
            format_float(res.objective),
            split.train_x.rows(),
            split.test_x.rows(),
            accuracy,
        );
    }

    let manifest = RunManifest {
        kind: ProblemKind::Svm,
        data_path: args.data.as_ref().map(|p| p.display().to_string()),
        n: x.rows(),
        d: x.cols(),
        m: 1,
        seed: args.seed,
        noise: 0.0,
        planted: false,
        group_size: None,
        lambda: None,
        c: Some(args.c),
        separation: args.data.is_none().then_some(args.separation),
        fraction: Some(args.fraction),
        rules: args.rules.clone(),
        max_iter: args.max_iter,
        rel_tol: args.rel_tol,
    };
    write_manifest(&args.out.join("manifest.txt"), &manifest)?;
    Ok(0)
}

fn cmd_audit(args: &AuditArgs) -> Result<i32> {
    let manifest = read_manifest(&args.manifest)?;
    let trace = read_trace(&args.trace)?;
    if trace.is_empty() {
        return Err(Error::EmptyData(format!(
            "trace {} has no records",
            args.trace.display()
        )));
    }
    let problem = build_problem_from_manifest(&manifest)?;

    let floor = 10 * manifest.max_iter.max(trace.len());
    let budget = match args.budget {
        None => floor,
        Some(b) if b >= floor => b,
        Some(b) => {
            return Err(Error::BadBudget(format!(
                "budget {b} is below 10x the audited run ({floor})"
            )))
        }
    };

    let mut opts = AuditOptions::new(budget);
    opts.f_star = args.f_star;
    opts.sandwich_samples = args.samples;
    opts.seed = manifest.seed;
    if let Some(name) = &args.rule {
        let rule = Rule::parse(name)?;
        let mut cfg = SolverConfig::new(rule);
        cfg.max_iter = manifest.max_iter;
        cfg.rel_tol = manifest.rel_tol;
        let rerun = solve(&problem, &cfg, &DenseVector::zeros(problem.dim()))?;
        opts.rate_terms = Some(rerun.rate_diagnostic_terms);
    }

    let report = audit_trace(&problem, &trace, &opts)?;
    print!("{}", if args.kv { report.render_kv() } else { report.render_text() });
    Ok(if report.hard_checks_pass() { 0 } else { 3 })
}
