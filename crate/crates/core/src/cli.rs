//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library, prints a human-readable table to stdout and optionally writes a
//! JSON [`RunReport`].
//!
//! Exit status is 0 on success, 2 on invalid input (with a single
//! `error[CODE]: message` line on stderr) and 1 on internal failures.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::assumptions::Assumption;
use crate::dgp::{decompose, negative_weight_report, population_estimands, DgpError, DgpSpec};
use crate::estimands::EstimandSet;
use crate::estimators::{
    bounds_general, bounds_general_unrestricted, bounds_tight, default_effect_bounds, estimate, identify,
    negative_weight_diagnostic, weak_first_stage, EstimationError, WeightFlag,
};
use crate::inference::{bootstrap, BootstrapConfig, InferenceError};
use crate::panel::{check_assumptions, ingest, Panel, PanelError, WEAK_FIRST_STAGE};
use crate::report::{Inputs, Output, RunReport};
use crate::simulate::{draw_panel, monte_carlo, MonteCarloConfig};
use crate::targets::TargetSelection;

#[derive(Debug, Parser)]
#[command(name = "dynlate", version, about = "Dynamic LATEs with an irreversible treatment and a binary instrument")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a panel and report first-stage relevance.
    Check(Common),
    /// Per-period reduced form, first stage and IV ratio.
    Estimate(Common),
    /// Recursive point identification of the dynamic LATE profile.
    Identify(Common),
    /// Partial-identification bounds on the dynamic LATE.
    Bounds(Common),
    /// Decompose the population reduced form of a DGP spec at one period.
    Decompose(Common),
    /// Draw a panel from a DGP spec and write it as CSV.
    Simulate(Common),
    /// Monte Carlo comparison of estimators with the population oracle.
    Montecarlo(Common),
    /// Unit-level bootstrap percentile intervals.
    Bootstrap(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Long-format panel CSV (unit_id,period,z,d,y).
    #[arg(long)]
    panel: Option<PathBuf>,
    /// DGP spec file (TOML, or JSON by extension).
    #[arg(long)]
    dgp: Option<PathBuf>,
    #[arg(long, env = "DYNLATE_SEED")]
    seed: Option<u64>,
    /// Write the JSON report here ("-" for stdout instead of the table).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Worker threads for simulation and bootstrap; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Declared assumptions, comma separated.
    #[arg(long, value_delimiter = ',')]
    assume: Vec<Assumption>,
    /// Effect bounds `lo,hi`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_bounds)]
    bounds: Option<(f64, f64)>,
    #[arg(long)]
    period: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    /// CSV destination for `simulate` (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_bounds(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if !(lo.is_finite() && hi.is_finite()) {
        return Err("bounds must be finite".into());
    }
    Ok((lo, hi))
}

#[derive(Debug)]
struct CliError {
    code: &'static str,
    message: String,
    status: i32,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: "E_USAGE", message: message.into(), status: 2 }
    }

    fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self { code, message: message.into(), status: 2 }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self { code: "E_INTERNAL", message: message.into(), status: 1 }
    }
}

impl From<PanelError> for CliError {
    fn from(e: PanelError) -> Self {
        match e {
            PanelError::Io(_) => CliError::new("E_IO", e.to_string()),
            PanelError::MalformedRow { .. } | PanelError::Empty => CliError::new("E_SCHEMA", e.to_string()),
            PanelError::DegenerateInstrument { .. } => CliError::new("E_RELEVANCE", e.to_string()),
            _ => CliError::new("E_PANEL", e.to_string()),
        }
    }
}

impl From<DgpError> for CliError {
    fn from(e: DgpError) -> Self {
        match e {
            DgpError::Schema(_) => CliError::new("E_SCHEMA", e.to_string()),
            DgpError::RelevanceFailure => CliError::new("E_RELEVANCE", e.to_string()),
            DgpError::Latent(_) => CliError::new("E_PERIOD", e.to_string()),
            _ => CliError::new("E_DGP", e.to_string()),
        }
    }
}

impl From<EstimationError> for CliError {
    fn from(e: EstimationError) -> Self {
        match e {
            EstimationError::Panel(p) => p.into(),
            EstimationError::RelevanceFailure { .. } => CliError::new("E_RELEVANCE", e.to_string()),
            EstimationError::SignedBoundViolation { .. } | EstimationError::EmptyBounds { .. } => {
                CliError::new("E_BOUNDS", e.to_string())
            }
            EstimationError::PeriodOutOfRange { .. } => CliError::new("E_PERIOD", e.to_string()),
        }
    }
}

impl From<InferenceError> for CliError {
    fn from(e: InferenceError) -> Self {
        match e {
            InferenceError::InvalidConfig(_) => CliError::usage(e.to_string()),
            InferenceError::Estimation(e) => e.into(),
            InferenceError::AllReplicationsFailed { .. } => CliError::new("E_RELEVANCE", e.to_string()),
        }
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// process exit status.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("invalid arguments");
            eprintln!("error[E_USAGE]: {}", line.trim_start_matches("error: "));
            return 2;
        }
    };
    let threads = command_args(&cli.command).threads;
    let result = match threads {
        Some(0) => Err(CliError::usage("--threads must be at least 1")),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(CliError::internal(e.to_string())),
        },
        None => dispatch(&cli.command),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code, e.message);
            e.status
        }
    }
}

fn command_args(command: &Command) -> &Common {
    match command {
        Command::Check(c)
        | Command::Estimate(c)
        | Command::Identify(c)
        | Command::Bounds(c)
        | Command::Decompose(c)
        | Command::Simulate(c)
        | Command::Montecarlo(c)
        | Command::Bootstrap(c) => c,
    }
}

fn dispatch(command: &Command) -> Result<(), CliError> {
    let (name, report) = match command {
        Command::Check(a) => ("check", cmd_check(a)?),
        Command::Estimate(a) => ("estimate", cmd_estimate(a)?),
        Command::Identify(a) => ("identify", cmd_identify(a)?),
        Command::Bounds(a) => ("bounds", cmd_bounds(a)?),
        Command::Decompose(a) => ("decompose", cmd_decompose(a)?),
        Command::Simulate(a) => ("simulate", cmd_simulate(a)?),
        Command::Montecarlo(a) => ("montecarlo", cmd_montecarlo(a)?),
        Command::Bootstrap(a) => ("bootstrap", cmd_bootstrap(a)?),
    };
    debug_assert_eq!(report.command, name);
    emit(command_args(command), &report)
}

fn emit(args: &Common, report: &RunReport) -> Result<(), CliError> {
    let to_stdout = json_to_stdout(args);
    let simulate_to_stdout = report.command == "simulate" && args.out.is_none();
    match &args.json {
        Some(_) if to_stdout => write_stdout(&report.to_json())?,
        Some(path) => {
            std::fs::write(path, report.to_json())
                .map_err(|e| CliError::new("E_IO", format!("{}: {e}", path.display())))?;
        }
        None => {}
    }
    if !to_stdout && !simulate_to_stdout {
        write_stdout(&render(report))?;
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn json_to_stdout(args: &Common) -> bool {
    args.json.as_deref() == Some(Path::new("-"))
}

fn write_stdout(text: &str) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::new("E_IO", e.to_string()))
}

fn load_panel(args: &Common) -> Result<Panel, CliError> {
    let path = args.panel.as_ref().ok_or_else(|| CliError::usage("--panel is required"))?;
    let file = File::open(path).map_err(|e| CliError::new("E_IO", format!("{}: {e}", path.display())))?;
    Ok(ingest(io::BufReader::new(file))?)
}

fn load_dgp(args: &Common) -> Result<DgpSpec, CliError> {
    let path = args.dgp.as_ref().ok_or_else(|| CliError::usage("--dgp is required"))?;
    if !path.exists() {
        return Err(CliError::new("E_IO", format!("{}: file not found", path.display())));
    }
    Ok(DgpSpec::load(path)?)
}

fn base_inputs(args: &Common) -> Inputs {
    Inputs {
        panel: args.panel.as_ref().map(|p| p.display().to_string()),
        dgp: args.dgp.as_ref().map(|p| p.display().to_string()),
        ..Inputs::default()
    }
}

fn declared(args: &Common) -> Vec<Assumption> {
    let mut a = args.assume.clone();
    a.sort();
    a.dedup();
    a
}

fn require(args: &Common, assumption: Assumption, what: &str) -> Result<(), CliError> {
    if args.assume.contains(&assumption) {
        Ok(())
    } else {
        Err(CliError::new(
            "E_ASSUME",
            format!("{what} requires declared assumption {assumption} (pass --assume {assumption})"),
        ))
    }
}

/// Estimands from exactly one of `--panel` (sample) or `--dgp` (population).
fn estimands(args: &Common) -> Result<(EstimandSet, Option<Panel>), CliError> {
    match (&args.panel, &args.dgp) {
        (Some(_), None) => {
            let panel = load_panel(args)?;
            Ok((estimate(&panel)?, Some(panel)))
        }
        (None, Some(_)) => Ok((population_estimands(&load_dgp(args)?), None)),
        _ => Err(CliError::usage("exactly one of --panel or --dgp is required")),
    }
}

fn seed(args: &Common) -> u64 {
    args.seed.unwrap_or(0)
}

fn first_stage_warnings(est: &EstimandSet, warnings: &mut Vec<String>) {
    if weak_first_stage(est) {
        warnings.push(format!("weak first stage: |FS_1| = {:.3e} < {WEAK_FIRST_STAGE}", est.fs(1).abs()));
    }
}

fn cmd_check(args: &Common) -> Result<RunReport, CliError> {
    let panel = load_panel(args)?;
    let diagnostics = check_assumptions(&panel);
    Ok(RunReport::new("check", base_inputs(args), declared(args), Output::Check { diagnostics }))
}

fn cmd_estimate(args: &Common) -> Result<RunReport, CliError> {
    let (est, _) = estimands(args)?;
    let negative_weights = negative_weight_diagnostic(&est);
    let mut report = RunReport::new(
        "estimate",
        base_inputs(args),
        declared(args),
        Output::Estimate { weak_first_stage: weak_first_stage(&est), negative_weights: negative_weights.clone(), estimands: est.clone() },
    );
    first_stage_warnings(&est, &mut report.warnings);
    for p in negative_weights.periods.iter().filter(|p| p.flag == WeightFlag::Guaranteed) {
        let k = p.witness.expect("guaranteed flags carry a witness");
        report.warnings.push(format!(
            "negative weights guaranteed in IV at t={} (FS_{k} < FS_{})",
            p.t,
            k - 1
        ));
    }
    for t in 1..=est.horizon {
        if est.iv(t).is_none() {
            report.warnings.push(format!("IV undefined at t={t} (FS_{t} = 0)"));
        }
    }
    Ok(report)
}

fn cmd_identify(args: &Common) -> Result<RunReport, CliError> {
    require(args, Assumption::CalendarHomogeneity, "identification")?;
    let (est, _) = estimands(args)?;
    let profile = identify(&est)?;
    let residual = profile.residual();
    let mut report =
        RunReport::new("identify", base_inputs(args), declared(args), Output::Identify { profile, residual });
    first_stage_warnings(&est, &mut report.warnings);
    Ok(report)
}

fn effect_bounds(args: &Common, panel: Option<&Panel>, inputs: &mut Inputs) -> Result<(f64, f64), CliError> {
    let bounds = match (args.bounds, panel) {
        (Some(b), _) => b,
        (None, Some(p)) => {
            inputs.bounds_from_outcome_range = true;
            default_effect_bounds(p)
        }
        (None, None) => return Err(CliError::usage("--bounds lo,hi is required with --dgp")),
    };
    if !(bounds.0 <= bounds.1) {
        return Err(EstimationError::EmptyBounds { lo: bounds.0, hi: bounds.1 }.into());
    }
    inputs.bounds = Some(bounds);
    Ok(bounds)
}

fn cmd_bounds(args: &Common) -> Result<RunReport, CliError> {
    let (est, panel) = estimands(args)?;
    let mut inputs = base_inputs(args);
    let (lo, hi) = effect_bounds(args, panel.as_ref(), &mut inputs)?;
    inputs.period = args.period;
    let periods: Vec<usize> = match args.period {
        Some(t) => vec![t],
        None if est.horizon >= 2 => (2..=est.horizon).collect(),
        None => return Err(EstimationError::PeriodOutOfRange { t: 1, horizon: est.horizon }.into()),
    };
    let signed = lo <= 0.0 && hi >= 0.0;
    let tight = args.assume.contains(&Assumption::CrossGroupHomogeneity);
    let mut warnings = Vec::new();
    if tight && !signed {
        warnings.push("tight bounds need lo <= 0 <= hi; reporting unrestricted general bounds only".to_string());
    }
    let mut bounds = Vec::new();
    for &t in &periods {
        if signed {
            bounds.push(bounds_general(&est, t, lo, hi)?);
            if tight {
                bounds.push(bounds_tight(&est, t, lo, hi)?);
            }
        } else {
            bounds.push(bounds_general_unrestricted(&est, t, lo, hi)?);
        }
    }
    let mut report = RunReport::new("bounds", inputs, declared(args), Output::Bounds { bounds });
    first_stage_warnings(&est, &mut report.warnings);
    report.warnings.extend(warnings);
    Ok(report)
}

fn cmd_decompose(args: &Common) -> Result<RunReport, CliError> {
    let spec = load_dgp(args)?;
    let t = args.period.ok_or_else(|| CliError::usage("--period is required"))?;
    let decomposition = decompose(&spec, t)?;
    let negative_weights = negative_weight_report(&spec, t)?;
    let mut inputs = base_inputs(args);
    inputs.period = Some(t);
    Ok(RunReport::new("decompose", inputs, declared(args), Output::Decompose { decomposition, negative_weights }))
}

fn cmd_simulate(args: &Common) -> Result<RunReport, CliError> {
    let spec = load_dgp(args)?;
    let n = args.n.ok_or_else(|| CliError::usage("--n is required"))?;
    if n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    if json_to_stdout(args) && args.out.is_none() {
        return Err(CliError::usage("simulate writes CSV to stdout; use --out with --json -"));
    }
    let seed = seed(args);
    let panel = draw_panel(&spec, n, seed);
    let write = |w: &mut dyn Write| panel.write_csv(w);
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::new("E_IO", format!("{}: {e}", path.display())))?;
            write(&mut BufWriter::new(file))?;
        }
        None => write(&mut io::stdout().lock())?,
    }
    let (n_z0, n_z1) = panel.arm_counts();
    let mut inputs = base_inputs(args);
    inputs.seed = Some(seed);
    inputs.n = Some(n);
    let mut report = RunReport::new(
        "simulate",
        inputs,
        declared(args),
        Output::Simulate {
            n_units: n,
            horizon: panel.horizon(),
            n_z1,
            n_z0,
            out: args.out.as_ref().map(|p| p.display().to_string()),
        },
    );
    if n_z0 == 0 || n_z1 == 0 {
        report.warnings.push("drawn panel has a single instrument arm".to_string());
    }
    Ok(report)
}

fn cmd_montecarlo(args: &Common) -> Result<RunReport, CliError> {
    let spec = load_dgp(args)?;
    let n = args.n.ok_or_else(|| CliError::usage("--n is required"))?;
    let reps = args.reps.ok_or_else(|| CliError::usage("--reps is required"))?;
    if n == 0 || reps == 0 {
        return Err(CliError::usage("--n and --reps must be at least 1"));
    }
    let seed = seed(args);
    let targets = TargetSelection {
        rf: true,
        fs: true,
        iv: true,
        identified: true,
        bounds: args.bounds,
        tight: args.assume.contains(&Assumption::CrossGroupHomogeneity),
    };
    let summary = monte_carlo(&spec, &MonteCarloConfig { n, reps, seed, targets });
    let mut inputs = base_inputs(args);
    inputs.seed = Some(seed);
    inputs.n = Some(n);
    inputs.reps = Some(reps);
    inputs.bounds = args.bounds;
    let mut report = RunReport::new("montecarlo", inputs, declared(args), Output::MonteCarlo { summary: summary.clone() });
    if summary.failed_replications > 0 {
        report.warnings.push(format!("{} of {reps} replications could not be estimated", summary.failed_replications));
    }
    if !args.assume.contains(&Assumption::CalendarHomogeneity) {
        report
            .warnings
            .push("delta targets are dynamic LATEs only under calendar-homogeneity (not declared)".to_string());
    }
    Ok(report)
}

fn cmd_bootstrap(args: &Common) -> Result<RunReport, CliError> {
    let panel = load_panel(args)?;
    let reps = args.reps.ok_or_else(|| CliError::usage("--reps is required"))?;
    let alpha = args.alpha.unwrap_or(0.05);
    let seed = seed(args);
    let mut inputs = base_inputs(args);
    let bounds = effect_bounds(args, Some(&panel), &mut inputs)?;
    inputs.seed = Some(seed);
    inputs.reps = Some(reps);
    inputs.alpha = Some(alpha);
    let calendar = args.assume.contains(&Assumption::CalendarHomogeneity);
    let targets = TargetSelection {
        rf: true,
        fs: true,
        iv: true,
        identified: calendar,
        bounds: (panel.horizon() >= 2).then_some(bounds),
        tight: args.assume.contains(&Assumption::CrossGroupHomogeneity),
    };
    let result = bootstrap(&panel, &BootstrapConfig { reps, alpha, seed, targets })?;
    let mut report = RunReport::new("bootstrap", inputs, declared(args), Output::Bootstrap { result: result.clone() });
    if !calendar {
        report.warnings.push("identified profile omitted: declare --assume calendar-homogeneity".to_string());
    }
    let failed = result.targets.iter().map(|t| t.failed).max().unwrap_or(0);
    if failed > 0 {
        report.warnings.push(format!("up to {failed} of {reps} resamples dropped (target undefined)"));
    }
    Ok(report)
}

fn num(x: f64) -> String {
    format!("{x:>12.6}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| format!("{:>12}", "undefined"), num)
}

/// Human-readable rendering of a report.
pub fn render(report: &RunReport) -> String {
    let mut s = String::new();
    let assumed: Vec<String> = report.assumptions.iter().map(|a| a.to_string()).collect();
    let _ = writeln!(s, "{}", report.command);
    if !assumed.is_empty() {
        let _ = writeln!(s, "assumptions: {}", assumed.join(", "));
    }
    match &report.output {
        Output::Check { diagnostics: d } => {
            let _ = writeln!(s, "units {} (z=1: {}, z=0: {}), periods {}", d.n, d.n_z1, d.n_z0, d.horizon);
            let _ = writeln!(s, "FS_1 {} relevance {:?}", num(d.fs1).trim(), d.relevance);
            for note in &d.notes {
                let _ = writeln!(s, "  - {note}");
            }
        }
        Output::Estimate { estimands: e, negative_weights, .. } => {
            let _ = writeln!(s, "{:>4} {:>12} {:>12} {:>12} {:>10}", "t", "RF", "FS", "IV", "neg.weight");
            for t in 1..=e.horizon {
                let flag = negative_weights
                    .periods
                    .iter()
                    .find(|p| p.t == t)
                    .map_or("-", |p| if p.flag == WeightFlag::Guaranteed { "guaranteed" } else { "possible" });
                let _ = writeln!(s, "{t:>4} {} {} {} {flag:>10}", num(e.rf(t)), num(e.fs(t)), opt(e.iv(t)));
            }
        }
        Output::Identify { profile, residual } => {
            let _ = writeln!(s, "{:>4} {:>12}", "tau", "Delta");
            for (tau, d) in profile.deltas.iter().enumerate() {
                let _ = writeln!(s, "{tau:>4} {}", num(*d));
            }
            let _ = writeln!(s, "residual {residual:.3e}");
        }
        Output::Bounds { bounds } => {
            let _ = writeln!(s, "{:>4} {:<22} {:>12} {:>12}", "t", "method", "lower", "upper");
            for b in bounds {
                let _ = writeln!(s, "{:>4} {:<22} {} {}", b.t, b.method.as_str(), num(b.lower), num(b.upper));
            }
        }
        Output::Decompose { decomposition: d, negative_weights } => {
            let _ = writeln!(s, "t = {}  RF = {}  FS = {}", d.t, num(d.rf).trim(), num(d.fs).trim());
            let _ = writeln!(
                s,
                "{:<24} {:>4} {:>12} {:>12} {:>12} {:>12}",
                "group", "sign", "prob", "effect", "contribution", "weight"
            );
            for g in d.all_terms() {
                let _ = writeln!(
                    s,
                    "{:<24} {:>4} {} {} {} {}",
                    g.notation,
                    g.sign.symbol(),
                    num(g.prob),
                    num(g.effect),
                    num(g.contribution),
                    opt(g.weight)
                );
            }
            let neg: Vec<&str> = negative_weights.terms().iter().map(|g| g.notation.as_str()).collect();
            let _ = writeln!(s, "negatively weighted: {}", if neg.is_empty() { "none".into() } else { neg.join(" ") });
        }
        Output::Simulate { n_units, horizon, n_z1, n_z0, out } => {
            let _ = writeln!(s, "{n_units} units x {horizon} periods (z=1: {n_z1}, z=0: {n_z0})");
            if let Some(out) = out {
                let _ = writeln!(s, "written to {out}");
            }
        }
        Output::MonteCarlo { summary } => {
            let _ = writeln!(s, "n = {}, reps = {}, seed = {}", summary.n, summary.reps, summary.seed);
            let _ = writeln!(
                s,
                "{:<32} {:>12} {:>12} {:>12} {:>12} {:>6}",
                "target", "oracle", "mean", "bias", "sd", "failed"
            );
            for t in &summary.targets {
                let _ = writeln!(
                    s,
                    "{:<32} {} {} {} {} {:>6}",
                    t.target.to_string(),
                    opt(t.oracle),
                    opt(t.mean),
                    opt(t.bias),
                    opt(t.sd),
                    t.failed
                );
            }
        }
        Output::Bootstrap { result } => {
            let _ = writeln!(
                s,
                "reps = {}, alpha = {}, seed = {}, method = {}",
                result.reps, result.alpha, result.seed, result.method
            );
            let _ = writeln!(s, "{:<32} {:>12} {:>12} {:>12} {:>6}", "target", "point", "lower", "upper", "failed");
            for t in &result.targets {
                let _ = writeln!(
                    s,
                    "{:<32} {} {} {} {:>6}",
                    t.target.to_string(),
                    opt(t.point),
                    opt(t.lower),
                    opt(t.upper),
                    t.failed
                );
            }
        }
    }
    s
}
