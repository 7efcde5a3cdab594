//! The `randtest` command line.
//!
//! Reports are `key=value` lines followed by a blank line and a short
//! human-readable summary. Exit codes: `0` success, `1` usage or I/O error,
//! `2` degenerate data, `3` configuration error, `4` exact enumeration over
//! budget.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use randtest_core::engine::{
    bootstrap_distribution, exact_distribution, normal_critical_value, normal_test, orbit_average_reject_prob,
    orbit_size, pairing_permutation_distribution, randomization_distribution, EngineError, ReferenceDistribution,
    DEFAULT_EXACT_BUDGET,
};
use randtest_core::pearson::{self, fisher_ci};
use randtest_core::survival::mw_fit;
use randtest_core::{
    FisherZ, GroupKind, MannWhitney, PairedObservation, RandomSource, StatisticSpec, Studentized, TestResult,
};

use crate::config::read_config;
use crate::harness::{run_power_grid, run_type1_grid};
use crate::io::{read_censored, read_paired};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "randtest", version, about = "Studentized randomization tests for correlation and censored paired data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a Pearson correlation from an `x,y` CSV file.
    CorrTest(CorrArgs),
    /// Test the Mann-Whitney effect from a `time1,status1,time2,status2` CSV file.
    MwTest(MwArgs),
    /// Run a simulation grid described by a key=value config file.
    Simulate(SimulateArgs),
    /// Enumerate the full orbit of a finite group.
    EnumerateExact(ExactArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrGroup {
    Mirror,
    Rotation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrMethod {
    Randomization,
    Bootstrap,
    Permutation,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MwMethod {
    Randomization,
    Bootstrap,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExactGroup {
    Mirror,
    Exchange,
    Rotation,
}

#[derive(Debug, clap::Args)]
pub struct CorrArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "mirror")]
    pub group: CorrGroup,
    #[arg(long, value_enum, default_value = "randomization")]
    pub method: CorrMethod,
    /// Randomization or bootstrap replicates.
    #[arg(long = "B", default_value_t = 999, value_parser = clap::value_parser!(u64).range(1..))]
    pub replicates: u64,
    #[arg(long, default_value_t = 0.05, value_parser = level)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = open_correlation)]
    pub rho0: f64,
}

#[derive(Debug, clap::Args)]
pub struct MwArgs {
    pub file: PathBuf,
    /// Truncation horizon; required because it defines the effect.
    #[arg(long, value_parser = positive)]
    pub tau: f64,
    #[arg(long, value_enum, default_value = "randomization")]
    pub method: MwMethod,
    #[arg(long = "B", default_value_t = 999, value_parser = clap::value_parser!(u64).range(1..))]
    pub replicates: u64,
    #[arg(long, default_value_t = 0.05, value_parser = level)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    pub p0: f64,
}

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct ExactArgs {
    pub file: PathBuf,
    #[arg(long, value_enum)]
    pub group: ExactGroup,
    #[arg(long, default_value_t = 0.05, value_parser = level)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = open_correlation)]
    pub rho0: f64,
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    pub p0: f64,
    /// Required for the exchange group.
    #[arg(long, value_parser = positive)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_EXACT_BUDGET)]
    pub budget: u64,
}

fn real(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
}

fn level(s: &str) -> Result<f64, String> {
    let v = real(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("must lie in (0, 1)".into())
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = real(s)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be positive".into())
    }
}

fn open_correlation(s: &str) -> Result<f64, String> {
    let v = real(s)?;
    if v > -1.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("must lie in (-1, 1)".into())
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v = real(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err("must lie in [0, 1]".into())
    }
}

/// A failed command: exit code, message, and whatever was computed before
/// the failure.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    pub partial: Option<Report>,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            partial: None,
        }
    }

    fn io(err: impl std::fmt::Display) -> Self {
        Self::new(EXIT_USAGE, err.to_string())
    }

    fn engine(err: EngineError) -> Self {
        match err {
            EngineError::BudgetExceeded { orbit, budget } => Self::new(
                EXIT_BUDGET,
                format!("orbit of {orbit} element vectors exceeds the budget of {budget}; use a Monte-Carlo test with --B"),
            ),
            EngineError::DegenerateDistribution => Self::new(EXIT_DEGENERATE, err.to_string()),
            EngineError::Group(_) => Self::new(EXIT_CONFIG, err.to_string()),
            _ => Self::new(EXIT_USAGE, err.to_string()),
        }
    }
}

/// Ordered `key=value` pairs plus a free-form summary.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    pairs: Vec<(String, String)>,
    summary: Vec<String>,
}

impl Report {
    fn put(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.pairs.push((key.to_string(), value.to_string()));
        self
    }

    fn say(&mut self, line: String) {
        self.summary.push(line);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.pairs {
            let _ = writeln!(out, "{k}={v}");
        }
        if !self.summary.is_empty() {
            out.push('\n');
            out.push_str("--- summary ---\n");
            for line in &self.summary {
                let _ = writeln!(out, "{line}");
            }
        }
        out
    }

    fn result(&mut self, r: &TestResult) {
        self.put("mode", r.mode.as_str())
            .put("statistic", r.statistic)
            .put("critical_value", r.critical_value)
            .put("gamma", r.gamma)
            .put("reject_prob", r.reject_prob)
            .put("p_value", r.p_value)
            .put("replicates", r.replicates)
            .put("dropped", r.dropped)
            .put("degenerate_replicates", r.degenerate_replicates)
            .put("decision", decision(r.reject_prob));
    }
}

fn decision(reject_prob: f64) -> &'static str {
    if reject_prob >= 1.0 {
        "reject"
    } else if reject_prob <= 0.0 {
        "retain"
    } else {
        "randomize"
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing the report to stdout and errors to stderr. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = err.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            print!("{}", report.render());
            EXIT_OK
        }
        Err(failure) => {
            if let Some(report) = &failure.partial {
                print!("{}", report.render());
            }
            let _ = std::io::stdout().flush();
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

pub fn execute(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::CorrTest(args) => corr_test(args),
        Command::MwTest(args) => mw_test(args),
        Command::Simulate(args) => simulate(args),
        Command::EnumerateExact(args) => enumerate_exact(args),
    }
}

fn corr_test(args: &CorrArgs) -> Result<Report, Failure> {
    let data = read_paired(&args.file).map_err(Failure::io)?;
    let fit = pearson::fit(&data);
    let spec = StatisticSpec::two_sided(FisherZ, args.rho0);
    let b = args.replicates as usize;
    let source = RandomSource::new(args.seed, 0);

    let mut report = Report::default();
    report
        .put("command", "corr-test")
        .put("n", data.len())
        .put("method", args.method.to_possible_value().unwrap().get_name())
        .put("rho0", args.rho0)
        .put("alpha", args.alpha)
        .put("seed", args.seed)
        .put("rho_hat", fit.rho_hat)
        .put("sigma_rho", fit.sigma_rho_hat)
        .put("std_err", fit.sigma_rho_hat / (data.len() as f64).sqrt())
        .put("degenerate", fit.is_singular());
    if args.method == CorrMethod::Randomization {
        report.put("group", args.group.to_possible_value().unwrap().get_name());
    }
    if fit.is_singular() {
        let reason = if fit.degenerate {
            "a marginal sample variance is zero"
        } else {
            "the estimated variance of rho_hat is zero"
        };
        report.put("ci_lower", -1.0).put("ci_upper", 1.0);
        report.say(format!("Pearson correlation, n = {}: rho_hat = {}", data.len(), fit.rho_hat));
        report.say(format!("degenerate data ({reason}); the studentized statistic is undefined"));
        return Err(Failure {
            code: EXIT_DEGENERATE,
            message: format!("degenerate data: {reason}"),
            partial: Some(report),
        });
    }

    let (result, label) = match args.method {
        CorrMethod::Normal => (normal_test(&data, &spec, args.alpha).map_err(Failure::engine)?, "standard normal quantile".to_string()),
        method => {
            let dist = match method {
                CorrMethod::Randomization => {
                    let kind = match args.group {
                        CorrGroup::Mirror => GroupKind::Mirror,
                        CorrGroup::Rotation => GroupKind::Rotation,
                    };
                    randomization_distribution(&data, &spec, kind, b, source)
                }
                CorrMethod::Bootstrap => bootstrap_distribution(&data, &spec, b, source),
                _ => pairing_permutation_distribution(&data, &spec, b, source),
            }
            .map_err(Failure::engine)?;
            let label = match method {
                CorrMethod::Randomization => format!("{} randomization, B = {b}", args.group.to_possible_value().unwrap().get_name()),
                CorrMethod::Bootstrap => format!("bootstrap, B = {b}"),
                _ => format!("pairing permutation, B = {b}"),
            };
            (dist.decide(args.alpha).map_err(Failure::engine)?, label)
        }
    };
    report.result(&result);
    let (lo, hi) = fisher_ci(&data, result.critical_value);
    let level = 1.0 - args.alpha;
    report.put("ci_level", level).put("ci_lower", lo).put("ci_upper", hi);

    report.say(format!("Pearson correlation, n = {}", data.len()));
    report.say(format!("  estimate   {:.4} (se {:.4})", fit.rho_hat, fit.sigma_rho_hat / (data.len() as f64).sqrt()));
    report.say(format!("  H0         rho = {}", args.rho0));
    report.say(format!("  statistic  {:.4}, critical value {:.4} ({label})", result.statistic, result.critical_value));
    report.say(format!("  p-value    {:.4}; {}", result.p_value, decision(result.reject_prob)));
    report.say(format!("  {:.0}% CI     [{lo:.4}, {hi:.4}]", 100.0 * level));
    Ok(report)
}

fn mw_test(args: &MwArgs) -> Result<Report, Failure> {
    let data = read_censored(&args.file).map_err(Failure::io)?;
    let fit = mw_fit(&data, args.tau).map_err(Failure::io)?;
    let statistic = MannWhitney::new(args.tau);
    let spec = StatisticSpec::two_sided(statistic, args.p0);
    let b = args.replicates as usize;
    let source = RandomSource::new(args.seed, 0);
    let n = data.len();

    let mut report = Report::default();
    report
        .put("command", "mw-test")
        .put("n", n)
        .put("method", args.method.to_possible_value().unwrap().get_name())
        .put("tau", args.tau)
        .put("p0", args.p0)
        .put("alpha", args.alpha)
        .put("seed", args.seed)
        .put("events1", fit.events[0])
        .put("events2", fit.events[1])
        .put("p_hat", fit.p_hat)
        .put("sigma_phi", fit.sigma_phi_hat)
        .put("std_err", fit.std_err())
        .put("degenerate", fit.degenerate);
    if fit.degenerate {
        let message = match fit.empty_margin() {
            Some(j) => format!("degenerate: no events in margin {j}"),
            None => "degenerate: the estimated variance is zero".to_string(),
        };
        report.say(format!("Mann-Whitney effect, n = {n}, tau = {}: p_hat = {}", args.tau, fit.p_hat));
        report.say(message.clone());
        return Err(Failure {
            code: EXIT_DEGENERATE,
            message,
            partial: Some(report),
        });
    }

    let levels = [0.10, 0.05, 0.01];
    let (result, critical_values, label) = match args.method {
        MwMethod::Normal => {
            let r = normal_test(&data, &spec, args.alpha).map_err(Failure::engine)?;
            let cs = levels.map(|a| normal_critical_value(a, spec.sidedness));
            (r, cs, "standard normal quantile".to_string())
        }
        method => {
            let dist: ReferenceDistribution = match method {
                MwMethod::Randomization => randomization_distribution(&data, &spec, GroupKind::Exchange, b, source),
                _ => bootstrap_distribution(&data, &spec, b, source),
            }
            .map_err(Failure::engine)?;
            let cs = levels.map(|a| dist.critical_value(a).0);
            let label = match method {
                MwMethod::Randomization => format!("exchange randomization, B = {b}"),
                _ => format!("bootstrap, B = {b}"),
            };
            (dist.decide(args.alpha).map_err(Failure::engine)?, cs, label)
        }
    };
    report.result(&result);
    let eval = statistic.evaluate(&data);
    let mut intervals = Vec::new();
    for (a, c) in levels.iter().zip(critical_values) {
        let pct = ((1.0 - a) * 100.0).round() as u32;
        let (lo, hi) = statistic.interval(&eval, c);
        report.put(&format!("ci{pct}_lower"), lo).put(&format!("ci{pct}_upper"), hi);
        intervals.push((pct, lo, hi));
    }

    report.say(format!("Mann-Whitney effect, n = {n}, tau = {}", args.tau));
    report.say(format!("  estimate   {:.4} (se {:.4})", fit.p_hat, fit.std_err()));
    report.say(format!("  H0         p = {}", args.p0));
    report.say(format!("  statistic  {:.4}, critical value {:.4} ({label})", result.statistic, result.critical_value));
    report.say(format!("  p-value    {:.4}; {}", result.p_value, decision(result.reject_prob)));
    for (pct, lo, hi) in intervals {
        report.say(format!("  {pct}% CI     [{lo:.4}, {hi:.4}]"));
    }
    Ok(report)
}

fn simulate(args: &SimulateArgs) -> Result<Report, Failure> {
    let config = read_config(&args.config).map_err(|e| Failure::new(EXIT_CONFIG, e.to_string()))?;
    let table = match &config.effects {
        Some(effects) => run_power_grid(&config.grid, effects),
        None => run_type1_grid(&config.grid),
    }
    .map_err(|e| Failure::new(EXIT_CONFIG, e.to_string()))?;
    write_table(&args.out, &table)?;

    let mut report = Report::default();
    report
        .put("command", "simulate")
        .put("kind", if config.effects.is_some() { "power" } else { "type1" })
        .put("rows", table.rows.len())
        .put("reps", config.grid.reps)
        .put("B", config.grid.replicates)
        .put("seed", config.grid.seed)
        .put("out", args.out.display());
    report.say(format!("{} rows written to {}", table.rows.len(), args.out.display()));
    for row in &table.rows {
        report.say(format!(
            "  {:<28} n={:<4} effect={:<5} alpha={:<5} {:<20} {:.4} ± {:.4}",
            row.scenario, row.n, row.effect, row.alpha, row.method.as_str(), row.rejection_rate, row.mc_stderr
        ));
    }
    Ok(report)
}

fn write_table(path: &Path, table: &crate::harness::ResultTable) -> Result<(), Failure> {
    let file = std::fs::File::create(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    table.write_csv(std::io::BufWriter::new(file)).map_err(Failure::io)
}

fn enumerate_exact(args: &ExactArgs) -> Result<Report, Failure> {
    let mut report = Report::default();
    report.put("command", "enumerate-exact");
    match args.group {
        ExactGroup::Rotation => Err(Failure::new(
            EXIT_CONFIG,
            "group not finite: rotation cannot be enumerated; use corr-test with --B",
        )),
        ExactGroup::Mirror => {
            let data: Vec<PairedObservation> = read_paired(&args.file).map_err(Failure::io)?;
            report.put("group", "mirror").put("rho0", args.rho0);
            let spec = StatisticSpec::two_sided(FisherZ, args.rho0);
            exact_report(report, &data, &spec, GroupKind::Mirror, args)
        }
        ExactGroup::Exchange => {
            let tau = args
                .tau
                .ok_or_else(|| Failure::new(EXIT_USAGE, "--tau is required for the exchange group"))?;
            let data = read_censored(&args.file).map_err(Failure::io)?;
            report.put("group", "exchange").put("tau", tau).put("p0", args.p0);
            let spec = StatisticSpec::two_sided(MannWhitney::new(tau), args.p0);
            exact_report(report, &data, &spec, GroupKind::Exchange, args)
        }
    }
}

fn exact_report<T, S>(
    mut report: Report,
    data: &[T],
    spec: &StatisticSpec<S>,
    kind: GroupKind,
    args: &ExactArgs,
) -> Result<Report, Failure>
where
    T: randtest_core::GroupAction,
    S: Studentized<T>,
{
    let orbit = orbit_size(kind, data.len()).map_err(Failure::engine)?;
    report.put("n", data.len()).put("alpha", args.alpha).put("orbit_size", orbit);
    let dist = exact_distribution(data, spec, kind, args.budget).map_err(Failure::engine)?;
    let result = dist.decide(args.alpha).map_err(Failure::engine)?;
    let average = orbit_average_reject_prob(&dist, args.alpha).map_err(Failure::engine)?;
    report.put("estimate", result.estimate);
    report.result(&result);
    report.put("orbit_average_reject_prob", format!("{average:.12}"));

    report.say(format!("exact enumeration over {orbit} element vectors (n = {})", data.len()));
    report.say(format!("  statistic  {:.4}, critical value {:.4}, gamma {:.4}", result.statistic, result.critical_value, result.gamma));
    report.say(format!("  p-value    {:.4}; {}", result.p_value, decision(result.reject_prob)));
    report.say(format!("  orbit average of the test function: {average:.12} (alpha = {})", args.alpha));
    Ok(report)
}
