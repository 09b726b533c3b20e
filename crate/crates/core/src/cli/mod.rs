//! Command-line front end.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage or input error,
//! 3 degenerate data.

pub mod input;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::montecarlo::controls::{DataModel, simulate_p_values};
use crate::montecarlo::lemmas::{
    self, HALF_LIMIT_TOLERANCE, LemmaCheckReport, max_spacing_scaling, verify_half_limit, verify_lemma31,
    verify_uniform_ratio,
};
use crate::montecarlo::{SimConfig, simulate_cluster_statistic, simulate_half_statistic};
use crate::projection::projection_scan;
use output::{DetectionOutput, Format, ProjectOutput, Rendered};

pub const SEED_ENV: &str = "GAPDEX_SEED";

#[derive(Debug, Parser)]
#[command(name = "gapdex", version, about = "Spacings-based cluster index with Gumbel calibration")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find the strongest two-cluster split of one column and test it.
    Detect(DetectArgs),
    /// Simulate the null law of the centered cluster index.
    Simulate(SimulateArgs),
    /// Run analytic and Monte Carlo checks of the limit theory.
    Verify(VerifyArgs),
    /// Scan random 1-D projections of multivariate data.
    Project(ProjectArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed [default: $GAPDEX_SEED, else 0]
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for Monte Carlo replicates (output does not depend on it).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Column name or 0-based index.
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    /// Evaluation grid, `start:stop:step` or a comma list.
    #[arg(long, default_value = "-2:6:0.5", allow_hyphen_values = true)]
    pub grid: String,
    /// Simulate the positive-side maximum instead of the cluster index.
    #[arg(long)]
    pub half: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Inequalities,
    Truncated,
    Lemma31,
    HalfLimit,
    UniformRatio,
    Scaling,
    Power,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub check: Check,
    /// Sample size (scaling: comma list of sizes).
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// Order-statistic indices for lemma31, comma-separated.
    #[arg(long)]
    pub indices: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub directions: usize,
    #[command(flatten)]
    pub common: Common,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("{SEED_ENV}={v:?} is not an unsigned 64-bit integer"))),
        (None, None) => Ok(0),
    }
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Usage("--threads must be at least 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Usage(format!("cannot start {t} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn parse_list<T: std::str::FromStr>(what: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Usage(format!("invalid {what} list {s:?}")))
        })
        .collect()
}

fn single_n(n: Option<&str>, default: usize) -> Result<usize> {
    match n {
        None => Ok(default),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("--n expects one integer here, got {s:?}"))),
    }
}

fn detect(args: &DetectArgs) -> Result<Rendered> {
    let series = input::load_series(&args.input, args.column.as_deref())?;
    let out = DetectionOutput::from_series(&series)?;
    Ok(Rendered::ok(args.format, &out, output::detection_rows(&out)))
}

fn simulate(args: &SimulateArgs, env_seed: Option<&str>) -> Result<Rendered> {
    if args.n < 3 {
        return Err(Error::Usage(format!("--n must be at least 3, got {}", args.n)));
    }
    if args.reps < 1 {
        return Err(Error::Usage("--reps must be at least 1".into()));
    }
    let seed = resolve_seed(args.common.seed, env_seed)?;
    let grid = input::parse_grid(&args.grid)?;
    let cfg = SimConfig::new(args.n, args.reps, seed, grid)?;
    let report = in_pool(args.common.threads, || {
        if args.half {
            simulate_half_statistic(&cfg)
        } else {
            simulate_cluster_statistic(&cfg)
        }
    })??;
    let mut rendered = Rendered::ok(args.common.format, &report, output::simulation_rows(&report));
    if args.common.format == Format::Csv {
        rendered.stderr = format!("ks_distance={}\n", report.ks_distance);
    }
    Ok(rendered)
}

fn run_check(check: Check, args: &VerifyArgs, seed: u64) -> Result<LemmaCheckReport> {
    match check {
        Check::Inequalities => Ok(lemmas::verify_inequalities()),
        Check::Truncated => Ok(lemmas::verify_truncated_facts()),
        Check::Lemma31 => {
            let n = single_n(args.n.as_deref(), 1000)?;
            let indices = match &args.indices {
                Some(s) => parse_list("index", s)?,
                None => vec![n / 2 + 1, n * 9 / 10, n.saturating_sub(10), n.saturating_sub(1)],
            };
            verify_lemma31(n, &indices, args.eps, args.reps.unwrap_or(10_000), seed)
        }
        Check::HalfLimit => verify_half_limit(
            single_n(args.n.as_deref(), 2000)?,
            args.reps.unwrap_or(20_000),
            seed,
            &[-1.0, 0.0, 1.0, 2.0],
            HALF_LIMIT_TOLERANCE,
        ),
        Check::UniformRatio => verify_uniform_ratio(single_n(args.n.as_deref(), 50)?, args.reps.unwrap_or(200), seed),
        Check::Scaling => {
            let sizes = match &args.n {
                Some(s) => parse_list("size", s)?,
                None => vec![100, 1000, 10_000],
            };
            max_spacing_scaling(&sizes, args.reps.unwrap_or(2000), seed)
        }
        Check::Power => power_check(single_n(args.n.as_deref(), 500)?, args.reps.unwrap_or(200), seed),
        Check::All => unreachable!("expanded by the caller"),
    }
}

/// Median p-value under a separation-6 mixture below 0.01, and the null
/// rejection rate at 5% within [1%, 15%].
pub fn power_check(n: usize, reps: usize, seed: u64) -> Result<LemmaCheckReport> {
    use std::collections::BTreeMap;
    let mut mixture = simulate_p_values(DataModel::LocationMixture { separation: 6.0 }, n, reps, seed)?;
    mixture.sort_unstable_by(f64::total_cmp);
    let median = crate::montecarlo::ecdf::quantile_sorted(&mixture, 0.5);
    let null = simulate_p_values(DataModel::StandardNormal, n, reps, seed.wrapping_add(1))?;
    let rate = null.iter().filter(|&&p| p < 0.05).count() as f64 / reps as f64;
    let p = |pairs: &[(&str, f64)]| -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    };
    let cases = vec![
        lemmas::LemmaCase {
            label: "mixture_median_p_value".into(),
            parameters: p(&[("n", n as f64), ("separation", 6.0)]),
            observed: median,
            reference: 0.01,
            standard_error: 0.0,
            pass: median < 0.01,
        },
        lemmas::LemmaCase {
            label: "null_rejection_rate_at_5pct".into(),
            parameters: p(&[("n", n as f64), ("band_low", 0.01), ("band_high", 0.15)]),
            observed: rate,
            reference: 0.05,
            standard_error: (rate * (1.0 - rate) / reps as f64).sqrt(),
            pass: (0.01..=0.15).contains(&rate),
        },
    ];
    let overall_pass = cases.iter().all(|c| c.pass);
    Ok(LemmaCheckReport {
        check: "power".into(),
        reps,
        seed,
        cases,
        overall_pass,
        indeterminate: false,
    })
}

fn verify(args: &VerifyArgs, env_seed: Option<&str>) -> Result<Rendered> {
    let seed = resolve_seed(args.common.seed, env_seed)?;
    let checks: Vec<Check> = if args.check == Check::All {
        vec![
            Check::Inequalities,
            Check::Truncated,
            Check::Lemma31,
            Check::HalfLimit,
            Check::UniformRatio,
            Check::Scaling,
            Check::Power,
        ]
    } else {
        vec![args.check]
    };
    let reports = in_pool(args.common.threads, || {
        checks
            .iter()
            .map(|&c| run_check(c, args, seed))
            .collect::<Result<Vec<_>>>()
    })??;
    let all_pass = reports.iter().all(|r| r.overall_pass);
    let rows = output::lemma_table(&reports);
    let mut rendered = if reports.len() == 1 {
        Rendered::ok(args.common.format, &reports[0], rows)
    } else {
        Rendered::ok(args.common.format, &reports[..], rows)
    };
    if !all_pass {
        rendered.code = 1;
        let failed: Vec<String> = reports
            .iter()
            .filter(|r| !r.overall_pass)
            .map(|r| {
                if r.indeterminate {
                    format!("{} (indeterminate: too few replicates for a verdict)", r.check)
                } else {
                    r.check.clone()
                }
            })
            .collect();
        rendered.stderr = format!("verification failed: {}\n", failed.join(", "));
    }
    Ok(rendered)
}

fn project(args: &ProjectArgs, env_seed: Option<&str>) -> Result<Rendered> {
    let seed = resolve_seed(args.common.seed, env_seed)?;
    let rows = input::load_matrix(&args.input)?;
    let scan = projection_scan(&rows, args.directions, seed)?;
    let out = ProjectOutput::new(scan)?;
    let mut rendered = Rendered::ok(args.common.format, &out, output::project_rows(&out));
    rendered.stderr = format!(
        "note: p-value is for the best of {} directions and is not corrected for multiplicity\n",
        out.directions_tried
    );
    Ok(rendered)
}

/// Parses `args` (including the program name) and runs the command, taking
/// the default seed from `env_seed`.
pub fn run_with_env<I, T>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Detect(a) => detect(a),
        Command::Simulate(a) => simulate(a, env_seed),
        Command::Verify(a) => verify(a, env_seed),
        Command::Project(a) => project(a, env_seed),
    };
    match result.and_then(Rendered::finish) {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// As [`run_with_env`], reading the default seed from `GAPDEX_SEED`.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var(SEED_ENV).ok();
    run_with_env(args, env.as_deref())
}
