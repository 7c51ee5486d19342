//! Command-line front end: moment tables, kernel evaluation, verification
//! suites, and closed-vs-quadrature comparison, with reproducible
//! machine-readable output.

mod commands;
mod config;
mod output;
mod points;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bergkern::family::parse_params;
use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "bergkern",
    version,
    about = "Weighted Bergman kernels on Reinhardt domains",
    after_help = "Families: cn (params n, mu1, mu2), dnm (n, m, mu1, mu2, eta), \
                  veta (n, m, eta[, a]), ball (n), disc (= ball with n=1).\n\
                  BERGKERN_THREADS caps worker threads (default: all cores)."
)]
struct Cli {
    /// JSON run-config file; file values win over conflicting flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Kernel family name (cn | dnm | veta | ball | disc).
    #[arg(long)]
    family: Option<String>,
    /// Family parameters as key=value (vectors comma-separated), e.g.
    /// --params n=1 mu1=1 mu2=2
    #[arg(long, num_args = 0.., value_name = "K=V")]
    params: Vec<String>,
    /// Custom weight descriptor file (JSON), instead of --family.
    #[arg(long, value_name = "FILE")]
    weight_file: Option<PathBuf>,
    /// Tolerance (meaning depends on the command).
    #[arg(long)]
    tol: Option<f64>,
    /// RNG seed (required for Monte-Carlo schemes).
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (json | csv | jsonl, command-dependent).
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate moments I(alpha) for |alpha| <= degree.
    Moments {
        #[command(flatten)]
        common: CommonArgs,
        /// Degree bound (<= 200).
        #[arg(long)]
        degree: Option<u32>,
        /// closed | quadrature | both (default: both for families).
        #[arg(long)]
        method: Option<String>,
    },
    /// Evaluate kernels at point pairs from a file.
    Eval {
        #[command(flatten)]
        common: CommonArgs,
        /// Points file: one pair per line, coordinates as re,im.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Series degree budget.
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// cross_validate | orthogonality | reproducing | parseval | gram | all.
        #[arg(long)]
        suite: Option<String>,
        /// quadrature | mc.
        #[arg(long)]
        scheme: Option<String>,
        /// Monte-Carlo sample budget.
        #[arg(long)]
        samples: Option<u64>,
        /// Number of sampled point pairs (cross_validate).
        #[arg(long)]
        num_points: Option<usize>,
        /// Series degree budget (cross_validate).
        #[arg(long)]
        max_degree: Option<u32>,
        /// Boundary slack of sampled points.
        #[arg(long)]
        slack: Option<f64>,
    },
    /// Compare closed-form and quadrature moments.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Degree bound.
        #[arg(long)]
        degree: Option<u32>,
    },
}

fn flags_to_config(command: Option<Command>) -> Result<RunConfig, bergkern::Error> {
    let mut cfg = RunConfig::default();
    let common = match command {
        None => return Ok(cfg),
        Some(Command::Moments {
            common,
            degree,
            method,
        }) => {
            cfg.command = Some("moments".into());
            cfg.degree = degree;
            cfg.method = method;
            common
        }
        Some(Command::Eval {
            common,
            points,
            max_degree,
        }) => {
            cfg.command = Some("eval".into());
            cfg.points = points;
            cfg.max_degree = max_degree;
            common
        }
        Some(Command::Verify {
            common,
            suite,
            scheme,
            samples,
            num_points,
            max_degree,
            slack,
        }) => {
            cfg.command = Some("verify".into());
            cfg.suite = suite;
            cfg.scheme = scheme;
            cfg.samples = samples;
            cfg.num_points = num_points;
            cfg.max_degree = max_degree;
            cfg.slack = slack;
            common
        }
        Some(Command::Compare { common, degree }) => {
            cfg.command = Some("compare".into());
            cfg.degree = degree;
            common
        }
    };
    cfg.family = common.family;
    if !common.params.is_empty() {
        cfg.params = Some(parse_params(&common.params)?);
    }
    cfg.weight_file = common.weight_file;
    cfg.tol = common.tol;
    cfg.seed = common.seed;
    cfg.out = common.out;
    cfg.format = common.format;
    Ok(cfg)
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var("BERGKERN_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                // ignore failure: the global pool may already exist in tests
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn run() -> anyhow::Result<i32> {
    let cli = Cli::parse();
    init_thread_pool();
    let flags = flags_to_config(cli.command)?;
    let cfg = match &cli.config {
        Some(path) => RunConfig::merge_file_over_flags(path, flags)?,
        None => flags,
    };
    let command = cfg
        .command
        .clone()
        .ok_or_else(|| anyhow::anyhow!("no command given (flags or config file)"))?;
    match command.as_str() {
        "moments" => commands::moments::run(&cfg),
        "eval" => commands::eval::run(&cfg),
        "verify" => commands::verify::run(&cfg),
        "compare" => commands::compare::run(&cfg),
        other => anyhow::bail!("unknown command '{other}'"),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
