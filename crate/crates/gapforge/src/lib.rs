//! The `gapforge` command line: argument and config resolution, JSON
//! reports, the prime-table cache and the thread pool around
//! `gapforge-core`.

pub mod cache;
pub mod certjson;
pub mod commands;
pub mod config;
mod error;
pub mod parallel;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

pub use error::{CliError, CliResult};

use config::Knobs;
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "gapforge", version, about = "Large prime gaps around prime powers, at desk scale")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Flat key = value file; flags win over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Prime-table cache directory; `GAPFORGE_CACHE` overrides it.
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<String>,
    /// Print the JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report here.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long = "log-level", global = true)]
    pub log_level: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sieve, assemble m0, scan rows and certify a gap.
    Construct(commands::construct::ConstructArgs),
    /// Re-verify a certificate file.
    Verify(commands::verify::VerifyArgs),
    /// Sieve-weight tables and their diagnostic checks.
    Weights(commands::weights::WeightsArgs),
    /// Semi-random covering simulation.
    CoverSim(commands::cover::CoverArgs),
    /// Monte-Carlo survival of good integers under random classes.
    Concentration(commands::concentration::ConcentrationArgs),
    /// Dickman's rho and exact smooth counts.
    Rho(commands::rho::RhoArgs),
}

/// Resolved global settings shared by every command.
pub struct Env {
    knobs: Option<Knobs>,
    config: Map<String, Value>,
    pub seed: u64,
    pub threads: usize,
    pub cache_dir: Option<PathBuf>,
    pub pool: Option<rayon::ThreadPool>,
}

impl Env {
    pub fn knobs(&mut self) -> &mut Knobs {
        self.knobs.as_mut().expect("knobs used after freeze")
    }

    /// Ends knob resolution: unknown file keys fail here, before any work.
    pub fn freeze(&mut self) -> CliResult<()> {
        if let Some(k) = self.knobs.take() {
            self.config = k.finish()?;
            self.pool = Some(parallel::pool(self.threads)?);
        }
        Ok(())
    }

    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        self.pool.as_ref().expect("freeze before work").install(f)
    }
}

/// What a command hands back: its report and whether its checks passed.
pub struct Outcome {
    pub payload: Value,
    pub environment: Map<String, Value>,
    pub timings: Vec<(String, f64)>,
    pub passed: bool,
    pub summary: String,
}

fn resolve_env(g: &Global) -> CliResult<Env> {
    let file = match &g.config {
        Some(p) => config::load_config(p)?,
        None => Default::default(),
    };
    let mut knobs = Knobs::new(file);
    let seed = knobs.get("seed", g.seed, 0u64)?;
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let threads = knobs.get("threads", g.threads, cores)?;
    config::require(threads >= 1, || "threads must be at least 1".into())?;
    let dir = knobs.optional("cache-dir", g.cache_dir.clone())?;
    let cache_dir = std::env::var_os("GAPFORGE_CACHE")
        .filter(|s| !s.is_empty())
        .map(PathBuf::from)
        .or(dir.map(PathBuf::from));
    knobs.optional::<String>("log-level", g.log_level.clone())?;
    Ok(Env {
        knobs: Some(knobs),
        config: Map::new(),
        seed,
        threads,
        cache_dir,
        pool: None,
    })
}

fn dispatch(cmd: &Command, env: &mut Env) -> CliResult<(&'static str, Outcome)> {
    Ok(match cmd {
        Command::Construct(a) => ("construct", commands::construct::run(a, env)?),
        Command::Verify(a) => ("verify", commands::verify::run(a, env)?),
        Command::Weights(a) => ("weights", commands::weights::run(a, env)?),
        Command::CoverSim(a) => ("cover-sim", commands::cover::run(a, env)?),
        Command::Concentration(a) => ("concentration", commands::concentration::run(a, env)?),
        Command::Rho(a) => ("rho", commands::rho::run(a, env)?),
    })
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let mut env = resolve_env(&cli.global)?;
    let level = cli.global.log_level.as_deref().unwrap_or("warn");
    let _ = env_logger::Builder::new().parse_filters(level).is_test(false).try_init();
    let (command, out) = dispatch(&cli.command, &mut env)?;
    env.freeze()?;
    let report = Report {
        command,
        config: std::mem::take(&mut env.config),
        payload: out.payload,
        environment: out.environment,
        timings: out.timings,
    };
    let text = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    if let Some(path) = &cli.global.output {
        std::fs::write(path, format!("{text}\n")).map_err(|e| CliError::io(path, e))?;
    }
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let printed = if cli.global.json {
        writeln!(lock, "{text}")
    } else {
        writeln!(lock, "{}", out.summary)
    };
    printed.map_err(|e| CliError::io("<stdout>", e))?;
    Ok(if out.passed { 0 } else { 1 })
}

/// Parses `argv` (program name first) and runs the command. Exit codes:
/// 0 success, 1 verification failure, 2 config or usage error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gapforge: {e}");
            e.exit_code()
        }
    }
}
