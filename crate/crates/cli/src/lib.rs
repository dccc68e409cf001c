//! `fkf-lab`: runs adaptive-filter scenarios from TOML files or named presets
//! and writes `trace.csv`, `steady_state_taps.csv` and optionally `plot.svg`.

pub mod config;
pub mod output;
pub mod plot;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fkf_core::sim::{presets, run_scenario};
use fkf_core::{AlgorithmConfig, ScenarioConfig, ScenarioResult, Variant};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker threads; 0 or unset means automatic.
pub const THREADS_ENV: &str = "FKF_LAB_THREADS";

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "fkf-lab", version, about = "Frequency-domain Kalman filter experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Run the algorithms listed in a scenario file.
    Run(ConfigArgs),
    /// Run FKF, MFKF1 and MFKF2 with the scenario's filter settings and rank them.
    Compare(ConfigArgs),
    /// Run every configured algorithm at each transition parameter A.
    SweepA(SweepArgs),
    /// Reproduce one of the built-in experiments.
    Preset(PresetArgs),
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct OutputArgs {
    /// Directory for the CSV and SVG artifacts.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Also write plot.svg.
    #[arg(long)]
    pub plot: bool,
    /// Comma-separated ensemble seeds, replacing the configured ones.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ConfigArgs {
    #[arg(long, value_parser = existing_file)]
    pub config: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = existing_file)]
    pub config: PathBuf,
    /// Comma-separated transition parameters in (0, 1].
    #[arg(long, value_delimiter = ',', required = true, value_parser = transition_parameter)]
    pub a: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct PresetArgs {
    #[arg(value_enum)]
    pub name: PresetName,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetName {
    Fig1,
    Fig2,
    Fig3,
}

impl PresetName {
    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Fig1 => "fig1",
            PresetName::Fig2 => "fig2",
            PresetName::Fig3 => "fig3",
        }
    }
}

fn existing_file(s: &str) -> Result<PathBuf, String> {
    let path = PathBuf::from(s);
    if path.is_file() {
        Ok(path)
    } else {
        Err(format!("no such file: {s}"))
    }
}

fn transition_parameter(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if a > 0.0 && a <= 1.0 {
        Ok(a)
    } else {
        Err(format!("A must lie in (0, 1], got {a}"))
    }
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Run(c) | Command::Compare(c) => &c.output,
            Command::SweepA(s) => &s.output,
            Command::Preset(p) => &p.output,
        }
    }

    fn title(&self) -> String {
        match self {
            Command::Run(c) => format!("run {}", c.config.display()),
            Command::Compare(c) => format!("compare {}", c.config.display()),
            Command::SweepA(s) => format!("A sweep {}", s.config.display()),
            Command::Preset(p) => format!("preset {}", p.name.as_str()),
        }
    }
}

#[derive(Debug)]
pub struct RuntimeError(String);

impl fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for RuntimeError {}

fn runtime<E: fmt::Display>(context: &str) -> impl FnOnce(E) -> RuntimeError + '_ {
    move |e| RuntimeError(format!("{context}: {e}"))
}

/// Parse `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

fn with_variants(base: &AlgorithmConfig, variants: &[Variant]) -> Vec<AlgorithmConfig> {
    variants
        .iter()
        .map(|&v| AlgorithmConfig { variant: v, ..*base })
        .collect()
}

/// The scenario a command describes, before any seed override.
pub fn resolve_scenario(cmd: &Command) -> Result<ScenarioConfig, RuntimeError> {
    let mut cfg = match cmd {
        Command::Run(c) => config::load(&c.config).map_err(runtime("invalid config"))?,
        Command::Compare(c) => {
            let mut cfg = config::load(&c.config).map_err(runtime("invalid config"))?;
            cfg.algorithms = with_variants(&cfg.algorithms[0], &Variant::ALL);
            cfg
        }
        Command::SweepA(s) => {
            let mut cfg = config::load(&s.config).map_err(runtime("invalid config"))?;
            cfg.algorithms = cfg
                .algorithms
                .iter()
                .flat_map(|alg| s.a.iter().map(move |&a| alg.with_a(a)))
                .collect();
            cfg
        }
        Command::Preset(p) => presets::by_name(p.name.as_str()).expect("every preset name resolves"),
    };
    if let Some(seeds) = &cmd.output().seeds {
        cfg.seeds = seeds.clone();
    }
    cfg.validate().map_err(runtime("invalid scenario"))?;
    Ok(cfg)
}

fn thread_pool() -> Result<rayon::ThreadPool, RuntimeError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|e| RuntimeError(format!("{THREADS_ENV}={v}: {e}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(runtime("cannot start worker threads"))
}

pub fn write_outputs(result: &ScenarioResult, out: &Path, plot: bool, title: &str) -> Result<(), RuntimeError> {
    fs::create_dir_all(out).map_err(runtime(&format!("cannot create {}", out.display())))?;
    output::write_artifacts(result, out).map_err(runtime(&format!("cannot write to {}", out.display())))?;
    if plot {
        let traces = result
            .labels
            .iter()
            .map(|l| result.ensemble(l))
            .collect::<Result<Vec<_>, _>>()
            .map_err(runtime("cannot average traces"))?;
        fs::write(out.join("plot.svg"), plot::misalignment_svg(&traces, title))
            .map_err(runtime(&format!("cannot write to {}", out.display())))?;
    }
    Ok(())
}

/// Run a parsed command; returns the process exit status.
pub fn execute(cli: &Cli) -> i32 {
    match try_execute(cli) {
        Ok(summary) => {
            print!("{summary}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

/// Like [`execute`], returning the console summary instead of printing it.
pub fn try_execute(cli: &Cli) -> Result<String, RuntimeError> {
    let cmd = &cli.command;
    let cfg = resolve_scenario(cmd)?;
    let out = &cmd.output().out;
    // Fail on an unwritable directory before spending time on the runs.
    fs::create_dir_all(out).map_err(runtime(&format!("cannot create {}", out.display())))?;
    let result = thread_pool()?
        .install(|| run_scenario(&cfg))
        .map_err(runtime("scenario failed"))?;
    write_outputs(&result, out, cmd.output().plot, &cmd.title())?;

    let mut rows = output::summarize(&result);
    if matches!(cmd, Command::Compare(_)) {
        rows.sort_by(|a, b| a.steady_state_db.total_cmp(&b.steady_state_db));
    }
    let mut summary = output::summary_table(&rows);
    summary.push_str(&format!("wrote {}\n", out.display()));
    Ok(summary)
}

/// Full entry point: parse, execute, map clap errors to exit status 2.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}
