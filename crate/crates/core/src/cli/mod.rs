//! The `cinewild` command line.
//!
//! ```text
//! cinewild run      (--config PATH | --preset e1|e2) [--mode M] [--seed N] --out DIR
//! cinewild compare  --preset e1|e2 [--seeds N] --out DIR
//! cinewild plot     --in metrics.csv --out DIR [--which PANEL ...]
//! cinewild presets  [--out DIR]
//! ```
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid input. The
//! `CINEWILD_THREADS` environment variable sets the worker count; results do
//! not depend on it.

mod compare;
pub mod plot;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::harness::io::{self, IoError};
use crate::harness::{experiment1_preset, experiment2_preset, run, HarnessError, Mode, RunSummary, Scenario};

pub use compare::{comparison_rows, ComparisonRow, SeedPair, Stat};
pub use plot::Panel;

pub const THREADS_ENV: &str = "CINEWILD_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cinewild", version, about = "Wildlife-aware drone cinematography planner and simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one closed-loop simulation and write metrics.csv and summary.json.
    Run(RunArgs),
    /// Run both controllers over several seeds and tabulate mean ± std.
    Compare(CompareArgs),
    /// Draw SVG panels from a metrics.csv.
    Plot(PlotArgs),
    /// List the built-in scenarios, or write them as editable JSON files.
    Presets(PresetsArgs),
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct Source {
    /// Scenario JSON file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in scenario.
    #[arg(long)]
    pub preset: Option<PresetName>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: Source,
    /// Controller variant; defaults to the scenario's own mode.
    #[arg(long)]
    pub mode: Option<ModeArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub preset: PresetName,
    /// Seeds 0..N are run for each controller.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Panels to draw; all of them when omitted.
    #[arg(long, value_delimiter = ',')]
    pub which: Vec<Panel>,
}

#[derive(Debug, Args)]
pub struct PresetsArgs {
    /// Directory to write e1.json and e2.json into.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PresetName {
    E1,
    E2,
}

impl PresetName {
    pub const ALL: [PresetName; 2] = [PresetName::E1, PresetName::E2];

    pub fn scenario(self) -> Scenario {
        match self {
            PresetName::E1 => experiment1_preset(),
            PresetName::E2 => experiment2_preset(),
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            PresetName::E1 => "e1",
            PresetName::E2 => "e2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Cinewild,
    Baseline,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Cinewild => Mode::Cinewild,
            ModeArg::Baseline => Mode::Baseline,
        }
    }
}

/// A failed command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, flags or input files (exit 2).
    Invalid(String),
    /// Anything that went wrong while running (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        if e.is_invalid_input() {
            CliError::Invalid(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Scenario(e) => CliError::Invalid(e.to_string()),
            HarnessError::Plan(e) => CliError::Runtime(e.to_string()),
        }
    }
}

/// Entry point of the binary.
pub fn main() {
    std::process::exit(run_from(std::env::args_os()));
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match configure_threads().and_then(|_| execute(&cli.command)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Invalid(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Run(a) => cmd_run(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Plot(a) => cmd_plot(a),
        Command::Presets(a) => cmd_presets(a),
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))
}

#[derive(Serialize)]
struct RunSidecar<'a> {
    scenario: &'a str,
    mode: Mode,
    seed: u64,
    steps: usize,
    summary: &'a RunSummary,
}

fn cmd_run(a: &RunArgs) -> Result<(), CliError> {
    let mut scenario = match (&a.source.config, a.source.preset) {
        (Some(path), _) => io::load_scenario(path)?,
        (None, Some(p)) => p.scenario(),
        (None, None) => unreachable!("clap requires one source"),
    };
    if let Some(m) = a.mode {
        scenario = scenario.with_mode(m.into());
    }
    scenario.validate().map_err(|e| CliError::Invalid(e.to_string()))?;

    let out = run(&scenario, a.seed)?;
    create_dir(&a.out)?;
    io::write_csv(&a.out.join("metrics.csv"), &out.records)?;
    let sidecar = RunSidecar {
        scenario: &scenario.name,
        mode: scenario.mode,
        seed: a.seed,
        steps: out.records.len(),
        summary: &out.summary,
    };
    io::write_json(&a.out.join("summary.json"), &sidecar)?;

    let m = &out.summary.overall;
    let v = |x: Option<f64>| x.map_or("-".to_string(), |x| format!("{x:.2}"));
    println!(
        "{} {} seed {}: {} steps, mean d_dt {} m, f {} mm, |a| {} m/s², inside FoV {}%",
        scenario.name,
        scenario.mode,
        a.seed,
        out.records.len(),
        v(m.d_dt),
        v(m.f),
        v(m.a_norm),
        v(out.summary.near.pct_inside_fov)
    );
    println!("wrote {}", a.out.display());
    Ok(())
}

fn cmd_compare(a: &CompareArgs) -> Result<(), CliError> {
    if a.seeds == 0 {
        return Err(CliError::Invalid("--seeds must be at least 1".into()));
    }
    let scenario = a.preset.scenario();
    let result = compare::run_comparison(&scenario, a.seeds)?;
    create_dir(&a.out)?;
    io::write_json(&a.out.join("summaries.json"), &result.paired)?;
    let table = compare::rows_to_csv(&result.rows);
    io::write_atomic(&a.out.join("comparison.csv"), &table)?;
    print!("{}", compare::render_table(&scenario.name, a.seeds, &result.rows));
    println!("wrote {}", a.out.display());
    Ok(())
}

fn cmd_plot(a: &PlotArgs) -> Result<(), CliError> {
    let records = io::read_csv(&a.input)?;
    if records.is_empty() {
        return Err(CliError::Invalid(format!("{}: no rows to plot", a.input.display())));
    }
    let panels: Vec<Panel> = if a.which.is_empty() { Panel::ALL.to_vec() } else { a.which.clone() };
    create_dir(&a.out)?;
    for p in panels {
        let path = a.out.join(format!("{}.svg", p.key()));
        io::write_atomic(&path, plot::render(p, &records).as_bytes())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_presets(a: &PresetsArgs) -> Result<(), CliError> {
    match &a.out {
        None => {
            for p in PresetName::ALL {
                let s = p.scenario();
                let names: Vec<&str> = s.sequences.iter().map(|q| q.name.as_str()).collect();
                println!("{}  {}  {:.0} s  sequences: {}", p.key(), s.name, s.total_duration(), names.join(", "));
            }
        }
        Some(dir) => {
            create_dir(dir)?;
            for p in PresetName::ALL {
                let path = dir.join(format!("{}.json", p.key()));
                io::save_scenario(&path, &p.scenario())?;
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}
