//! `edgeworth`: model inspection, simulation, expansion tables and theorem
//! harnesses for one-split branching random walks.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::Settings;

#[derive(Parser, Debug)]
#[command(name = "edgeworth", version, about = "Edgeworth expansions for branching random walk profiles")]
struct Cli {
    /// Flat `key = value` settings file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for replicate ensembles.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the builtin models or describe one.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Grow runs and write their profiles.
    Simulate(#[command(flatten)] Settings),
    /// Tabulate the expansion terms over a range of levels.
    Expand(commands::ExpandArgs),
    /// Run a theorem harness and print its report.
    Verify {
        harness: Harness,
        /// Threshold file; `EDGEWORTH_FIXTURES` is used when absent.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[command(flatten)]
        settings: Settings,
    },
    /// Summarise a stored run: mode, width and limit estimates.
    Report {
        /// Directory written by `simulate`.
        #[arg(long)]
        run: PathBuf,
        #[command(flatten)]
        settings: Settings,
    },
}

#[derive(Subcommand, Debug)]
enum ModelsAction {
    List,
    Describe { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Harness {
    Clt,
    Saddle,
    Mode,
    Width,
    #[value(name = "occupation-a")]
    OccupationA,
    #[value(name = "occupation-b")]
    OccupationB,
    #[value(name = "occupation-c")]
    OccupationC,
    #[value(name = "occupation-uncentered")]
    OccupationUncentered,
    #[value(name = "occupation-log2")]
    OccupationLog2,
    Classical,
    Mean,
}

impl Harness {
    pub fn id(self) -> &'static str {
        match self {
            Harness::Clt => "clt",
            Harness::Saddle => "saddle",
            Harness::Mode => "mode",
            Harness::Width => "width",
            Harness::OccupationA => "occupation-a",
            Harness::OccupationB => "occupation-b",
            Harness::OccupationC => "occupation-c",
            Harness::OccupationUncentered => "occupation-uncentered",
            Harness::OccupationLog2 => "occupation-log2",
            Harness::Classical => "classical",
            Harness::Mean => "mean",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<edgeworth::Error> for CliError {
    fn from(e: edgeworth::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Whether a verify run met its threshold.
pub enum Verdict {
    Done,
    Failed,
}

fn run(cli: Cli) -> Result<Verdict, CliError> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let file = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    match cli.command {
        Command::Models { action: ModelsAction::List } => commands::models_list(),
        Command::Models { action: ModelsAction::Describe { name } } => commands::models_describe(&name),
        Command::Simulate(s) => commands::simulate(&s.over(file)),
        Command::Expand(args) => commands::expand(args, file),
        Command::Verify { harness, fixtures, settings } => {
            let fixtures = fixtures.or_else(|| std::env::var_os("EDGEWORTH_FIXTURES").map(PathBuf::from));
            commands::verify(harness, &settings.over(file), fixtures.as_deref())
        }
        Command::Report { run, settings } => commands::report(&run, &settings.over(file)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Done) => ExitCode::SUCCESS,
        Ok(Verdict::Failed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
