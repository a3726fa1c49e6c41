//! `percolab` command-line front end.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 when a computation
//! fails. Human-readable summaries go to standard output; machine-readable
//! results are written only to `--out`.

mod commands;
mod model_args;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::*;

#[derive(Parser, Debug)]
#[command(
    name = "percolab",
    version,
    about = "Random graphs and long-range percolation experiments"
)]
struct Cli {
    /// Worker threads for parallel replicates [default: available cores]
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample one graph and write it as an edge list
    Gen(GenArgs),
    /// Generating-function theory (er, nsw) or the regime table (hom-lrp, het-lrp)
    Theory(TheoryArgs),
    /// Degree histogram and Hill tail estimate of one sample
    Degrees(DegreesArgs),
    /// Connected components of one sample
    Components(ComponentsArgs),
    /// Chemical-distance profile of one sample against spatial distance
    Distance(DistanceArgs),
    /// Left-right crossing probability of a lattice model
    Crossing(CrossingArgs),
    /// Bisect for the parameter value at a target crossing probability
    Bisect(BisectArgs),
    /// Semi-clusters of one box of a lattice sample
    Semicluster(SemiclusterArgs),
    /// Multi-stage renormalisation goodness of one box
    Renorm(RenormArgs),
    /// Run a config-file parameter sweep
    Sweep(SweepArgs),
    /// Crossing-trend phase diagram of the heterogeneous model
    Phase(PhaseArgs),
    /// Fit distance growth laws to a long-range lattice model
    Distances(DistancesArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    /// A validation failure of the core library, reported against the flag
    /// that carries the offending value.
    pub fn usage(e: percolab::Error) -> Self {
        match e {
            percolab::Error::InvalidParameter { name, reason } => CliError::Usage(format!(
                "invalid value for {}: {reason}",
                model_args::flag_for(name)
            )),
            percolab::Error::Config(msg) => CliError::Usage(flagify(&msg)),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<percolab::Error> for CliError {
    fn from(e: percolab::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Rewrites backquoted config keys as flags.
fn flagify(msg: &str) -> String {
    let mut out = String::new();
    for (i, part) in msg.split('`').enumerate() {
        if i % 2 == 0 {
            out.push_str(part);
        } else if percolab::model::MODEL_KEYS.contains(&part) {
            out.push_str(&model_args::flag_for(part));
        } else {
            out.push('`');
            out.push_str(part);
            out.push('`');
        }
    }
    out
}

/// Files a command has written. They are removed if the command fails.
#[derive(Default)]
pub struct Outputs {
    written: Vec<PathBuf>,
}

impl Outputs {
    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        self.written.push(path.to_path_buf());
        percolab::experiments::write_atomic(path, bytes).map_err(CliError::from)
    }

    /// Registers a file written by library code.
    pub fn track(&mut self, path: PathBuf) {
        self.written.push(path);
    }

    fn remove_all(&self) {
        for p in &self.written {
            let _ = std::fs::remove_file(p);
        }
    }
}

fn run(cli: Cli, outputs: &mut Outputs) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage(
                "invalid value for --threads: must be at least 1".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    match cli.command {
        Command::Gen(a) => gen(a, outputs),
        Command::Theory(a) => theory(a, outputs),
        Command::Degrees(a) => degrees(a, outputs),
        Command::Components(a) => components(a, outputs),
        Command::Distance(a) => distance(a, outputs),
        Command::Crossing(a) => crossing(a, outputs),
        Command::Bisect(a) => bisect(a, outputs),
        Command::Semicluster(a) => semicluster(a, outputs),
        Command::Renorm(a) => renorm(a, outputs),
        Command::Sweep(a) => sweep(a, outputs),
        Command::Phase(a) => phase(a, outputs),
        Command::Distances(a) => distances(a, outputs),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut outputs = Outputs::default();
    match run(cli, &mut outputs) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            outputs.remove_all();
            match e {
                CliError::Usage(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(1)
                }
                CliError::Runtime(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
