use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gslab_core::Error;
use serde_json::Value;

mod commands;
mod report;

#[derive(Parser, Debug)]
#[command(name = "gslab", version, about = "Graph-state toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed recorded in every report and used by all randomized steps.
    #[arg(long, global = true, env = "GSLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel sweeps (0 = one per core).
    #[arg(long, global = true, env = "GSLAB_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Reject inputs with more vertices than this.
    #[arg(long = "max-n", global = true, env = "GSLAB_MAX_N")]
    pub max_n: Option<usize>,
    /// Numerical tolerance: PPT eigenvalue floor and purification target infidelity.
    #[arg(long, global = true, env = "GSLAB_TOLERANCE")]
    pub tolerance: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true, env = "GSLAB_OUTPUT")]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum InitialArg {
    Plus,
    Zero,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ChannelArg {
    Depolarizing,
    Dephasing,
    Bitflip,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a Clifford circuit on the graph-state simulator.
    Simulate {
        circuit: PathBuf,
        /// Register size; defaults to the largest vertex in the circuit.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "plus")]
        initial: InitialArg,
    },
    /// LC classes of connected graphs on n vertices.
    Classify {
        #[arg(long)]
        n: usize,
    },
    /// Schmidt-measure bounds and rank indices of a graph.
    Entanglement {
        graph: PathBuf,
        /// Include the Schmidt rank of every bipartition.
        #[arg(long)]
        cuts: bool,
    },
    /// Labelled LC orbit of a graph.
    Orbit {
        graph: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Decide LC equivalence of two graphs.
    Equiv { first: PathBuf, second: PathBuf },
    /// Reduce a stabilizer to a graph plus local Cliffords.
    Reduce { stabilizer: PathBuf },
    /// Reduced states and correlations of a weighted graph state.
    Weighted {
        graph: PathBuf,
        /// Comma-separated vertices of A (1-based).
        #[arg(long, value_delimiter = ',')]
        a: Vec<usize>,
        /// Two vertices for the correlation matrix.
        #[arg(long, value_delimiter = ',')]
        pair: Option<Vec<usize>>,
    },
    /// Noisy graph-diagonal state and its PPT report.
    Decohere {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "depolarizing")]
        channel: ChannelArg,
        /// Channel parameter p (1 = noiseless).
        #[arg(long)]
        p: f64,
        /// Also write λ as little-endian doubles.
        #[arg(long)]
        lambda_out: Option<PathBuf>,
        /// Pair threshold for two vertices (1-based).
        #[arg(long, value_delimiter = ',')]
        pair: Option<Vec<usize>>,
        /// Skip the PPT report.
        #[arg(long)]
        no_ppt: bool,
    },
    /// Recurrence purification of a depolarized two-colorable graph state.
    Purify {
        graph: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        rounds: usize,
        /// Depolarizing strength of every local operation.
        #[arg(long, default_value_t = 0.0)]
        local_noise: f64,
        /// Also bisect for the threshold channel parameter.
        #[arg(long)]
        threshold: bool,
    },
    /// Stabilizer Bell inequality and entanglement witnesses.
    Bell {
        graph: PathBuf,
        /// Depolarizing parameter of the state the witnesses are evaluated on.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Io(PathBuf, std::io::Error),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.global.threads > 0 {
        // a second global pool is an error only if one was already built
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global();
    }
    let result = commands::dispatch(&cli.global, &cli.command).and_then(|body| {
        let text = report::render(&cli.global, &cli.command, body);
        match &cli.global.output {
            Some(p) => fs::write(p, text).map_err(|e| CliError::Io(p.clone(), e)),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(1)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

pub type Body = serde_json::Map<String, Value>;
