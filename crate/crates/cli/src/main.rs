//! `ledp`: run the private graph algorithms on an edge-list file or a
//! generated graph and print JSON reports.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ledp_core::graph::{load_edge_list, GeneratorSpec};
use ledp_core::{Error, Graph, NoiseSource};

#[derive(Debug, Parser)]
#[command(
    name = "ledp",
    version,
    about = "Locally edge-private graph algorithms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact core numbers, degeneracy and maximum degree.
    KcoreExact(Common),
    /// Private core numbers by threshold peeling.
    KcoreDp {
        #[command(flatten)]
        common: Common,
        /// Additive threshold step (default 60 ln n / ε).
        #[arg(long, conflicts_with = "eta")]
        step: Option<f64>,
        /// Grow the threshold by a factor 1+η instead of an additive step.
        #[arg(long)]
        eta: Option<f64>,
        /// Geometric-sampling inner loop (needs --eta).
        #[arg(long, requires = "eta")]
        fast: bool,
    },
    /// Private core numbers from the level-based low-round algorithm.
    KcoreLevels {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
    },
    /// Dense vertex set read off private core numbers.
    Densest {
        #[command(flatten)]
        common: Common,
        /// Use level-based cores (factor γ = 2+η) instead of additive peeling.
        #[arg(long)]
        low_rounds: bool,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Cutoff below the top estimate (default 120 ln n / ε).
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// One-round randomized-response densest subgraph (n ≤ 26).
    #[command(name = "densest-1round")]
    DensestOneRound(Common),
    /// Private low out-degree ordering.
    Ordering {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        low_rounds: bool,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
    },
    /// Private defective coloring.
    Coloring {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        low_rounds: bool,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Replace the 100 ln n / ε saturation threshold.
        #[arg(long)]
        threshold_override: Option<f64>,
        /// Re-check every (vertex, color) pair after every step.
        #[arg(long)]
        literal_loop: bool,
    },
    /// Repeated trials against the exact oracles and error bounds.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        threshold_override: Option<f64>,
        #[arg(long)]
        literal_loop: bool,
    },
    /// Write a generated graph as an edge list.
    Generate {
        /// e.g. `clique:5+path:5` or `gnp:300:0.05:7`.
        #[arg(long = "generate", value_name = "SPEC")]
        spec: GeneratorSpec,
        /// Seed for gnp parts that do not name one.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    KcoreDp,
    KcoreMultiplicative,
    KcoreLevels,
    Ordering,
    OrderingLowRounds,
    Coloring,
    ColoringLowRounds,
    Densest,
    #[value(name = "densest-1round")]
    DensestOneRound,
}

#[derive(Debug, Args)]
struct Common {
    /// Edge-list file.
    #[arg(
        long,
        required_unless_present = "generate",
        conflicts_with = "generate"
    )]
    input: Option<PathBuf>,
    /// Generator spec used instead of a file.
    #[arg(long, value_name = "SPEC")]
    generate: Option<GeneratorSpec>,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replace every noise draw by its deterministic limit.
    #[arg(long)]
    zero_noise: bool,
    /// Verify structural invariants; exit 2 on any violation.
    #[arg(long)]
    check: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the public transcript as JSON.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

impl Common {
    fn graph(&self) -> Result<Graph, Error> {
        match (&self.input, &self.generate) {
            (Some(path), _) => load_edge_list(path),
            (None, Some(spec)) => spec.with_default_seed(self.seed).generate(),
            (None, None) => unreachable!("clap requires one graph source"),
        }
    }

    fn noise(&self) -> NoiseSource {
        if self.zero_noise {
            NoiseSource::zero()
        } else {
            NoiseSource::seeded(self.seed)
        }
    }
}

const EXIT_FAILURE: u8 = 1;
const EXIT_INVARIANT: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_CAP: u8 = 4;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Invariant(_) => EXIT_INVARIANT,
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::InvalidParameter(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::Invariant("x".into())), 2);
        assert_eq!(exit_code(&Error::InvalidParameter("x".into())), 3);
        assert_eq!(exit_code(&Error::CapExceeded { n: 30, cap: 26 }), 4);
        assert_eq!(exit_code(&Error::Empty("x")), 1);
    }
}
