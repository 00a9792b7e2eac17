use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kexpr::cli::{self, EvolveOptions};
use kexpr::engine::Algorithm;
use kexpr::evalkit::Problem;
use kexpr::{Error, ErrorKind};

/// Gene expression programming for symbolic regression.
#[derive(Parser)]
#[command(name = "kexpr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic dataset (tp1, tp2 or dew) as CSV.
    Gen {
        problem: Problem,
        #[arg(long, default_value_t = 100)]
        rows: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evolve models and write statistics and fronts to an output directory.
    Evolve {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the parameter file and KEXPR_SEED.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        #[arg(long)]
        algorithm: Option<Algorithm>,
        #[arg(long)]
        generations: Option<usize>,
        /// Replace an existing output directory.
        #[arg(long)]
        force: bool,
    },
    /// Evaluate a model on the test part of an ordered train/test split.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 0.75)]
        split: f64,
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the node count of an infix expression.
    Size {
        expression: String,
        /// Treat the top-level `+` chain as links between this many genes.
        #[arg(long)]
        genes: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Gen { problem, rows, seed, out } => cli::cmd_gen(problem, rows, seed, &out),
        Command::Evolve {
            config,
            data,
            out,
            seed,
            runs,
            algorithm,
            generations,
            force,
        } => {
            let summary = cli::cmd_evolve(&EvolveOptions {
                config,
                data,
                out: out.clone(),
                seed,
                env_seed: std::env::var("KEXPR_SEED").ok(),
                runs,
                algorithm,
                generations,
                force,
            })?;
            println!(
                "{} run(s) of {} with seed {}; merged front of {} model(s) in {}",
                runs,
                summary.config.algorithm,
                summary.config.seed,
                summary.merged_front.len(),
                out.display()
            );
            Ok(())
        }
        Command::Predict {
            model,
            data,
            split,
            target,
            out,
        } => {
            let s = cli::cmd_predict(&model, &data, split, target.as_deref(), &out)?;
            match s.test_rrse {
                Some(e) => println!("test RRSE {e} over {} rows ({} invalid)", s.rows, s.invalid_rows),
                None => println!("test RRSE undefined over {} rows ({} invalid)", s.rows, s.invalid_rows),
            }
            Ok(())
        }
        Command::Size { expression, genes } => {
            println!("{}", cli::cmd_size(&expression, genes)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kexpr: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Config => 3,
                ErrorKind::Data => 4,
                ErrorKind::Runtime => 5,
            })
        }
    }
}
