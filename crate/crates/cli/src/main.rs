use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nimfa_cli::{run, CliError, Command, ExperimentConfig, Overrides};
use nimfa_core::Variant;

#[derive(Parser)]
#[command(name = "nimfa", version, about = "Mean-field versus stochastic simulation experiments on block model graphs")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Master seed; overrides `master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: logical cores). Results do not depend on it.
    #[arg(long)]
    parallelism: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Nimfa,
    Annealed,
    Bhmfa,
}

#[derive(Subcommand)]
enum Sub {
    /// Sample graphs (and initial conditions) to edge-list files.
    Generate(Common),
    /// Gillespie ensemble on graph 0; block averages per replicate.
    Simulate(Common),
    /// Mean-field solution on graph 0.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "nimfa")]
        variant: VariantArg,
    },
    /// Error estimate over graphs plus diagnostics on graph 0.
    Compare(Common),
    /// Scaling sweep over the `sweep` design grid.
    Sweep(Common),
    /// Exact master equation on graph 0 (tiny graphs only).
    Oracle(Common),
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (command, common) = match cli.command {
        Sub::Generate(c) => (Command::Generate, c),
        Sub::Simulate(c) => (Command::Simulate, c),
        Sub::Solve { common, variant } => {
            let v = match variant {
                VariantArg::Nimfa => Variant::Nimfa,
                VariantArg::Annealed => Variant::Annealed,
                VariantArg::Bhmfa => Variant::Bhmfa,
            };
            (Command::Solve(v), common)
        }
        Sub::Compare(c) => (Command::Compare, c),
        Sub::Sweep(c) => (Command::Sweep, c),
        Sub::Oracle(c) => (Command::Oracle, c),
    };
    let config = ExperimentConfig::load(&common.config)?;
    let overrides = Overrides { seed: common.seed, out: common.out, parallelism: common.parallelism };
    let manifest = run(command, config, &overrides)?;
    for entry in &manifest.outputs {
        println!("{}  {}", entry.sha256, entry.file);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
