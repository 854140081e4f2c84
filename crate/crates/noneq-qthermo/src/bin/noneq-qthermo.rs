//! Thin CLI over the library: `run`, `validate`, `figure`.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use noneq_qthermo::config::parse_config;
use noneq_qthermo::figures::{figure_data, FigureId};
use noneq_qthermo::scenario::run_scenario;
use noneq_qthermo::validate::run_validation;

#[derive(Parser)]
#[command(
    name = "noneq-qthermo",
    about = "Nonequilibrium quantum thermodynamics of a damped bosonic mode",
    long_about = "Simulates a single bosonic mode in an Ohmic thermal reservoir exactly \
                  (non-Markovian), and emits the full thermodynamic ledger per time step: \
                  internal energy, work/heat rates, energy and von Neumann entropies, \
                  coherence, entropy fluxes, dynamical temperature, and free energy. \
                  Units: hbar = k_B = 1. Set NONEQ_QTHERMO_THREADS=1 to force sequential \
                  execution (outputs are bitwise identical for any thread count)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a JSON config and write series + metadata.
    Run {
        /// Path to the JSON configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long, default_value = "noneq-run")]
        out: PathBuf,
    },
    /// Run the invariant self-check suite; nonzero exit on any failure.
    Validate {
        /// Trim the check windows for a quicker pass.
        #[arg(long)]
        fast: bool,
        /// Coarsen every check grid by this factor (convergence checks will
        /// fail for large factors; useful as a negative control).
        #[arg(long, default_value_t = 1.0)]
        dt_scale: f64,
    },
    /// Emit plot-ready .dat files for one of the reference figures.
    Figure {
        /// Which figure: fig1 | fig2 | fig3.
        #[arg(long)]
        id: String,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    noneq_qthermo::init_threads_from_env();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run { config, out } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading config {}", config.display()))?;
            let cfg = parse_config(&text)?;
            let artifacts = run_scenario(&cfg, &out)?;
            println!("wrote {}", artifacts.series_path.display());
            println!("wrote {}", artifacts.meta_path.display());
            for w in &artifacts.ledger.warnings {
                println!("warning: {w}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { fast, dt_scale } => {
            let report = run_validation(fast, dt_scale)?;
            print!("{}", report.render_table());
            Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Figure { id, out } => {
            let fig: FigureId = id.parse()?;
            let paths = figure_data(fig, &out)?;
            for p in paths {
                println!("wrote {}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
