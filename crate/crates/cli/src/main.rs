use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use topogauge::checks::{self, Suite};
use topogauge::config::{ExperimentKind, OUTPUT_ROOT_ENV};

#[derive(Parser)]
#[command(name = "topogauge", version, about = "Gauge-structure experiments for spinning particles in vortex fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        config: PathBuf,
    },
    /// Run an acceptance suite and print a CSV report (id, measured, tolerance, pass).
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Directory holding reference CSVs for the `figures` suite.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// List the available experiments.
    ListExperiments,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Quick,
    Figures,
    Oracles,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => match topogauge::run_file(&config) {
            Ok(out) => {
                for w in &out.warnings {
                    eprintln!("warning: {w}");
                }
                for f in &out.files {
                    println!("{}", f.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
        Command::Verify { suite, reference } => {
            let suite = match suite {
                SuiteArg::Quick => Suite::Quick,
                SuiteArg::Figures => Suite::Figures,
                SuiteArg::Oracles => Suite::Oracles,
                SuiteArg::All => Suite::All,
            };
            let reference = reference.unwrap_or_else(checks::default_reference_dir);
            let report = checks::run_suite(suite, &reference);
            print!("{}", checks::render_report(&report));
            if report.iter().all(|c| c.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::ListExperiments => {
            for k in ExperimentKind::ALL {
                println!("{:<16} {}", k.name(), k.summary());
            }
            println!("\noutput root override: {OUTPUT_ROOT_ENV}");
            ExitCode::SUCCESS
        }
    }
}
