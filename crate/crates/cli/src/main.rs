use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

/// Worthwhile-change dynamics on finite goal systems: validate instances,
/// walk them to variational traps, and certify every claimed property by
/// brute force.
#[derive(Parser)]
#[command(name = "evp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the standing hypotheses of a scenario and print the certificate.
    Validate { file: PathBuf },
    /// Run the descent and report the trap, trajectory, and refinement.
    Solve {
        file: PathBuf,
        /// Directory for report.json and trajectory.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve, then certify hypotheses, conclusions, and trap semantics.
    Certify {
        file: PathBuf,
        /// Directory for report.json and trajectory.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Certify the endpoint claimed by an existing report instead of
        /// re-solving.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List all stationary traps by direct evaluation at every point.
    Traps {
        file: PathBuf,
        /// Satisficing ratio; defaults to eps/lambda from the scenario.
        #[arg(long)]
        ratio: Option<f64>,
    },
    /// Solve over a grid of satisficing ratios and cost directions.
    Sweep {
        file: PathBuf,
        /// Comma-separated ratio values.
        #[arg(long, value_delimiter = ',', required = true)]
        ratios: Vec<f64>,
        /// JSON file holding an array of unit direction vectors.
        #[arg(long)]
        xis: PathBuf,
        /// Directory for sweep.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a random valid scenario, fully determined by the seed.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Validate { file } => commands::validate(&file),
        Command::Solve { file, out } => commands::solve(&file, out.as_deref()),
        Command::Certify { file, out, report } => {
            commands::certify(&file, out.as_deref(), report.as_deref())
        }
        Command::Traps { file, ratio } => commands::traps(&file, ratio),
        Command::Sweep {
            file,
            ratios,
            xis,
            out,
        } => commands::sweep(&file, &ratios, &xis, out.as_deref()),
        Command::Gen { seed, out } => commands::gen(seed, &out),
    };
    match status {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
