use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fluxmortar::mpfa::Raster;
use fluxmortar_cli::{parse_config, run, CliError};

#[derive(Parser)]
#[command(name = "fluxmortar", version, about = "Flux-mortar domain decomposition for 2D Darcy flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration file.
    Run { config: PathBuf },
    /// Validate a configuration file and print the resolved settings.
    Check { config: PathBuf },
    /// Write a synthetic channelized permeability raster.
    SynthRaster {
        output: PathBuf,
        #[arg(long, default_value_t = 60)]
        nx: usize,
        #[arg(long, default_value_t = 220)]
        ny: usize,
        /// Orders of magnitude between the smallest and largest value.
        #[arg(long, default_value_t = 6.0)]
        decades: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => {
            let c = parse_config(&config)?;
            let summary = run(&c)?;
            for l in summary.lines {
                println!("{l}");
            }
        }
        Command::Check { config } => {
            let c = parse_config(&config)?;
            println!("{}", serde_json::to_string_pretty(&c.to_json()).expect("settings serialize"));
        }
        Command::SynthRaster { output, nx, ny, decades, seed } => {
            let r = Raster::synthetic(nx, ny, decades, seed)?;
            std::fs::write(&output, r.to_text()).map_err(|source| CliError::Output { path: output.clone(), source })?;
            let (lo, hi) = r.min_max();
            println!("wrote {nx}x{ny} raster to {} (range {lo:.2e} .. {hi:.2e})", output.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
