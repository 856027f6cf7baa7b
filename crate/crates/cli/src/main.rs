use clap::Parser;
use soc_cli::{invoke, parse_convention, Invocation, Overrides, Subcommand};
use soc_core::linalg::DirectSumNorm;
use soc_core::Limits;
use std::path::PathBuf;
use std::process::ExitCode;

/// Run a spectral functor-calculus experiment from a JSON config.
#[derive(Debug, Parser)]
#[command(name = "soc", version)]
struct Args {
    subcommand: Subcommand,
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; stdout when neither this nor `output_path` is set.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = parse_convention)]
    convention: Option<DirectSumNorm>,
    /// Plethysm norm constant used by `stability`.
    #[arg(long)]
    kpl: Option<f64>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let inv = Invocation {
        subcommand: args.subcommand,
        config_path: args.config,
        out: args.out,
        overrides: Overrides {
            seed: args.seed,
            convention: args.convention,
            k_pl: args.kpl,
        },
    };
    match invoke(&inv, &Limits::from_env()) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("soc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
