use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fadr_cli::config::{Mode, RunConfig};
use fadr_cli::runner;

#[derive(Parser)]
#[command(
    name = "fadr",
    about = "Fractional advection-reaction-diffusion solver kit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// 2D fractional-diffusion convergence ladders
    Brunner(ModeArgs),
    /// Spectral (phase/group-velocity) contour scans
    Dispersion(ModeArgs),
    /// Viscoelastic channel-flow simulation
    Channel(ModeArgs),
    /// 1D linear FADR run with per-step diagnostics
    Fadr1d(ModeArgs),
}

#[derive(clap::Args)]
struct ModeArgs {
    /// Path to the TOML run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing)
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Validate the configuration and exit without running
    #[arg(long)]
    check: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (expected_mode, args) = match &cli.command {
        Command::Brunner(a) => (Mode::Brunner, a),
        Command::Dispersion(a) => (Mode::Dispersion, a),
        Command::Channel(a) => (Mode::Channel, a),
        Command::Fadr1d(a) => (Mode::Fadr1d, a),
    };

    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: reading {}: {e}", args.config.display());
            return ExitCode::FAILURE;
        }
    };
    let cfg = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    if cfg.mode != expected_mode {
        eprintln!(
            "error: config declares mode \"{}\" but the {} subcommand was invoked",
            cfg.mode, expected_mode
        );
        return ExitCode::FAILURE;
    }
    if args.check {
        println!("configuration ok: mode {}", cfg.mode);
        return ExitCode::SUCCESS;
    }

    match runner::execute(&cfg, &text, &args.out) {
        Ok(summary) => {
            println!("{summary}");
            println!("outputs in {}", args.out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            // numerical failures leave a diagnostics file beside the outputs
            let _ = std::fs::create_dir_all(&args.out);
            let _ = std::fs::write(
                args.out.join("failure.txt"),
                format!("run failed: {e}\n"),
            );
            ExitCode::FAILURE
        }
    }
}
