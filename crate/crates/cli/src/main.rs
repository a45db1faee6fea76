use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ccars::config::RunConfig;
use ccars::run::{execute, Command};

/// Chirped-pulse CARS and adiabatic passage simulations.
#[derive(Debug, Parser)]
#[command(name = "sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run any scenario.
    Run(Common),
    /// 2-D scan of one observable.
    Scan(Common),
    /// Two-level versus four-level comparison over a scan grid.
    Compare(Common),
    /// Layered-medium propagation.
    Propagate(Common),
    /// Wigner distribution of a chirped pulse.
    Wigner(Common),
    /// Phase-model classification and regression suite.
    Phasefit(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// JSON configuration file.
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for scans and batches (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Read dimensional inputs in THz, fs and THz/fs.
    #[arg(long)]
    si: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Run(a) => (Command::Run, a),
        Cmd::Scan(a) => (Command::Scan, a),
        Cmd::Compare(a) => (Command::Compare, a),
        Cmd::Propagate(a) => (Command::Propagate, a),
        Cmd::Wigner(a) => (Command::Wigner, a),
        Cmd::Phasefit(a) => (Command::Phasefit, a),
    };
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    let result = RunConfig::from_path(&args.config, args.si).and_then(|cfg| execute(&cfg, command, &args.out));
    match result {
        Ok(manifest) => {
            log::info!(
                "{} finished in {:.2} s, wrote {} files to {}",
                manifest.scenario,
                manifest.wall_time_s,
                manifest.outputs.len() + 1,
                args.out.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
