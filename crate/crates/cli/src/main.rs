//! `ris-sim`: simulate RIS-assisted mobile radio links.
//!
//! Exit codes: 0 success, 2 usage error (unknown preset/strategy, bad
//! arguments), 3 resource limit (permutation search cap), 4 numeric
//! contract violation (invalid geometry, scenario/strategy shape
//! mismatch).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ris_sim::error::SimError;
use ris_sim_cli::run::{self, RunConfig, Source, UsageError};

#[derive(Parser)]
#[command(name = "ris-sim", version, about = "RIS-assisted mobile link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a preset or a scenario file and write plot-ready CSV/JSON.
    Run(RunArgs),
    /// List every built-in preset with its parameters.
    ListPresets,
}

#[derive(Args)]
struct RunArgs {
    /// Built-in preset name (see list-presets).
    #[arg(long, conflicts_with = "scenario")]
    preset: Option<String>,
    /// Scenario JSON file.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Phase strategy; overrides the preset's choice.
    #[arg(long)]
    strategy: Option<String>,
    /// Seed for random geometry and random-phase strategies.
    #[arg(long)]
    seed: Option<u64>,
    /// FFT size override for the Doppler spectrum (power of two).
    #[arg(long)]
    fft: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Doppler-estimate error bound U fed to the controller (Hz).
    #[arg(long)]
    u_hz: Option<f64>,
    /// Hold phases for Q samples between controller updates.
    #[arg(long, conflicts_with = "hold_tr_us")]
    hold_q: Option<usize>,
    /// Hold phases for a reconfiguration interval t_r (µs).
    #[arg(long)]
    hold_tr_us: Option<f64>,
    /// Apply the realistic reflection model (−1 dB, phases in
    /// [−150°, +140°]).
    #[arg(long)]
    realistic_ris: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::ListPresets => {
            print!("{}", run::preset_listing());
            ExitCode::SUCCESS
        }
        Command::Run(args) => {
            let source = match (&args.preset, &args.scenario) {
                (Some(name), None) => Source::Preset(name.clone()),
                (None, Some(path)) => Source::ScenarioFile(path.clone()),
                _ => {
                    eprintln!("error: give exactly one of --preset or --scenario");
                    return ExitCode::from(2);
                }
            };
            let config = RunConfig {
                source,
                strategy: args.strategy,
                seed: args.seed,
                fft: args.fft,
                out_dir: args.out,
                u_hz: args.u_hz,
                hold_q: args.hold_q,
                hold_tr_us: args.hold_tr_us,
                realistic_ris: args.realistic_ris,
            };
            match run::run(&config) {
                Ok(manifest) => {
                    println!(
                        "wrote {} run(s) to {} in {} ms",
                        manifest.runs.len(),
                        config.out_dir.display(),
                        manifest.duration_ms
                    );
                    ExitCode::SUCCESS
                }
                Err(err) => {
                    eprintln!("error: {err:#}");
                    exit_code_for(&err)
                }
            }
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> ExitCode {
    if err.downcast_ref::<UsageError>().is_some() {
        return ExitCode::from(2);
    }
    match err.downcast_ref::<SimError>() {
        Some(SimError::Resource(_)) => ExitCode::from(3),
        Some(SimError::Domain(_)) | Some(SimError::Contract(_)) => ExitCode::from(4),
        None => ExitCode::FAILURE,
    }
}
