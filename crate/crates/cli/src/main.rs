//! `qcc` command-line harness.
//!
//! Exit status: 0 on success, 1 on usage errors (bad flags, unknown preset),
//! 2 on runtime errors (missing or malformed files, invalid configuration).

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qcc_core::analysis::{power_spectrum_with, SpectrumOptions};
use qcc_core::config::{load_config, to_json};
use qcc_core::experiment::{run_experiment, run_session};
use qcc_core::trace::{read_column, write_spectrum, write_trace};
use qcc_core::{HarnessError, Preset};

#[derive(Parser)]
#[command(
    name = "qcc",
    version,
    about = "Chaotic-oscillator key distribution simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one session from a JSON config and write its trace.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a named preset and write trace, spectrum and report into a directory.
    Experiment {
        preset: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Print the JSON config of a preset.
    ShowPreset { preset: String },
    #[command(subcommand)]
    Analyze(Analyze),
}

#[derive(Subcommand)]
enum Analyze {
    /// DFT magnitude spectrum of one trace column.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        column: String,
        #[arg(long)]
        out: PathBuf,
        /// Keep the mean (DC component) in the transformed series.
        #[arg(long)]
        no_detrend: bool,
    },
}

enum Failure {
    Usage(String),
    Runtime(HarnessError),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure::Runtime(e)
    }
}

fn parse_preset(name: &str) -> Result<Preset, Failure> {
    name.parse()
        .map_err(|e: qcc_core::presets::UnknownPreset| Failure::Usage(e.to_string()))
}

/// Writes to stdout; a closed pipe (`qcc show-preset x | head`) is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { config, seed, out } => {
            let mut cfg = load_config(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let outcome = run_session("main", cfg)?;
            write_trace(&out, &outcome.trace)?;
            emit(&format!(
                "ber={:.6}\nn_bits={}\nn_errors={}",
                outcome.ber.ber, outcome.ber.n_bits, outcome.ber.n_errors
            ));
        }
        Command::Experiment {
            preset,
            seed,
            out_dir,
        } => {
            let preset = parse_preset(&preset)?;
            let runs = run_experiment(preset, seed, &out_dir)?;
            for run in &runs {
                emit(&format!("{}: ber={:.6}", run.label, run.ber.ber));
            }
            emit(&format!("wrote {}", out_dir.display()));
        }
        Command::ShowPreset { preset } => {
            emit(&to_json(&parse_preset(&preset)?.config()));
        }
        Command::Analyze(Analyze::Spectrum {
            input,
            column,
            out,
            no_detrend,
        }) => {
            let series = read_column(&input, &column)?;
            let opts = SpectrumOptions {
                detrend: !no_detrend,
            };
            let spectrum = power_spectrum_with(&series, opts).map_err(HarnessError::from)?;
            write_spectrum(&out, &spectrum)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
