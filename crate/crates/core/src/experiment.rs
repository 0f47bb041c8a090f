//! Runs a preset and writes its artifacts into a directory.
//!
//! Layout of `out_dir` for a single-session preset:
//!
//! ```text
//! trace.csv      per-slot trace
//! spectrum.csv   detrended |DFT| of s1_a
//! report.txt     key=value lines (ber, qp_score, trojan alarms, ...)
//! ```
//!
//! Multi-session presets add `trace_<label>.csv` / `spectrum_<label>.csv`
//! for every session after the first and `<label>.`-prefixed report lines.

use std::fmt::Write as _;
use std::path::Path;

use crate::analysis::{power_spectrum, quasiperiodicity_score, Spectrum};
use crate::attacks::{trojan_monitor, TrojanMonitorConfig};
use crate::error::HarnessError;
use crate::key::BerReport;
use crate::presets::Preset;
use crate::sync::{session_ber, simulate_session, SessionConfig, SlotRecord};
use crate::trace::{write_spectrum, write_trace};

/// Everything measured on one session.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub label: &'static str,
    pub config: SessionConfig,
    pub trace: Vec<SlotRecord>,
    pub ber: BerReport,
    pub spectrum: Spectrum,
    /// `None` when the S1 trace is constant.
    pub qp_score: Option<f64>,
    pub alarm_a: bool,
    pub alarm_b: bool,
}

pub fn run_session(label: &'static str, config: SessionConfig) -> Result<RunOutcome, HarnessError> {
    let trace = simulate_session(&config)?;
    let ber = session_ber(&config, &trace)?;
    let s1_a: Vec<f64> = trace.iter().map(|r| r.s1_a).collect();
    let spectrum = power_spectrum(&s1_a)?;
    let qp_score = quasiperiodicity_score(&spectrum).ok();
    let monitor = TrojanMonitorConfig::default();
    Ok(RunOutcome {
        label,
        alarm_a: trojan_monitor(&monitor, config.incoming_mu_at_alice()),
        alarm_b: trojan_monitor(&monitor, config.incoming_mu_at_bob()),
        config,
        trace,
        ber,
        spectrum,
        qp_score,
    })
}

/// Runs every session of `preset` with `seed` (no files written).
pub fn run_preset(preset: Preset, seed: u64) -> Result<Vec<RunOutcome>, HarnessError> {
    preset
        .runs()
        .into_iter()
        .map(|(label, cfg)| run_session(label, cfg.with_seed(seed)))
        .collect()
}

fn fmt_score(score: Option<f64>) -> String {
    score.map_or_else(|| "nan".to_string(), |s| format!("{s:.6e}"))
}

pub fn render_report(preset: Preset, seed: u64, runs: &[RunOutcome]) -> String {
    let mut out = String::new();
    writeln!(out, "preset={}", preset.name()).unwrap();
    writeln!(out, "seed={seed}").unwrap();
    for (i, run) in runs.iter().enumerate() {
        let prefix = if i == 0 {
            String::new()
        } else {
            format!("{}.", run.label)
        };
        writeln!(out, "{prefix}ber={:.6}", run.ber.ber).unwrap();
        writeln!(out, "{prefix}n_bits={}", run.ber.n_bits).unwrap();
        writeln!(out, "{prefix}n_errors={}", run.ber.n_errors).unwrap();
        writeln!(out, "{prefix}qp_score={}", fmt_score(run.qp_score)).unwrap();
        writeln!(out, "{prefix}trojan_alarm_a={}", run.alarm_a).unwrap();
        writeln!(out, "{prefix}trojan_alarm_b={}", run.alarm_b).unwrap();
    }
    if let [first, second, ..] = runs {
        if let (Some(a), Some(b)) = (first.qp_score, second.qp_score) {
            writeln!(out, "qp_ratio={:.6e}", b / a).unwrap();
        }
    }
    out
}

/// Runs `preset` and writes traces, spectra and the report into `out_dir`.
pub fn run_experiment(
    preset: Preset,
    seed: u64,
    out_dir: &Path,
) -> Result<Vec<RunOutcome>, HarnessError> {
    let runs = run_preset(preset, seed)?;
    std::fs::create_dir_all(out_dir).map_err(|source| HarnessError::Write {
        path: out_dir.to_path_buf(),
        source,
    })?;
    for (i, run) in runs.iter().enumerate() {
        let suffix = if i == 0 {
            String::new()
        } else {
            format!("_{}", run.label)
        };
        write_trace(&out_dir.join(format!("trace{suffix}.csv")), &run.trace)?;
        write_spectrum(
            &out_dir.join(format!("spectrum{suffix}.csv")),
            &run.spectrum,
        )?;
    }
    let report_path = out_dir.join("report.txt");
    std::fs::write(&report_path, render_report(preset, seed, &runs)).map_err(|source| {
        HarnessError::Write {
            path: report_path,
            source,
        }
    })?;
    Ok(runs)
}
