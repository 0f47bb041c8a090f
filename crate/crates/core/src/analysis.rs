//! DFT magnitude spectra of S1 traces and a peak-to-median periodicity score.
//!
//! A chaotic S1 trace has a broad spectrum. Pinning one station with bright
//! pulses turns the orbit periodic and the energy collapses into a handful
//! of narrow lines, which the score picks up as a large max/median ratio.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

use crate::error::AnalysisError;

/// Two-sided DFT magnitudes. `magnitudes[k]` belongs to frequency `k / n`
/// cycles per slot, for k in `0..n` (bins above n/2 are the negative
/// frequencies, as in the standard DFT ordering).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub magnitudes: Vec<f64>,
    pub n: usize,
}

impl Spectrum {
    pub fn frequency_fraction(&self, bin: usize) -> f64 {
        bin as f64 / self.n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumOptions {
    /// Subtract the series mean before transforming.
    pub detrend: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { detrend: true }
    }
}

/// Unnormalized DFT `X[k] = Σ x[n] e^{-j2πkn/N}` by direct summation.
/// O(N²); used as the reference for the fast path.
pub fn dft_direct(series: &[f64]) -> Vec<Complex64> {
    let n = series.len();
    (0..n)
        .map(|k| {
            series
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    // reduce k·i mod N in integers to keep the angle small
                    let phase = -TAU * ((k * i) % n) as f64 / n as f64;
                    x * Complex64::from_polar(1.0, phase)
                })
                .sum()
        })
        .collect()
}

/// Unnormalized DFT via FFT.
pub fn dft(series: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = series.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    if !buf.is_empty() {
        FftPlanner::new()
            .plan_fft_forward(buf.len())
            .process(&mut buf);
    }
    buf
}

pub fn power_spectrum(series: &[f64]) -> Result<Spectrum, AnalysisError> {
    power_spectrum_with(series, SpectrumOptions::default())
}

pub fn power_spectrum_with(
    series: &[f64],
    opts: SpectrumOptions,
) -> Result<Spectrum, AnalysisError> {
    if series.len() < 2 {
        return Err(AnalysisError::TooShort { len: series.len() });
    }
    let input: Vec<f64> = if opts.detrend {
        let mean = series.iter().sum::<f64>() / series.len() as f64;
        series.iter().map(|x| x - mean).collect()
    } else {
        series.to_vec()
    };
    Ok(Spectrum {
        magnitudes: dft(&input).into_iter().map(|c| c.norm()).collect(),
        n: series.len(),
    })
}

/// max |X[k]|² / median |X[k]|² over bins 1..=N/2.
pub fn quasiperiodicity_score(spec: &Spectrum) -> Result<f64, AnalysisError> {
    let half = spec.n / 2;
    if half < 1 || spec.magnitudes.len() < half + 1 {
        return Err(AnalysisError::TooShort { len: spec.n });
    }
    let mut power: Vec<f64> = spec.magnitudes[1..=half].iter().map(|m| m * m).collect();
    let max = power.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(AnalysisError::DegenerateSpectrum);
    }
    power.sort_by(f64::total_cmp);
    let mid = power.len() / 2;
    let median = if power.len().is_multiple_of(2) {
        0.5 * (power[mid - 1] + power[mid])
    } else {
        power[mid]
    };
    // Exact line spectra leave the median at rounding-noise level; floor it
    // relative to the peak so the score stays finite.
    Ok(max / median.max(max * f64::EPSILON * f64::EPSILON))
}
