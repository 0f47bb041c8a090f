//! Threshold discretization of S1 traces and bit-error statistics.

use crate::error::KeyError;
use crate::oeo::{iterate_free, stokes_s1, OeoParams};

/// Raw key bits, one per contributing slot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KeyBits(pub Vec<u8>);

impl KeyBits {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn complement(&self) -> Self {
        Self(self.0.iter().map(|b| 1 - b).collect())
    }
}

impl From<Vec<u8>> for KeyBits {
    fn from(bits: Vec<u8>) -> Self {
        Self(bits)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BerReport {
    pub n_bits: usize,
    pub n_errors: usize,
    pub ber: f64,
}

/// Bit for a single S1 sample: 0 below the threshold, 1 otherwise
/// (equality gives 1).
pub fn bit_for(s1: f64, s_th: f64) -> u8 {
    if s1 < s_th {
        0
    } else {
        1
    }
}

pub fn discretize(s1_series: &[f64], s_th: f64) -> KeyBits {
    KeyBits(s1_series.iter().map(|&s| bit_for(s, s_th)).collect())
}

pub fn ber(a: &KeyBits, b: &KeyBits) -> Result<BerReport, KeyError> {
    if a.len() != b.len() {
        return Err(KeyError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(KeyError::Empty);
    }
    let n_errors = a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count();
    Ok(BerReport {
        n_bits: a.len(),
        n_errors,
        ber: n_errors as f64 / a.len() as f64,
    })
}

/// Number of free-running slots used to calibrate [`balanced_threshold`].
pub const CALIBRATION_SLOTS: usize = 40_000;

/// Median S1 of a free-running trajectory of length [`CALIBRATION_SLOTS`]
/// started at `v0`.
///
/// Thresholding at the attractor median makes 0 and 1 equally likely, so two
/// unsynchronized oscillators disagree on about half the bits. The raw
/// attractor is not symmetric about S1 = 0 for the reference parameters.
pub fn balanced_threshold(params: &OeoParams, v0: f64) -> f64 {
    let mut s1: Vec<f64> = iterate_free(params, v0, CALIBRATION_SLOTS - 1)
        .into_iter()
        .map(|v| stokes_s1(params, v))
        .collect();
    s1.sort_by(f64::total_cmp);
    let mid = s1.len() / 2;
    if s1.len().is_multiple_of(2) {
        0.5 * (s1[mid - 1] + s1[mid])
    } else {
        s1[mid]
    }
}
