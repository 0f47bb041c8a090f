//! Discrete-time simulator of key distribution between two chaotic
//! optoelectronic oscillators that are kept in step by single-photon
//! detections of weak coherent pulses.
//!
//! * [`oeo`]: the oscillator map and its polarization readout
//! * [`sync`]: the two-party session with stochastic switch closures
//! * [`key`]: S1 thresholding and bit error rate
//! * [`attacks`]: eavesdropper models and the bright-pulse monitor
//! * [`analysis`]: DFT spectra and the quasi-periodicity score
//! * [`config`], [`presets`], [`trace`], [`experiment`]: harness plumbing

pub mod analysis;
pub mod attacks;
pub mod config;
pub mod error;
pub mod experiment;
pub mod key;
pub mod oeo;
pub mod presets;
pub mod sync;
pub mod trace;

pub use analysis::{power_spectrum, quasiperiodicity_score, Spectrum};
pub use attacks::{EveModel, TrojanMonitorConfig};
pub use error::{AnalysisError, ConfigError, HarnessError, KeyError};
pub use key::{ber, discretize, BerReport, KeyBits};
pub use oeo::{OeoParams, OeoState};
pub use presets::Preset;
pub use sync::{simulate_session, LinkParams, PartyConfig, SessionConfig, SlotRecord};
