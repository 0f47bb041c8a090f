//! Named experiments.
//!
//! All presets share the reference oscillator (K = 0.0133, |α|² = 100,
//! φ = π/4, V_π = 1 V, ε = 0.01), initial voltages 0.1 / 0.2 V, 40 000
//! slots with the first 100 unsynchronized, and ideal detectors on a
//! lossless channel so that `mu` equals the product p·t_c·μ.

use std::fmt;
use std::str::FromStr;

use crate::attacks::EveModel;
use crate::config::default_threshold;
use crate::oeo::OeoParams;
use crate::sync::{LinkParams, PartyConfig, SessionConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Matched oscillators, p·t·μ = 0.03.
    Fig3Sync,
    /// K_B = 0.0132, p·t·μ = 0.83.
    Fig4Mismatch,
    /// No synchronization pulses at all.
    NoSync,
    /// Matched oscillators on a one-slot link, p·t·μ = 0.73 vs 1000.
    Fig5Spectrum,
    EveIntercept,
    /// Eve taps 90% of the light.
    EveLoss,
    /// `fig5-spectrum` link with Eve injecting μ = 1000 pulses.
    EveStrongPulse,
}

pub const SLOTS: usize = 40_000;
pub const WARMUP: usize = 100;
pub const STRONG_MU: f64 = 1000.0;

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Fig3Sync,
        Preset::Fig4Mismatch,
        Preset::NoSync,
        Preset::Fig5Spectrum,
        Preset::EveIntercept,
        Preset::EveLoss,
        Preset::EveStrongPulse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3Sync => "fig3-sync",
            Preset::Fig4Mismatch => "fig4-mismatch",
            Preset::NoSync => "no-sync",
            Preset::Fig5Spectrum => "fig5-spectrum",
            Preset::EveIntercept => "eve-intercept",
            Preset::EveLoss => "eve-loss",
            Preset::EveStrongPulse => "eve-strong-pulse",
        }
    }

    /// Primary session of the preset, seed 0.
    pub fn config(self) -> SessionConfig {
        match self {
            Preset::Fig3Sync => session(OeoParams::reference(), LinkParams::symmetric(0.03)),
            Preset::Fig4Mismatch => session(
                OeoParams::reference().with_gain(0.0132),
                LinkParams::symmetric(0.83),
            ),
            Preset::NoSync => session(OeoParams::reference(), LinkParams::symmetric(0.0)),
            Preset::Fig5Spectrum => fig5_session(0.73),
            Preset::EveIntercept => SessionConfig {
                eve: EveModel::InterceptResend,
                ..Preset::Fig3Sync.config()
            },
            Preset::EveLoss => SessionConfig {
                eve: EveModel::ExtraLoss { loss_factor: 0.1 },
                ..Preset::Fig3Sync.config()
            },
            Preset::EveStrongPulse => SessionConfig {
                eve: EveModel::StrongPulse {
                    injected_mu: STRONG_MU,
                },
                ..fig5_session(0.73)
            },
        }
    }

    /// Every session the experiment runs, labelled. Only `fig5-spectrum`
    /// has more than one: the chaotic reference and the bright-pulse run.
    pub fn runs(self) -> Vec<(&'static str, SessionConfig)> {
        match self {
            Preset::Fig5Spectrum => vec![
                ("chaotic", self.config()),
                ("strong", fig5_session(STRONG_MU)),
            ],
            _ => vec![("main", self.config())],
        }
    }
}

fn session(bob_oeo: OeoParams, link: LinkParams) -> SessionConfig {
    let alice = PartyConfig {
        oeo: OeoParams::reference(),
        v_init: Some(0.1),
    };
    SessionConfig {
        alice,
        bob: PartyConfig {
            oeo: bob_oeo,
            v_init: Some(0.2),
        },
        link,
        n_slots: SLOTS,
        warmup_slots: WARMUP,
        seed: 0,
        eve: EveModel::None,
        s_th: default_threshold(&alice),
        include_warmup_in_key: true,
    }
}

/// At zero delay two matched stations that have synchronized see identical
/// polarizations and never click again, however bright the pulses. With one
/// slot of propagation the incoming pulse always lags, so bright pulses keep
/// forcing resets.
fn fig5_session(ptm: f64) -> SessionConfig {
    let mut link = LinkParams::symmetric(ptm);
    link.delay_slots = 1;
    session(OeoParams::reference(), link)
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownPreset(pub String);

impl fmt::Display for UnknownPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
        write!(
            f,
            "unknown preset `{}` (expected one of: {})",
            self.0,
            names.join(", ")
        )
    }
}

impl std::error::Error for UnknownPreset {}

impl FromStr for Preset {
    type Err = UnknownPreset;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownPreset(s.to_string()))
    }
}
