//! JSON session configuration.
//!
//! The document mirrors [`SessionConfig`] field for field. Optional keys:
//! `tau` (1), `link.delay_slots` (0), `seed` (0), `eve` (`{"kind":"none"}`),
//! `include_warmup_in_key` (true) and `s_th`, which defaults to the balanced
//! threshold of Alice's oscillator (see [`balanced_threshold`]). Unknown keys
//! are rejected.

use serde::Deserialize;
use std::path::Path;

use crate::attacks::EveModel;
use crate::error::{ConfigError, HarnessError};
use crate::key::balanced_threshold;
use crate::sync::{LinkParams, PartyConfig, SessionConfig};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    alice: PartyConfig,
    bob: PartyConfig,
    link: LinkParams,
    n_slots: usize,
    warmup_slots: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    eve: EveModel,
    #[serde(default)]
    s_th: Option<f64>,
    #[serde(default = "default_include_warmup")]
    include_warmup_in_key: bool,
}

fn default_include_warmup() -> bool {
    true
}

/// Threshold used when a config does not name one: the S1 median of Alice's
/// free-running oscillator started from her initial voltage (V_π/2 if that
/// is drawn at random).
pub fn default_threshold(alice: &PartyConfig) -> f64 {
    let v0 = alice.v_init.unwrap_or(0.5 * alice.oeo.v_pi);
    balanced_threshold(&alice.oeo, v0)
}

pub fn parse_config(text: &str) -> Result<SessionConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ConfigFile =
        serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;

    let mut cfg = SessionConfig {
        alice: file.alice,
        bob: file.bob,
        link: file.link,
        n_slots: file.n_slots,
        warmup_slots: file.warmup_slots,
        seed: file.seed,
        eve: file.eve,
        s_th: file.s_th.unwrap_or(0.0),
        include_warmup_in_key: file.include_warmup_in_key,
    };
    // the default threshold needs valid oscillator parameters
    cfg.validate()?;
    if file.s_th.is_none() {
        cfg.s_th = default_threshold(&cfg.alice);
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<SessionConfig, HarnessError> {
    if !path.exists() {
        return Err(HarnessError::ConfigNotFound(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text).map_err(|source| HarnessError::Config {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_json(cfg: &SessionConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("SessionConfig serializes")
}

pub fn save_config(path: &Path, cfg: &SessionConfig) -> Result<(), HarnessError> {
    std::fs::write(path, to_json(cfg) + "\n").map_err(|source| HarnessError::Write {
        path: path.to_path_buf(),
        source,
    })
}
