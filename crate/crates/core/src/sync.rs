//! Slot-synchronous two-party session.
//!
//! Each station sends a strongly attenuated copy of its output pulse to the
//! other and projects the incoming pulse on the basis orthogonal to its own
//! output polarization. A click on the single-photon detector closes the
//! feedback switch for one slot, which pins the next voltage to K|α|².
//! Two stations that click in the same slot (and share K|α|²) land on the
//! same voltage and from then on follow the same orbit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::attacks::{effective_detection, EveModel};
use crate::error::{ConfigError, KeyError};
use crate::key::{ber, bit_for, BerReport, KeyBits};
use crate::oeo::{free_step, modulator_angle, reset_step, stokes_s1, OeoParams};

/// RNG stream ids derived from the master seed. Fixed so that adding an
/// attack never shifts the parties' detector draws.
pub mod stream {
    pub const ALICE_DETECTOR: u64 = 0;
    pub const BOB_DETECTOR: u64 = 1;
    pub const EVE_TO_ALICE: u64 = 2;
    pub const EVE_TO_BOB: u64 = 3;
    pub const ALICE_INIT: u64 = 4;
    pub const BOB_INIT: u64 = 5;
}

pub fn rng_stream(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartyConfig {
    pub oeo: OeoParams,
    /// Initial modulator voltage. `None` draws it uniformly on [0, V_π)
    /// from the party's init stream.
    pub v_init: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkParams {
    /// SPD efficiency at Alice.
    pub det_prob_a: f64,
    /// SPD efficiency at Bob.
    pub det_prob_b: f64,
    /// Channel transmission t_c.
    pub transmission: f64,
    /// Mean photon number of the pulses leaving Alice.
    pub mu_a: f64,
    /// Mean photon number of the pulses leaving Bob.
    pub mu_b: f64,
    /// Propagation delay in slots.
    #[serde(default)]
    pub delay_slots: usize,
}

impl LinkParams {
    /// A link whose products p·t_c·μ equal `ptm` in both directions, with
    /// ideal detectors and a lossless channel.
    pub fn symmetric(ptm: f64) -> Self {
        Self {
            det_prob_a: 1.0,
            det_prob_b: 1.0,
            transmission: 1.0,
            mu_a: ptm,
            mu_b: ptm,
            delay_slots: 0,
        }
    }

    pub fn validate(&self, path: &str) -> Result<(), ConfigError> {
        let probs = [
            ("det_prob_a", self.det_prob_a),
            ("det_prob_b", self.det_prob_b),
            ("transmission", self.transmission),
        ];
        for (name, value) in probs {
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::invariant(
                    format!("{path}.{name}"),
                    format!("must lie in [0, 1], got {value}"),
                ));
            }
        }
        for (name, value) in [("mu_a", self.mu_a), ("mu_b", self.mu_b)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(ConfigError::invariant(
                    format!("{path}.{name}"),
                    format!("must be finite and >= 0, got {value}"),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SessionConfig {
    pub alice: PartyConfig,
    pub bob: PartyConfig,
    pub link: LinkParams,
    pub n_slots: usize,
    /// Leading slots with the detectors disabled.
    pub warmup_slots: usize,
    pub seed: u64,
    pub eve: EveModel,
    /// Key threshold in S1 units.
    pub s_th: f64,
    pub include_warmup_in_key: bool,
}

impl SessionConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, party) in [("alice", &self.alice), ("bob", &self.bob)] {
            party.oeo.validate(&format!("{name}.oeo"))?;
            if let Some(v) = party.v_init {
                if !v.is_finite() {
                    return Err(ConfigError::invariant(
                        format!("{name}.v_init"),
                        "must be finite",
                    ));
                }
            }
        }
        self.link.validate("link")?;
        self.eve.validate("eve")?;
        if self.n_slots == 0 {
            return Err(ConfigError::invariant("n_slots", "must be > 0"));
        }
        if self.warmup_slots > self.n_slots {
            return Err(ConfigError::invariant(
                "warmup_slots",
                format!(
                    "warmup_slots <= n_slots violated ({} > {})",
                    self.warmup_slots, self.n_slots
                ),
            ));
        }
        if !self.s_th.is_finite() {
            return Err(ConfigError::invariant("s_th", "must be finite"));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// First slot whose bits enter the key.
    pub fn key_start(&self) -> usize {
        if self.include_warmup_in_key {
            0
        } else {
            self.warmup_slots
        }
    }

    /// Mean photon number arriving at Alice's SPD port (from Bob or Eve).
    pub fn incoming_mu_at_alice(&self) -> f64 {
        self.eve.incoming_mu(&self.link, self.link.mu_b)
    }

    pub fn incoming_mu_at_bob(&self) -> f64 {
        self.eve.incoming_mu(&self.link, self.link.mu_a)
    }
}

/// One row of a session trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlotRecord {
    pub slot: u64,
    pub v_a: f64,
    pub v_b: f64,
    pub s1_a: f64,
    pub s1_b: f64,
    /// Detection probabilities for this slot. Reported during warmup too,
    /// although no draw is honored there.
    pub q_a: f64,
    pub q_b: f64,
    pub det_a: bool,
    pub det_b: bool,
    pub bit_a: u8,
    pub bit_b: u8,
}

/// Probability that a receiver clicks when its own output is at angle
/// `theta_local` and the incoming weak pulse was prepared at `theta_remote`.
///
/// The bracket is the overlap of the two polarizations; the receiver blocks
/// the component parallel to its own state. Clamped to [0, 1] since the
/// linear photon-number approximation exceeds 1 for bright pulses.
pub fn detection_probability(
    p_det: f64,
    t_c: f64,
    mu: f64,
    theta_local: f64,
    theta_remote: f64,
) -> f64 {
    let (sl, cl) = theta_local.sin_cos();
    let (sr, cr) = theta_remote.sin_cos();
    let overlap = sl * sr + cl * cr;
    (p_det * t_c * mu * (1.0 - overlap * overlap)).clamp(0.0, 1.0)
}

pub fn simulate_session(cfg: &SessionConfig) -> Result<Vec<SlotRecord>, ConfigError> {
    cfg.validate()?;

    let alice = &cfg.alice.oeo;
    let bob = &cfg.bob.oeo;
    let link = &cfg.link;
    let delay = link.delay_slots;

    let mut det_rng_a = rng_stream(cfg.seed, stream::ALICE_DETECTOR);
    let mut det_rng_b = rng_stream(cfg.seed, stream::BOB_DETECTOR);
    let mut eve_rng_a = rng_stream(cfg.seed, stream::EVE_TO_ALICE);
    let mut eve_rng_b = rng_stream(cfg.seed, stream::EVE_TO_BOB);

    let mut v_a = initial_voltage(&cfg.alice, cfg.seed, stream::ALICE_INIT);
    let mut v_b = initial_voltage(&cfg.bob, cfg.seed, stream::BOB_INIT);

    // angles emitted in previous slots, only needed with a propagation delay
    let mut sent_a = Vec::with_capacity(if delay > 0 { cfg.n_slots } else { 0 });
    let mut sent_b = Vec::with_capacity(sent_a.capacity());

    let mut records = Vec::with_capacity(cfg.n_slots);
    for n in 0..cfg.n_slots {
        let theta_a = modulator_angle(alice, v_a);
        let theta_b = modulator_angle(bob, v_b);
        if delay > 0 {
            sent_a.push(theta_a);
            sent_b.push(theta_b);
        }

        let (from_b, from_a) = if delay == 0 {
            (Some(theta_b), Some(theta_a))
        } else if n >= delay {
            (Some(sent_b[n - delay]), Some(sent_a[n - delay]))
        } else {
            (None, None)
        };

        let q_a = from_b.map_or(0.0, |remote| {
            effective_detection(
                &cfg.eve,
                link,
                link.det_prob_a,
                link.mu_b,
                theta_a,
                remote,
                &mut eve_rng_a,
            )
        });
        let q_b = from_a.map_or(0.0, |remote| {
            effective_detection(
                &cfg.eve,
                link,
                link.det_prob_b,
                link.mu_a,
                theta_b,
                remote,
                &mut eve_rng_b,
            )
        });

        // one draw per slot per detector keeps the streams aligned
        let u_a: f64 = det_rng_a.random();
        let u_b: f64 = det_rng_b.random();
        let armed = n >= cfg.warmup_slots;
        let det_a = armed && u_a < q_a;
        let det_b = armed && u_b < q_b;

        let s1_a = stokes_s1(alice, v_a);
        let s1_b = stokes_s1(bob, v_b);
        records.push(SlotRecord {
            slot: n as u64,
            v_a,
            v_b,
            s1_a,
            s1_b,
            q_a,
            q_b,
            det_a,
            det_b,
            bit_a: bit_for(s1_a, cfg.s_th),
            bit_b: bit_for(s1_b, cfg.s_th),
        });

        v_a = if det_a {
            reset_step(alice)
        } else {
            free_step(alice, v_a)
        };
        v_b = if det_b {
            reset_step(bob)
        } else {
            free_step(bob, v_b)
        };
    }
    Ok(records)
}

fn initial_voltage(party: &PartyConfig, seed: u64, stream: u64) -> f64 {
    party
        .v_init
        .unwrap_or_else(|| rng_stream(seed, stream).random::<f64>() * party.oeo.v_pi)
}

/// Alice's and Bob's key bits from the slots selected by the config.
pub fn session_keys(cfg: &SessionConfig, trace: &[SlotRecord]) -> (KeyBits, KeyBits) {
    let used = &trace[cfg.key_start().min(trace.len())..];
    (
        KeyBits(used.iter().map(|r| r.bit_a).collect()),
        KeyBits(used.iter().map(|r| r.bit_b).collect()),
    )
}

pub fn session_ber(cfg: &SessionConfig, trace: &[SlotRecord]) -> Result<BerReport, KeyError> {
    let (a, b) = session_keys(cfg, trace);
    ber(&a, &b)
}

/// Per-slot |S1_A − S1_B|.
pub fn sync_error_series(trace: &[SlotRecord]) -> Vec<f64> {
    trace.iter().map(|r| (r.s1_a - r.s1_b).abs()).collect()
}
