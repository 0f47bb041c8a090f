//! Eavesdropper models on the synchronization channel and the strong-pulse
//! (Trojan) monitor on the unused PBS port.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::ConfigError;
use crate::sync::{detection_probability, LinkParams};

/// The attack active during a session.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EveModel {
    #[default]
    None,
    /// A lossy tap: the channel transmission is multiplied by `loss_factor`.
    ExtraLoss { loss_factor: f64 },
    /// Eve measures every pulse and resends one with a polarization drawn
    /// uniformly on [0, 2π), fresh per slot and per direction.
    InterceptResend,
    /// Eve replaces the weak pulses by pulses of mean photon number
    /// `injected_mu`.
    StrongPulse { injected_mu: f64 },
}

impl EveModel {
    pub fn validate(&self, path: &str) -> Result<(), ConfigError> {
        match *self {
            Self::ExtraLoss { loss_factor } if !(0.0..=1.0).contains(&loss_factor) => Err(
                ConfigError::invariant(format!("{path}.loss_factor"), "must lie in [0, 1]"),
            ),
            Self::StrongPulse { injected_mu }
                if !(injected_mu >= 0.0 && injected_mu.is_finite()) =>
            {
                Err(ConfigError::invariant(
                    format!("{path}.injected_mu"),
                    "must be finite and >= 0",
                ))
            }
            _ => Ok(()),
        }
    }

    /// Channel transmission seen by the receiver under this attack.
    pub fn transmission(&self, link: &LinkParams) -> f64 {
        match *self {
            Self::ExtraLoss { loss_factor } => loss_factor * link.transmission,
            _ => link.transmission,
        }
    }

    /// Mean photon number of the pulse entering the channel toward a
    /// receiver whose legitimate peer sends `mu`.
    pub fn launched_mu(&self, mu: f64) -> f64 {
        match *self {
            Self::StrongPulse { injected_mu } => injected_mu,
            _ => mu,
        }
    }

    /// Mean photon number arriving at the receiver.
    pub fn incoming_mu(&self, link: &LinkParams, mu: f64) -> f64 {
        self.transmission(link) * self.launched_mu(mu)
    }
}

/// Detection probability at one receiver for one slot under `eve`.
///
/// `mu` is the mean photon number the legitimate peer launches; `rng` is the
/// per-direction stream Eve draws her resent polarization from (only
/// consumed by [`EveModel::InterceptResend`]).
pub fn effective_detection<R: Rng + ?Sized>(
    eve: &EveModel,
    link: &LinkParams,
    p_det: f64,
    mu: f64,
    theta_local: f64,
    theta_remote: f64,
    rng: &mut R,
) -> f64 {
    let t_c = eve.transmission(link);
    let mu = eve.launched_mu(mu);
    let theta_remote = match eve {
        EveModel::InterceptResend => rng.random::<f64>() * TAU,
        _ => theta_remote,
    };
    detection_probability(p_det, t_c, mu, theta_local, theta_remote)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrojanMonitorConfig {
    pub mu_alarm_threshold: f64,
}

impl TrojanMonitorConfig {
    pub fn new(mu_alarm_threshold: f64) -> Result<Self, ConfigError> {
        if mu_alarm_threshold.is_nan() || mu_alarm_threshold <= 0.0 {
            return Err(ConfigError::invariant(
                "monitor.mu_alarm_threshold",
                "must be > 0",
            ));
        }
        Ok(Self { mu_alarm_threshold })
    }
}

impl Default for TrojanMonitorConfig {
    /// Alarm on anything above one photon per pulse.
    fn default() -> Self {
        Self {
            mu_alarm_threshold: 1.0,
        }
    }
}

/// Power monitor on the unused PBS output: alarms strictly above threshold.
pub fn trojan_monitor(cfg: &TrojanMonitorConfig, incoming_mu: f64) -> bool {
    incoming_mu > cfg.mu_alarm_threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::f64::consts::FRAC_PI_2;

    fn link(mu: f64) -> LinkParams {
        LinkParams {
            det_prob_a: 1.0,
            det_prob_b: 1.0,
            transmission: 1.0,
            mu_a: mu,
            mu_b: mu,
            delay_slots: 0,
        }
    }

    fn rng() -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(11)
    }

    #[test]
    fn none_is_passthrough() {
        let q = effective_detection(
            &EveModel::None,
            &link(0.03),
            1.0,
            0.03,
            FRAC_PI_2,
            0.0,
            &mut rng(),
        );
        assert!((q - 0.03).abs() < 1e-15);
    }

    #[test]
    fn extra_loss_scales_transmission() {
        let eve = EveModel::ExtraLoss { loss_factor: 0.5 };
        let q = effective_detection(&eve, &link(0.03), 1.0, 0.03, FRAC_PI_2, 0.0, &mut rng());
        assert!((q - 0.015).abs() < 1e-15);
    }

    #[test]
    fn strong_pulse_replaces_mu_and_clamps() {
        let eve = EveModel::StrongPulse {
            injected_mu: 1000.0,
        };
        let q = effective_detection(&eve, &link(0.03), 1.0, 0.03, FRAC_PI_2, 0.0, &mut rng());
        assert_eq!(q, 1.0);
        let q = effective_detection(&eve, &link(0.03), 1.0, 0.03, 0.01, 0.0, &mut rng());
        assert!((q - 1000.0 * 0.01f64.sin().powi(2)).abs() < 1e-12);
        let q = effective_detection(&eve, &link(0.03), 1.0, 0.03, 0.3, 0.3, &mut rng());
        assert!(q < 1e-12);
    }

    #[test]
    fn intercept_resend_mean_is_half() {
        // E[sin²(θ − U)] = 1/2 for U uniform on [0, 2π)
        let mut r = rng();
        let n = 1_000_000;
        let ptm = 0.03;
        for theta in [0.0, 0.7, 2.9] {
            let mean = (0..n)
                .map(|_| {
                    effective_detection(
                        &EveModel::InterceptResend,
                        &link(ptm),
                        1.0,
                        ptm,
                        theta,
                        theta,
                        &mut r,
                    )
                })
                .sum::<f64>()
                / n as f64;
            // standard error ≈ 0.03·0.354/1000 ≈ 1.1e-5
            assert!((mean - ptm / 2.0).abs() < 6e-5, "mean {mean}");
        }
    }

    #[test]
    fn trojan_monitor_examples() {
        let cfg = TrojanMonitorConfig::new(1.0).unwrap();
        assert!(!trojan_monitor(&cfg, 0.05));
        assert!(trojan_monitor(&cfg, 1000.0));
        assert!(!trojan_monitor(&cfg, 1.0));
        assert!(TrojanMonitorConfig::new(0.0).is_err());
    }

    #[test]
    fn incoming_mu_per_attack() {
        let l = LinkParams {
            transmission: 0.5,
            ..link(0.1)
        };
        assert_eq!(EveModel::None.incoming_mu(&l, 0.1), 0.05);
        assert_eq!(
            EveModel::ExtraLoss { loss_factor: 0.5 }.incoming_mu(&l, 0.1),
            0.025
        );
        assert_eq!(
            EveModel::StrongPulse {
                injected_mu: 1000.0
            }
            .incoming_mu(&l, 0.1),
            500.0
        );
    }

    #[test]
    fn validate_rejects_out_of_range() {
        assert!(EveModel::ExtraLoss { loss_factor: 1.2 }
            .validate("eve")
            .is_err());
        assert!(EveModel::StrongPulse { injected_mu: -1.0 }
            .validate("eve")
            .is_err());
        assert!(EveModel::InterceptResend.validate("eve").is_ok());
    }

    #[test]
    fn serde_tagging() {
        let json = serde_json::to_string(&EveModel::StrongPulse {
            injected_mu: 1000.0,
        })
        .unwrap();
        assert_eq!(json, r#"{"kind":"strong_pulse","injected_mu":1000.0}"#);
        let back: EveModel = serde_json::from_str(r#"{"kind":"intercept_resend"}"#).unwrap();
        assert_eq!(back, EveModel::InterceptResend);
    }
}
