//! Path loss, SNR and achievable rate for the direct link and for a
//! decode-and-forward relay.
//!
//! The channel is deterministic: `|h|^2` is the inverse of the path loss,
//! which is free-space loss plus a constant extra loss chosen by the
//! line-of-sight state. No small-scale fading is drawn.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{classify_los, distance3d, Box3, LosState, Vec3};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Thermal noise density at 290 K, dBm/Hz.
pub const THERMAL_NOISE_DBM_HZ: f64 = -174.0;

/// Free-space loss is not applied below this distance.
pub const NEAR_FIELD_MIN_M: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntennaGains {
    pub bs_dbi: f64,
    pub relay_dbi: f64,
    pub victim_dbi: f64,
}

impl Default for AntennaGains {
    fn default() -> Self {
        Self {
            bs_dbi: 0.0,
            relay_dbi: 0.0,
            victim_dbi: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub carrier_frequency_hz: f64,
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
    pub zeta_los_db: f64,
    pub zeta_nlos_db: f64,
    pub propagation_speed: f64,
    pub bs_tx_dbm: f64,
    pub relay_tx_dbm: f64,
    pub rx_sensitivity_dbm: f64,
    pub antenna_gains: AntennaGains,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            carrier_frequency_hz: 5.8e9,
            bandwidth_hz: 10e6,
            noise_figure_db: 10.0,
            zeta_los_db: 1.0,
            zeta_nlos_db: 20.0,
            propagation_speed: SPEED_OF_LIGHT,
            bs_tx_dbm: 45.0,
            relay_tx_dbm: 15.0,
            rx_sensitivity_dbm: -94.5,
            antenna_gains: AntennaGains::default(),
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("carrier frequency", self.carrier_frequency_hz),
            ("bandwidth", self.bandwidth_hz),
            ("propagation speed", self.propagation_speed),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.zeta_los_db >= 0.0 && self.zeta_nlos_db >= self.zeta_los_db) {
            return Err(Error::InvalidInput(format!(
                "extra losses must satisfy 0 <= LoS ({}) <= NLoS ({})",
                self.zeta_los_db, self.zeta_nlos_db
            )));
        }
        let g = self.antenna_gains;
        if g.bs_dbi != 0.0 || g.relay_dbi != 0.0 || g.victim_dbi != 0.0 {
            return Err(Error::InvalidInput(
                "antenna gains are fixed at 0 dBi".into(),
            ));
        }
        for (name, v) in [
            ("noise figure", self.noise_figure_db),
            ("BS transmit power", self.bs_tx_dbm),
            ("relay transmit power", self.relay_tx_dbm),
            ("receiver sensitivity", self.rx_sensitivity_dbm),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        self.propagation_speed / self.carrier_frequency_hz
    }

    pub fn extra_loss_db(&self, los: LosState) -> f64 {
        match los {
            LosState::Los => self.zeta_los_db,
            LosState::Nlos => self.zeta_nlos_db,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGain {
    pub path_loss_db: f64,
    /// `|h|^2`
    pub gain_linear: f64,
    pub los: LosState,
}

impl LinkGain {
    pub fn from_path_loss(path_loss_db: f64, los: LosState) -> Self {
        Self {
            path_loss_db,
            gain_linear: db_to_linear(-path_loss_db),
            los,
        }
    }

    /// A link that delivers no power at all.
    pub fn blackout() -> Self {
        Self {
            path_loss_db: f64::INFINITY,
            gain_linear: 0.0,
            los: LosState::Nlos,
        }
    }
}

/// Per-hop SNRs (linear) behind a reported SNR.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HopSnrs {
    pub bs_relay: Option<f64>,
    pub bs_victim: f64,
    pub relay_victim: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrReport {
    pub snr_linear: f64,
    pub snr_db: f64,
    /// Total signal power reaching the victim receiver.
    pub rx_power_dbm: f64,
    pub components: HopSnrs,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn path_loss_db(params: &ChannelParams, d: f64, los: LosState) -> Result<f64> {
    if !(d >= NEAR_FIELD_MIN_M) {
        return Err(Error::NearField {
            distance: d,
            min: NEAR_FIELD_MIN_M,
        });
    }
    let fspl =
        20.0 * (4.0 * PI * params.carrier_frequency_hz * d / params.propagation_speed).log10();
    Ok(fspl + params.extra_loss_db(los))
}

pub fn noise_power_dbm(params: &ChannelParams) -> f64 {
    THERMAL_NOISE_DBM_HZ + 10.0 * params.bandwidth_hz.log10() + params.noise_figure_db
}

pub fn link_gain(
    params: &ChannelParams,
    tx: Vec3,
    rx: Vec3,
    obstacles: &[Box3],
) -> Result<LinkGain> {
    let los = classify_los(tx, rx, obstacles)?;
    let pl = path_loss_db(params, distance3d(tx, rx), los)?;
    Ok(LinkGain::from_path_loss(pl, los))
}

/// Linear SNR of a hop given the transmit power and channel gain.
fn hop_snr(tx_dbm: f64, gain: &LinkGain, noise_dbm: f64) -> f64 {
    db_to_linear(tx_dbm) * gain.gain_linear / db_to_linear(noise_dbm)
}

fn rx_power_mw(tx_dbm: f64, gain: &LinkGain) -> f64 {
    db_to_linear(tx_dbm) * gain.gain_linear
}

pub fn snr_siso(params: &ChannelParams, gain_bv: &LinkGain) -> SnrReport {
    let noise = noise_power_dbm(params);
    let snr = hop_snr(params.bs_tx_dbm, gain_bv, noise);
    SnrReport {
        snr_linear: snr,
        snr_db: linear_to_db(snr),
        rx_power_dbm: linear_to_db(rx_power_mw(params.bs_tx_dbm, gain_bv)),
        components: HopSnrs {
            bs_relay: None,
            bs_victim: snr,
            relay_victim: None,
        },
    }
}

pub fn rate_siso(snr: &SnrReport) -> f64 {
    (1.0 + snr.snr_linear).log2()
}

/// Decode-and-forward SNR: the weaker of the backhaul hop and the victim's
/// combined reception of the direct and relayed copies.
pub fn snr_df(
    params: &ChannelParams,
    gain_br: &LinkGain,
    gain_bv: &LinkGain,
    gain_rv: &LinkGain,
) -> SnrReport {
    let noise = noise_power_dbm(params);
    let br = hop_snr(params.bs_tx_dbm, gain_br, noise);
    let bv = hop_snr(params.bs_tx_dbm, gain_bv, noise);
    let rv = hop_snr(params.relay_tx_dbm, gain_rv, noise);
    let snr = br.min(bv + rv);
    let rx_mw = rx_power_mw(params.bs_tx_dbm, gain_bv) + rx_power_mw(params.relay_tx_dbm, gain_rv);
    SnrReport {
        snr_linear: snr,
        snr_db: linear_to_db(snr),
        rx_power_dbm: linear_to_db(rx_mw),
        components: HopSnrs {
            bs_relay: Some(br),
            bs_victim: bv,
            relay_victim: Some(rv),
        },
    }
}

/// Half of the single-hop capacity: each symbol occupies two phases.
pub fn rate_df(snr: &SnrReport) -> f64 {
    0.5 * (1.0 + snr.snr_linear).log2()
}

/// Zero the rate when the receiver cannot detect the signal at all.
pub fn apply_sensitivity(rx_power_dbm: f64, rate: f64, params: &ChannelParams) -> f64 {
    if rx_power_dbm >= params.rx_sensitivity_dbm {
        rate
    } else {
        0.0
    }
}
