//! Closed-form rate-versus-distance from a free-space link budget.
//!
//! The chain runs FSPL -> EIRP -> received power -> `P_r/N` -> `P_r/N_0`
//! -> data rate at a required `E_b/N_0`. Every intermediate is exposed so
//! each step can be checked on its own. The resulting rate falls with the
//! square of distance, since free-space loss enters as `(4*pi*d/lambda)^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelParams, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Standard reference noise temperature, K.
pub const REFERENCE_TEMPERATURE_K: f64 = 290.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudgetParams {
    /// Transmit power, W.
    pub p_tx: f64,
    pub g_tx: f64,
    pub g_rx: f64,
    pub wavelength: f64,
    /// System noise temperature, K.
    pub temperature: f64,
    pub boltzmann: f64,
    /// Required energy per bit over noise density (linear).
    pub ebn0: f64,
    pub bandwidth: f64,
}

impl Default for LinkBudgetParams {
    fn default() -> Self {
        Self::from_channel(&ChannelParams::default(), 10.0)
    }
}

impl LinkBudgetParams {
    /// Budget for the base-station link of `channel`, with the noise figure
    /// folded into the system temperature.
    pub fn from_channel(channel: &ChannelParams, ebn0_db: f64) -> Self {
        Self {
            p_tx: 10f64.powf(channel.bs_tx_dbm / 10.0) * 1e-3,
            g_tx: 1.0,
            g_rx: 1.0,
            wavelength: channel.propagation_speed / channel.carrier_frequency_hz,
            temperature: REFERENCE_TEMPERATURE_K * 10f64.powf(channel.noise_figure_db / 10.0),
            boltzmann: BOLTZMANN,
            ebn0: 10f64.powf(ebn0_db / 10.0),
            bandwidth: channel.bandwidth_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("transmit power", self.p_tx),
            ("transmit gain", self.g_tx),
            ("receive gain", self.g_rx),
            ("wavelength", self.wavelength),
            ("temperature", self.temperature),
            ("Boltzmann constant", self.boltzmann),
            ("Eb/N0", self.ebn0),
            ("bandwidth", self.bandwidth),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

fn check_distance(d: f64) -> Result<()> {
    if d >= 1.0 {
        Ok(())
    } else {
        Err(Error::NearField {
            distance: d,
            min: 1.0,
        })
    }
}

pub fn wavelength(carrier_frequency_hz: f64) -> f64 {
    SPEED_OF_LIGHT / carrier_frequency_hz
}

/// `(4*pi*d/lambda)^2`
pub fn fspl_linear(d: f64, wavelength: f64) -> f64 {
    let x = 4.0 * PI * d / wavelength;
    x * x
}

pub fn eirp(params: &LinkBudgetParams) -> f64 {
    params.p_tx * params.g_tx
}

/// Received power written out as `EIRP * G_r * (lambda / 4*pi*d)^2`.
pub fn received_power_direct(params: &LinkBudgetParams, d: f64) -> Result<f64> {
    check_distance(d)?;
    let ratio = params.wavelength / (4.0 * PI * d);
    Ok(eirp(params) * params.g_rx * ratio * ratio)
}

/// Received power written as `EIRP * G_r / FSPL`.
pub fn received_power(params: &LinkBudgetParams, d: f64) -> Result<f64> {
    check_distance(d)?;
    Ok(eirp(params) * params.g_rx / fspl_linear(d, params.wavelength))
}

/// Thermal noise power `kTB`, W.
pub fn noise_power(params: &LinkBudgetParams) -> f64 {
    params.boltzmann * params.temperature * params.bandwidth
}

/// Noise spectral density `kT`, W/Hz.
pub fn noise_density(params: &LinkBudgetParams) -> f64 {
    params.boltzmann * params.temperature
}

pub fn pr_over_n(params: &LinkBudgetParams, d: f64) -> Result<f64> {
    check_distance(d)?;
    Ok(eirp(params) * (params.g_rx / noise_power(params)) / fspl_linear(d, params.wavelength))
}

pub fn pr_over_n0(params: &LinkBudgetParams, d: f64) -> Result<f64> {
    check_distance(d)?;
    Ok(eirp(params) * (params.g_rx / params.temperature)
        / (params.boltzmann * fspl_linear(d, params.wavelength)))
}

/// Highest bit rate (bit/s) that still meets the required `E_b/N_0` at `d`.
pub fn analytic_rate(params: &LinkBudgetParams, d: f64) -> Result<f64> {
    check_distance(d)?;
    Ok(eirp(params) * (params.g_rx / params.temperature)
        / (params.boltzmann * fspl_linear(d, params.wavelength) * params.ebn0))
}

/// `E_b/N_0` delivered when running at `rate` bit/s at distance `d`.
pub fn ebn0_at_rate(params: &LinkBudgetParams, d: f64, rate: f64) -> Result<f64> {
    Ok(pr_over_n0(params, d)? / rate)
}

/// Every intermediate of the budget at one distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudgetChain {
    pub distance_m: f64,
    pub fspl_linear: f64,
    pub fspl_db: f64,
    pub eirp_w: f64,
    pub received_power_w: f64,
    pub received_power_dbm: f64,
    pub noise_power_w: f64,
    pub pr_over_n: f64,
    pub pr_over_n_db: f64,
    pub pr_over_n0: f64,
    pub rate_bps: f64,
    pub spectral_efficiency: f64,
}

pub fn chain(params: &LinkBudgetParams, d: f64) -> Result<LinkBudgetChain> {
    params.validate()?;
    let fspl = fspl_linear(d, params.wavelength);
    let pr = received_power(params, d)?;
    let snr = pr_over_n(params, d)?;
    let rate = analytic_rate(params, d)?;
    Ok(LinkBudgetChain {
        distance_m: d,
        fspl_linear: fspl,
        fspl_db: 10.0 * fspl.log10(),
        eirp_w: eirp(params),
        received_power_w: pr,
        received_power_dbm: 10.0 * (pr * 1e3).log10(),
        noise_power_w: noise_power(params),
        pr_over_n: snr,
        pr_over_n_db: 10.0 * snr.log10(),
        pr_over_n0: pr_over_n0(params, d)?,
        rate_bps: rate,
        spectral_efficiency: rate / params.bandwidth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn unit() -> LinkBudgetParams {
        LinkBudgetParams {
            p_tx: 1.0,
            g_tx: 1.0,
            g_rx: 1.0,
            wavelength: wavelength(5.8e9),
            temperature: 290.0,
            boltzmann: BOLTZMANN,
            ebn0: 10.0,
            bandwidth: 10e6,
        }
    }

    #[test]
    fn fspl_values() {
        let lambda = wavelength(5.8e9);
        assert!(rel(fspl_linear(lambda / (4.0 * PI), lambda), 1.0) < 1e-15);
        assert!(rel(fspl_linear(200.0, lambda), 4.0 * fspl_linear(100.0, lambda)) < 1e-15);
        assert!(rel(fspl_linear(100.0, 0.0517), 5.907e8) < 1e-3);
    }

    #[test]
    fn received_power_values() {
        let mut p = unit();
        // Unit FSPL needs d = lambda / 4pi, below the 1 m floor, so use a
        // wavelength that puts it at exactly 1 m.
        p.wavelength = 4.0 * PI;
        assert!(rel(received_power(&p, 1.0).unwrap(), 1.0) < 1e-15);

        let p = unit();
        let a = received_power(&p, 50.0).unwrap();
        let b = received_power(&p, 200.0).unwrap();
        assert!(rel(a / b, 16.0) < 1e-12);

        let mut p = unit();
        p.p_tx = 31.6;
        let pr = received_power(&p, 100.0).unwrap();
        assert!(rel(pr, 5.35e-8) < 1e-2, "{pr}");
        assert!(rel(pr, received_power_direct(&p, 100.0).unwrap()) < 1e-12);
    }

    #[test]
    fn rate_square_law_and_linearity() {
        let p = unit();
        let r1 = analytic_rate(&p, 300.0).unwrap();
        let r2 = analytic_rate(&p, 600.0).unwrap();
        assert!(rel(r2, r1 / 4.0) < 1e-12);
        let mut q = p;
        q.p_tx *= 3.0;
        assert!(rel(analytic_rate(&q, 300.0).unwrap(), 3.0 * r1) < 1e-12);
    }

    #[test]
    fn ebn0_identity() {
        let p = unit();
        let r = analytic_rate(&p, 750.0).unwrap();
        assert!(rel(ebn0_at_rate(&p, 750.0, r).unwrap(), p.ebn0) < 1e-12);
        // P_r/N times B/R gives the same thing.
        let via_n = pr_over_n(&p, 750.0).unwrap() * p.bandwidth / r;
        assert!(rel(via_n, p.ebn0) < 1e-12);
    }

    #[test]
    fn rejects_near_field() {
        assert!(analytic_rate(&unit(), 0.5).is_err());
        assert!(received_power(&unit(), 0.0).is_err());
    }

    #[test]
    fn chain_is_consistent() {
        let c = chain(&LinkBudgetParams::default(), 500.0).unwrap();
        assert!(rel(c.received_power_w, c.eirp_w / c.fspl_linear) < 1e-12);
        assert!(rel(c.pr_over_n, c.received_power_w / c.noise_power_w) < 1e-12);
        assert!(rel(c.rate_bps * 10.0 / 10e6, c.pr_over_n) < 1e-12);
    }
}
