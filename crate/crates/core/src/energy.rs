//! UAV energy accounting: communication, hovering and mobility.
//!
//! Hover power is rotor-disk momentum theory. Horizontal, climbing and
//! descending powers build on it:
//!
//! * horizontal: `P_hv + rho * C_x * A * v^3 / 2` (parasitic drag),
//! * climb: `P_hv + V * v_a` (work against gravity),
//! * descent: `max(P_hv - V * v_d, 0)`.
//!
//! The rotor chord and angular velocity are carried for models that need
//! blade-element terms but are not used here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    pub n_rotors: f64,
    /// Total thrust, N.
    pub thrust: f64,
    /// Frame mass, kg.
    pub frame_weight: f64,
    /// Battery and payload mass, kg.
    pub payload_weight: f64,
    pub gravity: f64,
    pub rotor_radius: f64,
    pub air_density: f64,
    /// Relay transmit power, W.
    pub p_relay_tx: f64,
    /// Onboard circuit power, W.
    pub p_circuit: f64,
    pub drag_coeff: f64,
    pub ref_area: f64,
    pub rotor_chord: f64,
    pub angular_velocity: f64,
    pub v_ascend: f64,
    pub v_descend: f64,
    /// Horizontal cruise speed of the perching relay, m/s.
    pub v_horizontal_lsmr: f64,
    /// Horizontal cruise speed of the hovering relays, m/s.
    pub v_horizontal_cfmr: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self {
            n_rotors: 4.0,
            thrust: 34.3,
            frame_weight: 1.5,
            payload_weight: 2.0,
            gravity: 9.8,
            rotor_radius: 0.4,
            air_density: 1.225,
            p_relay_tx: 0.0316,
            p_circuit: 0.01,
            drag_coeff: 0.025,
            ref_area: 0.192,
            rotor_chord: 0.022,
            angular_velocity: 16.0,
            v_ascend: 10.0,
            v_descend: 10.0,
            v_horizontal_lsmr: 27.7,
            v_horizontal_cfmr: 10.0,
        }
    }
}

impl EnergyParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("n_rotors", self.n_rotors),
            ("thrust", self.thrust),
            ("frame_weight", self.frame_weight),
            ("payload_weight", self.payload_weight),
            ("gravity", self.gravity),
            ("rotor_radius", self.rotor_radius),
            ("air_density", self.air_density),
            ("p_relay_tx", self.p_relay_tx),
            ("p_circuit", self.p_circuit),
            ("drag_coeff", self.drag_coeff),
            ("ref_area", self.ref_area),
            ("rotor_chord", self.rotor_chord),
            ("angular_velocity", self.angular_velocity),
            ("v_ascend", self.v_ascend),
            ("v_descend", self.v_descend),
            ("v_horizontal_lsmr", self.v_horizontal_lsmr),
            ("v_horizontal_cfmr", self.v_horizontal_cfmr),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "energy.{name} must be positive, got {v}"
                )));
            }
        }
        let weight = (self.frame_weight + self.payload_weight) * self.gravity;
        if (self.thrust - weight).abs() > 1e-6 {
            return Err(Error::InvalidInput(format!(
                "thrust {} N does not balance weight {} N",
                self.thrust, weight
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyLedgerEntry {
    pub slot_index: usize,
    pub comm: f64,
    pub hover: f64,
    pub mobility: f64,
    pub total: f64,
}

impl EnergyLedgerEntry {
    pub fn new(slot_index: usize, comm: f64, hover: f64, mobility: f64) -> Self {
        debug_assert!(comm >= 0.0 && hover >= 0.0 && mobility >= 0.0);
        Self {
            slot_index,
            comm,
            hover,
            mobility,
            total: comm + hover + mobility,
        }
    }

    pub fn zero(slot_index: usize) -> Self {
        Self::new(slot_index, 0.0, 0.0, 0.0)
    }
}

pub fn comm_energy(params: &EnergyParams, n_served: usize, t_com: f64) -> f64 {
    (n_served as f64 * params.p_relay_tx + params.p_circuit) * t_com
}

pub fn hover_power(params: &EnergyParams) -> f64 {
    let disk = params.rotor_radius * params.rotor_radius;
    params.n_rotors * params.thrust.powf(1.5)
        / (2.0 * params.air_density * std::f64::consts::PI * disk).sqrt()
}

pub fn hover_energy(params: &EnergyParams, t_hv: f64) -> f64 {
    hover_power(params) * t_hv
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityPowers {
    pub horizontal: f64,
    pub ascend: f64,
    pub descend: f64,
}

pub fn mobility_powers(params: &EnergyParams, v_h: f64) -> MobilityPowers {
    let p_hv = hover_power(params);
    MobilityPowers {
        horizontal: p_hv
            + 0.5 * params.air_density * params.drag_coeff * params.ref_area * v_h.powi(3),
        ascend: p_hv + params.thrust * params.v_ascend,
        descend: (p_hv - params.thrust * params.v_descend).max(0.0),
    }
}

/// Energy to fly `d_horiz` metres at `v_h` and change altitude by `delta_h`.
///
/// A descent (`delta_h < 0`) is charged `-P_d * delta_h / v_d`, which is
/// positive.
pub fn mobility_energy(params: &EnergyParams, d_horiz: f64, delta_h: f64, v_h: f64) -> f64 {
    let p = mobility_powers(params, v_h);
    let horizontal = if d_horiz > 0.0 {
        p.horizontal * d_horiz / v_h
    } else {
        0.0
    };
    let vertical = if delta_h >= 0.0 {
        p.ascend * delta_h / params.v_ascend
    } else {
        -p.descend * delta_h / params.v_descend
    };
    horizontal + vertical
}

/// Time spent flying a leg at the given horizontal speed.
pub fn flight_time(params: &EnergyParams, d_horiz: f64, delta_h: f64, v_h: f64) -> f64 {
    let vertical = if delta_h >= 0.0 {
        delta_h / params.v_ascend
    } else {
        -delta_h / params.v_descend
    };
    d_horiz / v_h + vertical
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> EnergyParams {
        EnergyParams::default()
    }

    #[test]
    fn defaults_are_consistent() {
        p().validate().unwrap();
        let mut bad = p();
        bad.thrust = 30.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn comm() {
        assert!((comm_energy(&p(), 1, 10.0) - 0.416).abs() < 1e-12);
        assert!((comm_energy(&p(), 0, 10.0) - 0.1).abs() < 1e-12);
        assert_eq!(comm_energy(&p(), 5, 0.0), 0.0);
    }

    #[test]
    fn hover() {
        let ph = hover_power(&p());
        assert!((ph - 724.1).abs() < 0.5, "{ph}");
        let mut q = p();
        q.thrust *= 2.0;
        assert!((hover_power(&q) / ph - 2f64.powf(1.5)).abs() < 1e-12);
        let mut q = p();
        q.rotor_radius *= 4.0;
        assert!((hover_power(&q) / ph - 0.25).abs() < 1e-12);
        let mut q = p();
        q.rotor_radius *= 2.0;
        assert!((hover_power(&q) / ph - 0.5).abs() < 1e-12);

        assert!((hover_energy(&p(), 10.0) - 10.0 * ph).abs() < 1e-9);
        assert_eq!(hover_energy(&p(), 0.0), 0.0);
        assert!(
            (hover_energy(&p(), 7.0) + hover_energy(&p(), 3.0) - hover_energy(&p(), 10.0)).abs()
                < 1e-9
        );
    }

    #[test]
    fn mobility_power_values() {
        let ph = hover_power(&p());
        let m = mobility_powers(&p(), 10.0);
        assert!((m.horizontal - (ph + 0.5 * 1.225 * 0.025 * 0.192 * 1000.0)).abs() < 1e-9);
        assert!((m.horizontal - 727.0).abs() < 0.5);
        assert!((mobility_powers(&p(), 1e-9).horizontal - ph).abs() < 1e-9);
        assert!((m.descend - (ph - 343.0)).abs() < 1e-9);
        assert!((m.descend - 381.1).abs() < 0.5);
        assert!((m.ascend - (ph + 343.0)).abs() < 1e-9);
    }

    #[test]
    fn mobility_energy_values() {
        assert_eq!(mobility_energy(&p(), 0.0, 0.0, 10.0), 0.0);
        let e = mobility_energy(&p(), 100.0, 0.0, 10.0);
        assert!((e - 10.0 * mobility_powers(&p(), 10.0).horizontal).abs() < 1e-9);
        assert!((e - 7270.0).abs() < 5.0);
        let down = mobility_energy(&p(), 0.0, -50.0, 10.0);
        assert!((down - 5.0 * mobility_powers(&p(), 10.0).descend).abs() < 1e-9);
        assert!((down - 1905.0).abs() < 3.0);
        assert!(down > 0.0);
    }

    #[test]
    fn flight_times() {
        assert_eq!(flight_time(&p(), 100.0, 0.0, 10.0), 10.0);
        assert_eq!(flight_time(&p(), 0.0, -20.0, 10.0), 2.0);
        assert_eq!(flight_time(&p(), 277.0, 10.0, 27.7), 11.0);
    }

    #[test]
    fn ledger_total() {
        let e = EnergyLedgerEntry::new(3, 0.4, 7000.0, 12.5);
        assert_eq!(e.total, 0.4 + 7000.0 + 12.5);
        assert_eq!(EnergyLedgerEntry::zero(0).total, 0.0);
    }
}
