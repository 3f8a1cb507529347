//! Plain-text scenario files.
//!
//! One `key = value` per line, `#` starts a comment, keys are grouped by a
//! dotted section prefix (`channel.bandwidth_hz = 10e6`). Omitted keys keep
//! their defaults; unknown keys are rejected.
//!
//! ```text
//! scenario = multi
//! arch = cfmr
//! seed = 7
//! victims.speed_mps = 4.5
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::positioning::{Architecture, FleetMode};
use crate::scenario::ScenarioConfig;

#[derive(Clone, Copy)]
enum Range {
    Any,
    Positive,
    NonNegative,
}

fn parse_f64(line: usize, key: &str, raw: &str, range: Range) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| Error::config(line, format!("{key}: '{raw}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::config(line, format!("{key}: value must be finite")));
    }
    let ok = match range {
        Range::Any => true,
        Range::Positive => v > 0.0,
        Range::NonNegative => v >= 0.0,
    };
    if !ok {
        let want = match range {
            Range::Positive => "positive",
            _ => "non-negative",
        };
        return Err(Error::config(
            line,
            format!("{key}: {v} is out of range, must be {want}"),
        ));
    }
    Ok(v)
}

fn parse_count(line: usize, key: &str, raw: &str, min: usize) -> Result<usize> {
    let v: usize = raw
        .parse()
        .map_err(|_| Error::config(line, format!("{key}: '{raw}' is not a whole number")))?;
    if v < min {
        return Err(Error::config(
            line,
            format!("{key}: {v} is out of range, must be at least {min}"),
        ));
    }
    Ok(v)
}

pub fn parse_fleet(raw: &str) -> Result<FleetMode> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "single" => Ok(FleetMode::Single),
        "multi" => Ok(FleetMode::Multi),
        other => Err(Error::InvalidInput(format!(
            "unknown scenario '{other}', expected single or multi"
        ))),
    }
}

struct Line<'a> {
    number: usize,
    key: &'a str,
    value: &'a str,
}

fn lines(text: &str) -> Result<Vec<Line<'_>>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            Error::config(number, format!("expected 'key = value', got '{content}'"))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::config(
                number,
                format!("expected 'key = value', got '{content}'"),
            ));
        }
        if !seen.insert(key) {
            return Err(Error::config(number, format!("duplicate key '{key}'")));
        }
        out.push(Line { number, key, value });
    }
    Ok(out)
}

/// Parse config text. `fleet` overrides the file's `scenario` key; the
/// fleet picks the defaults the remaining keys are applied on top of.
pub fn parse_config_str(text: &str, fleet: Option<FleetMode>) -> Result<ScenarioConfig> {
    let lines = lines(text)?;
    let file_fleet = lines
        .iter()
        .find(|l| l.key == "scenario")
        .map(|l| parse_fleet(l.value).map_err(|e| Error::config(l.number, e.to_string())))
        .transpose()?;
    let fleet = fleet.or(file_fleet).unwrap_or(FleetMode::Multi);

    let mut cfg = ScenarioConfig::defaults(fleet);
    let mut launch_set = false;
    let mut thrust_set = false;
    let mut mass_set = false;
    for l in &lines {
        if l.key.starts_with("uav.launch_") {
            launch_set = true;
        }
        if l.key == "energy.thrust_n" {
            thrust_set = true;
        }
        if matches!(
            l.key,
            "energy.frame_weight_kg" | "energy.payload_weight_kg" | "energy.gravity"
        ) {
            mass_set = true;
        }
        apply(&mut cfg, l)?;
    }
    if !launch_set {
        cfg.uav_launch = cfg.bs;
    }
    if mass_set && !thrust_set {
        let e = &mut cfg.energy;
        e.thrust = (e.frame_weight + e.payload_weight) * e.gravity;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    parse_config_with(path, None)
}

pub fn parse_config_with(
    path: impl AsRef<Path>,
    fleet: Option<FleetMode>,
) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text, fleet)
}

fn apply(cfg: &mut ScenarioConfig, l: &Line<'_>) -> Result<()> {
    use Range::*;
    let (n, k, v) = (l.number, l.key, l.value);
    let f = |range| parse_f64(n, k, v, range);
    match k {
        "scenario" => {}
        "arch" => {
            cfg.architecture = v
                .parse::<Architecture>()
                .map_err(|e| Error::config(n, e.to_string()))?
        }
        "seed" => {
            cfg.seed = v
                .parse()
                .map_err(|_| Error::config(n, format!("seed: '{v}' is not an unsigned integer")))?
        }
        "sim.n_slots" => cfg.n_slots = parse_count(n, k, v, 0)?,
        "sim.slot_duration_s" => cfg.slot_duration = f(Positive)?,
        "sim.runs" => cfg.runs = parse_count(n, k, v, 1)?,

        "area.width_m" => cfg.area.0 = f(Positive)?,
        "area.length_m" => cfg.area.1 = f(Positive)?,

        "bs.x_m" => cfg.bs.x = f(Any)?,
        "bs.y_m" => cfg.bs.y = f(Any)?,
        "bs.height_m" => cfg.bs.z = f(NonNegative)?,

        "blocker.x_m" => cfg.blocking_ship.center.x = f(Any)?,
        "blocker.y_m" => cfg.blocking_ship.center.y = f(Any)?,
        "blocker.width_m" => cfg.blocking_ship.width = f(Positive)?,
        "blocker.length_m" => cfg.blocking_ship.length = f(Positive)?,
        "blocker.height_m" => cfg.blocking_ship.height = f(Positive)?,
        "blocker.yaw_deg" => cfg.blocking_ship.yaw = f(Any)?.to_radians(),

        "victims.count" => cfg.n_victims = parse_count(n, k, v, 1)?,
        "victims.width_m" => cfg.victim_dims.width = f(Positive)?,
        "victims.length_m" => cfg.victim_dims.length = f(Positive)?,
        "victims.height_m" => cfg.victim_dims.height = f(Positive)?,
        "victims.antenna_height_m" => cfg.victim_antenna_height = f(NonNegative)?,
        "victims.speed_mps" => cfg.ship_speed = f(NonNegative)?,
        "victims.start_x_m" => cfg.single_start.0 = f(NonNegative)?,
        "victims.start_y_m" => cfg.single_start.1 = f(NonNegative)?,
        "victims.heading_x" => cfg.single_heading.0 = f(Any)?,
        "victims.heading_y" => cfg.single_heading.1 = f(Any)?,

        "uav.ls_height_m" => cfg.ls_height = f(Positive)?,
        "uav.h_max_m" => cfg.h_max = f(Positive)?,
        "uav.launch_x_m" => cfg.uav_launch.x = f(Any)?,
        "uav.launch_y_m" => cfg.uav_launch.y = f(Any)?,
        "uav.launch_z_m" => cfg.uav_launch.z = f(NonNegative)?,

        "channel.carrier_frequency_hz" => cfg.channel.carrier_frequency_hz = f(Positive)?,
        "channel.bandwidth_hz" => cfg.channel.bandwidth_hz = f(Positive)?,
        "channel.noise_figure_db" => cfg.channel.noise_figure_db = f(Any)?,
        "channel.zeta_los_db" => cfg.channel.zeta_los_db = f(NonNegative)?,
        "channel.zeta_nlos_db" => cfg.channel.zeta_nlos_db = f(NonNegative)?,
        "channel.propagation_speed_mps" => cfg.channel.propagation_speed = f(Positive)?,
        "channel.bs_tx_dbm" => cfg.channel.bs_tx_dbm = f(Any)?,
        "channel.relay_tx_dbm" => cfg.channel.relay_tx_dbm = f(Any)?,
        "channel.rx_sensitivity_dbm" => cfg.channel.rx_sensitivity_dbm = f(Any)?,

        "energy.n_rotors" => cfg.energy.n_rotors = f(Positive)?,
        "energy.thrust_n" => cfg.energy.thrust = f(Positive)?,
        "energy.frame_weight_kg" => cfg.energy.frame_weight = f(Positive)?,
        "energy.payload_weight_kg" => cfg.energy.payload_weight = f(Positive)?,
        "energy.gravity" => cfg.energy.gravity = f(Positive)?,
        "energy.rotor_radius_m" => cfg.energy.rotor_radius = f(Positive)?,
        "energy.air_density" => cfg.energy.air_density = f(Positive)?,
        "energy.p_relay_tx_w" => cfg.energy.p_relay_tx = f(Positive)?,
        "energy.p_circuit_w" => cfg.energy.p_circuit = f(Positive)?,
        "energy.drag_coeff" => cfg.energy.drag_coeff = f(Positive)?,
        "energy.ref_area_m2" => cfg.energy.ref_area = f(Positive)?,
        "energy.rotor_chord_m" => cfg.energy.rotor_chord = f(Positive)?,
        "energy.angular_velocity_rad_s" => cfg.energy.angular_velocity = f(Positive)?,
        "energy.v_ascend_mps" => cfg.energy.v_ascend = f(Positive)?,
        "energy.v_descend_mps" => cfg.energy.v_descend = f(Positive)?,
        "energy.v_horizontal_lsmr_mps" => cfg.energy.v_horizontal_lsmr = f(Positive)?,
        "energy.v_horizontal_cfmr_mps" => cfg.energy.v_horizontal_cfmr = f(Positive)?,

        _ => return Err(Error::config(n, format!("unknown key '{k}'"))),
    }
    Ok(())
}

/// Render a config in the file format; parsing the result gives the same
/// config back.
pub fn to_config_text(cfg: &ScenarioConfig) -> String {
    let fleet = match cfg.fleet {
        FleetMode::Single => "single",
        FleetMode::Multi => "multi",
    };
    let b = &cfg.blocking_ship;
    let c = &cfg.channel;
    let e = &cfg.energy;
    let rows: Vec<(&str, String)> = vec![
        ("scenario", fleet.to_string()),
        ("arch", cfg.architecture.to_string()),
        ("seed", cfg.seed.to_string()),
        ("sim.n_slots", cfg.n_slots.to_string()),
        ("sim.slot_duration_s", cfg.slot_duration.to_string()),
        ("sim.runs", cfg.runs.to_string()),
        ("area.width_m", cfg.area.0.to_string()),
        ("area.length_m", cfg.area.1.to_string()),
        ("bs.x_m", cfg.bs.x.to_string()),
        ("bs.y_m", cfg.bs.y.to_string()),
        ("bs.height_m", cfg.bs.z.to_string()),
        ("blocker.x_m", b.center.x.to_string()),
        ("blocker.y_m", b.center.y.to_string()),
        ("blocker.width_m", b.width.to_string()),
        ("blocker.length_m", b.length.to_string()),
        ("blocker.height_m", b.height.to_string()),
        ("blocker.yaw_deg", b.yaw.to_degrees().to_string()),
        ("victims.count", cfg.n_victims.to_string()),
        ("victims.width_m", cfg.victim_dims.width.to_string()),
        ("victims.length_m", cfg.victim_dims.length.to_string()),
        ("victims.height_m", cfg.victim_dims.height.to_string()),
        (
            "victims.antenna_height_m",
            cfg.victim_antenna_height.to_string(),
        ),
        ("victims.speed_mps", cfg.ship_speed.to_string()),
        ("victims.start_x_m", cfg.single_start.0.to_string()),
        ("victims.start_y_m", cfg.single_start.1.to_string()),
        ("victims.heading_x", cfg.single_heading.0.to_string()),
        ("victims.heading_y", cfg.single_heading.1.to_string()),
        ("uav.ls_height_m", cfg.ls_height.to_string()),
        ("uav.h_max_m", cfg.h_max.to_string()),
        ("uav.launch_x_m", cfg.uav_launch.x.to_string()),
        ("uav.launch_y_m", cfg.uav_launch.y.to_string()),
        ("uav.launch_z_m", cfg.uav_launch.z.to_string()),
        (
            "channel.carrier_frequency_hz",
            c.carrier_frequency_hz.to_string(),
        ),
        ("channel.bandwidth_hz", c.bandwidth_hz.to_string()),
        ("channel.noise_figure_db", c.noise_figure_db.to_string()),
        ("channel.zeta_los_db", c.zeta_los_db.to_string()),
        ("channel.zeta_nlos_db", c.zeta_nlos_db.to_string()),
        (
            "channel.propagation_speed_mps",
            c.propagation_speed.to_string(),
        ),
        ("channel.bs_tx_dbm", c.bs_tx_dbm.to_string()),
        ("channel.relay_tx_dbm", c.relay_tx_dbm.to_string()),
        (
            "channel.rx_sensitivity_dbm",
            c.rx_sensitivity_dbm.to_string(),
        ),
        ("energy.n_rotors", e.n_rotors.to_string()),
        ("energy.thrust_n", e.thrust.to_string()),
        ("energy.frame_weight_kg", e.frame_weight.to_string()),
        ("energy.payload_weight_kg", e.payload_weight.to_string()),
        ("energy.gravity", e.gravity.to_string()),
        ("energy.rotor_radius_m", e.rotor_radius.to_string()),
        ("energy.air_density", e.air_density.to_string()),
        ("energy.p_relay_tx_w", e.p_relay_tx.to_string()),
        ("energy.p_circuit_w", e.p_circuit.to_string()),
        ("energy.drag_coeff", e.drag_coeff.to_string()),
        ("energy.ref_area_m2", e.ref_area.to_string()),
        ("energy.rotor_chord_m", e.rotor_chord.to_string()),
        (
            "energy.angular_velocity_rad_s",
            e.angular_velocity.to_string(),
        ),
        ("energy.v_ascend_mps", e.v_ascend.to_string()),
        ("energy.v_descend_mps", e.v_descend.to_string()),
        (
            "energy.v_horizontal_lsmr_mps",
            e.v_horizontal_lsmr.to_string(),
        ),
        (
            "energy.v_horizontal_cfmr_mps",
            e.v_horizontal_cfmr.to_string(),
        ),
    ];
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}
