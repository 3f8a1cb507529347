//! Discrete-time simulation: ships move, the relay repositions, then rates
//! and energy are booked for the slot.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    self, apply_sensitivity, rate_df, rate_siso, snr_df, snr_siso, ChannelParams, LinkGain,
    SnrReport, NEAR_FIELD_MIN_M,
};
use crate::energy::{
    self, comm_energy, hover_energy, mobility_energy, EnergyLedgerEntry, EnergyParams,
};
use crate::error::{Error, Result};
use crate::geometry::{classify_los, distance3d, Box3, LosState, Vec3};
use crate::metrics::cumulative_energy;
use crate::positioning::{
    position_cfmr, position_fpr, select_lsmr_host, transit_legs, Architecture, FleetMode, UavMode,
    UavPose,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShipDims {
    pub width: f64,
    pub length: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub fleet: FleetMode,
    pub architecture: Architecture,
    pub seed: u64,
    /// Offshore (x) by alongshore (y) extent of the area of interest, m.
    pub area: (f64, f64),
    pub bs: Vec3,
    pub blocking_ship: Box3,
    pub n_victims: usize,
    pub victim_dims: ShipDims,
    pub victim_antenna_height: f64,
    pub ship_speed: f64,
    /// Starting point of the lone ship in the single-ship scenario.
    pub single_start: (f64, f64),
    /// Direction of travel of the lone ship; normalised on use.
    pub single_heading: (f64, f64),
    pub slot_duration: f64,
    pub n_slots: usize,
    pub channel: ChannelParams,
    pub energy: EnergyParams,
    /// Antenna height of a UAV perched on a landing spot.
    pub ls_height: f64,
    /// Ceiling for the line-of-sight altitude search.
    pub h_max: f64,
    /// Where the UAV takes off from before the first slot.
    pub uav_launch: Vec3,
    /// Monte Carlo repetitions.
    pub runs: usize,
}

impl ScenarioConfig {
    pub fn defaults(fleet: FleetMode) -> Self {
        let bs = Vec3::new(0.0, 400.0, 35.0);
        let blocking_ship = Box3 {
            center: Vec3::new(150.0, 400.0, 0.0),
            width: 32.0,
            length: 200.0,
            height: 32.3,
            yaw: 0.0,
        };
        let (n_victims, n_slots) = match fleet {
            FleetMode::Single => (1, 10),
            FleetMode::Multi => (20, 20),
        };
        Self {
            fleet,
            architecture: Architecture::Lsmr,
            seed: 42,
            area: (600.0, 800.0),
            bs,
            blocking_ship,
            n_victims,
            victim_dims: ShipDims {
                width: 4.0,
                length: 20.0,
                height: 5.0,
            },
            victim_antenna_height: 2.0,
            ship_speed: 5.0,
            single_start: (400.0, 150.0),
            single_heading: (0.0, 1.0),
            slot_duration: 10.0,
            n_slots,
            channel: ChannelParams::default(),
            energy: EnergyParams::default(),
            ls_height: 35.0,
            h_max: 150.0,
            uav_launch: bs,
            runs: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if !(self.area.0 > 0.0 && self.area.1 > 0.0) {
            return bad(format!("area must be positive, got {:?}", self.area));
        }
        if self.n_victims == 0 {
            return bad("at least one victim ship is required".into());
        }
        if self.fleet == FleetMode::Single && self.n_victims != 1 {
            return bad(format!(
                "single-ship scenario needs exactly one ship, got {}",
                self.n_victims
            ));
        }
        if !(self.slot_duration > 0.0) {
            return bad(format!(
                "slot duration must be positive, got {}",
                self.slot_duration
            ));
        }
        if !(self.ship_speed >= 0.0) {
            return bad(format!(
                "ship speed must be non-negative, got {}",
                self.ship_speed
            ));
        }
        if self.single_heading.0 == 0.0 && self.single_heading.1 == 0.0 {
            return bad("single-ship heading must be non-zero".into());
        }
        if !(self.h_max > 0.0) || !(self.ls_height > 0.0) {
            return bad("altitude ceiling and landing-spot height must be positive".into());
        }
        if self.victim_antenna_height < 0.0 || self.bs.z < 0.0 || self.uav_launch.z < 0.0 {
            return bad("heights must be non-negative".into());
        }
        if self.runs == 0 {
            return bad("run count must be at least 1".into());
        }
        let (sx, sy) = self.single_start;
        if !(0.0..=self.area.0).contains(&sx) || !(0.0..=self.area.1).contains(&sy) {
            return bad(format!(
                "single-ship start {:?} lies outside the area",
                self.single_start
            ));
        }
        self.blocking_ship.validate()?;
        self.channel.validate()?;
        self.energy.validate()?;
        Ok(())
    }

    fn obstacles(&self) -> [Box3; 1] {
        [self.blocking_ship]
    }

    /// Horizontal cruise speed of the relay under this architecture.
    pub fn uav_speed(&self) -> f64 {
        match self.architecture {
            Architecture::Lsmr => self.energy.v_horizontal_lsmr,
            _ => self.energy.v_horizontal_cfmr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShipState {
    pub id: usize,
    /// Antenna position; `z` stays at the antenna height.
    pub position: Vec3,
    pub heading: (f64, f64),
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub config: ScenarioConfig,
    pub ships: Vec<ShipState>,
    pub uav: UavPose,
    /// Fixed hover point of the FPR relay, with its ceiling flag.
    fixed_target: Option<(Vec3, bool)>,
    pub slot: usize,
}

/// One ship's link in one slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShipLink {
    pub ship_id: usize,
    pub rate: f64,
    pub rx_dbm: f64,
    /// LoS state of the hop that delivers the signal to the ship: the direct
    /// link without a relay, the relay-to-ship hop otherwise.
    pub los: LosState,
    pub snr: SnrReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotResult {
    pub slot_index: usize,
    pub links: Vec<ShipLink>,
    pub avg_rate: f64,
    pub uav_pose: UavPose,
    pub energy: EnergyLedgerEntry,
    /// The relay could not find an altitude with LoS to every node and sits
    /// at the ceiling.
    pub los_ceiling_hit: bool,
}

impl SlotResult {
    pub fn per_ship_rate(&self) -> Vec<f64> {
        self.links.iter().map(|l| l.rate).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub architecture: Architecture,
    pub seed: u64,
    pub slots: Vec<SlotResult>,
    pub cumulative_energy: Vec<f64>,
}

impl TimeSeries {
    pub fn mean_rate(&self) -> f64 {
        let n: usize = self.slots.iter().map(|s| s.links.len()).sum();
        if n == 0 {
            return 0.0;
        }
        self.slots
            .iter()
            .flat_map(|s| s.links.iter().map(|l| l.rate))
            .sum::<f64>()
            / n as f64
    }

    pub fn total_energy(&self) -> f64 {
        self.cumulative_energy.last().copied().unwrap_or(0.0)
    }
}

fn place_fleet(config: &ScenarioConfig, rng: &mut ChaCha8Rng) -> Vec<ShipState> {
    let z = config.victim_antenna_height;
    match config.fleet {
        FleetMode::Single => {
            let (hx, hy) = config.single_heading;
            let norm = hx.hypot(hy);
            vec![ShipState {
                id: 0,
                position: Vec3::new(config.single_start.0, config.single_start.1, z),
                heading: (hx / norm, hy / norm),
                speed: config.ship_speed,
            }]
        }
        FleetMode::Multi => (0..config.n_victims)
            .map(|id| {
                let position = loop {
                    let p = Vec3::new(
                        rng.gen::<f64>() * config.area.0,
                        rng.gen::<f64>() * config.area.1,
                        z,
                    );
                    if !inside_footprint(&config.blocking_ship, p) {
                        break p;
                    }
                };
                // Two opposite alongshore directions, alternating by id.
                let heading = if id % 2 == 0 { (0.0, 1.0) } else { (0.0, -1.0) };
                ShipState {
                    id,
                    position,
                    heading,
                    speed: config.ship_speed,
                }
            })
            .collect(),
    }
}

fn inside_footprint(b: &Box3, p: Vec3) -> bool {
    let (s, c) = b.yaw.sin_cos();
    let dx = p.x - b.center.x;
    let dy = p.y - b.center.y;
    let lx = c * dx + s * dy;
    let ly = -s * dx + c * dy;
    lx.abs() < 0.5 * b.width && ly.abs() < 0.5 * b.length
}

pub fn init_scenario(config: &ScenarioConfig) -> Result<SimState> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let ships = place_fleet(config, &mut rng);

    let uav = if config.architecture.has_relay() {
        UavPose {
            position: config.uav_launch,
            mode: UavMode::InTransit,
            host: None,
        }
    } else {
        UavPose::absent()
    };

    let fixed_target = if config.architecture == Architecture::Fpr {
        let positions: Vec<Vec3> = ships.iter().map(|s| s.position).collect();
        let placement = position_fpr(
            config.bs,
            &positions,
            config.area,
            config.fleet,
            &config.obstacles(),
            config.h_max,
        )?;
        Some((placement.pose.position, !placement.altitude.reachable))
    } else {
        None
    };

    Ok(SimState {
        config: config.clone(),
        ships,
        uav,
        fixed_target,
        slot: 0,
    })
}

fn reflect(coord: &mut f64, dir: &mut f64, max: f64) {
    loop {
        if *coord < 0.0 {
            *coord = -*coord;
            *dir = -*dir;
        } else if *coord > max {
            *coord = 2.0 * max - *coord;
            *dir = -*dir;
        } else {
            break;
        }
    }
}

/// Advance every ship by `speed * dt` along its heading, reflecting off the
/// area boundary. A ship that would sail into the blocking ship's hull turns
/// around in place instead.
pub fn step_ships(state: &mut SimState, dt: f64) {
    let (w, l) = state.config.area;
    let blocker = state.config.blocking_ship;
    for ship in &mut state.ships {
        let mut x = ship.position.x + ship.heading.0 * ship.speed * dt;
        let mut y = ship.position.y + ship.heading.1 * ship.speed * dt;
        let (mut hx, mut hy) = ship.heading;
        reflect(&mut x, &mut hx, w);
        reflect(&mut y, &mut hy, l);
        let next = Vec3::new(x, y, ship.position.z);
        if inside_footprint(&blocker, next) && !inside_footprint(&blocker, ship.position) {
            ship.heading = (-ship.heading.0, -ship.heading.1);
        } else {
            ship.position = next;
            ship.heading = (hx, hy);
        }
    }
}

/// Where the relay wants to be this slot, and whether it is a perch.
struct Target {
    position: Vec3,
    host: Option<usize>,
    ceiling_hit: bool,
}

fn relay_target(state: &SimState) -> Result<Target> {
    let cfg = &state.config;
    let ships: Vec<Vec3> = state.ships.iter().map(|s| s.position).collect();
    match cfg.architecture {
        Architecture::Nr => unreachable!("no relay"),
        Architecture::Fpr => {
            let (position, ceiling_hit) = state.fixed_target.expect("fixed target set at init");
            Ok(Target {
                position,
                host: None,
                ceiling_hit,
            })
        }
        Architecture::Cfmr => {
            let p = position_cfmr(cfg.bs, &ships, &cfg.obstacles(), cfg.h_max, cfg.seed)?;
            Ok(Target {
                position: p.pose.position,
                host: None,
                ceiling_hit: !p.altitude.reachable,
            })
        }
        Architecture::Lsmr => {
            let host = select_lsmr_host(&ships, state.uav.host, cfg.seed)?;
            let s = ships[host];
            Ok(Target {
                position: Vec3::new(s.x, s.y, cfg.ls_height),
                host: Some(host),
                ceiling_hit: false,
            })
        }
    }
}

/// Energy booked for moving the relay during one slot.
struct Movement {
    flight_time: f64,
    mobility: f64,
}

fn move_relay(state: &mut SimState, target: &Target) -> Movement {
    let cfg = &state.config;
    let slot = cfg.slot_duration;
    let speed = cfg.uav_speed();

    // A perched relay rides along with its host for free.
    if state.uav.mode == UavMode::Perched && state.uav.host == target.host {
        state.uav.position = target.position;
        return Movement {
            flight_time: 0.0,
            mobility: 0.0,
        };
    }

    let from = state.uav.position;
    let (d, dh) = transit_legs(from, target.position);
    let needed = energy::flight_time(&cfg.energy, d, dh, speed);
    let arrived_mode = if target.host.is_some() {
        UavMode::Perched
    } else {
        UavMode::Hovering
    };

    if needed <= slot {
        state.uav = UavPose {
            position: target.position,
            mode: arrived_mode,
            host: target.host,
        };
        Movement {
            flight_time: needed,
            mobility: mobility_energy(&cfg.energy, d, dh, speed),
        }
    } else {
        let f = slot / needed;
        state.uav = UavPose {
            position: from + (target.position - from) * f,
            mode: UavMode::InTransit,
            host: target.host,
        };
        Movement {
            flight_time: slot,
            mobility: mobility_energy(&cfg.energy, d * f, dh * f, speed),
        }
    }
}

fn gain(params: &ChannelParams, tx: Vec3, rx: Vec3, obstacles: &[Box3]) -> Result<LinkGain> {
    if tx == rx {
        return channel::path_loss_db(params, NEAR_FIELD_MIN_M, LosState::Los)
            .map(|pl| LinkGain::from_path_loss(pl, LosState::Los));
    }
    let los = classify_los(tx, rx, obstacles)?;
    // Links shorter than the near-field guard are evaluated at the guard.
    let d = distance3d(tx, rx).max(NEAR_FIELD_MIN_M);
    let pl = channel::path_loss_db(params, d, los)?;
    Ok(LinkGain::from_path_loss(pl, los))
}

fn ship_links(state: &SimState) -> Result<Vec<ShipLink>> {
    let cfg = &state.config;
    let params = &cfg.channel;
    let obstacles = cfg.obstacles();
    let relay = cfg.architecture.has_relay().then_some(state.uav.position);
    let backhaul = relay
        .map(|r| gain(params, cfg.bs, r, &obstacles))
        .transpose()?;

    state
        .ships
        .iter()
        .map(|ship| {
            let direct = gain(params, cfg.bs, ship.position, &obstacles)?;
            let (snr, rate, los) = match (relay, backhaul) {
                (Some(r), Some(br)) => {
                    let access = gain(params, r, ship.position, &obstacles)?;
                    let snr = snr_df(params, &br, &direct, &access);
                    (snr, rate_df(&snr), access.los)
                }
                _ => {
                    let snr = snr_siso(params, &direct);
                    (snr, rate_siso(&snr), direct.los)
                }
            };
            Ok(ShipLink {
                ship_id: ship.id,
                rate: apply_sensitivity(snr.rx_power_dbm, rate, params),
                rx_dbm: snr.rx_power_dbm,
                los,
                snr,
            })
        })
        .collect()
}

/// Run slot `t_j`: move ships, reposition the relay, evaluate every link
/// and book the relay's energy.
pub fn simulate_slot(state: &mut SimState, t_j: usize) -> Result<SlotResult> {
    let dt = state.config.slot_duration;
    step_ships(state, dt);

    let arch = state.config.architecture;
    let (energy, ceiling_hit) = if arch.has_relay() {
        let target = relay_target(state)?;
        let movement = move_relay(state, &target);
        let e = &state.config.energy;
        let comm = comm_energy(e, state.ships.len(), dt);
        let hover = if state.uav.mode == UavMode::Perched {
            0.0
        } else {
            hover_energy(e, (dt - movement.flight_time).max(0.0))
        };
        (
            EnergyLedgerEntry::new(t_j, comm, hover, movement.mobility),
            target.ceiling_hit,
        )
    } else {
        (EnergyLedgerEntry::zero(t_j), false)
    };

    let links = ship_links(state)?;
    let avg_rate = crate::metrics::average_rate(&links.iter().map(|l| l.rate).collect::<Vec<_>>())?;
    state.slot = t_j + 1;

    Ok(SlotResult {
        slot_index: t_j,
        links,
        avg_rate,
        uav_pose: state.uav,
        energy,
        los_ceiling_hit: ceiling_hit,
    })
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<TimeSeries> {
    let mut state = init_scenario(config)?;
    let slots = (0..config.n_slots)
        .map(|t| simulate_slot(&mut state, t))
        .collect::<Result<Vec<_>>>()?;
    let ledger: Vec<EnergyLedgerEntry> = slots.iter().map(|s| s.energy).collect();
    Ok(TimeSeries {
        architecture: config.architecture,
        seed: config.seed,
        cumulative_energy: cumulative_energy(&ledger),
        slots,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub architecture: Architecture,
    pub runs: Vec<TimeSeries>,
    /// Per-slot average rate, averaged across runs.
    pub mean_slot_rate: Vec<f64>,
    pub mean_cumulative_energy: Vec<f64>,
}

impl AggregateResult {
    /// Every per-ship per-slot rate from every run, in run/slot/ship order.
    pub fn pooled_rates(&self) -> Vec<f64> {
        self.runs
            .iter()
            .flat_map(|r| r.slots.iter().flat_map(|s| s.links.iter().map(|l| l.rate)))
            .collect()
    }

    pub fn mean_rate(&self) -> f64 {
        let pooled = self.pooled_rates();
        if pooled.is_empty() {
            0.0
        } else {
            pooled.iter().sum::<f64>() / pooled.len() as f64
        }
    }

    pub fn mean_total_energy(&self) -> f64 {
        self.runs.iter().map(TimeSeries::total_energy).sum::<f64>() / self.runs.len() as f64
    }
}

fn column_means(rows: impl Iterator<Item = Vec<f64>>, n_runs: usize) -> Vec<f64> {
    let mut acc: Vec<f64> = Vec::new();
    for row in rows {
        if acc.is_empty() {
            acc = vec![0.0; row.len()];
        }
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    acc.iter().map(|a| a / n_runs as f64).collect()
}

/// Repeat the scenario with seeds `seed, seed + 1, ...` and aggregate.
///
/// Runs execute in parallel; results are kept in seed order.
pub fn monte_carlo(config: &ScenarioConfig, n_runs: usize) -> Result<AggregateResult> {
    if n_runs == 0 {
        return Err(Error::InvalidInput(
            "Monte Carlo needs at least one run".into(),
        ));
    }
    let runs = (0..n_runs)
        .into_par_iter()
        .map(|i| {
            let mut c = config.clone();
            c.seed = config.seed.wrapping_add(i as u64);
            run_scenario(&c)
        })
        .collect::<Result<Vec<_>>>()?;

    let mean_slot_rate = column_means(
        runs.iter()
            .map(|r| r.slots.iter().map(|s| s.avg_rate).collect()),
        n_runs,
    );
    let mean_cumulative_energy =
        column_means(runs.iter().map(|r| r.cumulative_energy.clone()), n_runs);
    Ok(AggregateResult {
        architecture: config.architecture,
        runs,
        mean_slot_rate,
        mean_cumulative_energy,
    })
}
