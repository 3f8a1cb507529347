//! Where the relay UAV goes under each communication architecture.

mod kmeans;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use kmeans::{kmeans, mean, nearest, sum_of_squares, KMeansResult, Point2, KMEANS_RESTARTS};

use crate::error::{Error, Result};
use crate::geometry::{min_los_altitude, Box3, LosAltitude, Vec3};

/// Upper bound on Lloyd iterations during placement.
pub const KMEANS_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Architecture {
    /// Direct BS-to-ship link, no relay.
    Nr,
    /// Hovering relay at a fixed point.
    Fpr,
    /// Hovering relay tracking the fleet centroid.
    Cfmr,
    /// Relay perched on the landing spot of the ship nearest the centroid.
    Lsmr,
}

impl Architecture {
    pub const ALL: [Architecture; 4] = [
        Architecture::Nr,
        Architecture::Fpr,
        Architecture::Cfmr,
        Architecture::Lsmr,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Architecture::Nr => "nr",
            Architecture::Fpr => "fpr",
            Architecture::Cfmr => "cfmr",
            Architecture::Lsmr => "lsmr",
        }
    }

    pub fn has_relay(self) -> bool {
        self != Architecture::Nr
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nr" => Ok(Architecture::Nr),
            "fpr" => Ok(Architecture::Fpr),
            "cfmr" => Ok(Architecture::Cfmr),
            "lsmr" => Ok(Architecture::Lsmr),
            other => Err(Error::InvalidInput(format!(
                "unknown architecture '{other}', expected one of nr, fpr, cfmr, lsmr"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UavMode {
    Absent,
    Hovering,
    Perched,
    InTransit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UavPose {
    pub position: Vec3,
    pub mode: UavMode,
    /// Ship whose landing spot the UAV occupies or is heading for.
    pub host: Option<usize>,
}

impl UavPose {
    pub fn absent() -> Self {
        Self {
            position: Vec3::default(),
            mode: UavMode::Absent,
            host: None,
        }
    }

    pub fn hovering(position: Vec3) -> Self {
        Self {
            position,
            mode: UavMode::Hovering,
            host: None,
        }
    }

    pub fn perched(position: Vec3, host: usize) -> Self {
        Self {
            position,
            mode: UavMode::Perched,
            host: Some(host),
        }
    }
}

/// A hovering placement together with how its altitude was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub pose: UavPose,
    pub altitude: LosAltitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FleetMode {
    Single,
    Multi,
}

fn xy(p: Vec3) -> Point2 {
    (p.x, p.y)
}

fn hover_at(
    xy: Point2,
    bs: Vec3,
    ships: &[Vec3],
    obstacles: &[Box3],
    h_max: f64,
) -> Result<Placement> {
    let mut endpoints = Vec::with_capacity(ships.len() + 1);
    endpoints.push(bs);
    endpoints.extend_from_slice(ships);
    let altitude = min_los_altitude(xy, &endpoints, obstacles, h_max)?;
    Ok(Placement {
        pose: UavPose::hovering(Vec3::new(xy.0, xy.1, altitude.altitude)),
        altitude,
    })
}

/// Fixed relay position from the fleet as it stands before the first slot.
///
/// With one ship the UAV sits above the midpoint of the BS-ship segment;
/// with a fleet it sits above the centre of the area `(0,0)..area`.
pub fn position_fpr(
    bs: Vec3,
    initial_ships: &[Vec3],
    area: (f64, f64),
    mode: FleetMode,
    obstacles: &[Box3],
    h_max: f64,
) -> Result<Placement> {
    let target = match mode {
        FleetMode::Single => {
            let ship = initial_ships
                .first()
                .ok_or_else(|| Error::InvalidInput("fixed relay needs a ship".into()))?;
            (0.5 * (bs.x + ship.x), 0.5 * (bs.y + ship.y))
        }
        FleetMode::Multi => (0.5 * area.0, 0.5 * area.1),
    };
    hover_at(target, bs, initial_ships, obstacles, h_max)
}

/// Hover above the single-cluster k-means centroid of the ships.
pub fn position_cfmr(
    bs: Vec3,
    ships: &[Vec3],
    obstacles: &[Box3],
    h_max: f64,
    seed: u64,
) -> Result<Placement> {
    let points: Vec<Point2> = ships.iter().copied().map(xy).collect();
    let clusters = kmeans(&points, 1, seed, KMEANS_MAX_ITER)?;
    hover_at(clusters.centroids[0], bs, ships, obstacles, h_max)
}

/// Pick the host ship for the perching relay.
///
/// The host is the ship nearest the fleet centroid, lowest id on ties. The
/// current host is kept unless another ship is strictly nearer.
pub fn select_lsmr_host(ships: &[Vec3], current: Option<usize>, seed: u64) -> Result<usize> {
    if ships.len() == 1 {
        return Ok(0);
    }
    let points: Vec<Point2> = ships.iter().copied().map(xy).collect();
    let clusters = kmeans(&points, 1, seed, KMEANS_MAX_ITER)?;
    let c = clusters.centroids[0];
    let d2 = |i: usize| {
        let (dx, dy) = (points[i].0 - c.0, points[i].1 - c.1);
        dx * dx + dy * dy
    };
    let best = (0..points.len())
        .min_by(|&a, &b| d2(a).total_cmp(&d2(b)).then(a.cmp(&b)))
        .expect("non-empty fleet");
    match current {
        Some(h) if h < points.len() && d2(h) <= d2(best) => Ok(h),
        _ => Ok(best),
    }
}

/// Perch on the landing spot of the selected host ship.
pub fn position_lsmr(
    ships: &[Vec3],
    current: Option<usize>,
    ls_height: f64,
    seed: u64,
) -> Result<UavPose> {
    let host = select_lsmr_host(ships, current, seed)?;
    let ship = ships[host];
    Ok(UavPose::perched(Vec3::new(ship.x, ship.y, ls_height), host))
}

/// Ground distance and signed altitude change between two positions.
pub fn transit_legs(from: Vec3, to: Vec3) -> (f64, f64) {
    (from.horizontal_distance(to), to.z - from.z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_architecture() {
        assert_eq!("LSMR".parse::<Architecture>().unwrap(), Architecture::Lsmr);
        let err = "xyz".parse::<Architecture>().unwrap_err().to_string();
        for name in ["nr", "fpr", "cfmr", "lsmr"] {
            assert!(err.contains(name), "{err}");
        }
    }

    #[test]
    fn fpr_single_midpoint() {
        let bs = Vec3::new(0.0, 300.0, 35.0);
        let ship = Vec3::new(400.0, 300.0, 2.0);
        let p = position_fpr(bs, &[ship], (600.0, 800.0), FleetMode::Single, &[], 150.0).unwrap();
        assert_eq!((p.pose.position.x, p.pose.position.y), (200.0, 300.0));
        assert_eq!(p.pose.mode, UavMode::Hovering);
    }

    #[test]
    fn fpr_multi_area_center() {
        let bs = Vec3::new(0.0, 400.0, 35.0);
        let ships = [Vec3::new(10.0, 10.0, 2.0), Vec3::new(500.0, 700.0, 2.0)];
        let p = position_fpr(bs, &ships, (600.0, 800.0), FleetMode::Multi, &[], 150.0).unwrap();
        assert_eq!((p.pose.position.x, p.pose.position.y), (300.0, 400.0));
    }

    #[test]
    fn fpr_climbs_over_blocker_under_it() {
        let bs = Vec3::new(0.0, 300.0, 35.0);
        let ship = Vec3::new(400.0, 300.0, 2.0);
        let blocker = Box3::new(Vec3::new(200.0, 300.0, 0.0), 32.0, 200.0, 32.3, 0.0).unwrap();
        let p = position_fpr(
            bs,
            &[ship],
            (600.0, 800.0),
            FleetMode::Single,
            &[blocker],
            150.0,
        )
        .unwrap();
        assert!(p.altitude.reachable);
        assert!(p.pose.position.z > 32.3);
    }

    #[test]
    fn cfmr_centroid() {
        let bs = Vec3::new(0.0, 400.0, 35.0);
        let one = [Vec3::new(123.0, 456.0, 2.0)];
        let p = position_cfmr(bs, &one, &[], 150.0, 1).unwrap();
        assert_eq!((p.pose.position.x, p.pose.position.y), (123.0, 456.0));

        let pair = [Vec3::new(250.0, 350.0, 2.0), Vec3::new(350.0, 450.0, 2.0)];
        let p = position_cfmr(bs, &pair, &[], 150.0, 1).unwrap();
        assert_eq!((p.pose.position.x, p.pose.position.y), (300.0, 400.0));
    }

    #[test]
    fn lsmr_hosts() {
        let one = [Vec3::new(5.0, 6.0, 2.0)];
        let pose = position_lsmr(&one, None, 35.0, 0).unwrap();
        assert_eq!(pose.host, Some(0));
        assert_eq!(pose.position, Vec3::new(5.0, 6.0, 35.0));
        assert_eq!(pose.mode, UavMode::Perched);

        let tie = [Vec3::new(0.0, 0.0, 2.0), Vec3::new(10.0, 0.0, 2.0)];
        assert_eq!(position_lsmr(&tie, None, 35.0, 0).unwrap().host, Some(0));
        // An existing host that is still tied keeps the UAV.
        assert_eq!(position_lsmr(&tie, Some(1), 35.0, 0).unwrap().host, Some(1));

        let three = [
            Vec3::new(0.0, 0.0, 2.0),
            Vec3::new(10.0, 0.0, 2.0),
            Vec3::new(20.0, 0.0, 2.0),
        ];
        assert_eq!(
            position_lsmr(&three, Some(0), 35.0, 0).unwrap().host,
            Some(1)
        );
    }

    #[test]
    fn legs() {
        let a = Vec3::new(0.0, 0.0, 35.0);
        assert_eq!(transit_legs(a, a), (0.0, 0.0));
        assert_eq!(transit_legs(a, Vec3::new(30.0, 40.0, 35.0)), (50.0, 0.0));
        assert_eq!(transit_legs(a, Vec3::new(0.0, 0.0, 10.0)), (0.0, -25.0));
    }
}
