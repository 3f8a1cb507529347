//! Positions, obstacle volumes and line-of-sight tests.
//!
//! Coordinates are metres in a shore-aligned frame: `x` points offshore,
//! `y` runs along the shore and `z` is height above sea level.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resolution of the altitude search, and its lowest admissible altitude.
pub const ALTITUDE_RESOLUTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Distance between the ground projections of two points.
    pub fn horizontal_distance(self, other: Vec3) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn with_z(self, z: f64) -> Self {
        Self { z, ..self }
    }

    fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, rhs: f64) -> Vec3 {
        Vec3::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

/// A box standing on the sea surface, rotated about the vertical axis.
///
/// With `yaw == 0` the width runs along `x` and the length along `y`;
/// positive yaw rotates the hull counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    /// Centre of the footprint; `z` is ignored and treated as 0.
    pub center: Vec3,
    pub width: f64,
    pub length: f64,
    pub height: f64,
    pub yaw: f64,
}

impl Box3 {
    pub fn new(center: Vec3, width: f64, length: f64, height: f64, yaw: f64) -> Result<Self> {
        let b = Self {
            center: center.with_z(0.0),
            width,
            length,
            height,
            yaw,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("width", self.width),
            ("length", self.length),
            ("height", self.height),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "box {name} must be positive, got {v}"
                )));
            }
        }
        if !self.yaw.is_finite() {
            return Err(Error::InvalidInput("box yaw must be finite".into()));
        }
        Ok(())
    }

    /// Express a world point in the box frame (origin at footprint centre).
    fn to_local(self, p: Vec3) -> Vec3 {
        let (s, c) = self.yaw.sin_cos();
        let dx = p.x - self.center.x;
        let dy = p.y - self.center.y;
        Vec3::new(c * dx + s * dy, -s * dx + c * dy, p.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LosState {
    #[serde(rename = "LoS")]
    Los,
    #[serde(rename = "NLoS")]
    Nlos,
}

impl LosState {
    pub fn as_str(self) -> &'static str {
        match self {
            LosState::Los => "LoS",
            LosState::Nlos => "NLoS",
        }
    }
}

pub fn distance3d(a: Vec3, b: Vec3) -> f64 {
    (a - b).norm()
}

/// Does the open segment `pq` pass through the interior of `obstacle`?
///
/// Slab test in the box frame with strict inequalities on both the segment
/// parameter and the box faces, so a segment that only touches a face, edge
/// or corner does not count as blocked.
pub fn segment_intersects_box(p: Vec3, q: Vec3, obstacle: &Box3) -> Result<bool> {
    if p == q {
        return Err(Error::DegenerateSegment(p.to_array()));
    }
    let a = obstacle.to_local(p);
    let b = obstacle.to_local(q);
    let dir = b - a;

    let slabs = [
        (a.x, dir.x, -0.5 * obstacle.width, 0.5 * obstacle.width),
        (a.y, dir.y, -0.5 * obstacle.length, 0.5 * obstacle.length),
        (a.z, dir.z, 0.0, obstacle.height),
    ];

    let mut t_enter = 0.0_f64;
    let mut t_exit = 1.0_f64;
    for (origin, d, lo, hi) in slabs {
        if d == 0.0 {
            if origin <= lo || origin >= hi {
                return Ok(false);
            }
            continue;
        }
        let t0 = (lo - origin) / d;
        let t1 = (hi - origin) / d;
        let (near, far) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
        t_enter = t_enter.max(near);
        t_exit = t_exit.min(far);
        if t_enter >= t_exit {
            return Ok(false);
        }
    }
    Ok(t_enter < t_exit)
}

pub fn classify_los(tx: Vec3, rx: Vec3, obstacles: &[Box3]) -> Result<LosState> {
    for obstacle in obstacles {
        if segment_intersects_box(tx, rx, obstacle)? {
            return Ok(LosState::Nlos);
        }
    }
    Ok(LosState::Los)
}

/// Outcome of [`min_los_altitude`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LosAltitude {
    pub altitude: f64,
    /// False when even the ceiling leaves at least one endpoint obstructed;
    /// `altitude` is then the ceiling itself.
    pub reachable: bool,
}

fn clear_to_all(node: Vec3, endpoints: &[Vec3], obstacles: &[Box3]) -> bool {
    endpoints.iter().all(|&e| {
        // A node sitting exactly on an endpoint trivially sees it.
        e == node || matches!(classify_los(node, e, obstacles), Ok(LosState::Los))
    })
}

/// Lowest altitude above `xy` that has line of sight to every endpoint.
///
/// Blockage by ground-standing boxes is monotone in the node altitude, so a
/// bisection over `[ALTITUDE_RESOLUTION, h_max]` suffices. The returned
/// altitude always has LoS; the one `ALTITUDE_RESOLUTION` below it does not.
pub fn min_los_altitude(
    xy: (f64, f64),
    endpoints: &[Vec3],
    obstacles: &[Box3],
    h_max: f64,
) -> Result<LosAltitude> {
    if !(h_max > 0.0) {
        return Err(Error::InvalidInput(format!(
            "altitude ceiling must be positive, got {h_max}"
        )));
    }
    if endpoints.is_empty() {
        return Err(Error::InvalidInput(
            "altitude search needs at least one endpoint".into(),
        ));
    }
    let at = |z: f64| Vec3::new(xy.0, xy.1, z);

    let floor = ALTITUDE_RESOLUTION.min(h_max);
    if clear_to_all(at(floor), endpoints, obstacles) {
        return Ok(LosAltitude {
            altitude: floor,
            reachable: true,
        });
    }
    if !clear_to_all(at(h_max), endpoints, obstacles) {
        return Ok(LosAltitude {
            altitude: h_max,
            reachable: false,
        });
    }

    let (mut lo, mut hi) = (floor, h_max);
    while hi - lo > ALTITUDE_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if clear_to_all(at(mid), endpoints, obstacles) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(LosAltitude {
        altitude: hi,
        reachable: true,
    })
}
