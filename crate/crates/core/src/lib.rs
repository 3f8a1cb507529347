//! Link-level simulation of a UAV-mounted decode-and-forward relay serving
//! ships whose link to an onshore base station is shadowed by a large
//! vessel.
//!
//! Four architectures are compared: no relay, a relay hovering at a fixed
//! point, a relay hovering over the fleet centroid, and a relay perched on
//! the landing spot of the ship nearest that centroid. Each slot the ships
//! move, the relay repositions, every ship's achievable rate is evaluated
//! and the relay's communication, hover and mobility energy is booked.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod link_budget;
pub mod metrics;
pub mod positioning;
pub mod report;
pub mod scenario;

pub use error::{Error, Result};
pub use geometry::{Box3, LosState, Vec3};
pub use positioning::{Architecture, FleetMode};
pub use scenario::ScenarioConfig;
