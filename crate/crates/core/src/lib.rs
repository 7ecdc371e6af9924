//! Budget-constrained informative path planning over a probabilistic belief
//! grid, for a fixed-wing vehicle with a forward-facing camera.
//!
//! The crate provides the anytime informed tree planner, a uniform-sampling
//! baseline without edge rewards, the belief / sensor / reward machinery they
//! share, and a Monte Carlo benchmark harness with file-based scenarios.

pub mod belief;
pub mod bench;
pub mod dubins;
pub mod information;
pub mod oracles;
pub mod planner;
pub mod render;
pub mod scenario;
pub mod sensor;

pub use belief::{BeliefGrid, GaussianCentroid, NoFlyZone};
pub use dubins::{PathEdge, SegmentKind, VehicleState};
pub use information::{BeliefOverlay, RewardWeights};
pub use planner::{PlanConfig, PlanResult, PlannerKind, StopCondition};
pub use scenario::Scenario;
pub use sensor::SensorConfig;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("arc length {s} outside [0, {length}]")]
    ArcLengthOutOfRange { s: f64, length: f64 },
    #[error("all sampling weights are zero")]
    ZeroWeights,
    #[error("discontiguous path at edge {index}")]
    DiscontiguousPath { index: usize },
    #[error("invalid planner input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}
