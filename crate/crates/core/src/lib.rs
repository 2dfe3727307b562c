//! Monte Carlo simulator for two-tier macro/metro cellular networks.
//!
//! Access points and buildings are Poisson point processes around a typical
//! user at the origin. Links combine 3D antenna patterns with electrical
//! downtilt, log-distance path loss, per-building penetration loss and
//! Rayleigh fading. Users associate by biased average-signal-to-average-
//! interference ratio and are scored by their instantaneous SIR.
//!
//! The math is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix it to `f64`, which the simulation engine uses by default.

pub mod antenna;
pub mod association;
pub mod channel;
mod error;
pub mod geometry;
pub mod scalar;
pub mod simulation;

pub use antenna::{dipole_exponent, MetroAntenna};
pub use error::{Error, Result};
pub use geometry::Tier;
pub use scalar::Scalar;
pub use simulation::{
    aggregate, run_drop, run_sweep, simulate, DropResult, NetworkMetrics, PowerMode, Scenario,
    SweepCell, SweepGrid, SweepRow,
};

pub type AntennaPattern = antenna::AntennaPattern<f64>;
pub type Point2 = geometry::Point2<f64>;
pub type Point3 = geometry::Point3<f64>;
pub type Region = geometry::Region<f64>;
pub type Wap = geometry::Wap<f64>;
pub type Sector = geometry::Sector<f64>;
pub type Building = geometry::Building<f64>;
pub type BuildingIndex = geometry::BuildingIndex<f64>;
pub type LinkGeometry = geometry::LinkGeometry<f64>;
pub type PathLossModel = channel::PathLossModel<f64>;
pub type Propagation = channel::Propagation<f64>;
pub type LinkBudget = channel::LinkBudget<f64>;
pub type AssociationDecision = association::AssociationDecision<f64>;
pub type CellRadius = simulation::CellRadius<f64>;
pub type DropGeometry = simulation::DropGeometry<f64>;
