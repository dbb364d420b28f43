//! Exact criteria and simulation for the voter model with a confidence
//! threshold on a graph of opinions.
//!
//! * [`graph`]: opinion graphs, spatial graphs, distance-regularity
//! * [`criteria`]: fluctuation and fixation tests in exact rationals
//! * [`dynamics`]: event-driven simulation and the pile process
//! * [`stats`]: Monte Carlo estimators and goodness-of-fit tests
//! * [`sweep`]: parameter sweeps and the `summary` preset

pub mod criteria;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod stats;
pub mod sweep;

pub use criteria::{classify, CriteriaReport, Ratio, Rational, ThresholdModel, Verdict};
pub use dynamics::{Configuration, PileState, TrajectoryStats};
pub use error::{Error, Result};
pub use graph::{Family, IntersectionTable, OpinionGraph, SpatialGraph};
pub use stats::Estimate;
