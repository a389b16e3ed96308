//! Synergistic traffic assignment.
//!
//! Agents travel between origin-destination pairs in a road network whose
//! edge costs fall as more agents share them. The crate computes equilibria by
//! iterated best response, routes with a customizable contraction hierarchy,
//! and evaluates the resulting flows (stretch, sharing, bus line plans).

pub mod busline;
pub mod cli;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod io;
pub mod metrics;
pub mod optima;
pub mod routing;

pub type VertexId = u32;
pub type EdgeId = u32;
pub type AgentId = u32;

pub use error::{Error, Result};
pub use game::{
    anticipated_decrease, compute_loads, path_cost, potential, Agent, AnticipatedDecrease, CostModel, DemandSet, Edge,
    LoadVector, Path, PathCostMode, RoadNetwork, StepTable, StrategyProfile,
};
