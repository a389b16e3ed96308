use thiserror::Error;

use crate::{AgentId, EdgeId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid cost table for edge {edge}: {reason}")]
    InvalidCostTable { edge: EdgeId, reason: String },

    #[error("cost of edge {edge} increases from load {load} to {next}; synergistic models require non-increasing costs", next = load + 1)]
    NotSynergistic { edge: EdgeId, load: u32 },

    #[error("cost model covers {model} edges but the network has {network}")]
    ModelSizeMismatch { model: usize, network: usize },

    #[error("selfishness parameter r = {0} is outside [0, 1]")]
    InvalidSelfishness(f64),

    #[error("invalid demand: {0}")]
    InvalidDemand(String),

    #[error("agent {agent}: {reason}")]
    InvalidPath { agent: AgentId, reason: String },

    #[error("no path from {from} to {to}")]
    NoPath { from: VertexId, to: VertexId },

    #[error("edge {edge} has cost {cost}; routing needs finite non-negative costs")]
    BadEdgeCost { edge: EdgeId, cost: f64 },

    #[error("undefined {what} for agent {agent}: free-flow length is zero")]
    ZeroLength { what: &'static str, agent: AgentId },

    #[error("invariant violated in round {round}: {detail}")]
    InvariantViolation { round: usize, detail: String },

    #[error("enumeration too large: {count} profiles (limit {limit})")]
    TooManyProfiles { count: u128, limit: u128 },

    #[error("invalid SAT instance: {0}")]
    InvalidSat(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
