//! Stretch and sharing statistics of a flow.
//!
//! All quantities are weighted by free-flow travel time `d`. Stretch compares
//! each path with the free-flow shortest path between its endpoints; sharing
//! counts co-riders on each edge of the path.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{compute_loads, LoadVector, RoadNetwork, StrategyProfile};
use crate::routing::Dijkstra;
use crate::{AgentId, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub struct FlowMetrics {
    pub average_stretch: f64,
    pub average_sharing: f64,
    /// `None` without a baseline or when the baseline shares nothing.
    pub normalized_average_sharing: Option<f64>,
    /// `None` for agents whose free-flow distance is zero.
    pub stretch: Vec<Option<f64>>,
    pub sharing: Vec<f64>,
}

fn endpoints(network: &RoadNetwork, path: &[u32]) -> (VertexId, VertexId) {
    (network.tail(path[0]), network.head(path[path.len() - 1]))
}

/// Per-agent stretch `D(p_i) / dist(s_i, t_i)`; `None` where `dist` is zero.
pub fn stretches(profile: &StrategyProfile, network: &RoadNetwork) -> Vec<Option<f64>> {
    let costs = network.free_flow_costs();
    let mut by_origin: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (i, p) in profile.paths().iter().enumerate() {
        by_origin.entry(endpoints(network, p).0).or_default().push(i);
    }
    let per_origin: Vec<(VertexId, Vec<f64>)> = by_origin
        .keys()
        .copied()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map_init(|| Dijkstra::new(network), |dj, s| (s, dj.distances(&costs, s)))
        .collect();
    let dist: BTreeMap<VertexId, Vec<f64>> = per_origin.into_iter().collect();
    profile
        .paths()
        .iter()
        .map(|p| {
            let (s, t) = endpoints(network, p);
            let shortest = dist[&s][t as usize];
            (shortest > 0.0).then(|| network.path_length(p) as f64 / shortest)
        })
        .collect()
}

/// Mean stretch over agents with a positive free-flow distance; the others
/// are skipped with a warning.
pub fn average_stretch(profile: &StrategyProfile, network: &RoadNetwork) -> Result<f64> {
    mean_stretch(&stretches(profile, network))
}

fn mean_stretch(stretch: &[Option<f64>]) -> Result<f64> {
    let defined: Vec<f64> = stretch.iter().flatten().copied().collect();
    let skipped = stretch.len() - defined.len();
    if skipped > 0 {
        log::warn!("{skipped} agents have zero free-flow distance and are left out of the average stretch");
    }
    if defined.is_empty() {
        let agent = stretch.iter().position(Option::is_none).unwrap_or(0) as AgentId;
        return Err(Error::ZeroLength { what: "stretch", agent });
    }
    Ok(defined.iter().sum::<f64>() / defined.len() as f64)
}

/// Per-agent `sum_e d(e) (l_e - 1) / D(p_i)`.
pub fn sharing(profile: &StrategyProfile, network: &RoadNetwork, loads: &LoadVector) -> Result<Vec<f64>> {
    profile
        .paths()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let length = network.path_length(p);
            if length == 0 {
                return Err(Error::ZeroLength {
                    what: "sharing",
                    agent: i as AgentId,
                });
            }
            let shared: u64 = p
                .iter()
                .map(|&e| network.d(e) as u64 * (loads.get(e) as u64 - 1))
                .sum();
            Ok(shared as f64 / length as f64)
        })
        .collect()
}

pub fn average_sharing(profile: &StrategyProfile, network: &RoadNetwork) -> Result<f64> {
    let loads = compute_loads(profile, network)?;
    let s = sharing(profile, network, &loads)?;
    Ok(mean(&s))
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Stretch and sharing of `profile`, with sharing normalized against
/// `baseline` when given.
pub fn flow_metrics(profile: &StrategyProfile, network: &RoadNetwork, baseline: Option<&StrategyProfile>) -> Result<FlowMetrics> {
    let loads = compute_loads(profile, network)?;
    let stretch = stretches(profile, network);
    let sharing = sharing(profile, network, &loads)?;
    let own = mean(&sharing);
    let normalized_average_sharing = match baseline {
        Some(b) => {
            let base = average_sharing(b, network)?;
            (base > 0.0).then(|| own / base)
        }
        None => None,
    };
    Ok(FlowMetrics {
        average_stretch: mean_stretch(&stretch)?,
        average_sharing: own,
        normalized_average_sharing,
        stretch,
        sharing,
    })
}

/// `0.00, 0.01, ..., 1.00`.
pub fn default_x_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// For each `x`, the fraction of agents that spend at least a fraction `x` of
/// their travel time on edges shared with at least `others` other agents.
pub fn sharing_fraction_curve(profile: &StrategyProfile, network: &RoadNetwork, others: u32, x_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if let Some(x) = x_grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidParameter(format!("x = {x} is outside [0, 1]")));
    }
    let loads = compute_loads(profile, network)?;
    let fractions: Vec<f64> = profile
        .paths()
        .iter()
        .map(|p| {
            let length = network.path_length(p);
            if length == 0 {
                return 0.0;
            }
            let shared: u64 = p
                .iter()
                .filter(|&&e| loads.get(e) > others)
                .map(|&e| network.d(e) as u64)
                .sum();
            shared as f64 / length as f64
        })
        .collect();
    let k = fractions.len().max(1) as f64;
    Ok(x_grid
        .iter()
        .map(|&x| (x, fractions.iter().filter(|&&f| f >= x).count() as f64 / k))
        .collect())
}
