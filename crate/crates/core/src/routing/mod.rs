//! Shortest paths: a Dijkstra oracle and a customizable contraction hierarchy.

pub mod cch;
pub mod dijkstra;
pub mod order;

pub use cch::{CustomizedIndex, MetricIndependentIndex, QueryState};
pub use dijkstra::{check_costs, dijkstra, Dijkstra};
pub use order::nested_dissection_order;

use crate::error::Result;
use crate::game::RoadNetwork;
use crate::{EdgeId, VertexId};

pub fn cch_preprocess(network: &RoadNetwork) -> MetricIndependentIndex {
    MetricIndependentIndex::new(network)
}

pub fn cch_customize<'a>(index: &'a MetricIndependentIndex, costs: &[f64]) -> Result<CustomizedIndex<'a>> {
    index.customize(costs)
}

pub fn cch_query(customized: &CustomizedIndex<'_>, source: VertexId, target: VertexId) -> Result<(Vec<EdgeId>, f64)> {
    customized.query(source, target)
}
