use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::game::RoadNetwork;
use crate::{EdgeId, VertexId};

const NO_EDGE: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    vertex: VertexId,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then vertex id
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Point-to-point Dijkstra with reusable buffers.
///
/// Among equal tentative distances the predecessor edge with the smaller id
/// wins, so the returned path depends only on the cost vector.
pub struct Dijkstra<'a> {
    network: &'a RoadNetwork,
    dist: Vec<f64>,
    pred: Vec<EdgeId>,
    settled: Vec<bool>,
    touched: Vec<VertexId>,
    heap: BinaryHeap<Entry>,
}

impl<'a> Dijkstra<'a> {
    pub fn new(network: &'a RoadNetwork) -> Self {
        let n = network.num_vertices();
        Self {
            network,
            dist: vec![f64::INFINITY; n],
            pred: vec![NO_EDGE; n],
            settled: vec![false; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = f64::INFINITY;
            self.pred[v as usize] = NO_EDGE;
            self.settled[v as usize] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Shortest `source`-`target` path under `costs`. Costs are trusted to be
    /// finite and non-negative; see [`check_costs`].
    pub fn query(&mut self, costs: &[f64], source: VertexId, target: VertexId) -> Result<(Vec<EdgeId>, f64)> {
        self.reset();
        let net = self.network;
        self.dist[source as usize] = 0.0;
        self.touched.push(source);
        self.heap.push(Entry {
            dist: 0.0,
            vertex: source,
        });
        while let Some(Entry { dist, vertex }) = self.heap.pop() {
            let v = vertex as usize;
            if self.settled[v] || dist > self.dist[v] {
                continue;
            }
            self.settled[v] = true;
            if vertex == target {
                break;
            }
            for &e in net.out_edges(vertex) {
                let w = net.head(e) as usize;
                if self.settled[w] {
                    continue;
                }
                let nd = dist + costs[e as usize];
                if self.dist[w] == f64::INFINITY {
                    self.touched.push(w as VertexId);
                }
                if nd < self.dist[w] {
                    self.dist[w] = nd;
                    self.pred[w] = e;
                    self.heap.push(Entry {
                        dist: nd,
                        vertex: w as VertexId,
                    });
                } else if nd == self.dist[w] && e < self.pred[w] {
                    self.pred[w] = e;
                }
            }
        }
        if !self.settled[target as usize] {
            return Err(Error::NoPath { from: source, to: target });
        }
        let mut path = Vec::new();
        let mut v = target;
        while v != source {
            let e = self.pred[v as usize];
            path.push(e);
            v = net.tail(e);
        }
        path.reverse();
        Ok((path, self.dist[target as usize]))
    }

    /// Distances from `source` to every vertex.
    pub fn distances(&mut self, costs: &[f64], source: VertexId) -> Vec<f64> {
        // A target that is never settled early runs the search to exhaustion.
        self.reset();
        let net = self.network;
        self.dist[source as usize] = 0.0;
        self.touched.push(source);
        self.heap.push(Entry {
            dist: 0.0,
            vertex: source,
        });
        while let Some(Entry { dist, vertex }) = self.heap.pop() {
            let v = vertex as usize;
            if self.settled[v] || dist > self.dist[v] {
                continue;
            }
            self.settled[v] = true;
            for &e in net.out_edges(vertex) {
                let w = net.head(e) as usize;
                let nd = dist + costs[e as usize];
                if self.dist[w] == f64::INFINITY {
                    self.touched.push(w as VertexId);
                }
                if nd < self.dist[w] {
                    self.dist[w] = nd;
                    self.heap.push(Entry {
                        dist: nd,
                        vertex: w as VertexId,
                    });
                }
            }
        }
        self.dist.clone()
    }
}

/// Rejects negative or non-finite costs.
pub fn check_costs(costs: &[f64]) -> Result<()> {
    match costs.iter().position(|c| !c.is_finite() || *c < 0.0) {
        Some(e) => Err(Error::BadEdgeCost {
            edge: e as EdgeId,
            cost: costs[e],
        }),
        None => Ok(()),
    }
}

/// One-shot shortest path query.
pub fn dijkstra(network: &RoadNetwork, costs: &[f64], source: VertexId, target: VertexId) -> Result<(Vec<EdgeId>, f64)> {
    check_costs(costs)?;
    Dijkstra::new(network).query(costs, source, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Edge;

    #[test]
    fn parallel_edges_pick_cheaper() {
        let net = RoadNetwork::new(
            2,
            vec![
                Edge { tail: 0, head: 1, d_ms: 3 },
                Edge { tail: 0, head: 1, d_ms: 5 },
            ],
        )
        .unwrap();
        let (p, c) = dijkstra(&net, &[3.0, 5.0], 0, 1).unwrap();
        assert_eq!(p, vec![0]);
        assert_eq!(c, 3.0);
        let (p, _) = dijkstra(&net, &[5.0, 3.0], 0, 1).unwrap();
        assert_eq!(p, vec![1]);
    }

    #[test]
    fn ties_prefer_smaller_predecessor_edge() {
        // two routes of cost 2 into vertex 3: via 1 (edge 2) and via 2 (edge 3)
        let net = RoadNetwork::new(
            4,
            vec![
                Edge { tail: 0, head: 2, d_ms: 1 },
                Edge { tail: 0, head: 1, d_ms: 1 },
                Edge { tail: 1, head: 3, d_ms: 1 },
                Edge { tail: 2, head: 3, d_ms: 1 },
            ],
        )
        .unwrap();
        let costs = [1.0; 4];
        let (p, c) = dijkstra(&net, &costs, 0, 3).unwrap();
        assert_eq!(c, 2.0);
        assert_eq!(p, vec![1, 2]);
        let (p, _) = dijkstra(&net, &[1.0, 1.0, 1.0, 1.0], 0, 3).unwrap();
        assert_eq!(p, vec![1, 2]);
    }

    #[test]
    fn unreachable_and_bad_costs() {
        let net = RoadNetwork::new(3, vec![Edge { tail: 0, head: 1, d_ms: 1 }]).unwrap();
        assert!(matches!(
            dijkstra(&net, &[1.0], 0, 2),
            Err(Error::NoPath { from: 0, to: 2 })
        ));
        assert!(matches!(dijkstra(&net, &[-1.0], 0, 1), Err(Error::BadEdgeCost { edge: 0, .. })));
        assert!(dijkstra(&net, &[f64::NAN], 0, 1).is_err());
    }
}
