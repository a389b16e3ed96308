//! Customizable contraction hierarchy.
//!
//! Three phases: [`MetricIndependentIndex::new`] orders and contracts the
//! topology once, [`MetricIndependentIndex::customize`] computes arc labels
//! for one cost vector (basic then perfect customization) and
//! [`CustomizedIndex::query`] answers elimination-tree queries.
//!
//! Internally vertices are renamed by rank so that an arc `(x, y)` always has
//! `x < y`. The upward label of the arc is the cost of `x -> y`, the downward
//! label the cost of `y -> x`.

use crate::error::{Error, Result};
use crate::game::RoadNetwork;
use crate::routing::dijkstra::check_costs;
use crate::routing::order::{nested_dissection_order, undirected_adjacency};
use crate::{EdgeId, VertexId};

const NONE: u32 = u32::MAX;

/// Topology-only part of the hierarchy: order, chordal supergraph and
/// elimination tree.
#[derive(Debug, Clone)]
pub struct MetricIndependentIndex {
    num_edges: usize,
    edge_ends: Vec<(VertexId, VertexId)>,
    rank: Vec<u32>,
    order: Vec<VertexId>,
    /// upward CSR in rank space, heads ascending
    first_out: Vec<u32>,
    head: Vec<u32>,
    tail: Vec<u32>,
    parent: Vec<u32>,
    /// arc index and direction (true = upward) per original edge; NONE for loops
    edge_arc: Vec<(u32, bool)>,
    /// lower triangles `(xy, xz, yz)` grouped by ascending lowest vertex x
    triangles: Vec<[u32; 3]>,
    triangle_first: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Via {
    Unreachable,
    Edge(EdgeId),
    Middle(u32),
}

/// Arc labels for one metric.
#[derive(Debug, Clone)]
pub struct CustomizedIndex<'a> {
    index: &'a MetricIndependentIndex,
    up: Vec<f64>,
    down: Vec<f64>,
    up_via: Vec<Via>,
    down_via: Vec<Via>,
}

impl MetricIndependentIndex {
    pub fn new(network: &RoadNetwork) -> Self {
        let order = nested_dissection_order(network);
        Self::with_order(network, order)
    }

    /// Builds the index for a caller-supplied elimination order.
    pub fn with_order(network: &RoadNetwork, order: Vec<VertexId>) -> Self {
        let n = network.num_vertices();
        assert_eq!(order.len(), n, "order must be a permutation of the vertices");
        let mut rank = vec![NONE; n];
        for (r, &v) in order.iter().enumerate() {
            assert_eq!(rank[v as usize], NONE, "vertex {v} appears twice in the order");
            rank[v as usize] = r as u32;
        }

        // contraction: upper neighbour sets, propagated to the elimination-tree parent
        let adj = undirected_adjacency(network);
        let mut upper: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (v, list) in adj.iter().enumerate() {
            let rv = rank[v];
            for &w in list {
                let rw = rank[w as usize];
                if rw > rv {
                    upper[rv as usize].push(rw);
                }
            }
        }
        let mut parent = vec![NONE; n];
        for x in 0..n {
            let mut list = std::mem::take(&mut upper[x]);
            list.sort_unstable();
            list.dedup();
            if let Some((&p, rest)) = list.split_first() {
                parent[x] = p;
                upper[p as usize].extend_from_slice(rest);
            }
            upper[x] = list;
        }

        let mut first_out = Vec::with_capacity(n + 1);
        first_out.push(0u32);
        let mut head = Vec::new();
        let mut tail = Vec::new();
        for (x, list) in upper.iter().enumerate() {
            head.extend_from_slice(list);
            tail.extend(std::iter::repeat_n(x as u32, list.len()));
            first_out.push(head.len() as u32);
        }

        let find = |x: u32, y: u32| -> u32 {
            let lo = first_out[x as usize] as usize;
            let hi = first_out[x as usize + 1] as usize;
            let pos = head[lo..hi]
                .binary_search(&y)
                .expect("chordal supergraph must contain the arc");
            (lo + pos) as u32
        };

        let edge_arc = network
            .edges()
            .iter()
            .map(|e| {
                if e.tail == e.head {
                    return (NONE, true);
                }
                let (rt, rh) = (rank[e.tail as usize], rank[e.head as usize]);
                if rt < rh {
                    (find(rt, rh), true)
                } else {
                    (find(rh, rt), false)
                }
            })
            .collect();

        let mut triangles = Vec::new();
        let mut triangle_first = Vec::with_capacity(n + 1);
        for x in 0..n {
            triangle_first.push(triangles.len() as u32);
            let lo = first_out[x] as usize;
            let hi = first_out[x + 1] as usize;
            for i in lo..hi {
                for j in i + 1..hi {
                    let yz = find(head[i], head[j]);
                    triangles.push([i as u32, j as u32, yz]);
                }
            }
        }
        triangle_first.push(triangles.len() as u32);

        Self {
            num_edges: network.num_edges(),
            edge_ends: network.edges().iter().map(|e| (e.tail, e.head)).collect(),
            rank,
            order,
            first_out,
            head,
            tail,
            parent,
            edge_arc,
            triangles,
            triangle_first,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.rank.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.head.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Elimination order, first eliminated first.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn rank(&self, v: VertexId) -> u32 {
        self.rank[v as usize]
    }

    /// Elimination-tree parent of `v` (original ids), `None` for roots.
    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        let p = self.parent[self.rank[v as usize] as usize];
        (p != NONE).then(|| self.order[p as usize])
    }

    /// Supergraph arcs as original-id vertex pairs `(lower, higher)`.
    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.head.len()).map(|a| (self.order[self.tail[a] as usize], self.order[self.head[a] as usize]))
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        let (a, b) = (self.rank[u as usize], self.rank[v as usize]);
        let (x, y) = if a < b { (a, b) } else { (b, a) };
        self.arc(x, y).is_some()
    }

    fn arc(&self, x: u32, y: u32) -> Option<u32> {
        let lo = self.first_out[x as usize] as usize;
        let hi = self.first_out[x as usize + 1] as usize;
        self.head[lo..hi].binary_search(&y).ok().map(|p| (lo + p) as u32)
    }

    fn arcs_of(&self, x: u32) -> std::ops::Range<usize> {
        self.first_out[x as usize] as usize..self.first_out[x as usize + 1] as usize
    }

    /// Computes arc labels for `costs` (indexed by original edge id).
    pub fn customize(&self, costs: &[f64]) -> Result<CustomizedIndex<'_>> {
        if costs.len() != self.num_edges {
            return Err(Error::InvalidParameter(format!(
                "metric has {} entries, network has {} edges",
                costs.len(),
                self.num_edges
            )));
        }
        check_costs(costs)?;
        let m = self.head.len();
        let mut up = vec![f64::INFINITY; m];
        let mut down = vec![f64::INFINITY; m];
        let mut up_via = vec![Via::Unreachable; m];
        let mut down_via = vec![Via::Unreachable; m];
        for (e, &(arc, upward)) in self.edge_arc.iter().enumerate() {
            if arc == NONE {
                continue;
            }
            let a = arc as usize;
            let c = costs[e];
            let (label, via) = if upward {
                (&mut up[a], &mut up_via[a])
            } else {
                (&mut down[a], &mut down_via[a])
            };
            // edges ascend, so strict < keeps the smallest id among equal parallels
            if c < *label {
                *label = c;
                *via = Via::Edge(e as EdgeId);
            }
        }

        // basic: lower triangles in ascending order of the lowest vertex
        for x in 0..self.num_vertices() {
            let tri = &self.triangles[self.triangle_first[x] as usize..self.triangle_first[x + 1] as usize];
            for &[xy, xz, yz] in tri {
                let (xy, xz, yz) = (xy as usize, xz as usize, yz as usize);
                // y -> x -> z
                let via_up = down[xy] + up[xz];
                if via_up < up[yz] {
                    up[yz] = via_up;
                    up_via[yz] = Via::Middle(x as u32);
                }
                // z -> x -> y
                let via_down = down[xz] + up[xy];
                if via_down < down[yz] {
                    down[yz] = via_down;
                    down_via[yz] = Via::Middle(x as u32);
                }
            }
        }

        // perfect: upper triangles, lowest vertex descending
        for x in (0..self.num_vertices()).rev() {
            let tri = &self.triangles[self.triangle_first[x] as usize..self.triangle_first[x + 1] as usize];
            for &[xy, xz, yz] in tri {
                let (xy, xz, yz) = (xy as usize, xz as usize, yz as usize);
                let y = self.head[xy];
                let z = self.head[xz];
                // x -> z -> y
                let c = up[xz] + down[yz];
                if c < up[xy] {
                    up[xy] = c;
                    up_via[xy] = Via::Middle(z);
                }
                // y -> z -> x
                let c = up[yz] + down[xz];
                if c < down[xy] {
                    down[xy] = c;
                    down_via[xy] = Via::Middle(z);
                }
                // x -> y -> z
                let c = up[xy] + up[yz];
                if c < up[xz] {
                    up[xz] = c;
                    up_via[xz] = Via::Middle(y);
                }
                // z -> y -> x
                let c = down[yz] + down[xy];
                if c < down[xz] {
                    down[xz] = c;
                    down_via[xz] = Via::Middle(y);
                }
            }
        }

        Ok(CustomizedIndex {
            index: self,
            up,
            down,
            up_via,
            down_via,
        })
    }
}

/// Reusable per-worker search state for [`CustomizedIndex::query_with`].
#[derive(Debug, Clone)]
pub struct QueryState {
    fwd: Vec<f64>,
    bwd: Vec<f64>,
    fwd_pred: Vec<u32>,
    bwd_pred: Vec<u32>,
}

impl QueryState {
    pub fn new(num_vertices: usize) -> Self {
        Self {
            fwd: vec![f64::INFINITY; num_vertices],
            bwd: vec![f64::INFINITY; num_vertices],
            fwd_pred: vec![NONE; num_vertices],
            bwd_pred: vec![NONE; num_vertices],
        }
    }
}

impl CustomizedIndex<'_> {
    pub fn index(&self) -> &MetricIndependentIndex {
        self.index
    }

    /// Label of the supergraph arc between `u` and `v` in direction `u -> v`,
    /// `None` if the supergraph has no such arc.
    pub fn arc_cost(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let idx = self.index;
        let (a, b) = (idx.rank[u as usize], idx.rank[v as usize]);
        if a < b {
            idx.arc(a, b).map(|arc| self.up[arc as usize])
        } else {
            idx.arc(b, a).map(|arc| self.down[arc as usize])
        }
    }

    fn cost_between(&self, a: u32, b: u32) -> (f64, Via) {
        if a < b {
            let arc = self.index.arc(a, b).expect("arc") as usize;
            (self.up[arc], self.up_via[arc])
        } else {
            let arc = self.index.arc(b, a).expect("arc") as usize;
            (self.down[arc], self.down_via[arc])
        }
    }

    fn unpack(&self, a: u32, b: u32, out: &mut Vec<EdgeId>, depth: usize) {
        assert!(depth <= 2 * self.index.num_vertices() + 2, "shortcut unpacking does not terminate");
        match self.cost_between(a, b).1 {
            Via::Edge(e) => out.push(e),
            Via::Middle(m) => {
                self.unpack(a, m, out, depth + 1);
                self.unpack(m, b, out, depth + 1);
            }
            Via::Unreachable => unreachable!("unpacking an arc without a path"),
        }
    }

    pub fn query(&self, source: VertexId, target: VertexId) -> Result<(Vec<EdgeId>, f64)> {
        let mut state = QueryState::new(self.index.num_vertices());
        self.query_with(&mut state, source, target)
    }

    /// Elimination-tree query; `state` is left clean for the next query.
    pub fn query_with(&self, state: &mut QueryState, source: VertexId, target: VertexId) -> Result<(Vec<EdgeId>, f64)> {
        let idx = self.index;
        let s = idx.rank[source as usize];
        let t = idx.rank[target as usize];
        if s == t {
            return Ok((Vec::new(), 0.0));
        }

        state.fwd[s as usize] = 0.0;
        let mut v = s;
        while v != NONE {
            let dv = state.fwd[v as usize];
            if dv < f64::INFINITY {
                for a in idx.arcs_of(v) {
                    let w = idx.head[a] as usize;
                    let nd = dv + self.up[a];
                    if nd < state.fwd[w] {
                        state.fwd[w] = nd;
                        state.fwd_pred[w] = v;
                    }
                }
            }
            v = idx.parent[v as usize];
        }

        state.bwd[t as usize] = 0.0;
        let mut best = f64::INFINITY;
        let mut meet = NONE;
        let mut v = t;
        while v != NONE {
            let dv = state.bwd[v as usize];
            if dv < f64::INFINITY {
                let total = state.fwd[v as usize] + dv;
                if total < best {
                    best = total;
                    meet = v;
                }
                for a in idx.arcs_of(v) {
                    let w = idx.head[a] as usize;
                    let nd = dv + self.down[a];
                    if nd < state.bwd[w] {
                        state.bwd[w] = nd;
                        state.bwd_pred[w] = v;
                    }
                }
            }
            v = idx.parent[v as usize];
        }

        let mut up_chain = Vec::new();
        if meet != NONE {
            let mut v = meet;
            while v != s {
                let p = state.fwd_pred[v as usize];
                up_chain.push((p, v));
                v = p;
            }
            up_chain.reverse();
        }
        let mut down_chain = Vec::new();
        if meet != NONE {
            let mut v = meet;
            while v != t {
                let p = state.bwd_pred[v as usize];
                down_chain.push((v, p));
                v = p;
            }
        }

        for start in [s, t] {
            let mut v = start;
            while v != NONE {
                state.fwd[v as usize] = f64::INFINITY;
                state.bwd[v as usize] = f64::INFINITY;
                state.fwd_pred[v as usize] = NONE;
                state.bwd_pred[v as usize] = NONE;
                v = idx.parent[v as usize];
            }
        }

        if meet == NONE {
            return Err(Error::NoPath { from: source, to: target });
        }
        let mut path = Vec::new();
        for (a, b) in up_chain.into_iter().chain(down_chain) {
            self.unpack(a, b, &mut path, 0);
        }
        // zero-cost cycles can survive concatenation; erase them
        let path = erase_loops(&path, source, |e| idx.edge_ends[e as usize].1);
        Ok((path, best))
    }
}

/// Removes vertex repetitions from a walk by cutting out the cycles.
pub(crate) fn erase_loops(walk: &[EdgeId], source: VertexId, head: impl Fn(EdgeId) -> VertexId) -> Vec<EdgeId> {
    let mut out: Vec<EdgeId> = Vec::with_capacity(walk.len());
    let mut vertices = vec![source];
    for &e in walk {
        let h = head(e);
        if let Some(pos) = vertices.iter().position(|&v| v == h) {
            vertices.truncate(pos + 1);
            out.truncate(pos);
        } else {
            vertices.push(h);
            out.push(e);
        }
    }
    out
}
