//! Nested-dissection vertex ordering with BFS level separators.

use std::collections::VecDeque;

use crate::game::RoadNetwork;
use crate::VertexId;

const LEAF_SIZE: usize = 8;

/// Undirected simple neighbour lists of the network, self loops dropped.
pub(crate) fn undirected_adjacency(network: &RoadNetwork) -> Vec<Vec<VertexId>> {
    let mut adj = vec![Vec::new(); network.num_vertices()];
    for e in network.edges() {
        if e.tail != e.head {
            adj[e.tail as usize].push(e.head);
            adj[e.head as usize].push(e.tail);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

struct Dissector<'a> {
    adj: &'a [Vec<VertexId>],
    // stamp[v] == current stamp marks membership in the active subset
    stamp: Vec<u32>,
    current: u32,
    level: Vec<u32>,
    order: Vec<VertexId>,
}

impl Dissector<'_> {
    fn mark(&mut self, vertices: &[VertexId]) {
        self.current += 1;
        for &v in vertices {
            self.stamp[v as usize] = self.current;
        }
    }

    /// BFS inside the marked subset; returns visit order and sets `level`.
    fn bfs(&mut self, source: VertexId) -> Vec<VertexId> {
        let stamp = self.current;
        let mut seen = Vec::new();
        let mut queue = VecDeque::new();
        self.level[source as usize] = 0;
        // temporarily move visited vertices out of the subset
        self.stamp[source as usize] = stamp + 1;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            seen.push(v);
            for &w in &self.adj[v as usize] {
                if self.stamp[w as usize] == stamp {
                    self.stamp[w as usize] = stamp + 1;
                    self.level[w as usize] = self.level[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        for &v in &seen {
            self.stamp[v as usize] = stamp;
        }
        seen
    }

    fn dissect(&mut self, vertices: Vec<VertexId>) {
        if vertices.len() <= LEAF_SIZE {
            self.order.extend_from_slice(&vertices);
            return;
        }
        self.mark(&vertices);
        let first = self.bfs(vertices[0]);
        if first.len() < vertices.len() {
            // disconnected: split off the component of vertices[0]
            let stamp = self.current;
            let mut in_first = vec![];
            for &v in &first {
                self.stamp[v as usize] = stamp + 1;
                in_first.push(v);
            }
            let rest: Vec<VertexId> = vertices
                .iter()
                .copied()
                .filter(|&v| self.stamp[v as usize] == stamp)
                .collect();
            self.current += 1;
            self.dissect(in_first);
            self.dissect(rest);
            return;
        }
        // pseudo-peripheral start: farthest vertex of the first sweep
        let far = *first.last().unwrap();
        let sweep = self.bfs(far);
        let max_level = self.level[*sweep.last().unwrap() as usize] as usize;
        if max_level < 2 {
            self.order.extend_from_slice(&vertices);
            return;
        }
        let mut per_level = vec![0usize; max_level + 1];
        for &v in &sweep {
            per_level[self.level[v as usize] as usize] += 1;
        }
        // choose an interior level near the median that keeps the separator small
        let half = vertices.len() / 2;
        let mut below = 0;
        let mut median = 1;
        for (l, &count) in per_level.iter().enumerate() {
            if below + count > half {
                median = l;
                break;
            }
            below += count;
        }
        let median = median.clamp(1, max_level - 1);
        let window = (max_level / 4).max(1);
        let lo = median.saturating_sub(window).max(1);
        let hi = (median + window).min(max_level - 1);
        let mut best = median;
        let mut best_score = f64::INFINITY;
        let mut prefix = vec![0usize; max_level + 2];
        for l in 0..=max_level {
            prefix[l + 1] = prefix[l] + per_level[l];
        }
        for l in lo..=hi {
            let a = prefix[l] as f64;
            let b = (vertices.len() - prefix[l + 1]) as f64;
            let balance = a.min(b) / a.max(b).max(1.0);
            let score = per_level[l] as f64 / (0.25 + balance);
            if score < best_score {
                best_score = score;
                best = l;
            }
        }
        let sep_level = best as u32;
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut separator = Vec::new();
        for &v in &sweep {
            match self.level[v as usize].cmp(&sep_level) {
                std::cmp::Ordering::Less => left.push(v),
                std::cmp::Ordering::Equal => separator.push(v),
                std::cmp::Ordering::Greater => right.push(v),
            }
        }
        self.dissect(left);
        self.dissect(right);
        self.order.extend_from_slice(&separator);
    }
}

/// Elimination order (first eliminated first). Separators are ranked above
/// the parts they split.
pub fn nested_dissection_order(network: &RoadNetwork) -> Vec<VertexId> {
    let adj = undirected_adjacency(network);
    let n = network.num_vertices();
    let mut d = Dissector {
        adj: &adj,
        stamp: vec![0; n],
        current: 0,
        level: vec![0; n],
        order: Vec::with_capacity(n),
    };
    d.dissect((0..n as VertexId).collect());
    d.order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::grid_network;

    #[test]
    fn order_is_a_permutation() {
        let net = grid_network(12, 9, 3);
        let order = nested_dissection_order(&net);
        let mut sorted = order.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..108).collect::<Vec<_>>());
    }

    #[test]
    fn disconnected_graph() {
        let net = RoadNetwork::new(20, vec![]).unwrap();
        let mut order = nested_dissection_order(&net);
        order.sort_unstable();
        assert_eq!(order, (0..20).collect::<Vec<_>>());
    }
}
