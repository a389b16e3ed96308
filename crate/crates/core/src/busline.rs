//! Greedy trunk-line planning on top of a traveler flow.
//!
//! Lines grow from the edge used by most remaining path pieces. Travelers
//! whose path overlaps a line ride it on their longest common stretch, as far
//! as seats allow, and that stretch is cut out of their remaining path. A
//! knapsack over the candidate lines then picks the subset that covers the
//! most travel time within the bus operation budget.

use std::collections::HashMap;

use crate::game::RoadNetwork;
use crate::{AgentId, EdgeId, VertexId};

pub const DEFAULT_CAPACITY: u32 = 80;
pub const DEFAULT_FREQ_PER_MIN: f64 = 0.1;
pub const DEFAULT_WINDOW_MIN: f64 = 60.0;

const MS_PER_HOUR: f64 = 3.6e6;

/// A traveler riding `line.edges[start..end]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub traveler: AgentId,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BusLine {
    pub edges: Vec<EdgeId>,
    /// End-to-end travel time in milliseconds.
    pub tau_ms: u64,
    pub assignments: Vec<Assignment>,
    /// Travel time of all assigned segments, in milliseconds.
    pub coverage_ms: u64,
}

impl BusLine {
    pub fn riders_on(&self, position: usize) -> usize {
        self.assignments
            .iter()
            .filter(|a| (a.start..a.end).contains(&position))
            .count()
    }
}

struct Piece {
    traveler: AgentId,
    edges: Vec<EdgeId>,
    alive: bool,
}

struct Planner<'a> {
    network: &'a RoadNetwork,
    pieces: Vec<Piece>,
    /// Number of live pieces through each edge.
    count: Vec<u32>,
    by_edge: Vec<Vec<usize>>,
}

impl Planner<'_> {
    fn add_piece(&mut self, traveler: AgentId, edges: Vec<EdgeId>) {
        let id = self.pieces.len();
        for &e in &edges {
            self.count[e as usize] += 1;
            self.by_edge[e as usize].push(id);
        }
        self.pieces.push(Piece {
            traveler,
            edges,
            alive: true,
        });
    }

    fn kill(&mut self, id: usize) {
        self.pieces[id].alive = false;
        for &e in &self.pieces[id].edges {
            self.count[e as usize] -= 1;
        }
    }

    fn seed(&self) -> Option<EdgeId> {
        let (e, &c) = self
            .count
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
        (c > 0).then_some(e as EdgeId)
    }

    fn best_extension(&self, candidates: &[EdgeId], visited: &[VertexId], forward: bool) -> Option<EdgeId> {
        candidates
            .iter()
            .copied()
            .filter(|&e| self.count[e as usize] > 0)
            .filter(|&e| {
                let next = if forward { self.network.head(e) } else { self.network.tail(e) };
                !visited.contains(&next)
            })
            .max_by(|&a, &b| self.count[a as usize].cmp(&self.count[b as usize]).then(b.cmp(&a)))
    }

    fn grow(&self, seed: EdgeId) -> Vec<EdgeId> {
        let net = self.network;
        let mut line = vec![seed];
        let mut visited = vec![net.tail(seed), net.head(seed)];
        while let Some(e) = self.best_extension(net.out_edges(net.head(*line.last().unwrap())), &visited, true) {
            visited.push(net.head(e));
            line.push(e);
        }
        let mut front = Vec::new();
        let mut first = seed;
        while let Some(e) = self.best_extension(net.in_edges(net.tail(first)), &visited, false) {
            visited.push(net.tail(e));
            front.push(e);
            first = e;
        }
        front.reverse();
        front.extend(line);
        front
    }

    /// Longest (by travel time, then by edges) run of `piece` that follows
    /// the line contiguously, as `(piece_start, line_start, len, weight)`.
    fn overlap(&self, piece: &[EdgeId], position: &HashMap<EdgeId, usize>) -> Option<(usize, usize, usize, u64)> {
        let mut best: Option<(usize, usize, usize, u64)> = None;
        let mut i = 0;
        while i < piece.len() {
            let Some(&start) = position.get(&piece[i]) else {
                i += 1;
                continue;
            };
            let mut len = 1;
            while i + len < piece.len() && position.get(&piece[i + len]) == Some(&(start + len)) {
                len += 1;
            }
            let weight: u64 = piece[i..i + len].iter().map(|&e| self.network.d(e) as u64).sum();
            if best.is_none_or(|(_, _, l, w)| (weight, len) > (w, l)) {
                best = Some((i, start, len, weight));
            }
            i += len;
        }
        best
    }

    fn admit(&mut self, edges: Vec<EdgeId>, capacity: u32) -> BusLine {
        let position: HashMap<EdgeId, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut touched: Vec<usize> = edges
            .iter()
            .flat_map(|&e| self.by_edge[e as usize].iter().copied())
            .filter(|&p| self.pieces[p].alive)
            .collect();
        touched.sort_unstable();
        touched.dedup();
        let mut candidates: Vec<(usize, usize, usize, usize, u64)> = touched
            .into_iter()
            .filter_map(|p| {
                self.overlap(&self.pieces[p].edges, &position)
                    .map(|(at, start, len, w)| (p, at, start, len, w))
            })
            .collect();
        candidates.sort_by(|a, b| (b.4, b.3).cmp(&(a.4, a.3)).then(a.0.cmp(&b.0)));

        let mut riders = vec![0u32; edges.len()];
        let mut assignments = Vec::new();
        let mut coverage_ms = 0;
        for (p, at, start, len, weight) in candidates {
            if riders[start..start + len].iter().any(|&r| r >= capacity) {
                continue;
            }
            for r in &mut riders[start..start + len] {
                *r += 1;
            }
            let traveler = self.pieces[p].traveler;
            assignments.push(Assignment {
                traveler,
                start,
                end: start + len,
            });
            coverage_ms += weight;
            self.kill(p);
            let piece = std::mem::take(&mut self.pieces[p].edges);
            let (before, rest) = piece.split_at(at);
            let after = &rest[len..];
            for part in [before, after] {
                if !part.is_empty() {
                    self.add_piece(traveler, part.to_vec());
                }
            }
        }
        let tau_ms = edges.iter().map(|&e| self.network.d(e) as u64).sum();
        BusLine {
            edges,
            tau_ms,
            assignments,
            coverage_ms,
        }
    }
}

/// Candidate lines covering every edge incidence of `paths`. Each path is
/// indexed by traveler id.
pub fn build_lines<P: AsRef<[EdgeId]>>(paths: &[P], network: &RoadNetwork, capacity: u32) -> Vec<BusLine> {
    assert!(capacity >= 1, "capacity must be positive");
    let m = network.num_edges();
    let mut planner = Planner {
        network,
        pieces: Vec::new(),
        count: vec![0; m],
        by_edge: vec![Vec::new(); m],
    };
    for (i, p) in paths.iter().enumerate() {
        if !p.as_ref().is_empty() {
            planner.add_piece(i as AgentId, p.as_ref().to_vec());
        }
    }
    let mut lines = Vec::new();
    while let Some(seed) = planner.seed() {
        let edges = planner.grow(seed);
        lines.push(planner.admit(edges, capacity));
    }
    lines
}

/// Bus operation time of a line in hours: `T * f * tau`.
pub fn bus_time_h(line: &BusLine, freq_per_min: f64, window_min: f64) -> f64 {
    window_min * freq_per_min * line.tau_ms as f64 / MS_PER_HOUR
}

/// Knapsack weight of a line: bus operation time rounded up to whole seconds.
pub fn line_weight_s(line: &BusLine, freq_per_min: f64, window_min: f64) -> u64 {
    let seconds = window_min * freq_per_min * line.tau_ms as f64 / 1e3;
    // absorb representation error such as 6.000000000000001
    let seconds = seconds - 1e-9 * seconds.max(1.0);
    seconds.ceil().max(0.0) as u64
}

/// Exact 0/1 knapsack; returns the chosen item indices in increasing order.
pub fn knapsack(weights: &[u64], values: &[u64], capacity: u64) -> Vec<usize> {
    assert_eq!(weights.len(), values.len());
    let cap = capacity as usize;
    let words = (cap + 1).div_ceil(64);
    let mut best = vec![0u64; cap + 1];
    // take[i] bit c: item i improves the optimum at budget c
    let mut take = vec![vec![0u64; words]; weights.len()];
    for (i, (&w, &v)) in weights.iter().zip(values).enumerate() {
        if w > capacity {
            continue;
        }
        let w = w as usize;
        for c in (w..=cap).rev() {
            let with = best[c - w] + v;
            if with > best[c] {
                best[c] = with;
                take[i][c / 64] |= 1 << (c % 64);
            }
        }
    }
    let mut chosen = Vec::new();
    let mut c = cap;
    for i in (0..weights.len()).rev() {
        if take[i][c / 64] >> (c % 64) & 1 == 1 {
            chosen.push(i);
            c -= weights[i] as usize;
        }
    }
    chosen.reverse();
    chosen
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinePlan {
    pub lines: Vec<BusLine>,
    pub selected: Vec<bool>,
    pub budget_h: f64,
    pub freq_per_min: f64,
    pub window_min: f64,
    pub bus_time_h: f64,
    pub coverage_ms: u64,
}

impl LinePlan {
    pub fn selected_lines(&self) -> impl Iterator<Item = &BusLine> {
        self.lines.iter().zip(&self.selected).filter(|(_, &s)| s).map(|(l, _)| l)
    }

    pub fn coverage_h(&self) -> f64 {
        self.coverage_ms as f64 / MS_PER_HOUR
    }
}

/// Chooses the candidate lines that maximize covered travel time with total
/// bus operation time at most `budget_h`, on a one-second grid.
pub fn select_lines(candidates: Vec<BusLine>, budget_h: f64, freq_per_min: f64, window_min: f64) -> crate::Result<LinePlan> {
    for (name, value) in [("budget", budget_h), ("frequency", freq_per_min), ("window", window_min)] {
        if !(value.is_finite() && value >= 0.0) {
            return Err(crate::Error::InvalidParameter(format!("{name} must be finite and non-negative, got {value}")));
        }
    }
    let mut selected = vec![false; candidates.len()];
    if budget_h > 0.0 {
        let weights: Vec<u64> = candidates
            .iter()
            .map(|l| line_weight_s(l, freq_per_min, window_min))
            .collect();
        let values: Vec<u64> = candidates.iter().map(|l| l.coverage_ms).collect();
        let capacity = (budget_h * 3600.0 + 1e-9).floor() as u64;
        for i in knapsack(&weights, &values, capacity) {
            selected[i] = true;
        }
    }
    let mut plan = LinePlan {
        lines: candidates,
        selected,
        budget_h,
        freq_per_min,
        window_min,
        bus_time_h: 0.0,
        coverage_ms: 0,
    };
    plan.bus_time_h = plan
        .selected_lines()
        .map(|l| bus_time_h(l, freq_per_min, window_min))
        .fold(0.0, |a, b| a + b);
    plan.coverage_ms = plan.selected_lines().map(|l| l.coverage_ms).sum();
    Ok(plan)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tvot {
    pub bus_time_h: f64,
    /// Feeder-only time `sum_i D(p_i)`.
    pub baseline_h: f64,
    pub coverage_h: f64,
    /// Uncovered travel time per traveler, in milliseconds.
    pub feeder_ms: Vec<u64>,
    pub tvot_h: f64,
}

/// Total vehicle operation time: bus time plus the feeder time of every
/// traveler's uncovered path remainder.
pub fn tvot<P: AsRef<[EdgeId]>>(plan: &LinePlan, paths: &[P], network: &RoadNetwork) -> Tvot {
    let mut feeder_ms: Vec<u64> = paths.iter().map(|p| network.path_length(p.as_ref())).collect();
    let baseline_ms: u64 = feeder_ms.iter().sum();
    let mut covered_ms = 0;
    for line in plan.selected_lines() {
        for a in &line.assignments {
            let ride: u64 = line.edges[a.start..a.end].iter().map(|&e| network.d(e) as u64).sum();
            feeder_ms[a.traveler as usize] -= ride;
            covered_ms += ride;
        }
    }
    let feeder_total: u64 = feeder_ms.iter().sum();
    Tvot {
        bus_time_h: plan.bus_time_h,
        baseline_h: baseline_ms as f64 / MS_PER_HOUR,
        coverage_h: covered_ms as f64 / MS_PER_HOUR,
        tvot_h: plan.bus_time_h + feeder_total as f64 / MS_PER_HOUR,
        feeder_ms,
    }
}
