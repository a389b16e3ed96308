//! Congestion-game data model for synergistic traffic assignment.
//!
//! A [`RoadNetwork`] supplies the resources (edges), a [`CostModel`] maps the
//! load of an edge to its per-agent cost, a [`DemandSet`] lists the agents and
//! a [`StrategyProfile`] assigns one path to each agent. Costs never increase
//! with load, which is what makes sharing attractive.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::{AgentId, EdgeId, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    /// Free-flow travel time in milliseconds.
    pub d_ms: u32,
}

/// Directed multigraph with free-flow travel times. Edge ids are dense and
/// parallel edges are distinct resources.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoadNetwork {
    num_vertices: usize,
    edges: Vec<Edge>,
    out_first: Vec<u32>,
    out_edges: Vec<EdgeId>,
    in_first: Vec<u32>,
    in_edges: Vec<EdgeId>,
}

fn build_adjacency(n: usize, edges: &[Edge], key: impl Fn(&Edge) -> VertexId) -> (Vec<u32>, Vec<EdgeId>) {
    let mut first = vec![0u32; n + 1];
    for e in edges {
        first[key(e) as usize + 1] += 1;
    }
    for v in 0..n {
        first[v + 1] += first[v];
    }
    let mut fill = first.clone();
    let mut list = vec![0; edges.len()];
    // edge ids ascend within each bucket
    for (id, e) in edges.iter().enumerate() {
        let slot = &mut fill[key(e) as usize];
        list[*slot as usize] = id as EdgeId;
        *slot += 1;
    }
    (first, list)
}

impl RoadNetwork {
    pub fn new(num_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        if edges.len() > u32::MAX as usize || num_vertices > u32::MAX as usize {
            return Err(Error::InvalidNetwork("too many vertices or edges".into()));
        }
        for (id, e) in edges.iter().enumerate() {
            if e.tail as usize >= num_vertices || e.head as usize >= num_vertices {
                return Err(Error::InvalidNetwork(format!(
                    "edge {id} ({} -> {}) references a vertex outside 0..{num_vertices}",
                    e.tail, e.head
                )));
            }
        }
        let (out_first, out_edges) = build_adjacency(num_vertices, &edges, |e| e.tail);
        let (in_first, in_edges) = build_adjacency(num_vertices, &edges, |e| e.head);
        Ok(Self {
            num_vertices,
            edges,
            out_first,
            out_edges,
            in_first,
            in_edges,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e as usize]
    }

    pub fn tail(&self, e: EdgeId) -> VertexId {
        self.edges[e as usize].tail
    }

    pub fn head(&self, e: EdgeId) -> VertexId {
        self.edges[e as usize].head
    }

    pub fn d(&self, e: EdgeId) -> u32 {
        self.edges[e as usize].d_ms
    }

    /// Outgoing edge ids of `v`, ascending.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        let v = v as usize;
        &self.out_edges[self.out_first[v] as usize..self.out_first[v + 1] as usize]
    }

    /// Incoming edge ids of `v`, ascending.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        let v = v as usize;
        &self.in_edges[self.in_first[v] as usize..self.in_first[v + 1] as usize]
    }

    /// Free-flow length D(p) of a path in milliseconds.
    pub fn path_length(&self, path: &[EdgeId]) -> u64 {
        path.iter().map(|&e| self.d(e) as u64).sum()
    }

    pub fn free_flow_costs(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.d_ms as f64).collect()
    }

    /// Vertices reachable from `source` along directed edges.
    pub fn reachable_from(&self, source: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices];
        let mut queue = VecDeque::new();
        seen[source as usize] = true;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for &e in self.out_edges(v) {
                let w = self.head(e);
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Checks that `path` is a simple directed walk from `origin` to `destination`.
    pub fn check_path(&self, path: &[EdgeId], origin: VertexId, destination: VertexId) -> std::result::Result<(), String> {
        if path.is_empty() {
            return Err("path is empty".into());
        }
        for &e in path {
            if e as usize >= self.edges.len() {
                return Err(format!("edge {e} does not exist"));
            }
        }
        if self.tail(path[0]) != origin {
            return Err(format!("path starts at {} instead of origin {origin}", self.tail(path[0])));
        }
        let last = *path.last().unwrap();
        if self.head(last) != destination {
            return Err(format!("path ends at {} instead of destination {destination}", self.head(last)));
        }
        let mut visited = HashSet::with_capacity(path.len() + 1);
        visited.insert(origin);
        for pair in path.windows(2) {
            if self.head(pair[0]) != self.tail(pair[1]) {
                return Err(format!("edges {} and {} are not contiguous", pair[0], pair[1]));
            }
        }
        for &e in path {
            if !visited.insert(self.head(e)) {
                return Err(format!("vertex {} is visited twice", self.head(e)));
            }
        }
        Ok(())
    }
}

/// Right-continuous step function of load: the cost at load `l` is the cost of
/// the largest breakpoint not exceeding `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTable {
    breakpoints: Vec<(u32, f64)>,
}

impl StepTable {
    pub fn new(breakpoints: Vec<(u32, f64)>) -> std::result::Result<Self, String> {
        let table = Self::unchecked(breakpoints)?;
        if let Some(load) = table.first_increase() {
            return Err(format!("cost increases at load {load}"));
        }
        Ok(table)
    }

    fn unchecked(breakpoints: Vec<(u32, f64)>) -> std::result::Result<Self, String> {
        match breakpoints.first() {
            None => return Err("no breakpoints".into()),
            Some(&(l, _)) if l != 0 => return Err("first breakpoint must be at load 0".into()),
            _ => {}
        }
        if breakpoints.iter().any(|&(_, c)| !c.is_finite()) {
            return Err("costs must be finite".into());
        }
        if breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err("breakpoint loads must be strictly increasing".into());
        }
        Ok(Self { breakpoints })
    }

    /// Builds a table whose cost may grow with load. Synergistic models reject
    /// these; they exist for avoidant contrast instances.
    #[cfg(feature = "avoidant")]
    pub fn avoidant(breakpoints: Vec<(u32, f64)>) -> std::result::Result<Self, String> {
        Self::unchecked(breakpoints)
    }

    pub fn constant(cost: f64) -> Self {
        Self {
            breakpoints: vec![(0, cost)],
        }
    }

    /// `high` for loads below `threshold`, `low` from `threshold` on.
    pub fn step(high: f64, threshold: u32, low: f64) -> Self {
        if threshold == 0 {
            return Self::constant(low);
        }
        Self {
            breakpoints: vec![(0, high), (threshold, low)],
        }
    }

    pub fn breakpoints(&self) -> &[(u32, f64)] {
        &self.breakpoints
    }

    pub fn cost(&self, load: u32) -> f64 {
        let idx = self.breakpoints.partition_point(|&(l, _)| l <= load);
        self.breakpoints[idx - 1].1
    }

    fn first_increase(&self) -> Option<u32> {
        self.breakpoints
            .windows(2)
            .find(|w| w[1].1 > w[0].1)
            .map(|w| w[1].0 - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum ModelKind {
    Step(Vec<StepTable>),
    SelfishShare { r: f64, d: Vec<f64> },
}

/// Per-edge load-to-cost functions.
#[derive(Debug, Clone, PartialEq)]
pub struct CostModel {
    kind: ModelKind,
}

impl CostModel {
    /// Step-table model; rejects any table whose cost grows with load.
    pub fn step_tables(tables: Vec<StepTable>) -> Result<Self> {
        for (e, t) in tables.iter().enumerate() {
            if let Some(load) = t.first_increase() {
                return Err(Error::NotSynergistic {
                    edge: e as EdgeId,
                    load,
                });
            }
        }
        Ok(Self {
            kind: ModelKind::Step(tables),
        })
    }

    /// Step-table model without the synergy check.
    #[cfg(feature = "avoidant")]
    pub fn avoidant_step_tables(tables: Vec<StepTable>) -> Self {
        Self {
            kind: ModelKind::Step(tables),
        }
    }

    /// `c_e(l) = r d(e) + (1 - r) d(e) / (l + 1)`.
    pub fn selfish_share(r: f64, network: &RoadNetwork) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidSelfishness(r));
        }
        Ok(Self {
            kind: ModelKind::SelfishShare {
                r,
                d: network.free_flow_costs(),
            },
        })
    }

    pub fn num_edges(&self) -> usize {
        match &self.kind {
            ModelKind::Step(t) => t.len(),
            ModelKind::SelfishShare { d, .. } => d.len(),
        }
    }

    pub fn selfishness(&self) -> Option<f64> {
        match &self.kind {
            ModelKind::SelfishShare { r, .. } => Some(*r),
            ModelKind::Step(_) => None,
        }
    }

    pub fn tables(&self) -> Option<&[StepTable]> {
        match &self.kind {
            ModelKind::Step(t) => Some(t),
            ModelKind::SelfishShare { .. } => None,
        }
    }

    pub fn check_network(&self, network: &RoadNetwork) -> Result<()> {
        if self.num_edges() != network.num_edges() {
            return Err(Error::ModelSizeMismatch {
                model: self.num_edges(),
                network: network.num_edges(),
            });
        }
        Ok(())
    }

    /// `c_e(load)`.
    #[inline]
    pub fn cost(&self, e: EdgeId, load: u32) -> f64 {
        match &self.kind {
            ModelKind::Step(t) => t[e as usize].cost(load),
            ModelKind::SelfishShare { r, d } => {
                let d = d[e as usize];
                r * d + (1.0 - r) * d / (load as f64 + 1.0)
            }
        }
    }

    /// First edge with a negative cost at some load, if any.
    pub fn find_negative_cost(&self) -> Option<(EdgeId, f64)> {
        match &self.kind {
            ModelKind::Step(tables) => tables.iter().enumerate().find_map(|(e, t)| {
                t.breakpoints
                    .iter()
                    .find(|&&(_, c)| c < 0.0)
                    .map(|&(_, c)| (e as EdgeId, c))
            }),
            ModelKind::SelfishShare { .. } => None,
        }
    }

    /// Whether no edge cost grows with load.
    pub fn is_synergistic(&self) -> bool {
        match &self.kind {
            ModelKind::Step(tables) => tables.iter().all(|t| t.first_increase().is_none()),
            ModelKind::SelfishShare { .. } => true,
        }
    }

    /// Checks `c_e(l) >= c_e(l + 1)` for `l < max_load` on every edge.
    pub fn check_synergistic(&self, max_load: u32) -> Result<()> {
        for e in 0..self.num_edges() as EdgeId {
            for l in 0..max_load {
                if self.cost(e, l) < self.cost(e, l + 1) {
                    return Err(Error::NotSynergistic { edge: e, load: l });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Agent {
    pub origin: VertexId,
    pub destination: VertexId,
}

/// Agents with their O-D pairs, partitioned into groups of identical pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandSet {
    agents: Vec<Agent>,
    groups: Vec<Vec<AgentId>>,
    group_of: Vec<u32>,
}

impl DemandSet {
    /// Validates that origins differ from destinations and that every
    /// destination is reachable.
    pub fn new(network: &RoadNetwork, agents: Vec<Agent>) -> Result<Self> {
        let n = network.num_vertices() as VertexId;
        let mut reach: HashMap<VertexId, Vec<bool>> = HashMap::new();
        for (i, a) in agents.iter().enumerate() {
            if a.origin >= n || a.destination >= n {
                return Err(Error::InvalidDemand(format!(
                    "agent {i}: pair ({}, {}) references a vertex outside 0..{n}",
                    a.origin, a.destination
                )));
            }
            if a.origin == a.destination {
                return Err(Error::InvalidDemand(format!(
                    "agent {i}: origin equals destination ({})",
                    a.origin
                )));
            }
            let seen = reach
                .entry(a.origin)
                .or_insert_with(|| network.reachable_from(a.origin));
            if !seen[a.destination as usize] {
                return Err(Error::InvalidDemand(format!(
                    "agent {i}: destination {} unreachable from origin {}",
                    a.destination, a.origin
                )));
            }
        }
        let mut index: HashMap<Agent, u32> = HashMap::new();
        let mut groups: Vec<Vec<AgentId>> = Vec::new();
        let mut group_of = Vec::with_capacity(agents.len());
        for (i, a) in agents.iter().enumerate() {
            let g = *index.entry(*a).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() as u32 - 1
            });
            groups[g as usize].push(i as AgentId);
            group_of.push(g);
        }
        Ok(Self {
            agents,
            groups,
            group_of,
        })
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent(&self, i: AgentId) -> Agent {
        self.agents[i as usize]
    }

    /// Groups of agents sharing an O-D pair, ordered by smallest member id.
    pub fn groups(&self) -> &[Vec<AgentId>] {
        &self.groups
    }

    pub fn group_of(&self, i: AgentId) -> usize {
        self.group_of[i as usize] as usize
    }
}

/// A path as an ordered edge sequence. Cloning shares the allocation.
pub type Path = Arc<[EdgeId]>;

/// One path per agent, indexed by agent id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StrategyProfile {
    paths: Vec<Path>,
}

impl StrategyProfile {
    pub fn new(paths: Vec<Path>) -> Self {
        Self { paths }
    }

    pub fn from_vecs(paths: Vec<Vec<EdgeId>>) -> Self {
        Self {
            paths: paths.into_iter().map(Path::from).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn path(&self, agent: AgentId) -> &[EdgeId] {
        &self.paths[agent as usize]
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn set_path(&mut self, agent: AgentId, path: Path) {
        self.paths[agent as usize] = path;
    }

    /// Checks every path against its agent's O-D pair.
    pub fn validate(&self, network: &RoadNetwork, demand: &DemandSet) -> Result<()> {
        if self.paths.len() != demand.len() {
            return Err(Error::InvalidDemand(format!(
                "profile has {} paths for {} agents",
                self.paths.len(),
                demand.len()
            )));
        }
        for (i, p) in self.paths.iter().enumerate() {
            let a = demand.agent(i as AgentId);
            network
                .check_path(p, a.origin, a.destination)
                .map_err(|reason| Error::InvalidPath {
                    agent: i as AgentId,
                    reason,
                })?;
        }
        Ok(())
    }
}

/// Number of agents on each edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoadVector(Vec<u32>);

impl LoadVector {
    pub fn zeros(num_edges: usize) -> Self {
        Self(vec![0; num_edges])
    }

    pub fn from_vec(loads: Vec<u32>) -> Self {
        Self(loads)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn get(&self, e: EdgeId) -> u32 {
        self.0[e as usize]
    }

    pub fn add_path(&mut self, path: &[EdgeId]) {
        for &e in path {
            self.0[e as usize] += 1;
        }
    }

    pub fn remove_path(&mut self, path: &[EdgeId]) {
        for &e in path {
            self.0[e as usize] -= 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&l| l as u64).sum()
    }
}

impl std::ops::Deref for LoadVector {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

/// Loads induced by a profile. Paths must be contiguous edge sequences.
pub fn compute_loads(profile: &StrategyProfile, network: &RoadNetwork) -> Result<LoadVector> {
    let mut loads = LoadVector::zeros(network.num_edges());
    for (i, p) in profile.paths().iter().enumerate() {
        let invalid = |reason: String| Error::InvalidPath {
            agent: i as AgentId,
            reason,
        };
        if p.is_empty() {
            return Err(invalid("path is empty".into()));
        }
        if let Some(&e) = p.iter().find(|&&e| e as usize >= network.num_edges()) {
            return Err(invalid(format!("edge {e} does not exist")));
        }
        if let Some(w) = p.windows(2).find(|w| network.head(w[0]) != network.tail(w[1])) {
            return Err(invalid(format!("edges {} and {} are not contiguous", w[0], w[1])));
        }
        loads.add_path(p);
    }
    Ok(loads)
}

/// How an agent values a candidate path.
#[derive(Debug, Clone, Copy)]
pub enum PathCostMode<'a> {
    /// Current loads, ignoring the agent's own move.
    Blind,
    /// Loads after the agent moves from `current` to the candidate.
    Aware { current: &'a [EdgeId] },
    /// Loads after a whole group of `group_size` agents moves from the shared
    /// path `current` to the candidate.
    GroupAware { group_size: u32, current: &'a [EdgeId] },
}

pub fn path_cost(path: &[EdgeId], loads: &LoadVector, model: &CostModel, mode: PathCostMode<'_>) -> f64 {
    match mode {
        PathCostMode::Blind => path.iter().map(|&e| model.cost(e, loads.get(e))).sum(),
        PathCostMode::Aware { current } => {
            let on: HashSet<EdgeId> = current.iter().copied().collect();
            path.iter()
                .map(|&e| {
                    let l = loads.get(e);
                    model.cost(e, if on.contains(&e) { l } else { l + 1 })
                })
                .sum()
        }
        PathCostMode::GroupAware { group_size, current } => {
            let on: HashSet<EdgeId> = current.iter().copied().collect();
            path.iter()
                .map(|&e| {
                    let l = loads.get(e);
                    let rest = if on.contains(&e) { l - group_size } else { l };
                    model.cost(e, rest + group_size)
                })
                .sum()
        }
    }
}

/// Edge potential `sum_{l=0}^{load} c_e(l)`.
pub fn edge_potential(model: &CostModel, e: EdgeId, load: u32) -> f64 {
    (0..=load).map(|l| model.cost(e, l)).sum()
}

/// Rosenthal potential: sum over edges of the edge potential, including the
/// `l = 0` term.
pub fn potential(loads: &LoadVector, model: &CostModel) -> f64 {
    loads
        .iter()
        .enumerate()
        .map(|(e, &l)| edge_potential(model, e as EdgeId, l))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnticipatedDecrease {
    pub total: f64,
    /// `c_e(l_e(S)) * (l_e(S) - l_e(S'))` for every edge.
    pub per_edge: Vec<f64>,
}

/// Cost decrease anticipated by the agents who moved from `before` to `after`,
/// attributed to edges at the pre-move costs.
pub fn anticipated_decrease(before: &LoadVector, after: &LoadVector, model: &CostModel) -> AnticipatedDecrease {
    let per_edge: Vec<f64> = before
        .iter()
        .zip(after.iter())
        .enumerate()
        .map(|(e, (&b, &a))| {
            if a == b {
                0.0
            } else {
                model.cost(e as EdgeId, b) * (b as f64 - a as f64)
            }
        })
        .collect();
    AnticipatedDecrease {
        total: per_edge.iter().sum(),
        per_edge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: u32) -> RoadNetwork {
        let edges = (0..n - 1)
            .map(|v| Edge {
                tail: v,
                head: v + 1,
                d_ms: 10,
            })
            .collect();
        RoadNetwork::new(n as usize, edges).unwrap()
    }

    #[test]
    fn step_table_lookup() {
        let t = StepTable::new(vec![(0, 5.0), (3, 1.0)]).unwrap();
        assert_eq!(t.cost(0), 5.0);
        assert_eq!(t.cost(2), 5.0);
        assert_eq!(t.cost(3), 1.0);
        assert_eq!(t.cost(100), 1.0);
        assert!(StepTable::new(vec![(0, 1.0), (2, 3.0)]).is_err());
        assert!(StepTable::new(vec![(1, 1.0)]).is_err());
        assert!(StepTable::new(vec![(0, 1.0), (0, 0.0)]).is_err());
        assert!(StepTable::new(vec![(0, f64::NAN)]).is_err());
    }

    #[test]
    fn selfish_share_values() {
        let net = RoadNetwork::new(2, vec![Edge { tail: 0, head: 1, d_ms: 10 }]).unwrap();
        assert_eq!(CostModel::selfish_share(1.0, &net).unwrap().cost(0, 7), 10.0);
        assert_eq!(CostModel::selfish_share(0.0, &net).unwrap().cost(0, 1), 5.0);
        assert!(CostModel::selfish_share(1.5, &net).is_err());
        assert!(CostModel::selfish_share(0.3, &net).unwrap().check_synergistic(50).is_ok());
    }

    #[test]
    fn fig2_bold_edge_is_free_when_shared() {
        let bold = StepTable::step(1.0, 2, 0.0);
        assert_eq!(bold.cost(1), 1.0);
        assert_eq!(bold.cost(2), 0.0);
    }

    #[test]
    fn loads_count_paths() {
        let net = line(3);
        assert_eq!(compute_loads(&StrategyProfile::default(), &net).unwrap().as_slice(), &[0, 0]);
        let prof = StrategyProfile::from_vecs(vec![vec![0], vec![0]]);
        assert_eq!(compute_loads(&prof, &net).unwrap().as_slice(), &[2, 0]);
        let bad = StrategyProfile::from_vecs(vec![vec![0, 1], vec![1, 0]]);
        match compute_loads(&bad, &net) {
            Err(Error::InvalidPath { agent, .. }) => assert_eq!(agent, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn profile_validation_names_agent() {
        let net = line(4);
        let demand = DemandSet::new(
            &net,
            vec![
                Agent { origin: 0, destination: 2 },
                Agent { origin: 1, destination: 3 },
            ],
        )
        .unwrap();
        let ok = StrategyProfile::from_vecs(vec![vec![0, 1], vec![1, 2]]);
        ok.validate(&net, &demand).unwrap();
        let wrong_end = StrategyProfile::from_vecs(vec![vec![0, 1], vec![1]]);
        assert!(matches!(
            wrong_end.validate(&net, &demand),
            Err(Error::InvalidPath { agent: 1, .. })
        ));
    }

    #[test]
    fn demand_rejects_bad_pairs() {
        let net = line(3);
        assert!(DemandSet::new(&net, vec![Agent { origin: 1, destination: 1 }]).is_err());
        assert!(DemandSet::new(&net, vec![Agent { origin: 2, destination: 0 }]).is_err());
        let d = DemandSet::new(
            &net,
            vec![
                Agent { origin: 0, destination: 2 },
                Agent { origin: 1, destination: 2 },
                Agent { origin: 0, destination: 2 },
            ],
        )
        .unwrap();
        assert_eq!(d.groups(), &[vec![0, 2], vec![1]]);
        assert_eq!(d.group_of(2), 0);
    }

    #[test]
    fn path_cost_modes() {
        // edges 0: a->b, 1: b->c, 2: a->c
        let model = CostModel::step_tables(vec![
            StepTable::step(4.0, 2, 1.0),
            StepTable::step(4.0, 3, 0.0),
            StepTable::constant(6.0),
        ])
        .unwrap();
        let loads = LoadVector::from_vec(vec![1, 1, 1]);
        assert_eq!(path_cost(&[0, 1], &loads, &model, PathCostMode::Blind), 8.0);
        assert_eq!(
            path_cost(&[0, 1], &loads, &model, PathCostMode::Aware { current: &[2] }),
            5.0
        );
        assert_eq!(
            path_cost(&[0, 1], &loads, &model, PathCostMode::Aware { current: &[0, 1] }),
            8.0
        );
        let loads = LoadVector::from_vec(vec![0, 0, 2]);
        assert_eq!(
            path_cost(
                &[0, 1],
                &loads,
                &model,
                PathCostMode::GroupAware { group_size: 2, current: &[2] }
            ),
            5.0
        );
    }

    #[test]
    fn potential_includes_zero_term() {
        let net = RoadNetwork::new(2, vec![Edge { tail: 0, head: 1, d_ms: 1 }]).unwrap();
        let _ = net;
        let constant = CostModel::step_tables(vec![StepTable::constant(1.0)]).unwrap();
        assert_eq!(potential(&LoadVector::zeros(1), &constant), 1.0);
        let step = CostModel::step_tables(vec![StepTable::step(1.0, 2, 0.0)]).unwrap();
        assert_eq!(potential(&LoadVector::from_vec(vec![2]), &step), 2.0);
    }

    #[test]
    fn anticipated_decrease_examples() {
        let model = CostModel::step_tables(vec![StepTable::constant(4.0), StepTable::constant(3.0)]).unwrap();
        let a = LoadVector::from_vec(vec![1, 2]);
        let same = anticipated_decrease(&a, &a, &model);
        assert_eq!(same.total, 0.0);
        assert!(same.per_edge.iter().all(|&x| x == 0.0));
        let b = LoadVector::from_vec(vec![0, 2]);
        let dec = anticipated_decrease(&a, &b, &model);
        assert_eq!(dec.per_edge, vec![4.0, 0.0]);
        assert_eq!(dec.total, 4.0);
    }

    #[test]
    fn non_synergistic_tables_rejected() {
        let t = StepTable::new(vec![(0, 1.0)]).unwrap();
        assert!(CostModel::step_tables(vec![t]).is_ok());
        #[cfg(feature = "avoidant")]
        {
            let up = StepTable::avoidant(vec![(0, 0.0), (1, 1.0)]).unwrap();
            assert!(matches!(
                CostModel::step_tables(vec![up]),
                Err(Error::NotSynergistic { edge: 0, load: 0 })
            ));
        }
    }
}
