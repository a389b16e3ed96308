//! Best-response dynamics.
//!
//! Every variant starts from the profile in which each agent takes its
//! cheapest path as if it were alone, then repeats rounds of best response
//! until a round changes nothing, a profile repeats, or the round limit is
//! reached. An agent (or group) only switches on a strict improvement of its
//! anticipated cost, so a round without switches leaves the loads unchanged.
//!
//! Simultaneous impact-blind rounds share one metric, so they customize the
//! contraction hierarchy once and answer all queries against it. The other
//! variants need per-agent or per-step metrics and use Dijkstra.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{anticipated_decrease, compute_loads, potential, CostModel, DemandSet, LoadVector, Path, RoadNetwork, StrategyProfile};
use crate::routing::{Dijkstra, MetricIndependentIndex, QueryState};
use crate::{AgentId, EdgeId};

/// Relative slack below which a cheaper alternative does not count as an
/// improvement. Integer-cost instances are unaffected.
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-9;

/// Instances with more agents than this get no per-agent costs in the trace.
const TRACE_AGENT_LIMIT: usize = 64;

pub fn improves(candidate: f64, current: f64) -> bool {
    candidate < current - IMPROVEMENT_TOLERANCE * current.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    SequentialAware,
    SimultaneousAware,
    SequentialBlind,
    SimultaneousBlind,
    /// Every group answers the round-start profile, accounting for its own
    /// members moving together.
    GroupSimultaneous,
    /// Groups answer one after another in order of their smallest member.
    GroupSequential,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::SequentialAware,
        Variant::SimultaneousAware,
        Variant::SequentialBlind,
        Variant::SimultaneousBlind,
        Variant::GroupSimultaneous,
        Variant::GroupSequential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::SequentialAware => "seq-aware",
            Variant::SimultaneousAware => "sim-aware",
            Variant::SequentialBlind => "seq-blind",
            Variant::SimultaneousBlind => "sim-blind",
            Variant::GroupSimultaneous => "group-sim",
            Variant::GroupSequential => "group-seq",
        }
    }

    pub fn is_blind(self) -> bool {
        matches!(self, Variant::SequentialBlind | Variant::SimultaneousBlind)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown variant {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DynamicsConfig {
    pub variant: Variant,
    pub max_rounds: usize,
    pub record_trace: bool,
    /// Query workers for simultaneous blind rounds; 0 uses the global pool.
    pub threads: usize,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            variant: Variant::SimultaneousBlind,
            max_rounds: 1000,
            record_trace: true,
            threads: 0,
        }
    }
}

impl DynamicsConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Iterations run, counting the initial routing and the final round
    /// without changes.
    Converged { rounds: usize },
    /// The profile after `first_repeat_round` equals the one `period` rounds
    /// earlier.
    Cycle { period: usize, first_repeat_round: usize },
    RoundLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundReport {
    /// 0 is the initial routing.
    pub round: usize,
    pub profile_hash: u64,
    pub load_hash: u64,
    pub phi_before: f64,
    pub phi: f64,
    /// Anticipated decrease of the round, `sum_e c_e(l_e(S)) (l_e(S) - l_e(S'))`
    /// for simultaneous rounds and the sum of per-step values for sequential ones.
    pub delta: f64,
    pub switches: usize,
    /// Actual per-agent costs after the round (small instances only).
    pub agent_costs: Option<Vec<f64>>,
    pub customize_ms: f64,
    pub query_ms: f64,
}

#[derive(Debug, Clone)]
pub struct DynamicsResult {
    pub outcome: Outcome,
    pub profile: StrategyProfile,
    pub loads: LoadVector,
    pub trace: Vec<RoundReport>,
}

/// Cost semantics an agent uses to value alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseMode {
    Blind,
    Aware,
    /// Aware of the whole O-D group moving along.
    GroupAware,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Response {
    pub path: Path,
    pub anticipated_cost: f64,
    pub current_cost: f64,
    pub switched: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub agent: AgentId,
    pub current_cost: f64,
    pub better_cost: f64,
    pub path: Path,
}

pub fn profile_hash(profile: &StrategyProfile) -> u64 {
    let mut h = DefaultHasher::new();
    for p in profile.paths() {
        p.hash(&mut h);
    }
    h.finish()
}

pub fn load_hash(loads: &LoadVector) -> u64 {
    let mut h = DefaultHasher::new();
    loads.as_slice().hash(&mut h);
    h.finish()
}

/// Per-agent cost `sum c_e(l_e)` of each agent's own path.
pub fn agent_costs(profile: &StrategyProfile, loads: &LoadVector, model: &CostModel) -> Vec<f64> {
    profile
        .paths()
        .iter()
        .map(|p| p.iter().map(|&e| model.cost(e, loads.get(e))).sum())
        .collect()
}

fn sum_over(path: &[EdgeId], metric: &[f64]) -> f64 {
    path.iter().map(|&e| metric[e as usize]).sum()
}

fn check_model(network: &RoadNetwork, model: &CostModel) -> Result<()> {
    model.check_network(network)?;
    if let Some((edge, cost)) = model.find_negative_cost() {
        return Err(Error::BadEdgeCost { edge, cost });
    }
    Ok(())
}

/// Metric seen by `group_size` agents joining: `c_e(l_e - on_e + group_size)`
/// where `on_e` counts how many of them already use `e` (given by `current`).
fn joining_metric(model: &CostModel, loads: &LoadVector, group_size: u32, current: &[&[EdgeId]]) -> Vec<f64> {
    let mut metric: Vec<f64> = loads
        .iter()
        .enumerate()
        .map(|(e, &l)| model.cost(e as EdgeId, l + group_size))
        .collect();
    let mut on: HashMap<EdgeId, u32> = HashMap::new();
    for p in current {
        for &e in p.iter() {
            *on.entry(e).or_default() += 1;
        }
    }
    for (e, n) in on {
        metric[e as usize] = model.cost(e, loads.get(e) - n + group_size);
    }
    metric
}

/// Best response of one agent against `profile` under `mode`, via Dijkstra.
/// Returns the agent's current path unless the best alternative is strictly
/// cheaper.
pub fn best_response(
    network: &RoadNetwork,
    demand: &DemandSet,
    agent: AgentId,
    profile: &StrategyProfile,
    loads: &LoadVector,
    model: &CostModel,
    mode: ResponseMode,
) -> Result<Response> {
    check_model(network, model)?;
    let a = demand.agent(agent);
    let current = profile.path(agent);
    let metric = match mode {
        ResponseMode::Blind => loads.iter().enumerate().map(|(e, &l)| model.cost(e as EdgeId, l)).collect(),
        ResponseMode::Aware => joining_metric(model, loads, 1, &[current]),
        ResponseMode::GroupAware => {
            let members = &demand.groups()[demand.group_of(agent)];
            let paths: Vec<&[EdgeId]> = members.iter().map(|&m| profile.path(m)).collect();
            joining_metric(model, loads, members.len() as u32, &paths)
        }
    };
    let (path, _) = Dijkstra::new(network).query(&metric, a.origin, a.destination)?;
    let anticipated = sum_over(&path, &metric);
    let current_cost = sum_over(current, &metric);
    Ok(if improves(anticipated, current_cost) {
        Response {
            path: path.into(),
            anticipated_cost: anticipated,
            current_cost,
            switched: true,
        }
    } else {
        Response {
            path: Path::from(current),
            anticipated_cost: current_cost,
            current_cost,
            switched: false,
        }
    })
}

/// First agent with a strictly cheaper alternative under `mode`, or `None`
/// if `profile` is an equilibrium. `GroupAware` is treated like `Aware`.
pub fn is_equilibrium(
    network: &RoadNetwork,
    demand: &DemandSet,
    profile: &StrategyProfile,
    model: &CostModel,
    mode: ResponseMode,
) -> Result<Option<Deviation>> {
    check_model(network, model)?;
    profile.validate(network, demand)?;
    let loads = compute_loads(profile, network)?;
    let mut dijkstra = Dijkstra::new(network);
    let blind: Vec<f64> = loads.iter().enumerate().map(|(e, &l)| model.cost(e as EdgeId, l)).collect();
    for i in 0..demand.len() as AgentId {
        let a = demand.agent(i);
        let current = profile.path(i);
        let metric = match mode {
            ResponseMode::Blind => blind.clone(),
            ResponseMode::Aware | ResponseMode::GroupAware => joining_metric(model, &loads, 1, &[current]),
        };
        let (path, _) = dijkstra.query(&metric, a.origin, a.destination)?;
        let better = sum_over(&path, &metric);
        let current_cost = sum_over(current, &metric);
        if improves(better, current_cost) {
            return Ok(Some(Deviation {
                agent: i,
                current_cost,
                better_cost: better,
                path: path.into(),
            }));
        }
    }
    Ok(None)
}

struct RoundOutput {
    profile: StrategyProfile,
    loads: LoadVector,
    switches: usize,
    /// sum of per-step anticipated decreases (sequential blind only)
    step_delta: Option<f64>,
    customize_ms: f64,
    query_ms: f64,
}

/// Runs best-response dynamics on one instance. Holds the contraction
/// hierarchy so that it is preprocessed once.
pub struct Engine<'a> {
    network: &'a RoadNetwork,
    demand: &'a DemandSet,
    model: &'a CostModel,
    config: DynamicsConfig,
    index: Option<MetricIndependentIndex>,
    pool: Option<rayon::ThreadPool>,
}

impl<'a> Engine<'a> {
    pub fn new(network: &'a RoadNetwork, demand: &'a DemandSet, model: &'a CostModel, config: DynamicsConfig) -> Result<Self> {
        if config.max_rounds == 0 {
            return Err(Error::InvalidParameter("max_rounds must be at least 1".into()));
        }
        check_model(network, model)?;
        let index = (config.variant == Variant::SimultaneousBlind).then(|| MetricIndependentIndex::new(network));
        let pool = if config.threads > 0 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(config.threads)
                    .build()
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?,
            )
        } else {
            None
        };
        Ok(Self {
            network,
            demand,
            model,
            config,
            index,
            pool,
        })
    }

    pub fn config(&self) -> &DynamicsConfig {
        &self.config
    }

    fn blind_metric(&self, loads: &LoadVector) -> Vec<f64> {
        loads
            .iter()
            .enumerate()
            .map(|(e, &l)| self.model.cost(e as EdgeId, l))
            .collect()
    }

    /// One query per O-D group against a single metric.
    fn route_groups(&self, metric: &[f64]) -> Result<(Vec<Path>, f64, f64)> {
        let groups = self.demand.groups();
        match &self.index {
            Some(index) => {
                let t0 = Instant::now();
                let customized = index.customize(metric)?;
                let customize_ms = t0.elapsed().as_secs_f64() * 1e3;
                let t1 = Instant::now();
                let n = self.network.num_vertices();
                let run = || {
                    groups
                        .par_iter()
                        .map_init(
                            || QueryState::new(n),
                            |state, members| {
                                let a = self.demand.agent(members[0]);
                                customized
                                    .query_with(state, a.origin, a.destination)
                                    .map(|(p, _)| Path::from(p))
                            },
                        )
                        .collect::<Result<Vec<_>>>()
                };
                let paths = match &self.pool {
                    Some(pool) => pool.install(run),
                    None => run(),
                }?;
                Ok((paths, customize_ms, t1.elapsed().as_secs_f64() * 1e3))
            }
            None => {
                let t1 = Instant::now();
                let mut dijkstra = Dijkstra::new(self.network);
                let paths = groups
                    .iter()
                    .map(|members| {
                        let a = self.demand.agent(members[0]);
                        dijkstra.query(metric, a.origin, a.destination).map(|(p, _)| Path::from(p))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((paths, 0.0, t1.elapsed().as_secs_f64() * 1e3))
            }
        }
    }

    /// Every agent on its cheapest path as if no other agent existed.
    pub fn initial_profile(&self) -> Result<(StrategyProfile, f64, f64)> {
        let alone: Vec<f64> = (0..self.network.num_edges() as EdgeId)
            .map(|e| self.model.cost(e, 1))
            .collect();
        let (group_paths, customize_ms, query_ms) = self.route_groups(&alone)?;
        let mut paths = vec![Path::from(Vec::new()); self.demand.len()];
        for (members, p) in self.demand.groups().iter().zip(group_paths) {
            for &m in members {
                paths[m as usize] = p.clone();
            }
        }
        Ok((StrategyProfile::new(paths), customize_ms, query_ms))
    }

    fn simultaneous_blind(&self, profile: &StrategyProfile, loads: &LoadVector) -> Result<RoundOutput> {
        let metric = self.blind_metric(loads);
        let (best, customize_ms, query_ms) = self.route_groups(&metric)?;
        let mut next = profile.clone();
        let mut new_loads = loads.clone();
        let mut switches = 0;
        for (members, candidate) in self.demand.groups().iter().zip(best) {
            let candidate_cost = sum_over(&candidate, &metric);
            for &m in members {
                let current = profile.path(m);
                if improves(candidate_cost, sum_over(current, &metric)) {
                    new_loads.remove_path(current);
                    new_loads.add_path(&candidate);
                    next.set_path(m, candidate.clone());
                    switches += 1;
                }
            }
        }
        Ok(RoundOutput {
            profile: next,
            loads: new_loads,
            switches,
            step_delta: None,
            customize_ms,
            query_ms,
        })
    }

    fn sequential_blind(&self, profile: &StrategyProfile, loads: &LoadVector) -> Result<RoundOutput> {
        let t0 = Instant::now();
        let mut metric = self.blind_metric(loads);
        let mut next = profile.clone();
        let mut loads = loads.clone();
        let mut dijkstra = Dijkstra::new(self.network);
        let mut switches = 0;
        let mut delta = 0.0;
        for i in 0..self.demand.len() as AgentId {
            let a = self.demand.agent(i);
            let (path, _) = dijkstra.query(&metric, a.origin, a.destination)?;
            let candidate = sum_over(&path, &metric);
            let current_path = next.path(i).to_vec();
            let current = sum_over(&current_path, &metric);
            if improves(candidate, current) {
                delta += current - candidate;
                loads.remove_path(&current_path);
                loads.add_path(&path);
                for &e in current_path.iter().chain(&path) {
                    metric[e as usize] = self.model.cost(e, loads.get(e));
                }
                next.set_path(i, path.into());
                switches += 1;
            }
        }
        Ok(RoundOutput {
            profile: next,
            loads,
            switches,
            step_delta: Some(delta),
            customize_ms: 0.0,
            query_ms: t0.elapsed().as_secs_f64() * 1e3,
        })
    }

    /// Impact-aware rounds; `sequential` refreshes loads after each switch.
    fn aware(&self, profile: &StrategyProfile, loads: &LoadVector, sequential: bool) -> Result<RoundOutput> {
        let t0 = Instant::now();
        let start_loads = loads;
        let mut loads = loads.clone();
        // base metric c_e(l_e + 1), corrected on the agent's own edges
        let mut join: Vec<f64> = loads
            .iter()
            .enumerate()
            .map(|(e, &l)| self.model.cost(e as EdgeId, l + 1))
            .collect();
        let mut next = profile.clone();
        let mut dijkstra = Dijkstra::new(self.network);
        let mut switches = 0;
        for i in 0..self.demand.len() as AgentId {
            let a = self.demand.agent(i);
            let view = if sequential { &loads } else { start_loads };
            let current_path: Vec<EdgeId> = if sequential { next.path(i).to_vec() } else { profile.path(i).to_vec() };
            for &e in &current_path {
                join[e as usize] = self.model.cost(e, view.get(e));
            }
            let (path, _) = dijkstra.query(&join, a.origin, a.destination)?;
            let candidate = sum_over(&path, &join);
            let current = sum_over(&current_path, &join);
            for &e in &current_path {
                join[e as usize] = self.model.cost(e, view.get(e) + 1);
            }
            if improves(candidate, current) {
                if sequential {
                    loads.remove_path(&current_path);
                    loads.add_path(&path);
                    for &e in current_path.iter().chain(&path) {
                        join[e as usize] = self.model.cost(e, loads.get(e) + 1);
                    }
                }
                next.set_path(i, path.into());
                switches += 1;
            }
        }
        let loads = if sequential { loads } else { compute_loads(&next, self.network)? };
        Ok(RoundOutput {
            profile: next,
            loads,
            switches,
            step_delta: None,
            customize_ms: 0.0,
            query_ms: t0.elapsed().as_secs_f64() * 1e3,
        })
    }

    /// Group-aware rounds; `sequential` refreshes loads after each group.
    fn grouped(&self, profile: &StrategyProfile, loads: &LoadVector, sequential: bool) -> Result<RoundOutput> {
        let t0 = Instant::now();
        let mut loads_now = loads.clone();
        let mut next = profile.clone();
        let mut dijkstra = Dijkstra::new(self.network);
        let mut switches = 0;
        for members in self.demand.groups() {
            let a = self.demand.agent(members[0]);
            let (view, basis) = if sequential { (&loads_now, &next) } else { (loads, profile) };
            let current: Vec<&[EdgeId]> = members.iter().map(|&m| basis.path(m)).collect();
            let metric = joining_metric(self.model, view, members.len() as u32, &current);
            let (path, _) = dijkstra.query(&metric, a.origin, a.destination)?;
            let candidate = sum_over(&path, &metric);
            let shared = current.windows(2).all(|w| w[0] == w[1]);
            if shared && !improves(candidate, sum_over(current[0], &metric)) {
                continue;
            }
            let path = Path::from(path);
            let old: Vec<Vec<EdgeId>> = current.iter().map(|p| p.to_vec()).collect();
            for (&m, old_path) in members.iter().zip(&old) {
                if old_path[..] != path[..] {
                    if sequential {
                        loads_now.remove_path(old_path);
                        loads_now.add_path(&path);
                    }
                    next.set_path(m, path.clone());
                    switches += 1;
                }
            }
        }
        let loads = if sequential { loads_now } else { compute_loads(&next, self.network)? };
        Ok(RoundOutput {
            profile: next,
            loads,
            switches,
            step_delta: None,
            customize_ms: 0.0,
            query_ms: t0.elapsed().as_secs_f64() * 1e3,
        })
    }

    fn round(&self, profile: &StrategyProfile, loads: &LoadVector) -> Result<RoundOutput> {
        match self.config.variant {
            Variant::SimultaneousBlind => self.simultaneous_blind(profile, loads),
            Variant::SequentialBlind => self.sequential_blind(profile, loads),
            Variant::SequentialAware => self.aware(profile, loads, true),
            Variant::SimultaneousAware => self.aware(profile, loads, false),
            Variant::GroupSimultaneous => self.grouped(profile, loads, false),
            Variant::GroupSequential => self.grouped(profile, loads, true),
        }
    }

    fn report(&self, round: usize, out: &RoundOutput, before: &LoadVector, phi_before: f64) -> RoundReport {
        let delta = anticipated_decrease(before, &out.loads, self.model).total;
        let agent_costs = (self.config.record_trace && self.demand.len() <= TRACE_AGENT_LIMIT)
            .then(|| agent_costs(&out.profile, &out.loads, self.model));
        RoundReport {
            round,
            profile_hash: profile_hash(&out.profile),
            load_hash: load_hash(&out.loads),
            phi_before,
            phi: potential(&out.loads, self.model),
            delta,
            switches: out.switches,
            agent_costs,
            customize_ms: out.customize_ms,
            query_ms: out.query_ms,
        }
    }

    /// One round of best response from `profile`, with runtime checks of the
    /// potential-based invariants.
    pub fn run_round(&self, round: usize, profile: &StrategyProfile, loads: &LoadVector) -> Result<(StrategyProfile, LoadVector, RoundReport)> {
        let phi_before = potential(loads, self.model);
        let out = self.round(profile, loads)?;
        let report = self.report(round, &out, loads, phi_before);
        self.check_round(&report, out.step_delta, loads, &out.loads)?;
        Ok((out.profile, out.loads, report))
    }

    fn check_round(&self, r: &RoundReport, step_delta: Option<f64>, before: &LoadVector, after: &LoadVector) -> Result<()> {
        let violation = |detail: String| Err(Error::InvariantViolation { round: r.round, detail });
        let unchanged = before == after;
        if r.switches == 0 && !unchanged {
            return violation("loads changed in a round without switches".into());
        }
        let strict = self.config.variant.is_blind() || self.config.variant == Variant::SequentialAware;
        // potential arguments need non-increasing costs
        if !strict || r.switches == 0 || !self.model.is_synergistic() {
            return Ok(());
        }
        if unchanged {
            return violation(format!("{} switches left the loads unchanged", r.switches));
        }
        let slack = IMPROVEMENT_TOLERANCE * r.phi_before.abs().max(1.0);
        if r.phi >= r.phi_before {
            return violation(format!("potential did not decrease: {} -> {}", r.phi_before, r.phi));
        }
        if self.config.variant.is_blind() {
            // sequential rounds are bounded by the sum of their single steps
            let bound = step_delta.unwrap_or(r.delta);
            if bound <= 0.0 {
                return violation(format!("anticipated decrease {bound} is not positive"));
            }
            let drop = r.phi_before - r.phi;
            if drop < bound.max(r.delta) - slack {
                return violation(format!(
                    "potential drop {drop} is below the anticipated decrease {}",
                    bound.max(r.delta)
                ));
            }
        }
        Ok(())
    }

    pub fn run(&self) -> Result<DynamicsResult> {
        let (mut profile, customize_ms, query_ms) = self.initial_profile()?;
        let mut loads = compute_loads(&profile, self.network)?;
        let zero = LoadVector::zeros(self.network.num_edges());
        let initial = RoundOutput {
            profile: profile.clone(),
            loads: loads.clone(),
            switches: self.demand.len(),
            step_delta: None,
            customize_ms,
            query_ms,
        };
        let mut first = self.report(0, &initial, &zero, potential(&zero, self.model));
        first.delta = 0.0;
        let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
        seen.entry(first.profile_hash).or_default().push(0);
        let mut history = vec![profile.clone()];
        let mut trace = Vec::new();
        if self.config.record_trace {
            trace.push(first);
        }

        for round in 1..=self.config.max_rounds {
            let (next, next_loads, report) = self.run_round(round, &profile, &loads)?;
            let switches = report.switches;
            let hash = report.profile_hash;
            if self.config.record_trace {
                trace.push(report);
            }
            profile = next;
            loads = next_loads;
            if switches == 0 {
                return Ok(DynamicsResult {
                    outcome: Outcome::Converged { rounds: round + 1 },
                    profile,
                    loads,
                    trace,
                });
            }
            let earlier = seen
                .get(&hash)
                .and_then(|rounds| rounds.iter().copied().find(|&r| history[r] == profile));
            if let Some(r) = earlier {
                return Ok(DynamicsResult {
                    outcome: Outcome::Cycle {
                        period: round - r,
                        first_repeat_round: round,
                    },
                    profile,
                    loads,
                    trace,
                });
            }
            seen.entry(hash).or_default().push(round);
            history.push(profile.clone());
        }
        Ok(DynamicsResult {
            outcome: Outcome::RoundLimit,
            profile,
            loads,
            trace,
        })
    }
}

pub fn run_dynamics(network: &RoadNetwork, demand: &DemandSet, model: &CostModel, config: DynamicsConfig) -> Result<DynamicsResult> {
    Engine::new(network, demand, model, config)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig2, fig2_instance, fig3, fig3_instance, grid_instance, random_step_instance, DemandPattern};
    use crate::game::{Agent, Edge, StepTable};

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("nope".parse::<Variant>().is_err());
    }

    #[test]
    fn content_agent_keeps_path() {
        let net = RoadNetwork::new(
            3,
            vec![
                Edge { tail: 0, head: 1, d_ms: 1 },
                Edge { tail: 1, head: 2, d_ms: 1 },
                Edge { tail: 0, head: 2, d_ms: 5 },
            ],
        )
        .unwrap();
        let model = CostModel::selfish_share(1.0, &net).unwrap();
        let demand = DemandSet::new(&net, vec![Agent { origin: 0, destination: 2 }]).unwrap();
        let profile = StrategyProfile::from_vecs(vec![vec![0, 1]]);
        let loads = compute_loads(&profile, &net).unwrap();
        let r = best_response(&net, &demand, 0, &profile, &loads, &model, ResponseMode::Aware).unwrap();
        assert!(!r.switched);
        assert_eq!(&r.path[..], &[0, 1]);
        assert!(is_equilibrium(&net, &demand, &profile, &model, ResponseMode::Aware).unwrap().is_none());
    }

    #[test]
    fn fig2_blue_swaps_bottom_when_aware() {
        let inst = fig2_instance(0.5).unwrap();
        let a = &inst.expected_trace.as_ref().unwrap()[0].profile;
        let loads = compute_loads(a, &inst.network).unwrap();
        let r = best_response(&inst.network, &inst.demand, 0, a, &loads, &inst.model, ResponseMode::Aware).unwrap();
        assert!(r.switched);
        assert_eq!(&r.path[..], &fig2::BLUE_BOTTOM);
        assert_eq!(r.anticipated_cost, 0.5);
        let dev = is_equilibrium(&inst.network, &inst.demand, a, &inst.model, ResponseMode::Aware)
            .unwrap()
            .unwrap();
        assert_eq!(dev.agent, 0);
    }

    #[test]
    fn fig3_red_goes_late_in_b() {
        let inst = fig3_instance();
        let b = &inst.expected_trace.as_ref().unwrap()[1].profile;
        let loads = compute_loads(b, &inst.network).unwrap();
        let r = best_response(&inst.network, &inst.demand, 2, b, &loads, &inst.model, ResponseMode::Aware).unwrap();
        assert_eq!(&r.path[..], &fig3::RED_LATE);
        assert_eq!(r.anticipated_cost, 10.0);
    }

    #[test]
    fn fig2_simultaneous_aware_cycles() {
        let inst = fig2_instance(0.5).unwrap();
        let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::new(Variant::SimultaneousAware)).unwrap();
        assert_eq!(
            res.outcome,
            Outcome::Cycle {
                period: 2,
                first_repeat_round: 2
            }
        );
        let costs: Vec<_> = res.trace.iter().map(|r| r.agent_costs.clone().unwrap()).collect();
        assert_eq!(costs, vec![vec![1.0, 1.0], vec![1.5, 1.5], vec![1.0, 1.0]]);
    }

    #[test]
    fn fig2_blind_converges_immediately() {
        let inst = fig2_instance(0.5).unwrap();
        for v in [Variant::SimultaneousBlind, Variant::SequentialBlind, Variant::SequentialAware] {
            let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::new(v)).unwrap();
            assert!(matches!(res.outcome, Outcome::Converged { .. }), "{v}");
        }
    }

    #[test]
    fn fig3_group_cycle_has_period_four() {
        let inst = fig3_instance();
        let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::new(Variant::GroupSimultaneous)).unwrap();
        assert_eq!(
            res.outcome,
            Outcome::Cycle {
                period: 4,
                first_repeat_round: 4
            }
        );
        let expected = inst.expected_trace.unwrap();
        for (report, config) in res.trace.iter().zip(expected.iter().cycle()) {
            assert_eq!(report.agent_costs.as_ref().unwrap(), &config.costs, "round {}", report.round);
        }
    }

    #[test]
    fn fig3_sequential_groups_cycle_every_two_rounds() {
        let inst = fig3_instance();
        let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::new(Variant::GroupSequential)).unwrap();
        assert_eq!(
            res.outcome,
            Outcome::Cycle {
                period: 2,
                first_repeat_round: 2
            }
        );
        let expected = inst.expected_trace.unwrap();
        assert_eq!(res.trace[1].agent_costs.as_ref().unwrap(), &expected[2].costs);
    }

    #[test]
    fn constant_costs_converge_after_one_check() {
        let inst = grid_instance(5, 4, 20, DemandPattern::Uniform, 1)
            .unwrap()
            .with_selfishness(1.0)
            .unwrap();
        for v in Variant::ALL {
            let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::new(v)).unwrap();
            assert_eq!(res.outcome, Outcome::Converged { rounds: 2 }, "{v}");
        }
    }

    #[test]
    fn blind_rounds_respect_potential_bound() {
        let inst = random_step_instance(6, 6, 40, 17).unwrap();
        for v in [Variant::SimultaneousBlind, Variant::SequentialBlind] {
            let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::new(v)).unwrap();
            assert!(matches!(res.outcome, Outcome::Converged { .. }));
            for r in res.trace.iter().skip(1).filter(|r| r.switches > 0) {
                assert!(r.phi < r.phi_before);
                assert!(r.phi_before - r.phi >= r.delta);
            }
            assert!(is_equilibrium(&inst.network, &inst.demand, &res.profile, &inst.model, ResponseMode::Blind)
                .unwrap()
                .is_none());
        }
    }

    #[test]
    fn negative_costs_are_rejected() {
        let net = RoadNetwork::new(2, vec![Edge { tail: 0, head: 1, d_ms: 1 }]).unwrap();
        let model = CostModel::step_tables(vec![StepTable::constant(-1.0)]).unwrap();
        let demand = DemandSet::new(&net, vec![Agent { origin: 0, destination: 1 }]).unwrap();
        assert!(matches!(
            run_dynamics(&net, &demand, &model, DynamicsConfig::default()),
            Err(Error::BadEdgeCost { .. })
        ));
    }

    #[test]
    fn zero_round_limit_rejected() {
        let inst = fig2_instance(0.5).unwrap();
        let config = DynamicsConfig {
            max_rounds: 0,
            ..DynamicsConfig::default()
        };
        assert!(Engine::new(&inst.network, &inst.demand, &inst.model, config).is_err());
    }
}
