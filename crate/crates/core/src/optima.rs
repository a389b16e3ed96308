//! System optima by enumeration, the SAT reduction that makes them hard, and
//! a family of instances whose equilibria are arbitrarily worse than the
//! optimum.

use std::collections::{BTreeSet, HashMap};

use crate::engine::{is_equilibrium, ResponseMode};
use crate::error::{Error, Result};
use crate::game::{Agent, CostModel, DemandSet, Edge, LoadVector, Path, RoadNetwork, StepTable, StrategyProfile};
use crate::{EdgeId, VertexId};

pub const DEFAULT_PATH_CAP: usize = 64;
pub const PROFILE_LIMIT: u128 = 10_000_000;

/// All simple `source`-`target` paths in lexicographic order of edge ids,
/// at most `cap` of them.
pub fn simple_paths(network: &RoadNetwork, source: VertexId, target: VertexId, cap: usize) -> Vec<Vec<EdgeId>> {
    fn dfs(
        net: &RoadNetwork,
        v: VertexId,
        target: VertexId,
        cap: usize,
        on_path: &mut [bool],
        stack: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        if v == target {
            out.push(stack.clone());
            return;
        }
        let mut edges = net.out_edges(v).to_vec();
        edges.sort_unstable();
        for e in edges {
            if out.len() >= cap {
                return;
            }
            let w = net.head(e);
            if on_path[w as usize] {
                continue;
            }
            on_path[w as usize] = true;
            stack.push(e);
            dfs(net, w, target, cap, on_path, stack, out);
            stack.pop();
            on_path[w as usize] = false;
        }
    }
    let mut on_path = vec![false; network.num_vertices()];
    on_path[source as usize] = true;
    let mut out = Vec::new();
    dfs(network, source, target, cap, &mut on_path, &mut Vec::new(), &mut out);
    out
}

/// Per-agent candidate paths, shared within O-D groups.
fn candidates(network: &RoadNetwork, demand: &DemandSet, path_cap: usize) -> Result<Vec<Vec<Path>>> {
    let mut per_pair: HashMap<(VertexId, VertexId), Vec<Path>> = HashMap::new();
    let mut out = Vec::with_capacity(demand.len());
    let mut count: u128 = 1;
    for a in demand.agents() {
        let paths = per_pair
            .entry((a.origin, a.destination))
            .or_insert_with(|| {
                simple_paths(network, a.origin, a.destination, path_cap)
                    .into_iter()
                    .map(Path::from)
                    .collect()
            })
            .clone();
        if paths.is_empty() {
            return Err(Error::NoPath {
                from: a.origin,
                to: a.destination,
            });
        }
        count = count.saturating_mul(paths.len() as u128);
        out.push(paths);
    }
    if count > PROFILE_LIMIT {
        log::warn!("refusing to enumerate {count} profiles");
        return Err(Error::TooManyProfiles {
            count,
            limit: PROFILE_LIMIT,
        });
    }
    Ok(out)
}

/// Social cost `sum_i cost(p_i, S) = sum_e l_e c_e(l_e)`.
pub fn total_cost(loads: &LoadVector, model: &CostModel) -> f64 {
    loads
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0)
        .map(|(e, &l)| l as f64 * model.cost(e as EdgeId, l))
        .sum()
}

/// Visits every profile over `choices` in lexicographic order (agent 0 most
/// significant), with the matching load vector.
fn for_each_profile(num_edges: usize, choices: &[Vec<Path>], mut visit: impl FnMut(&[usize], &LoadVector)) {
    let k = choices.len();
    let mut index = vec![0usize; k];
    let mut loads = LoadVector::zeros(num_edges);
    for c in choices {
        loads.add_path(&c[0]);
    }
    loop {
        visit(&index, &loads);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            loads.remove_path(&choices[i][index[i]]);
            index[i] += 1;
            if index[i] < choices[i].len() {
                loads.add_path(&choices[i][index[i]]);
                break;
            }
            index[i] = 0;
            loads.add_path(&choices[i][0]);
        }
    }
}

fn profile_of(choices: &[Vec<Path>], index: &[usize]) -> StrategyProfile {
    StrategyProfile::new(index.iter().zip(choices).map(|(&j, c)| c[j].clone()).collect())
}

/// Minimum social cost over all profiles; the lexicographically first
/// profile wins ties.
pub fn brute_force_optimum(network: &RoadNetwork, demand: &DemandSet, model: &CostModel, path_cap: usize) -> Result<(StrategyProfile, f64)> {
    model.check_network(network)?;
    let choices = candidates(network, demand, path_cap)?;
    let mut best: Option<(Vec<usize>, f64)> = None;
    for_each_profile(network.num_edges(), &choices, |index, loads| {
        let cost = total_cost(loads, model);
        if best.as_ref().is_none_or(|(_, b)| cost < *b) {
            best = Some((index.to_vec(), cost));
        }
    });
    let (index, cost) = best.expect("at least one profile");
    Ok((profile_of(&choices, &index), cost))
}

/// Every pure equilibrium under `mode`, in lexicographic order.
pub fn all_equilibria(network: &RoadNetwork, demand: &DemandSet, model: &CostModel, mode: ResponseMode, path_cap: usize) -> Result<Vec<StrategyProfile>> {
    let choices = candidates(network, demand, path_cap)?;
    let mut profiles = Vec::new();
    for_each_profile(network.num_edges(), &choices, |index, _| profiles.push(profile_of(&choices, index)));
    let mut out = Vec::new();
    for p in profiles {
        if is_equilibrium(network, demand, &p, model, mode)?.is_none() {
            out.push(p);
        }
    }
    Ok(out)
}

/// CNF formula in which every literal occurs in exactly two clauses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SatInstance {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl SatInstance {
    /// Literals are DIMACS style: `v` or `-v` for `v` in `1..=num_vars`.
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::InvalidSat("no variables".into()));
        }
        let mut occurrences = vec![0u32; 2 * num_vars];
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::InvalidSat(format!("clause {} is empty", i + 1)));
            }
            let mut seen = BTreeSet::new();
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::InvalidSat(format!("literal {lit} out of range in clause {}", i + 1)));
                }
                if !seen.insert(lit) {
                    return Err(Error::InvalidSat(format!("literal {lit} repeated in clause {}", i + 1)));
                }
                occurrences[literal_index(lit)] += 1;
            }
        }
        if let Some(l) = occurrences.iter().position(|&c| c != 2) {
            return Err(Error::InvalidSat(format!(
                "literal {} occurs in {} clauses instead of 2",
                index_literal(l),
                occurrences[l]
            )));
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Whether `assignment[v - 1]` for each variable `v` satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    /// The two clauses (ascending) containing `lit`.
    pub fn clauses_of(&self, lit: i32) -> [usize; 2] {
        let mut found = self
            .clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&lit))
            .map(|(i, _)| i);
        [found.next().unwrap(), found.next().unwrap()]
    }
}

fn literal_index(lit: i32) -> usize {
    2 * (lit.unsigned_abs() as usize - 1) + usize::from(lit < 0)
}

fn index_literal(i: usize) -> i32 {
    let v = (i / 2 + 1) as i32;
    if i.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// Every valid instance over `num_vars` variables, up to clause order and
/// literal order within clauses.
pub fn all_sat_instances(num_vars: usize) -> Vec<SatInstance> {
    // Place the two copies of each literal into clauses; the second copy goes
    // to a later clause than the first.
    fn place(items: &[usize], at: usize, clauses: &mut Vec<Vec<usize>>, last: &mut [usize], out: &mut BTreeSet<Vec<Vec<usize>>>) {
        if at == items.len() {
            let mut canon = clauses.clone();
            canon.sort();
            out.insert(canon);
            return;
        }
        let lit = items[at];
        let second = at % 2 == 1;
        let lowest = if second { last[lit] + 1 } else { 0 };
        for c in lowest..clauses.len() {
            if clauses[c].contains(&lit) {
                continue;
            }
            clauses[c].push(lit);
            last[lit] = c;
            place(items, at + 1, clauses, last, out);
            clauses[c].pop();
        }
        clauses.push(vec![lit]);
        last[lit] = clauses.len() - 1;
        place(items, at + 1, clauses, last, out);
        clauses.pop();
    }
    let items: Vec<usize> = (0..2 * num_vars).flat_map(|l| [l, l]).collect();
    let mut out = BTreeSet::new();
    place(&items, 0, &mut Vec::new(), &mut vec![0; 2 * num_vars], &mut out);
    out.into_iter()
        .map(|clauses| {
            let clauses = clauses
                .into_iter()
                .map(|c| c.into_iter().map(index_literal).collect())
                .collect();
            SatInstance::new(num_vars, clauses).expect("generated instances are valid")
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ReducedInstance {
    pub network: RoadNetwork,
    pub demand: DemandSet,
    pub model: CostModel,
    /// Edge of each clause.
    pub clause_edges: Vec<EdgeId>,
    /// Intended paths of `v` and `-v` for each variable.
    pub literal_paths: Vec<[Vec<EdgeId>; 2]>,
    /// Optimum social cost exactly when the formula is satisfiable.
    pub target_cost: f64,
}

/// Clause visiting order `[first, second]` for `v` and `-v`. A clause holding
/// both literals must be at the same position on both paths, otherwise the
/// variable could skip a clause.
fn orientations(positive: [usize; 2], negative: [usize; 2]) -> Vec<[[usize; 2]; 2]> {
    let swap = |[a, b]: [usize; 2], flip: bool| if flip { [b, a] } else { [a, b] };
    [(false, false), (false, true), (true, false), (true, true)]
        .into_iter()
        .map(|(fp, fn_)| [swap(positive, fp), swap(negative, fn_)])
        .filter(|[p, q]| p[0] != q[1] && p[1] != q[0])
        .collect()
}

/// Whether some variable can route over three connectors through a clause
/// pair that is not the clause pair of one of its literals, by borrowing the
/// middle connector of another literal.
fn has_foreign_route(order: &[[[usize; 2]; 2]]) -> bool {
    let middles: Vec<[usize; 2]> = order.iter().flatten().copied().collect();
    order.iter().any(|own| {
        let pairs = [own[0], own[1]];
        let sorted = |[a, b]: [usize; 2]| if a < b { [a, b] } else { [b, a] };
        own.iter().any(|entry| {
            own.iter().any(|exit| {
                middles
                    .iter()
                    .filter(|m| m[0] == entry[0] && m[1] == exit[1])
                    .any(|m| !pairs.iter().any(|p| sorted(*p) == sorted(*m)))
            })
        })
    })
}

/// Largest variable count for which all orientation combinations are tried.
const ORIENTATION_SEARCH_VARS: usize = 8;

/// Orientation of every literal, avoiding foreign routes when possible.
fn orient(sat: &SatInstance) -> Vec<[[usize; 2]; 2]> {
    let options: Vec<Vec<[[usize; 2]; 2]>> = (1..=sat.num_vars as i32)
        .map(|v| orientations(sat.clauses_of(v), sat.clauses_of(-v)))
        .collect();
    let first: Vec<[[usize; 2]; 2]> = options.iter().map(|o| o[0]).collect();
    if sat.num_vars > ORIENTATION_SEARCH_VARS {
        if has_foreign_route(&first) {
            log::warn!("reduced instance admits routes that mix literal paths");
        }
        return first;
    }
    let mut choice = vec![0usize; options.len()];
    loop {
        let order: Vec<_> = choice.iter().zip(&options).map(|(&c, o)| o[c]).collect();
        if !has_foreign_route(&order) {
            return order;
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                log::warn!("reduced instance admits routes that mix literal paths");
                return first;
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Builds a routing instance whose optimum costs `3n` iff `sat` is
/// satisfiable.
///
/// Agents `0..m` are the clause agents, agent `m + v` routes variable `v + 1`.
pub fn reduce_sat(sat: &SatInstance) -> Result<ReducedInstance> {
    let n = sat.num_vars;
    let m = sat.clauses.len();
    let high = 3.0 * n as f64;
    let mut edges = Vec::new();
    let mut tables = Vec::new();
    // clause i spans vertices 2i -> 2i + 1; variable v has s = 2m + 2v, t = s + 1
    for i in 0..m as VertexId {
        edges.push(Edge {
            tail: 2 * i,
            head: 2 * i + 1,
            d_ms: high as u32,
        });
        tables.push(StepTable::step(high, 2, 0.0));
    }
    let clause_edges: Vec<EdgeId> = (0..m as EdgeId).collect();
    let mut connect = |tail: VertexId, head: VertexId| {
        edges.push(Edge { tail, head, d_ms: 1 });
        tables.push(StepTable::constant(1.0));
        edges.len() as EdgeId - 1
    };
    let mut literal_paths = Vec::with_capacity(n);
    for (v, [positive, negative]) in orient(sat).into_iter().enumerate() {
        let s = (2 * m + 2 * v) as VertexId;
        let t = s + 1;
        let paths = [positive, negative].map(|[first, second]| {
            let a = connect(s, 2 * first as VertexId);
            let b = connect(2 * first as VertexId + 1, 2 * second as VertexId);
            let c = connect(2 * second as VertexId + 1, t);
            vec![a, first as EdgeId, b, second as EdgeId, c]
        });
        literal_paths.push(paths);
    }
    let network = RoadNetwork::new(2 * m + 2 * n, edges)?;
    let model = CostModel::step_tables(tables)?;
    let mut agents: Vec<Agent> = (0..m as VertexId)
        .map(|i| Agent {
            origin: 2 * i,
            destination: 2 * i + 1,
        })
        .collect();
    agents.extend((0..n as VertexId).map(|v| Agent {
        origin: 2 * m as VertexId + 2 * v,
        destination: 2 * m as VertexId + 2 * v + 1,
    }));
    let demand = DemandSet::new(&network, agents)?;
    Ok(ReducedInstance {
        network,
        demand,
        model,
        clause_edges,
        literal_paths,
        target_cost: high,
    })
}

#[derive(Debug, Clone)]
pub struct PoaWitness {
    pub network: RoadNetwork,
    pub demand: DemandSet,
    pub model: CostModel,
    /// Constant-cost edge.
    pub edge_a: EdgeId,
    /// Edge that only becomes cheap when all agents share it.
    pub edge_b: EdgeId,
}

impl PoaWitness {
    pub fn all_on(&self, edge: EdgeId) -> StrategyProfile {
        StrategyProfile::from_vecs(vec![vec![edge]; self.demand.len()])
    }
}

/// `k` agents choosing between a constant edge of cost `epsilon` and an edge
/// costing 1 below load `k` and `delta` from load `k` on.
pub fn poa_witness(k: usize, epsilon: f64, delta: f64) -> Result<PoaWitness> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if !(0.0 < delta && delta < epsilon && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < delta < epsilon < 1, got delta = {delta}, epsilon = {epsilon}"
        )));
    }
    let network = RoadNetwork::new(
        2,
        vec![
            Edge {
                tail: 0,
                head: 1,
                d_ms: epsilon.round() as u32,
            },
            Edge { tail: 0, head: 1, d_ms: 1 },
        ],
    )?;
    let model = CostModel::step_tables(vec![StepTable::constant(epsilon), StepTable::step(1.0, k as u32, delta)])?;
    let demand = DemandSet::new(
        &network,
        vec![
            Agent {
                origin: 0,
                destination: 1
            };
            k
        ],
    )?;
    Ok(PoaWitness {
        network,
        demand,
        model,
        edge_a: 0,
        edge_b: 1,
    })
}
