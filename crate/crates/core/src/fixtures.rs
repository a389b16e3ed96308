//! Counterexample instances and synthetic generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{Agent, CostModel, DemandSet, Edge, RoadNetwork, StepTable, StrategyProfile};
use crate::{EdgeId, VertexId};

/// A named configuration of a fixture with the per-agent costs it must have.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub label: &'static str,
    pub profile: StrategyProfile,
    pub costs: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct FixtureInstance {
    pub name: String,
    pub network: RoadNetwork,
    pub demand: DemandSet,
    pub model: CostModel,
    /// Configurations in the order the best-response cycle visits them.
    pub expected_trace: Option<Vec<Configuration>>,
}

impl FixtureInstance {
    /// Same instance under the selfish-share model with parameter `r`.
    pub fn with_selfishness(mut self, r: f64) -> Result<Self> {
        self.model = CostModel::selfish_share(r, &self.network)?;
        Ok(self)
    }
}

fn edge(tail: VertexId, head: VertexId, table: &StepTable) -> Edge {
    // free-flow time mirrors the cost a lone agent pays
    Edge {
        tail,
        head,
        d_ms: table.cost(1).round().max(0.0) as u32,
    }
}

fn build(layout: &[(VertexId, VertexId, StepTable)], n: usize) -> Result<(RoadNetwork, CostModel)> {
    let edges = layout.iter().map(|(t, h, c)| edge(*t, *h, c)).collect();
    let network = RoadNetwork::new(n, edges)?;
    let model = CostModel::step_tables(layout.iter().map(|(_, _, c)| c.clone()).collect())?;
    Ok((network, model))
}

pub mod fig2 {
    //! Vertex and edge ids of the two-agent simultaneous-response cycle.
    use crate::{EdgeId, VertexId};

    pub const S1: VertexId = 0;
    pub const S2: VertexId = 1;
    pub const U1: VertexId = 2;
    pub const V1: VertexId = 3;
    pub const U2: VertexId = 4;
    pub const V2: VertexId = 5;
    pub const T1: VertexId = 6;
    pub const T2: VertexId = 7;

    pub const BOLD_TOP: EdgeId = 4;
    pub const BOLD_BOTTOM: EdgeId = 5;

    pub const BLUE_TOP: [EdgeId; 3] = [0, 4, 6];
    pub const BLUE_BOTTOM: [EdgeId; 3] = [2, 5, 7];
    pub const RED_BOTTOM: [EdgeId; 3] = [1, 5, 9];
    pub const RED_TOP: [EdgeId; 3] = [3, 4, 8];
}

/// Two agents that swap past each other under simultaneous impact-aware best
/// response. The bold edges cost 1 below load 2 and 0 from load 2 on; the two
/// crossing edges cost `epsilon`, everything else is free.
pub fn fig2_instance(epsilon: f64) -> Result<FixtureInstance> {
    use fig2::*;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    let free = StepTable::constant(0.0);
    let cross = StepTable::constant(epsilon);
    let bold = StepTable::step(1.0, 2, 0.0);
    let layout = [
        (S1, U1, free.clone()),
        (S2, U2, free.clone()),
        (S1, U2, cross.clone()),
        (S2, U1, cross),
        (U1, V1, bold.clone()),
        (U2, V2, bold),
        (V1, T1, free.clone()),
        (V2, T1, free.clone()),
        (V1, T2, free.clone()),
        (V2, T2, free),
    ];
    let (network, model) = build(&layout, 8)?;
    let demand = DemandSet::new(
        &network,
        vec![
            Agent { origin: S1, destination: T1 },
            Agent { origin: S2, destination: T2 },
        ],
    )?;
    let a = StrategyProfile::from_vecs(vec![BLUE_TOP.to_vec(), RED_BOTTOM.to_vec()]);
    let b = StrategyProfile::from_vecs(vec![BLUE_BOTTOM.to_vec(), RED_TOP.to_vec()]);
    Ok(FixtureInstance {
        name: "fig2".into(),
        network,
        demand,
        model,
        expected_trace: Some(vec![
            Configuration {
                label: "A",
                profile: a,
                costs: vec![1.0, 1.0],
            },
            Configuration {
                label: "B",
                profile: b,
                costs: vec![1.0 + epsilon, 1.0 + epsilon],
            },
        ]),
    })
}

pub mod fig3 {
    //! Vertex and edge ids of the group best-response cycle. `H0..H4` are the
    //! horizontal vertices; blue travels `H0 -> H4`.
    use crate::{EdgeId, VertexId};

    pub const H0: VertexId = 0;
    pub const H4: VertexId = 4;
    pub const S3: VertexId = 5;
    pub const T3: VertexId = 6;
    pub const S4: VertexId = 7;
    pub const T4: VertexId = 8;

    pub const BOLD1: EdgeId = 0;
    pub const BOLD2: EdgeId = 1;
    pub const MIDDLE: EdgeId = 2;
    pub const BOLD3: EdgeId = 3;
    pub const TOP: EdgeId = 4;

    pub const BLUE_TOP: [EdgeId; 1] = [TOP];
    pub const BLUE_HORIZONTAL: [EdgeId; 4] = [BOLD1, BOLD2, MIDDLE, BOLD3];
    pub const RED_EARLY: [EdgeId; 3] = [5, BOLD1, 6];
    pub const RED_LATE: [EdgeId; 3] = [7, BOLD3, 8];
    pub const ORANGE_EARLY: [EdgeId; 3] = [9, BOLD2, 10];
    pub const ORANGE_LATE: [EdgeId; 3] = [11, BOLD3, 12];
}

/// Four agents (a blue group of two, red, orange) cycling through four
/// configurations under group-impact-aware best response.
pub fn fig3_instance() -> FixtureInstance {
    use fig3::*;
    let c = StepTable::constant;
    let layout = [
        (0, 1, StepTable::step(5.0, 3, 1.0)),
        (1, 2, StepTable::step(5.0, 3, 1.0)),
        (2, 3, c(10.0)),
        (3, 4, StepTable::step(7.0, 3, 1.0)),
        (H0, H4, c(20.0)),
        (S3, 0, c(0.0)),
        (1, T3, c(10.0)),
        (S3, 3, c(9.0)),
        (H4, T3, c(0.0)),
        (S4, 1, c(0.0)),
        (2, T4, c(10.0)),
        (S4, 3, c(9.0)),
        (H4, T4, c(0.0)),
    ];
    let (network, model) = build(&layout, 9).expect("fig3 fixture is well formed");
    let demand = DemandSet::new(
        &network,
        vec![
            Agent { origin: H0, destination: H4 },
            Agent { origin: H0, destination: H4 },
            Agent { origin: S3, destination: T3 },
            Agent { origin: S4, destination: T4 },
        ],
    )
    .expect("fig3 demand is reachable");
    let profile = |blue: &[EdgeId], red: &[EdgeId], orange: &[EdgeId]| {
        StrategyProfile::from_vecs(vec![blue.to_vec(), blue.to_vec(), red.to_vec(), orange.to_vec()])
    };
    let trace = vec![
        Configuration {
            label: "A",
            profile: profile(&BLUE_TOP, &RED_EARLY, &ORANGE_EARLY),
            costs: vec![20.0, 20.0, 15.0, 15.0],
        },
        Configuration {
            label: "B",
            profile: profile(&BLUE_HORIZONTAL, &RED_EARLY, &ORANGE_EARLY),
            costs: vec![19.0, 19.0, 11.0, 11.0],
        },
        Configuration {
            label: "C",
            profile: profile(&BLUE_HORIZONTAL, &RED_LATE, &ORANGE_LATE),
            costs: vec![21.0, 21.0, 10.0, 10.0],
        },
        Configuration {
            label: "D",
            profile: profile(&BLUE_TOP, &RED_LATE, &ORANGE_LATE),
            costs: vec![20.0, 20.0, 16.0, 16.0],
        },
    ];
    FixtureInstance {
        name: "fig3".into(),
        network,
        demand,
        model,
        expected_trace: Some(trace),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemandPattern {
    Uniform,
    Clustered,
}

/// `width x height` grid with edges in both directions between 4-neighbours
/// and free-flow times uniform in `[100, 1000]` ms. Vertex `(x, y)` has id
/// `y * width + x`.
pub fn grid_network(width: usize, height: usize, seed: u64) -> RoadNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(4 * width * height);
    let id = |x: usize, y: usize| (y * width + x) as VertexId;
    for y in 0..height {
        for x in 0..width {
            let v = id(x, y);
            let mut link = |w: VertexId| {
                edges.push(Edge {
                    tail: v,
                    head: w,
                    d_ms: rng.gen_range(100..=1000),
                })
            };
            if x + 1 < width {
                link(id(x + 1, y));
            }
            if x > 0 {
                link(id(x - 1, y));
            }
            if y + 1 < height {
                link(id(x, y + 1));
            }
            if y > 0 {
                link(id(x, y - 1));
            }
        }
    }
    RoadNetwork::new(width * height, edges).expect("grid is well formed")
}

fn sample_agents(width: usize, height: usize, k: usize, pattern: DemandPattern, rng: &mut ChaCha8Rng) -> Vec<Agent> {
    let n = width * height;
    let id = |x: usize, y: usize| (y * width + x) as VertexId;
    match pattern {
        DemandPattern::Uniform => (0..k)
            .map(|_| loop {
                let o = rng.gen_range(0..n) as VertexId;
                let d = rng.gen_range(0..n) as VertexId;
                if o != d {
                    break Agent { origin: o, destination: d };
                }
            })
            .collect(),
        DemandPattern::Clustered => {
            let centers = 4;
            let spread = (width.min(height) / 8).max(1) as i64;
            let pick_center = |rng: &mut ChaCha8Rng| (rng.gen_range(0..width), rng.gen_range(0..height));
            let origins: Vec<_> = (0..centers).map(|_| pick_center(rng)).collect();
            let dests: Vec<_> = (0..centers).map(|_| pick_center(rng)).collect();
            let around = |c: (usize, usize), rng: &mut ChaCha8Rng| {
                let x = (c.0 as i64 + rng.gen_range(-spread..=spread)).clamp(0, width as i64 - 1);
                let y = (c.1 as i64 + rng.gen_range(-spread..=spread)).clamp(0, height as i64 - 1);
                id(x as usize, y as usize)
            };
            (0..k)
                .map(|_| loop {
                    let o = around(*origins.choose(rng).unwrap(), rng);
                    let d = around(*dests.choose(rng).unwrap(), rng);
                    if o != d {
                        break Agent { origin: o, destination: d };
                    }
                })
                .collect()
        }
    }
}

/// Synthetic grid instance under the `r = 0` selfish-share model.
pub fn grid_instance(width: usize, height: usize, agents: usize, pattern: DemandPattern, seed: u64) -> Result<FixtureInstance> {
    if width < 2 || height < 2 || agents == 0 {
        return Err(Error::InvalidParameter(format!(
            "grid {width}x{height} with {agents} agents: need width, height >= 2 and at least one agent"
        )));
    }
    let network = grid_network(width, height, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    let demand = DemandSet::new(&network, sample_agents(width, height, agents, pattern, &mut rng))?;
    let model = CostModel::selfish_share(0.0, &network)?;
    Ok(FixtureInstance {
        name: format!("grid{width}x{height}"),
        network,
        demand,
        model,
        expected_trace: None,
    })
}

/// Random non-increasing integer step table: cost in `[1, 20]` at load 0 and
/// up to three drops at increasing loads.
pub fn random_step_table(rng: &mut impl Rng) -> StepTable {
    let mut cost: i64 = rng.gen_range(1..=20);
    let mut load = 0u32;
    let mut points = vec![(0, cost as f64)];
    for _ in 0..rng.gen_range(0..=3) {
        load += rng.gen_range(1..=4);
        cost -= rng.gen_range(1..=cost.max(1));
        cost = cost.max(0);
        points.push((load, cost as f64));
    }
    StepTable::new(points).expect("generated tables are non-increasing")
}

/// Grid with random synergistic step tables and uniform demand.
pub fn random_step_instance(width: usize, height: usize, agents: usize, seed: u64) -> Result<FixtureInstance> {
    let mut inst = grid_instance(width, height, agents, DemandPattern::Uniform, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let tables = (0..inst.network.num_edges()).map(|_| random_step_table(&mut rng)).collect();
    inst.model = CostModel::step_tables(tables)?;
    inst.name = format!("random{width}x{height}");
    Ok(inst)
}
