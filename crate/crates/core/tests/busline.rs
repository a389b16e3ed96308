use proptest::prelude::*;
use sta_core::busline::{build_lines, knapsack, line_weight_s, select_lines, tvot, BusLine};
use sta_core::engine::{run_dynamics, DynamicsConfig};
use sta_core::fixtures::{grid_instance, DemandPattern};
use sta_core::game::{Edge, RoadNetwork};
use sta_core::EdgeId;

/// Five spokes into a three-edge trunk and five spokes out of it.
fn star() -> (RoadNetwork, Vec<Vec<EdgeId>>) {
    let mut edges: Vec<Edge> = (0..3).map(|i| Edge { tail: i, head: i + 1, d_ms: 10 }).collect();
    for i in 0..5 {
        edges.push(Edge { tail: 4 + i, head: 0, d_ms: 3 });
    }
    for i in 0..5 {
        edges.push(Edge { tail: 3, head: 9 + i, d_ms: 3 });
    }
    let network = RoadNetwork::new(14, edges).unwrap();
    let paths = (0..5).map(|i| vec![3 + i, 0, 1, 2, 8 + i]).collect();
    (network, paths)
}

fn flow(seed: u64, agents: usize) -> (RoadNetwork, Vec<Vec<EdgeId>>) {
    let inst = grid_instance(6, 6, agents, DemandPattern::Clustered, seed)
        .unwrap()
        .with_selfishness(0.0)
        .unwrap();
    let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::default()).unwrap();
    (inst.network, res.profile.paths().iter().map(|p| p.to_vec()).collect())
}

fn subset_oracle(weights: &[u64], values: &[u64], capacity: u64) -> u64 {
    (0u32..1 << weights.len())
        .filter_map(|mask| {
            let pick = |v: &[u64]| (0..v.len()).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).sum::<u64>();
            (pick(weights) <= capacity).then(|| pick(values))
        })
        .max()
        .unwrap()
}

/// Each line is a simple path, riders follow a piece of their own path,
/// no traveler edge is covered twice, and seats are never oversold.
fn check_lines(lines: &[BusLine], paths: &[Vec<EdgeId>], network: &RoadNetwork, capacity: u32) {
    let mut covered: Vec<Vec<bool>> = paths.iter().map(|p| vec![false; p.len()]).collect();
    for line in lines {
        assert!(!line.edges.is_empty());
        let mut vertices = vec![network.tail(line.edges[0])];
        for w in line.edges.windows(2) {
            assert_eq!(network.head(w[0]), network.tail(w[1]));
        }
        vertices.extend(line.edges.iter().map(|&e| network.head(e)));
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), vertices.len(), "line revisits a vertex");
        assert_eq!(line.tau_ms, network.path_length(&line.edges));
        for pos in 0..line.edges.len() {
            assert!(line.riders_on(pos) <= capacity as usize);
        }
        let mut coverage = 0;
        for a in &line.assignments {
            let ride = &line.edges[a.start..a.end];
            assert!(!ride.is_empty());
            let path = &paths[a.traveler as usize];
            let at = (0..=path.len() - ride.len())
                .find(|&i| &path[i..i + ride.len()] == ride && covered[a.traveler as usize][i..i + ride.len()].iter().all(|c| !c))
                .expect("ride is an uncovered piece of the traveler's path");
            covered[a.traveler as usize][at..at + ride.len()].iter_mut().for_each(|c| *c = true);
            coverage += network.path_length(ride);
        }
        assert_eq!(coverage, line.coverage_ms);
    }
}

#[test]
fn single_path_is_one_line() {
    let (network, paths) = star();
    let lines = build_lines(&paths[..1], &network, 80);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0].edges, paths[0]);
    assert_eq!(lines[0].coverage_ms, 36);
}

#[test]
fn capacity_one_splits_identical_paths() {
    let (network, paths) = star();
    let twice = vec![paths[0].clone(), paths[0].clone()];
    let lines = build_lines(&twice, &network, 1);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0].edges, lines[1].edges);
    assert_eq!(lines[0].assignments.len(), 1);
    assert_eq!(lines[1].assignments.len(), 1);
}

#[test]
fn star_trunk_comes_first() {
    let (network, paths) = star();
    let lines = build_lines(&paths, &network, 80);
    // seed on trunk edge 0, extend to the lowest-id spokes on both ends
    assert_eq!(lines[0].edges, vec![3, 0, 1, 2, 8]);
    // traveler 0 rides the whole line, the others ride the trunk
    assert_eq!(lines[0].coverage_ms, 36 + 4 * 30);
    // the eight leftover spokes become single-edge lines
    assert_eq!(lines.len(), 9);
    assert!(lines[1..].iter().all(|l| l.edges.len() == 1 && l.coverage_ms == 3));
    check_lines(&lines, &paths, &network, 80);
}

#[test]
fn star_trunk_under_tight_capacity() {
    let (network, paths) = star();
    let lines = build_lines(&paths, &network, 2);
    check_lines(&lines, &paths, &network, 2);
    let total: u64 = lines.iter().map(|l| l.coverage_ms).sum();
    assert_eq!(total, paths.iter().map(|p| network.path_length(p)).sum::<u64>());
}

#[test]
fn knapsack_small_example() {
    let chosen = knapsack(&[2, 3, 4], &[3, 4, 6], 5);
    assert_eq!(chosen, vec![0, 1]);
    assert_eq!(knapsack(&[2, 3, 4], &[3, 4, 6], 9), vec![0, 1, 2]);
    assert!(knapsack(&[2, 3, 4], &[3, 4, 6], 1).is_empty());
}

#[test]
fn zero_budget_is_feeder_only() {
    let (network, paths) = flow(5, 60);
    let plan = select_lines(build_lines(&paths, &network, 80), 0.0, 0.1, 60.0).unwrap();
    assert!(plan.selected.iter().all(|s| !s));
    let t = tvot(&plan, &paths, &network);
    let baseline: u64 = paths.iter().map(|p| network.path_length(p)).sum();
    assert_eq!(t.tvot_h, baseline as f64 / 3.6e6);
    assert_eq!(t.bus_time_h, 0.0);
}

#[test]
fn huge_budget_selects_everything() {
    let (network, paths) = flow(6, 40);
    let plan = select_lines(build_lines(&paths, &network, 80), 1e3, 0.1, 60.0).unwrap();
    assert!(plan.selected.iter().all(|&s| s));
}

#[test]
fn negative_budget_is_rejected() {
    assert!(select_lines(Vec::new(), -1.0, 0.1, 60.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn knapsack_matches_subset_enumeration(items in prop::collection::vec((0u64..40, 0u64..100), 0..=15), capacity in 0u64..200) {
        let (weights, values): (Vec<u64>, Vec<u64>) = items.into_iter().unzip();
        let chosen = knapsack(&weights, &values, capacity);
        prop_assert!(chosen.iter().map(|&i| weights[i]).sum::<u64>() <= capacity);
        prop_assert_eq!(chosen.iter().map(|&i| values[i]).sum::<u64>(), subset_oracle(&weights, &values, capacity));
    }

    #[test]
    fn plans_respect_capacity_and_tvot_identity(seed in 0u64..500, agents in 1usize..120, capacity in 1u32..6, budget in 0.0f64..0.5) {
        let (network, paths) = flow(seed, agents);
        let lines = build_lines(&paths, &network, capacity);
        check_lines(&lines, &paths, &network, capacity);
        let plan = select_lines(lines, budget, 0.1, 60.0).unwrap();
        let weight: u64 = plan.selected_lines().map(|l| line_weight_s(l, 0.1, 60.0)).sum();
        prop_assert!(weight as f64 <= budget * 3600.0 + 1e-9);
        let t = tvot(&plan, &paths, &network);
        let identity = t.bus_time_h + t.baseline_h - t.coverage_h;
        prop_assert!((t.tvot_h - identity).abs() <= 1e-9 * t.tvot_h.max(1.0));
        prop_assert_eq!(t.coverage_h, plan.coverage_h());
    }

    #[test]
    fn coverage_grows_with_budget(seed in 0u64..500, agents in 1usize..80) {
        let (network, paths) = flow(seed, agents);
        let lines = build_lines(&paths, &network, 80);
        let mut last = 0;
        for b in [0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0] {
            let plan = select_lines(lines.clone(), b, 0.1, 60.0).unwrap();
            prop_assert!(plan.coverage_ms >= last);
            last = plan.coverage_ms;
        }
    }
}
