use proptest::prelude::*;
use sta_core::engine::{run_dynamics, DynamicsConfig};
use sta_core::fixtures::{grid_instance, DemandPattern};
use sta_core::game::{Edge, RoadNetwork, StrategyProfile};
use sta_core::metrics::{average_sharing, average_stretch, default_x_grid, flow_metrics, sharing_fraction_curve};

/// All-pairs free-flow distances by Floyd-Warshall.
fn all_pairs(network: &RoadNetwork) -> Vec<Vec<u64>> {
    let n = network.num_vertices();
    let mut d = vec![vec![u64::MAX; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for e in network.edges() {
        let (t, h) = (e.tail as usize, e.head as usize);
        d[t][h] = d[t][h].min(e.d_ms as u64);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != u64::MAX && d[k][j] != u64::MAX {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
    }
    d
}

fn co_riders(profile: &StrategyProfile, agent: usize, e: u32) -> u64 {
    profile
        .paths()
        .iter()
        .enumerate()
        .filter(|(j, p)| *j != agent && p.contains(&e))
        .count() as u64
}

#[test]
fn hand_computed_example() {
    // 0 -> 1 -> 2 with a direct 0 -> 2 shortcut
    let network = RoadNetwork::new(
        3,
        vec![
            Edge { tail: 0, head: 1, d_ms: 2 },
            Edge { tail: 1, head: 2, d_ms: 2 },
            Edge { tail: 0, head: 2, d_ms: 3 },
        ],
    )
    .unwrap();
    let detour = StrategyProfile::from_vecs(vec![vec![0, 1], vec![0, 1], vec![2]]);
    let m = flow_metrics(&detour, &network, None).unwrap();
    assert_eq!(m.stretch, vec![Some(4.0 / 3.0), Some(4.0 / 3.0), Some(1.0)]);
    assert_eq!(m.sharing, vec![1.0, 1.0, 0.0]);
    assert_eq!(m.average_sharing, 2.0 / 3.0);
    let direct = StrategyProfile::from_vecs(vec![vec![2], vec![0, 1], vec![2]]);
    let m = flow_metrics(&detour, &network, Some(&direct)).unwrap();
    assert_eq!(m.normalized_average_sharing, Some((2.0 / 3.0) / (2.0 / 3.0)));
    let curve = sharing_fraction_curve(&detour, &network, 1, &[0.0, 0.5, 1.0]).unwrap();
    assert_eq!(curve, vec![(0.0, 1.0), (0.5, 2.0 / 3.0), (1.0, 2.0 / 3.0)]);
    assert!(sharing_fraction_curve(&detour, &network, 1, &[1.5]).is_err());
}

#[test]
fn zero_length_agents_are_skipped() {
    let network = RoadNetwork::new(
        3,
        vec![Edge { tail: 0, head: 1, d_ms: 0 }, Edge { tail: 1, head: 2, d_ms: 4 }],
    )
    .unwrap();
    let profile = StrategyProfile::from_vecs(vec![vec![0], vec![0, 1]]);
    assert_eq!(average_stretch(&profile, &network).unwrap(), 1.0);
    let only_zero = StrategyProfile::from_vecs(vec![vec![0]]);
    assert!(average_stretch(&only_zero, &network).is_err());
    assert!(average_sharing(&only_zero, &network).is_err());
}

#[test]
fn default_grid_spans_unit_interval() {
    let g = default_x_grid();
    assert_eq!(g.len(), 101);
    assert_eq!((g[0], g[50], g[100]), (0.0, 0.5, 1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn metrics_match_naive_recomputation(seed in 0u64..1000, k in 1usize..60, r in prop::sample::select(vec![0.0, 0.01, 0.5, 1.0])) {
        let inst = grid_instance(5, 5, k, DemandPattern::Uniform, seed).unwrap().with_selfishness(r).unwrap();
        let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::default()).unwrap();
        let (net, profile) = (&inst.network, &res.profile);
        let dist = all_pairs(net);
        let m = flow_metrics(profile, net, None).unwrap();
        for (i, p) in profile.paths().iter().enumerate() {
            let a = inst.demand.agent(i as u32);
            let length: u64 = p.iter().map(|&e| net.d(e) as u64).sum();
            let shortest = dist[a.origin as usize][a.destination as usize];
            prop_assert_eq!(m.stretch[i], Some(length as f64 / shortest as f64));
            let shared: u64 = p.iter().map(|&e| net.d(e) as u64 * co_riders(profile, i, e)).sum();
            prop_assert_eq!(m.sharing[i], shared as f64 / length as f64);
        }
        let curve = sharing_fraction_curve(profile, net, 2, &default_x_grid()).unwrap();
        for w in curve.windows(2) {
            prop_assert!(w[1].1 <= w[0].1);
        }
        prop_assert_eq!(curve[0].1, 1.0);
    }
}
