use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sta_core::fixtures::{fig2, fig2_instance, fig3_instance, grid_network};
use sta_core::routing::{cch_customize, cch_preprocess, dijkstra, Dijkstra, MetricIndependentIndex};
use sta_core::{compute_loads, Edge, RoadNetwork};

fn random_network(n: usize, m: usize, seed: u64) -> RoadNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..m)
        .map(|_| Edge {
            tail: rng.gen_range(0..n as u32),
            head: rng.gen_range(0..n as u32),
            d_ms: 1,
        })
        .collect();
    RoadNetwork::new(n, edges).unwrap()
}

#[test]
fn fixtures_match_dijkstra_under_configuration_metrics() {
    for instance in [fig2_instance(0.5).unwrap(), fig3_instance()] {
        let index = cch_preprocess(&instance.network);
        let n = instance.network.num_vertices() as u32;
        for config in instance.expected_trace.as_ref().unwrap() {
            let loads = compute_loads(&config.profile, &instance.network).unwrap();
            for extra in [0, 1] {
                let metric: Vec<f64> = loads
                    .iter()
                    .enumerate()
                    .map(|(e, &l)| instance.model.cost(e as u32, l + extra))
                    .collect();
                let c = cch_customize(&index, &metric).unwrap();
                for s in 0..n {
                    for t in 0..n {
                        let expected = dijkstra(&instance.network, &metric, s, t).ok().map(|r| r.1);
                        let got = c.query(s, t).ok().map(|r| r.1);
                        assert_eq!(got, expected, "{} config {} {s}->{t}", instance.name, config.label);
                    }
                }
            }
        }
    }
}

#[test]
fn red_expects_zero_swapping_back_from_b() {
    let inst = fig2_instance(0.5).unwrap();
    let b = &inst.expected_trace.as_ref().unwrap()[1].profile;
    let loads = compute_loads(b, &inst.network).unwrap();
    // red's view: its own bottom path removed, then joining
    let mut metric: Vec<f64> = loads
        .iter()
        .enumerate()
        .map(|(e, &l)| inst.model.cost(e as u32, l + 1))
        .collect();
    for &e in &fig2::RED_TOP {
        metric[e as usize] = inst.model.cost(e, loads.get(e));
    }
    let index = cch_preprocess(&inst.network);
    let (path, cost) = cch_customize(&index, &metric).unwrap().query(fig2::S2, fig2::T2).unwrap();
    assert_eq!(cost, 0.0);
    assert_eq!(path, fig2::RED_BOTTOM);
    assert!(path.contains(&fig2::BOLD_BOTTOM));
}

#[test]
fn perfect_labels_are_distances() {
    let net = grid_network(9, 7, 2);
    let index = cch_preprocess(&net);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let metric: Vec<f64> = (0..net.num_edges()).map(|_| rng.gen_range(0..30) as f64).collect();
    let c = cch_customize(&index, &metric).unwrap();
    let mut dj = Dijkstra::new(&net);
    for (u, v) in index.arcs() {
        let label = c.arc_cost(u, v).unwrap();
        assert_eq!(label, dj.distances(&metric, u)[v as usize], "arc {u}->{v}");
    }
}

#[test]
fn customization_is_idempotent_and_index_reusable() {
    let net = grid_network(8, 8, 4);
    let index = MetricIndependentIndex::new(&net);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = net.num_vertices() as u32;
    for _ in 0..25 {
        let metric: Vec<f64> = (0..net.num_edges()).map(|_| rng.gen_range(0..100) as f64).collect();
        let a = index.customize(&metric).unwrap();
        let b = index.customize(&metric).unwrap();
        for (u, v) in index.arcs() {
            assert_eq!(a.arc_cost(u, v), b.arc_cost(u, v));
        }
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        assert_eq!(a.query(s, t).unwrap().1, dijkstra(&net, &metric, s, t).unwrap().1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cch_paths_are_real_and_optimal(seed in 0u64..10_000, n in 2usize..30, density in 1usize..4) {
        let net = random_network(n, n * density, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let metric: Vec<f64> = (0..net.num_edges()).map(|_| rng.gen_range(0..10) as f64).collect();
        let index = cch_preprocess(&net);
        let c = cch_customize(&index, &metric).unwrap();
        for s in 0..n as u32 {
            for t in 0..n as u32 {
                match (c.query(s, t), dijkstra(&net, &metric, s, t)) {
                    (Ok((path, cost)), Ok((_, expected))) => {
                        prop_assert_eq!(cost, expected);
                        if s != t {
                            prop_assert!(net.check_path(&path, s, t).is_ok());
                            let sum: f64 = path.iter().map(|&e| metric[e as usize]).sum();
                            prop_assert_eq!(sum, cost);
                        }
                    }
                    (Err(_), Err(_)) => {}
                    (a, b) if s == t => prop_assert!(a.is_ok() && b.is_ok()),
                    (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|r| r.1), b.map(|r| r.1)),
                }
            }
        }
    }
}
