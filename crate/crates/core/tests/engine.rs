use proptest::prelude::*;
use sta_core::engine::{is_equilibrium, run_dynamics, DynamicsConfig, Engine, Outcome, ResponseMode, RoundReport, Variant};
use sta_core::fixtures::{fig2_instance, fig3_instance, grid_instance, random_step_instance, DemandPattern};
use sta_core::metrics::average_stretch;
use sta_core::compute_loads;

fn without_timing(trace: &[RoundReport]) -> Vec<RoundReport> {
    trace
        .iter()
        .map(|r| RoundReport {
            query_ms: 0.0,
            customize_ms: 0.0,
            ..r.clone()
        })
        .collect()
}

#[test]
fn simultaneous_aware_round_turns_a_into_b() {
    let inst = fig2_instance(0.25).unwrap();
    let trace = inst.expected_trace.as_ref().unwrap();
    let engine = Engine::new(&inst.network, &inst.demand, &inst.model, DynamicsConfig::new(Variant::SimultaneousAware)).unwrap();
    let loads = compute_loads(&trace[0].profile, &inst.network).unwrap();
    let (next, _, report) = engine.run_round(1, &trace[0].profile, &loads).unwrap();
    assert_eq!(next, trace[1].profile);
    assert_eq!(report.switches, 2);
    assert_eq!(report.agent_costs.unwrap(), vec![1.25, 1.25]);
}

#[test]
fn equilibrium_is_a_fixed_point() {
    let inst = random_step_instance(5, 5, 30, 4).unwrap();
    for v in [Variant::SimultaneousBlind, Variant::SequentialBlind, Variant::SequentialAware] {
        let config = DynamicsConfig::new(v);
        let result = run_dynamics(&inst.network, &inst.demand, &inst.model, config).unwrap();
        let engine = Engine::new(&inst.network, &inst.demand, &inst.model, config).unwrap();
        let (next, loads, report) = engine.run_round(99, &result.profile, &result.loads).unwrap();
        assert_eq!(report.switches, 0);
        assert_eq!(next, result.profile);
        assert_eq!(loads, result.loads);
    }
}

#[test]
fn fig2_blind_converges_to_blind_equilibrium() {
    let inst = fig2_instance(0.5).unwrap();
    for v in [Variant::SimultaneousBlind, Variant::SequentialBlind] {
        let r = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::new(v)).unwrap();
        assert!(matches!(r.outcome, Outcome::Converged { .. }));
        assert!(is_equilibrium(&inst.network, &inst.demand, &r.profile, &inst.model, ResponseMode::Blind)
            .unwrap()
            .is_none());
    }
}

#[test]
fn tiny_grid_single_agent() {
    let inst = grid_instance(2, 2, 1, DemandPattern::Uniform, 0).unwrap();
    for r in [0.0, 0.5, 1.0] {
        let inst = inst.clone().with_selfishness(r).unwrap();
        for v in Variant::ALL {
            let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::new(v)).unwrap();
            match res.outcome {
                Outcome::Converged { rounds } => assert!(rounds <= 2, "{v}: {rounds}"),
                other => panic!("{v}: {other:?}"),
            }
        }
    }
}

#[test]
fn constant_costs_route_free_flow() {
    let inst = grid_instance(12, 12, 200, DemandPattern::Clustered, 8)
        .unwrap()
        .with_selfishness(1.0)
        .unwrap();
    let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::default()).unwrap();
    assert_eq!(res.outcome, Outcome::Converged { rounds: 2 });
    assert_eq!(average_stretch(&res.profile, &inst.network).unwrap(), 1.0);
}

#[test]
fn thread_count_does_not_change_results() {
    let inst = grid_instance(10, 10, 150, DemandPattern::Uniform, 2).unwrap();
    let run = |threads| {
        let config = DynamicsConfig {
            threads,
            ..DynamicsConfig::default()
        };
        run_dynamics(&inst.network, &inst.demand, &inst.model, config).unwrap()
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a.profile, b.profile);
    assert_eq!(without_timing(&a.trace), without_timing(&b.trace));
}

#[test]
fn group_sequential_fig3_reaches_c_after_one_round() {
    let inst = fig3_instance();
    let trace = inst.expected_trace.as_ref().unwrap();
    let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::new(Variant::GroupSequential)).unwrap();
    assert_eq!(res.trace[1].profile_hash, sta_core::engine::profile_hash(&trace[2].profile));
}

#[test]
fn sequential_aware_on_fig3_is_measured() {
    let inst = fig3_instance();
    let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::new(Variant::SequentialAware)).unwrap();
    assert!(matches!(res.outcome, Outcome::Converged { .. }), "{:?}", res.outcome);
    assert!(is_equilibrium(&inst.network, &inst.demand, &res.profile, &inst.model, ResponseMode::Aware)
        .unwrap()
        .is_none());
}

#[test]
fn round_limit_is_reported() {
    let inst = fig2_instance(0.5).unwrap();
    let config = DynamicsConfig {
        variant: Variant::SimultaneousAware,
        max_rounds: 1,
        ..DynamicsConfig::default()
    };
    let res = run_dynamics(&inst.network, &inst.demand, &inst.model, config).unwrap();
    assert_eq!(res.outcome, Outcome::RoundLimit);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_are_deterministic(seed in 0u64..1000, k in 1usize..60) {
        let inst = random_step_instance(6, 5, k, seed).unwrap();
        for v in Variant::ALL {
            let config = DynamicsConfig::new(v);
            let a = run_dynamics(&inst.network, &inst.demand, &inst.model, config).unwrap();
            let b = run_dynamics(&inst.network, &inst.demand, &inst.model, config).unwrap();
            prop_assert_eq!(a.outcome, b.outcome);
            prop_assert_eq!(&a.profile, &b.profile);
            prop_assert_eq!(without_timing(&a.trace), without_timing(&b.trace));
        }
    }

    #[test]
    fn blind_dynamics_end_in_blind_equilibria(seed in 0u64..1000, k in 1usize..80, r in 0.0f64..1.0) {
        let inst = grid_instance(6, 6, k, DemandPattern::Clustered, seed).unwrap().with_selfishness(r).unwrap();
        let res = run_dynamics(&inst.network, &inst.demand, &inst.model, DynamicsConfig::default()).unwrap();
        prop_assert!(matches!(res.outcome, Outcome::Converged { .. }), "{:?}", res.outcome);
        prop_assert!(is_equilibrium(&inst.network, &inst.demand, &res.profile, &inst.model, ResponseMode::Blind).unwrap().is_none());
    }
}
