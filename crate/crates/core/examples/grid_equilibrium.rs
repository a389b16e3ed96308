//! Equilibrium of a synthetic city grid under the shared-cost model, for
//! several selfishness levels.
//!
//! `cargo run --release --example grid_equilibrium`

use sta_core::engine::{run_dynamics, DynamicsConfig, Outcome, Variant};
use sta_core::fixtures::{grid_instance, DemandPattern};
use sta_core::metrics::flow_metrics;

pub fn run_example() -> sta_core::Result<Vec<(f64, Outcome)>> {
    let base = grid_instance(16, 16, 800, DemandPattern::Clustered, 7)?;
    let mut outcomes = Vec::new();
    for r in [1.0, 0.1, 0.01, 0.0] {
        let instance = base.clone().with_selfishness(r)?;
        let result = run_dynamics(
            &instance.network,
            &instance.demand,
            &instance.model,
            DynamicsConfig::new(Variant::SimultaneousBlind),
        )?;
        let m = flow_metrics(&result.profile, &instance.network, None)?;
        let query_ms: f64 = result.trace.iter().map(|t| t.query_ms + t.customize_ms).sum();
        println!(
            "r = {r:<5} {:?}  stretch {:.4}  sharing {:.3}  routing {:.1} ms",
            result.outcome, m.average_stretch, m.average_sharing, query_ms
        );
        outcomes.push((r, result.outcome));
    }
    Ok(outcomes)
}

fn main() -> sta_core::Result<()> {
    run_example().map(|_| ())
}
