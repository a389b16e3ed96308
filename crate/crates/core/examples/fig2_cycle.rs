//! Two agents that keep swapping paths when each anticipates its own impact
//! and all move at once.
//!
//! `cargo run --example fig2_cycle`

use sta_core::engine::{run_dynamics, DynamicsConfig, Outcome, Variant};
use sta_core::fixtures::fig2_instance;

pub fn run_example() -> sta_core::Result<Outcome> {
    let instance = fig2_instance(0.5)?;
    let result = run_dynamics(
        &instance.network,
        &instance.demand,
        &instance.model,
        DynamicsConfig::new(Variant::SimultaneousAware),
    )?;
    for round in &result.trace {
        println!("round {}: costs {:?}", round.round, round.agent_costs.as_deref().unwrap_or(&[]));
    }
    println!("{:?}", result.outcome);

    // Impact-blind agents settle immediately on the same instance.
    let blind = run_dynamics(
        &instance.network,
        &instance.demand,
        &instance.model,
        DynamicsConfig::new(Variant::SimultaneousBlind),
    )?;
    println!("impact-blind: {:?}", blind.outcome);
    Ok(result.outcome)
}

fn main() -> sta_core::Result<()> {
    run_example().map(|_| ())
}
