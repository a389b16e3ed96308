//! A group of two identical travellers plus two singletons cycling through
//! four configurations when every O-D group moves together.
//!
//! `cargo run --example fig3_group_cycle`

use sta_core::engine::{run_dynamics, DynamicsConfig, Outcome, Variant};
use sta_core::fixtures::fig3_instance;

pub fn run_example() -> sta_core::Result<Outcome> {
    let instance = fig3_instance();
    let labels = instance.expected_trace.as_ref().map(|t| t.iter().map(|c| c.label).collect::<Vec<_>>());
    let result = run_dynamics(
        &instance.network,
        &instance.demand,
        &instance.model,
        DynamicsConfig::new(Variant::GroupSimultaneous),
    )?;
    for round in &result.trace {
        let label = labels.as_ref().map_or("?", |l| l[round.round % l.len()]);
        println!(
            "round {} ({label}): blue, blue, red, orange pay {:?}",
            round.round,
            round.agent_costs.as_deref().unwrap_or(&[])
        );
    }
    println!("{:?}", result.outcome);
    Ok(result.outcome)
}

fn main() -> sta_core::Result<()> {
    run_example().map(|_| ())
}
