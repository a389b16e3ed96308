//! Stretch, sharing and sharing-distribution curves of an equilibrium flow,
//! normalized against the free-flow baseline.
//!
//! `cargo run --example sharing_metrics`

use sta_core::engine::{run_dynamics, DynamicsConfig};
use sta_core::fixtures::{grid_instance, DemandPattern};
use sta_core::metrics::{flow_metrics, sharing_fraction_curve};

pub fn run_example() -> sta_core::Result<f64> {
    let base = grid_instance(10, 10, 300, DemandPattern::Clustered, 3)?;
    let selfish = base.clone().with_selfishness(1.0)?;
    let social = base.with_selfishness(0.0)?;
    let config = DynamicsConfig::default();
    let baseline = run_dynamics(&selfish.network, &selfish.demand, &selfish.model, config)?.profile;
    let shared = run_dynamics(&social.network, &social.demand, &social.model, config)?.profile;

    let m = flow_metrics(&shared, &social.network, Some(&baseline))?;
    println!("average stretch     {:.4}", m.average_stretch);
    println!("average sharing     {:.4}", m.average_sharing);
    println!("normalized sharing  {:.4}", m.normalized_average_sharing.unwrap_or(f64::NAN));
    for others in [1, 10, 100] {
        let curve = sharing_fraction_curve(&shared, &social.network, others, &[0.0, 0.25, 0.5, 0.75, 1.0])?;
        let cells: Vec<String> = curve.iter().map(|(x, f)| format!("{x:.2}:{f:.3}")).collect();
        println!("at least {others:>3} others  {}", cells.join("  "));
    }
    Ok(m.average_sharing)
}

fn main() -> sta_core::Result<()> {
    run_example().map(|_| ())
}
