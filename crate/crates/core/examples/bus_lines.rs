//! Greedy bus lines over an equilibrium flow, chosen under a budget of
//! operation hours.
//!
//! `cargo run --example bus_lines`

use sta_core::busline::{build_lines, select_lines, tvot, DEFAULT_CAPACITY, DEFAULT_FREQ_PER_MIN, DEFAULT_WINDOW_MIN};
use sta_core::engine::{run_dynamics, DynamicsConfig};
use sta_core::fixtures::{grid_instance, DemandPattern};

pub fn run_example() -> sta_core::Result<f64> {
    let instance = grid_instance(10, 10, 400, DemandPattern::Clustered, 11)?;
    let flow = run_dynamics(&instance.network, &instance.demand, &instance.model, DynamicsConfig::default())?;
    let paths = flow.profile.paths();
    let lines = build_lines(paths, &instance.network, DEFAULT_CAPACITY);
    println!("{} candidate lines", lines.len());
    let mut last = 0.0;
    for budget_h in [0.0, 0.05, 0.2, 1.0] {
        let plan = select_lines(lines.clone(), budget_h, DEFAULT_FREQ_PER_MIN, DEFAULT_WINDOW_MIN)?;
        let t = tvot(&plan, paths, &instance.network);
        println!(
            "budget {budget_h:>4} h: {:>3} lines, bus {:.3} h, covered {:.3} h, TVOT {:.3} h (baseline {:.3} h)",
            plan.selected.iter().filter(|&&s| s).count(),
            t.bus_time_h,
            t.coverage_h,
            t.tvot_h,
            t.baseline_h
        );
        last = t.tvot_h;
    }
    Ok(last)
}

fn main() -> sta_core::Result<()> {
    run_example().map(|_| ())
}
