//! Equilibria can be arbitrarily worse than the system optimum: everybody
//! stays on a cheap private road although sharing the other one would cost
//! almost nothing.
//!
//! `cargo run --example price_of_anarchy`

use sta_core::engine::{is_equilibrium, ResponseMode};
use sta_core::game::compute_loads;
use sta_core::optima::{brute_force_optimum, poa_witness, total_cost, DEFAULT_PATH_CAP};

pub fn run_example() -> sta_core::Result<Vec<f64>> {
    let mut ratios = Vec::new();
    for delta in [0.01, 0.001, 0.0001] {
        let w = poa_witness(5, 0.1, delta)?;
        let stuck = w.all_on(w.edge_a);
        let stable = is_equilibrium(&w.network, &w.demand, &stuck, &w.model, ResponseMode::Aware)?.is_none();
        let equilibrium_cost = total_cost(&compute_loads(&stuck, &w.network)?, &w.model);
        let (_, optimum) = brute_force_optimum(&w.network, &w.demand, &w.model, DEFAULT_PATH_CAP)?;
        let ratio = equilibrium_cost / optimum;
        println!("delta {delta}: equilibrium {stable}, cost {equilibrium_cost} vs optimum {optimum}, ratio {ratio}");
        ratios.push(ratio);
    }
    Ok(ratios)
}

fn main() -> sta_core::Result<()> {
    run_example().map(|_| ())
}
