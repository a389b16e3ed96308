//! Routing instances built from CNF formulas: the system optimum reaches
//! `3n` exactly for satisfiable formulas.
//!
//! `cargo run --example sat_reduction`

use sta_core::optima::{brute_force_optimum, reduce_sat, SatInstance, DEFAULT_PATH_CAP};

pub fn run_example() -> sta_core::Result<Vec<bool>> {
    let formulas = [
        // (x1 | x2) (x1 | -x2) (-x1 | x2) (-x1 | -x2): unsatisfiable
        SatInstance::new(2, vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]])?,
        // (x1 | x2) (x1 | x2) (-x1 | -x2) (-x1 | -x2): x1 xor x2
        SatInstance::new(2, vec![vec![1, 2], vec![1, 2], vec![-1, -2], vec![-1, -2]])?,
    ];
    let mut verdicts = Vec::new();
    for sat in &formulas {
        let reduced = reduce_sat(sat)?;
        let (_, total) = brute_force_optimum(&reduced.network, &reduced.demand, &reduced.model, DEFAULT_PATH_CAP)?;
        let satisfiable = total == reduced.target_cost;
        println!(
            "{:?}: {} edges, optimum {total} vs 3n = {} -> {}",
            sat.clauses(),
            reduced.network.num_edges(),
            reduced.target_cost,
            if satisfiable { "satisfiable" } else { "unsatisfiable" }
        );
        verdicts.push(satisfiable);
    }
    Ok(verdicts)
}

fn main() -> sta_core::Result<()> {
    run_example().map(|_| ())
}
