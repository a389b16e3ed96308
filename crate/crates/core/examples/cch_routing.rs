//! One metric-independent index, many metrics: customize and query, and
//! compare with plain Dijkstra.
//!
//! `cargo run --example cch_routing`

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sta_core::fixtures::grid_network;
use sta_core::routing::{cch_customize, cch_preprocess, cch_query, dijkstra};

pub fn run_example() -> sta_core::Result<usize> {
    let network = grid_network(20, 20, 1);
    let index = cch_preprocess(&network);
    println!(
        "{} vertices, {} edges -> {} supergraph arcs, {} triangles",
        index.num_vertices(),
        network.num_edges(),
        index.num_arcs(),
        index.num_triangles()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = network.num_vertices() as u32;
    let mut agree = 0;
    for _ in 0..5 {
        let metric: Vec<f64> = (0..network.num_edges()).map(|_| rng.gen_range(0..50) as f64).collect();
        let customized = cch_customize(&index, &metric)?;
        for _ in 0..20 {
            let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (_, fast) = cch_query(&customized, s, t)?;
            let (_, slow) = dijkstra(&network, &metric, s, t)?;
            agree += usize::from(fast == slow);
        }
    }
    println!("{agree} of 100 queries match Dijkstra");
    Ok(agree)
}

fn main() -> sta_core::Result<()> {
    run_example().map(|_| ())
}
