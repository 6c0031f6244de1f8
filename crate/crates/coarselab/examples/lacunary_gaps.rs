//! The gap law of the doubly-exponential set: past a threshold index, every
//! later gap beats K * (earlier gap) + C, which pins distant points under
//! any (K, C)-quasi-isometry fixing the ends.
//!
//! Run with `cargo run --example lacunary_gaps`.

use coarselab::generators::{gen_lacunary, LacunarySpec};
use coarselab::rigidity::lacunary_gap_threshold;

fn main() {
    let spec = LacunarySpec { n_min: 0, n_max: 4 };
    let space = gen_lacunary(&spec).unwrap();
    println!("points: {:?}", space.labels());

    let gaps: Vec<f64> = (0..4)
        .map(|n| 2f64.powi(1 << (n + 1)) - 2f64.powi(1 << n))
        .collect();
    println!("gaps between consecutive positive points: {gaps:?}");

    for (k, c) in [(1.0, 0.0), (3.0, 10.0), (10.0, 100.0), (1e6, 0.0)] {
        match lacunary_gap_threshold(k, c, &spec) {
            Some(n0) => println!("K={k:>9} C={c:>5}: threshold index n0 = {n0}"),
            None => println!("K={k:>9} C={c:>5}: not found in range"),
        }
    }
}
