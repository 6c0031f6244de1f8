//! Quasi-centroid coverage of fillings: the boundary triples of a Cantor
//! filling cover the whole graph within a small constant, while the
//! lacunary filling grows centroid-free corridors as the depth increases.
//!
//! Run with `cargo run --example centroid_coverage`.

use coarselab::centroids::{centroid_coverage, CentroidParams};
use coarselab::filling::{build_filling, leaf_boundary, FillingParams};
use coarselab::generators::{gen_cantor, gen_lacunary, CantorSpec, LacunarySpec};
use coarselab::hyperbolicity::four_point_delta;
use coarselab::space::FiniteMetricSpace;

fn coverage_at(space: &FiniteMetricSpace, max_level: u32) -> (u32, f64) {
    let filling = build_filling(
        space,
        &FillingParams {
            r: 0.5,
            max_level,
            ball_factor: 2.0,
        },
    )
    .unwrap();
    let delta = four_point_delta(&filling.graph);
    let boundary = leaf_boundary(&filling);
    let report = centroid_coverage(
        &filling.graph,
        &boundary,
        &CentroidParams::geodesic(3.0 * delta),
        2000,
        0,
    )
    .unwrap();
    (report.m, delta)
}

fn main() {
    let cantor = gen_cantor(&CantorSpec::default()).unwrap();
    println!("cantor filling, rho = 3 * delta:");
    for level in [4, 5, 6] {
        let (m, delta) = coverage_at(&cantor, level);
        println!("  max_level {level}: M = {m} (delta {delta})");
    }

    let lacunary = gen_lacunary(&LacunarySpec { n_min: 0, n_max: 3 }).unwrap();
    println!("lacunary filling, rho = 3 * delta:");
    for level in [20, 30, 40] {
        let (m, delta) = coverage_at(&lacunary, level);
        println!("  max_level {level}: M = {m} (delta {delta})");
    }
    println!("flat vs growing M is the coverage face of the rigidity dichotomy");
}
