//! Uniform-perfectness profiles of a Cantor endpoint set (finite estimates
//! everywhere) against a lacunary set (the isolated-point sentinel fires).
//!
//! Run with `cargo run --example perfectness_dichotomy`.

use coarselab::boundary::{default_radii, perfectness_profile, GapRatio};
use coarselab::generators::{gen_cantor, gen_lacunary, CantorSpec, LacunarySpec};
use coarselab::space::FiniteMetricSpace;

fn show(name: &str, space: &FiniteMetricSpace) {
    let radii = default_radii(space, None);
    let profile = perfectness_profile(space, &radii).unwrap();
    println!("{name}: {} points, {} grid radii", space.point_count(), radii.len());
    for (r, s) in profile.radii.iter().zip(&profile.s_estimate) {
        match s {
            GapRatio::Finite(v) => println!("  r = {r:10.4}  S = {v:.4}"),
            GapRatio::Infinite => println!("  r = {r:10.4}  S = inf (empty ball)"),
        }
    }
    println!(
        "  finite everywhere: {}\n",
        profile.finite_everywhere()
    );
}

fn main() {
    let cantor = gen_cantor(&CantorSpec::default()).unwrap();
    show("cantor endpoints", &cantor);

    let lacunary = gen_lacunary(&LacunarySpec { n_min: 0, n_max: 3 }).unwrap();
    show("lacunary set", &lacunary);
}
