//! Build the hyperbolic filling of a Cantor endpoint set and inspect its
//! levels, pole radius, and leaf boundary.
//!
//! Run with `cargo run --example cantor_filling`.

use coarselab::filling::{build_filling, leaf_boundary, pole_radius, FillingParams};
use coarselab::generators::{gen_cantor, CantorSpec};
use coarselab::hyperbolicity::four_point_delta;

fn main() {
    let space = gen_cantor(&CantorSpec::default()).unwrap();
    println!(
        "space: {} points, diameter {}, min gap {}",
        space.point_count(),
        space.diameter(),
        space.min_positive_distance()
    );

    let params = FillingParams::default();
    let filling = build_filling(&space, &params).unwrap();
    println!(
        "filling at r={} levels={}: {} vertices, {} edges",
        params.r,
        params.max_level,
        filling.graph.vertex_count(),
        filling.graph.edge_count()
    );
    for level in 0..=params.max_level {
        let count = filling.vertices.iter().filter(|v| v.level == level).count();
        println!("  level {level}: {count} net centers");
    }

    let boundary = leaf_boundary(&filling);
    println!("boundary: {} representatives", boundary.len());

    let l = pole_radius(&filling.graph, filling.root, &boundary.representatives).unwrap();
    println!("pole radius: {l}");
    println!("four-point delta: {}", four_point_delta(&filling.graph));
}
