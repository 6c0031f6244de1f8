//! Geodesic-richness conditions on a regular tree: condition 1 with
//! generous constants, condition 2 from the derived constants, and the
//! implied pole radius.
//!
//! Run with `cargo run --example rich_conditions`.

use coarselab::filling::BoundaryApprox;
use coarselab::generators::gen_tree;
use coarselab::hyperbolicity::four_point_delta;
use coarselab::rich::{
    check_condition1, check_condition2, derive_constants, pole_from_rich, CaseSample,
};

fn main() {
    let tree = gen_tree(3, 4).unwrap();
    let boundary = BoundaryApprox::from_vertices(tree.leaves.clone());
    let delta = four_point_delta(&tree.graph);
    let sample = CaseSample {
        cap: 100_000,
        seed: 0,
    };

    let (r0, r1, r2) = (4.0, 4.0, 4.0);
    let c1 = check_condition1(&tree.graph, &boundary, r0, r1, r2, &sample).unwrap();
    println!(
        "condition 1 at (r0, r1, r2) = ({r0}, {r1}, {r2}): holds = {} ({} checked, {} skipped)",
        c1.holds, c1.checked, c1.skipped
    );

    let constants = derive_constants(r0, r1, r2, delta).unwrap();
    println!(
        "derived: r3 = {} r4 = {} (delta = {delta})",
        constants.r3, constants.r4
    );
    let c2 = check_condition2(&tree.graph, &boundary, &constants, &sample).unwrap();
    println!(
        "condition 2 with derived constants: holds = {} ({} checked)",
        c2.holds, c2.checked
    );

    println!(
        "pole radius from richness: {}",
        pole_from_rich(r0, r1, delta)
    );
}
