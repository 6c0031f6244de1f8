//! The comb probe: segments glued to one vertex of a tree can be stretched
//! and shrunk by a self quasi-isometry that fixes the tree pointwise, so
//! displacement grows with the teeth while the boundary never notices.
//!
//! Run with `cargo run --example comb_stretch`.

use coarselab::filling::BoundaryApprox;
use coarselab::generators::{gen_comb, CombSpec};
use coarselab::rich::{check_condition1, CaseSample};
use coarselab::rigidity::{comb_stretch_map, fit_qi_constants, PairSample};

fn main() {
    let comb = gen_comb(&CombSpec {
        tree_valence: 3,
        tree_depth: 4,
        teeth: vec![2, 4, 6, 8, 10, 12],
    })
    .unwrap();
    println!(
        "comb: {} vertices ({} tree, {} teeth)",
        comb.graph.vertex_count(),
        comb.tree_vertex_count,
        comb.graph.vertex_count() - comb.tree_vertex_count
    );

    // Halve every tooth.
    let plan: Vec<(usize, usize)> = (0..comb.teeth.len())
        .map(|i| (i, comb.tooth_len(i) / 2))
        .collect();
    let map = comb_stretch_map(&comb, &plan).unwrap();
    let fit = fit_qi_constants(&comb.graph, &map, &PairSample::default());
    let tree_fixed = (0..comb.tree_vertex_count).all(|v| map.apply(v) == v);
    println!(
        "halving stretch: displacement {} fitted ({}, {}) tree fixed: {tree_fixed}",
        map.displacement, fit.k, fit.c
    );

    // The teeth are invisible to leaf-to-leaf geodesics, which is exactly
    // why the first richness condition fails at the tips.
    let boundary = BoundaryApprox::from_vertices(comb.tree_leaves.clone());
    let report = check_condition1(
        &comb.graph,
        &boundary,
        1.0,
        1.0,
        1.0,
        &CaseSample::default(),
    )
    .unwrap();
    let tip = comb.tooth_tip(comb.teeth.len() - 1);
    println!(
        "richness condition 1 at r0=r1=r2=1: holds = {}, failures at {} points, longest tip {} failing: {}",
        report.holds,
        report.failure_points().len(),
        tip,
        report.failure_points().contains(&tip)
    );
}
