//! Visual quasi-metric and chain metric on a filling boundary, with the
//! two-sided estimate rho/2 <= d <= rho checked pair by pair.
//!
//! Run with `cargo run --example visual_boundary`.

use coarselab::boundary::{
    boundary_products, rho_matrix, sandwich_violations, visual_metric, VisualMetricParams,
};
use coarselab::filling::{build_filling, leaf_boundary, FillingParams};
use coarselab::generators::{gen_cantor, CantorSpec};
use coarselab::hyperbolicity::four_point_delta;

fn main() {
    let space = gen_cantor(&CantorSpec::default()).unwrap();
    let filling = build_filling(&space, &FillingParams::default()).unwrap();
    let delta = four_point_delta(&filling.graph);
    let boundary = leaf_boundary(&filling);
    let table = boundary_products(&filling.graph, &boundary, filling.root);

    let params = VisualMetricParams::default_for(filling.root, delta);
    println!(
        "basepoint {} epsilon {} (delta = {delta})",
        params.basepoint, params.epsilon
    );

    let k = table.len();
    let rho = rho_matrix(&table, &params);
    let d = visual_metric(&rho, k);

    // A few pairs: product, rho, and the chain metric.
    for (i, j) in [(0, 1), (0, k - 1), (1, k / 2)] {
        println!(
            "pair ({}, {}): product {} rho {:.4} visual {:.4}",
            boundary.center_labels[i],
            boundary.center_labels[j],
            table.value(i, j),
            rho[i * k + j],
            d[i * k + j]
        );
    }

    let violations = sandwich_violations(&rho, &d, k);
    println!(
        "rho/2 <= d <= rho: {} violations over {} pairs",
        violations.len(),
        k * (k - 1) / 2
    );
}
