//! Gromov products and the three hyperbolicity constants on small graphs.
//!
//! Run with `cargo run --example hyperbolicity_basics`.

use coarselab::graph::shapes::{cycle_graph, path_graph};
use coarselab::graph::GeodesicGraph;
use coarselab::hyperbolicity::{analyze, graph_gromov_product, SampleSpec};

fn main() {
    let spec = SampleSpec::default();

    // Trees are 0-hyperbolic under every definition.
    let tripod = GeodesicGraph::new(
        7,
        &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)],
    )
    .unwrap();
    let report = analyze(&tripod, &spec);
    println!(
        "tripod: four-point {} rips {} thin {}",
        report.delta_four_point, report.delta_rips, report.delta_thin
    );

    // Cycles are the simplest graphs with positive delta.
    for n in [4usize, 6, 8, 12] {
        let g = cycle_graph(n);
        let report = analyze(&g, &spec);
        println!(
            "C{n}: four-point {} rips {} thin {} (exhaustive: {})",
            report.delta_four_point,
            report.delta_rips,
            report.delta_thin,
            report.sample_spec.exhaustive
        );
    }

    // The Gromov product measures how long geodesics travel together.
    let path = path_graph(9);
    for (x, y) in [(0, 8), (2, 6), (4, 4)] {
        println!(
            "path: ({x}|{y})_0 = {}",
            graph_gromov_product(&path, 0, x, y)
        );
    }
    // On the tripod, the product of two leaves based at the third is the
    // length of the basepoint's leg.
    println!(
        "tripod: (5|6)_4 = {}",
        graph_gromov_product(&tripod, 4, 5, 6)
    );
}
