//! The displacement-unbounded construction end to end on a lacunary
//! filling: find far-apart segments clear of boundary projections, build
//! the stretch map on each, compose, and fit quasi-isometry constants.
//!
//! Run with `cargo run --example rigidity_probe`.

use coarselab::filling::{build_filling, leaf_boundary, pole_radius, FillingParams};
use coarselab::generators::{gen_lacunary, LacunarySpec};
use coarselab::graph::Path;
use coarselab::hyperbolicity::four_point_delta;
use coarselab::rigidity::{
    build_phi_segment, compose_schedule, core_length, far_vertex_displacement, find_segments,
    fit_qi_constants, PairSample,
};

fn main() {
    let space = gen_lacunary(&LacunarySpec { n_min: 0, n_max: 3 }).unwrap();
    let filling = build_filling(
        &space,
        &FillingParams {
            r: 0.5,
            max_level: 60,
            ball_factor: 2.0,
        },
    )
    .unwrap();
    let boundary = leaf_boundary(&filling);
    let l_pole = pole_radius(&filling.graph, filling.root, &boundary.representatives).unwrap();
    let delta = four_point_delta(&filling.graph);
    println!(
        "filling: {} vertices, delta {}, pole radius {}",
        filling.graph.vertex_count(),
        delta,
        l_pole
    );

    let d_param = 0.5;
    let schedule = find_segments(
        &filling.graph,
        filling.root,
        &boundary,
        l_pole as f64,
        delta,
        d_param,
        2,
    )
    .unwrap();
    println!(
        "schedule: {} segments (exhausted: {})",
        schedule.segments.len(),
        schedule.exhausted
    );

    let sample = PairSample::default();
    for seg in &schedule.segments {
        let map = build_phi_segment(&filling.graph, &seg.path, d_param).unwrap();
        let fit = fit_qi_constants(&filling.graph, &map, &sample);
        println!(
            "  leaf {} length {} core {}: displacement {} fitted ({}, {})",
            seg.leaf,
            seg.path.len(),
            core_length(seg.path.len(), d_param),
            map.displacement,
            fit.k,
            fit.c
        );
    }

    let composed = compose_schedule(&filling.graph, &schedule).unwrap();
    let fit = fit_qi_constants(&filling.graph, &composed, &sample);
    let paths: Vec<&Path> = schedule.segments.iter().map(|s| &s.path).collect();
    let far = far_vertex_displacement(
        &filling.graph,
        &composed,
        &paths,
        l_pole as f64 + 3.0 * delta,
    );
    println!(
        "composite: displacement {} fitted ({}, {}) far-vertex displacement {}",
        composed.displacement, fit.k, fit.c, far
    );
    println!("bounded constants with growing displacement along deeper schedules");
}
