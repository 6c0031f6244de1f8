//! End-to-end acceptance suite. Each test covers one numbered criterion,
//! prints a single `ACCEPT A## <name>: PASS|FAIL` line, and asserts it.
//!
//! Every tolerance and threshold is pinned here, in code. Pipeline
//! parameters that the criteria leave open are fixed once at the top.

use std::process::Command;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coarselab::boundary::{
    boundary_products, default_radii, perfectness_profile, rho_matrix, sandwich_violations,
    visual_metric, visual_metric_space, VisualMetricParams,
};
use coarselab::centroids::{
    centroid_coverage, meets_all_sides, quasi_centroids, CentroidParams,
};
use coarselab::filling::{
    build_filling, leaf_boundary, pole_radius, BoundaryApprox, FillingGraph, FillingParams,
};
use coarselab::generators::{
    gen_cantor, gen_comb, gen_lacunary, gen_tree, CantorSpec, CombSpec, LacunarySpec,
};
use coarselab::graph::Path;
use coarselab::hyperbolicity::{
    four_point_delta, graph_gromov_product, rips_delta, thin_delta, SampleSpec,
};
use coarselab::rich::{
    check_condition1, check_condition2, derive_constants, pole_from_rich, CaseSample,
};
use coarselab::rigidity::{
    build_phi_segment, comb_stretch_map, compose_schedule, core_length, far_vertex_displacement,
    find_segments, fit_qi_constants, lacunary_gap_threshold, PairSample, SegmentSchedule,
};

/// Projection-clearance constant for every schedule in this suite; the
/// length threshold, trims, and near-set radii all scale with it.
const D_PARAM: f64 = 0.5;

/// Depths for the flat (Cantor) side of the dichotomy.
const CANTOR_LEVELS: [u32; 3] = [4, 5, 6];

/// Depths for the growing (lacunary) side; the deepest admits a segment of
/// length `200 * D_PARAM`.
const LACUNARY_LEVELS: [u32; 3] = [60, 75, 105];

fn verdict(name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("ACCEPT {name}: PASS");
    } else {
        println!("ACCEPT {name}: FAIL ({})", failures.join("; "));
        panic!("{name} failed: {}", failures.join("; "));
    }
}

fn cantor_filling(max_level: u32) -> FillingGraph {
    let space = gen_cantor(&CantorSpec::default()).unwrap();
    build_filling(
        &space,
        &FillingParams {
            r: 0.5,
            max_level,
            ball_factor: 2.0,
        },
    )
    .unwrap()
}

fn lacunary_filling(max_level: u32) -> FillingGraph {
    let space = gen_lacunary(&LacunarySpec { n_min: 0, n_max: 3 }).unwrap();
    build_filling(
        &space,
        &FillingParams {
            r: 0.5,
            max_level,
            ball_factor: 2.0,
        },
    )
    .unwrap()
}

#[test]
fn a01_tree_degeneracy() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let tree = gen_tree(3, 4).unwrap();
    if tree.graph.vertex_count() != 46 {
        failures.push(format!("vertex count {}", tree.graph.vertex_count()));
    }
    let spec = SampleSpec::default();
    if !spec.exhaustive_for(&tree.graph) {
        failures.push("scan not exhaustive".into());
    }
    let d4 = four_point_delta(&tree.graph);
    let dr = rips_delta(&tree.graph, &spec);
    let dt = thin_delta(&tree.graph, &spec);
    if (d4, dr, dt) != (0.0, 0.0, 0.0) {
        failures.push(format!("deltas ({d4}, {dr}, {dt})"));
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 5.0 {
        failures.push(format!("took {elapsed:?}"));
    }
    verdict("A01 tree-degeneracy", failures);
}

#[test]
fn a02_visual_metric_sandwich() {
    let mut failures = Vec::new();
    let filling = cantor_filling(5);
    let delta = four_point_delta(&filling.graph);
    let boundary = leaf_boundary(&filling);
    let table = boundary_products(&filling.graph, &boundary, filling.root);
    let params = VisualMetricParams::default_for(filling.root, delta);
    if params.validate(delta).is_err() {
        failures.push("default epsilon inadmissible".into());
    }
    let k = table.len();
    let rho = rho_matrix(&table, &params);
    let d = visual_metric(&rho, k);
    let violations = sandwich_violations(&rho, &d, k);
    if !violations.is_empty() {
        failures.push(format!("{} sandwich violations", violations.len()));
    }
    verdict("A02 visual-metric-sandwich", failures);
}

#[test]
fn a03_geodesic_product_bound() {
    let mut failures = Vec::new();
    let filling = cantor_filling(5);
    let delta = four_point_delta(&filling.graph);
    let n = filling.graph.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut violations = 0usize;
    for _ in 0..500 {
        let o = rng.gen_range(0..n);
        let x = rng.gen_range(0..n);
        let y = rng.gen_range(0..n);
        let geo = filling.graph.shortest_geodesic(x, y).unwrap();
        let dist = filling.graph.dist_to_path(o, &geo) as f64;
        let product = graph_gromov_product(&filling.graph, o, x, y);
        if (dist - product).abs() > 4.0 * delta {
            violations += 1;
        }
    }
    if violations != 0 {
        failures.push(format!("{violations} of 500 triples violate the 4-delta bound"));
    }
    verdict("A03 geodesic-product-bound", failures);
}

#[test]
fn a04_centroid_nonemptiness() {
    let mut failures = Vec::new();
    let filling = cantor_filling(5);
    let delta = four_point_delta(&filling.graph);
    let boundary = leaf_boundary(&filling);
    let reps = &boundary.representatives;
    let params = CentroidParams::geodesic(3.0 * delta);
    let mut triples = 0usize;
    let mut bad = 0usize;
    for i in 0..reps.len() {
        for j in (i + 1)..reps.len() {
            for l in (j + 1)..reps.len() {
                triples += 1;
                let set =
                    quasi_centroids(&filling.graph, [reps[i], reps[j], reps[l]], &params)
                        .unwrap();
                if set.is_empty() || !meets_all_sides(&filling.graph, &set).unwrap() {
                    bad += 1;
                }
            }
        }
    }
    if triples > 2000 {
        failures.push(format!("triple count {triples} exceeds the exhaustive budget"));
    }
    if bad != 0 {
        failures.push(format!("{bad} of {triples} triples empty or missing a side"));
    }
    verdict("A04 centroid-nonemptiness", failures);
}

struct DichotomyRun {
    delta: f64,
    l_pole: u32,
    boundary_finite: bool,
    boundary_hits_inf: bool,
    m: u32,
    schedule: SegmentSchedule,
    filling: FillingGraph,
    boundary: BoundaryApprox,
}

fn dichotomy_run(filling: FillingGraph) -> DichotomyRun {
    let delta = four_point_delta(&filling.graph);
    let boundary = leaf_boundary(&filling);
    let l_pole = pole_radius(&filling.graph, filling.root, &boundary.representatives).unwrap();

    let table = boundary_products(&filling.graph, &boundary, filling.root);
    let params = VisualMetricParams::default_for(filling.root, delta);
    let rho = rho_matrix(&table, &params);
    let d = visual_metric(&rho, table.len());
    let vspace = visual_metric_space(&boundary, &d).unwrap();
    let radii = default_radii(&vspace, None);
    let profile = perfectness_profile(&vspace, &radii).unwrap();

    let coverage = centroid_coverage(
        &filling.graph,
        &boundary,
        &CentroidParams::geodesic(3.0 * delta),
        2000,
        0,
    )
    .unwrap();

    let schedule = find_segments(
        &filling.graph,
        filling.root,
        &boundary,
        l_pole as f64,
        delta,
        D_PARAM,
        2,
    )
    .unwrap();

    DichotomyRun {
        delta,
        l_pole,
        boundary_finite: profile.finite_everywhere(),
        boundary_hits_inf: profile.hits_infinite(),
        m: coverage.m,
        schedule,
        filling,
        boundary,
    }
}

#[test]
fn a05_dichotomy_uniformly_perfect_side() {
    let mut failures = Vec::new();
    let mut ms = Vec::new();
    for level in CANTOR_LEVELS {
        let run = dichotomy_run(cantor_filling(level));
        if !run.boundary_finite {
            failures.push(format!("level {level}: boundary profile hit the sentinel"));
        }
        if !run.schedule.segments.is_empty() {
            failures.push(format!(
                "level {level}: {} segments found at the 100D threshold",
                run.schedule.segments.len()
            ));
        }
        ms.push(run.m);
    }
    let (lo, hi) = (
        *ms.iter().min().unwrap(),
        *ms.iter().max().unwrap(),
    );
    if hi - lo > 1 {
        failures.push(format!("coverage M not constant within 1: {ms:?}"));
    }
    verdict("A05 dichotomy-uniformly-perfect", failures);
}

#[test]
fn a06_dichotomy_lacunary_side() {
    let mut failures = Vec::new();
    let mut ms = Vec::new();
    let mut deepest: Option<DichotomyRun> = None;
    for level in LACUNARY_LEVELS {
        let run = dichotomy_run(lacunary_filling(level));
        if !run.boundary_hits_inf {
            failures.push(format!("level {level}: no sentinel in the boundary profile"));
        }
        if run.schedule.segments.is_empty() {
            failures.push(format!("level {level}: empty schedule"));
            continue;
        }
        let composed = compose_schedule(&run.filling.graph, &run.schedule).unwrap();
        let longest_core = run
            .schedule
            .segments
            .iter()
            .map(|s| core_length(s.path.len(), D_PARAM))
            .max()
            .unwrap();
        if (composed.displacement as usize) < longest_core / 3 - 1 {
            failures.push(format!(
                "level {level}: displacement {} below floor(core/3) - 1 = {}",
                composed.displacement,
                longest_core / 3 - 1
            ));
        }
        let paths: Vec<&Path> = run.schedule.segments.iter().map(|s| &s.path).collect();
        let far = far_vertex_displacement(
            &run.filling.graph,
            &composed,
            &paths,
            run.l_pole as f64 + 3.0 * run.delta,
        );
        if far != 0 {
            failures.push(format!("level {level}: far vertices moved by {far}"));
        }
        ms.push(run.m);
        deepest = Some(run);
    }
    if !(ms.len() == 3 && ms[0] < ms[1] && ms[1] < ms[2]) {
        failures.push(format!("coverage M not strictly increasing: {ms:?}"));
    }
    // Fitted constants of single-segment maps at lengths 100D and 200D,
    // taken from the deepest run, must agree within 25%.
    if let Some(run) = deepest {
        let longest = run
            .schedule
            .segments
            .iter()
            .max_by_key(|s| s.path.len())
            .unwrap();
        let targets = [(100.0 * D_PARAM) as usize, (200.0 * D_PARAM) as usize];
        if longest.path.len() < targets[1] {
            failures.push(format!(
                "deepest segment of length {} cannot be trimmed to {}",
                longest.path.len(),
                targets[1]
            ));
        } else {
            let sample = PairSample::default();
            let fits: Vec<(f64, f64)> = targets
                .iter()
                .map(|&t| {
                    let trimmed = longest.path.subpath(0, t);
                    let map = build_phi_segment(&run.filling.graph, &trimmed, D_PARAM).unwrap();
                    let fit = fit_qi_constants(&run.filling.graph, &map, &sample);
                    (fit.k, fit.c)
                })
                .collect();
            let within = |a: f64, b: f64| {
                let (lo, hi) = (a.min(b), a.max(b));
                hi <= 1.25 * lo || hi - lo < 1e-9
            };
            if !within(fits[0].0, fits[1].0) || !within(fits[0].1, fits[1].1) {
                failures.push(format!("fits not stable within 25%: {fits:?}"));
            }
        }
        // The schedule invariants hold exactly on the output.
        if let Err(e) = run.schedule.verify(&run.filling.graph, &run.boundary) {
            failures.push(format!("schedule invariants: {e}"));
        }
    }
    verdict("A06 dichotomy-lacunary", failures);
}

#[test]
fn a07_stretch_unit_law() {
    use coarselab::rigidity::phi_l;
    let mut failures = Vec::new();
    // Exact values on rationals, against the two-branch definition.
    let exact = [
        (0.0, 30.0, 0.0),
        (10.0, 30.0, 20.0),
        (16.0, 30.0, 23.0),
        (30.0, 30.0, 30.0),
        (5.0, 15.0, 10.0),
        (15.0, 15.0, 15.0),
    ];
    for (t, l, want) in exact {
        let got = phi_l(t, l).unwrap();
        if got != want {
            failures.push(format!("phi_{l}({t}) = {got}, want {want}"));
        }
    }
    if phi_l(-0.25, 30.0).is_ok() || phi_l(30.25, 30.0).is_ok() {
        failures.push("out-of-domain arguments accepted".into());
    }
    // Strictly increasing, endpoint-bijective, (2, 0)-distortion over a
    // quarter-integer grid.
    for l in [12.0f64, 30.0, 45.0] {
        let grid: Vec<f64> = (0..=(4.0 * l) as usize).map(|i| i as f64 / 4.0).collect();
        let values: Vec<f64> = grid.iter().map(|&t| phi_l(t, l).unwrap()).collect();
        if values[0] != 0.0 || *values.last().unwrap() != l {
            failures.push(format!("l={l}: endpoints not fixed"));
        }
        for w in values.windows(2) {
            if w[1] <= w[0] {
                failures.push(format!("l={l}: not strictly increasing"));
                break;
            }
        }
        'outer: for (i, (&t, &ft)) in grid.iter().zip(&values).enumerate() {
            for (&s, &fs) in grid[i + 1..].iter().zip(&values[i + 1..]) {
                let (dd, df) = ((s - t).abs(), (fs - ft).abs());
                if df > 2.0 * dd + 1e-9 || df < dd / 2.0 - 1e-9 {
                    failures.push(format!("l={l}: (2,0) distortion fails at ({t}, {s})"));
                    break 'outer;
                }
            }
        }
    }
    verdict("A07 stretch-unit-law", failures);
}

#[test]
fn a08_rich_constants() {
    let mut failures = Vec::new();
    let c = derive_constants(1.0, 1.0, 1.0, 0.0).unwrap();
    if (c.r3, c.r4) != (5.0, 7.0) {
        failures.push(format!("derived ({}, {})", c.r3, c.r4));
    }
    if pole_from_rich(3.0, 2.0, 1.0) != 3.0 {
        failures.push("pole constant".into());
    }
    let tree = gen_tree(3, 4).unwrap();
    let boundary = BoundaryApprox::from_vertices(tree.leaves.clone());
    let delta = four_point_delta(&tree.graph);
    let sample = CaseSample {
        cap: 100_000,
        seed: 0,
    };
    let (r0, r1, r2) = (4.0, 4.0, 4.0);
    let c1 = check_condition1(&tree.graph, &boundary, r0, r1, r2, &sample).unwrap();
    if !(c1.holds && c1.mode == coarselab::rich::CaseMode::Exhaustive) {
        failures.push(format!("condition 1: {} failures", c1.failures));
    }
    let consts = derive_constants(r0, r1, r2, delta).unwrap();
    let c2 = check_condition2(&tree.graph, &boundary, &consts, &sample).unwrap();
    if !(c2.holds && c2.mode == coarselab::rich::CaseMode::Exhaustive) {
        failures.push(format!("condition 2: {} failures", c2.failures));
    }
    verdict("A08 rich-constants", failures);
}

#[test]
fn a09_comb_probe() {
    let mut failures = Vec::new();
    let comb = gen_comb(&CombSpec {
        tree_valence: 3,
        tree_depth: 4,
        teeth: vec![2, 4, 6, 8, 10, 12],
    })
    .unwrap();
    let plan: Vec<(usize, usize)> = (0..comb.teeth.len())
        .map(|i| (i, comb.tooth_len(i) / 2))
        .collect();
    let map = comb_stretch_map(&comb, &plan).unwrap();
    if map.displacement != 6 {
        failures.push(format!("displacement {}", map.displacement));
    }
    if let Some(v) = (0..comb.tree_vertex_count).find(|&v| map.apply(v) != v) {
        failures.push(format!("tree vertex {v} moved"));
    }
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
    if report.holds {
        failures.push("condition 1 unexpectedly holds".into());
    }
    if !report.failure_points().contains(&tip) {
        failures.push(format!("no failure witness at the longest tooth tip {tip}"));
    }
    verdict("A09 comb-probe", failures);
}

#[test]
fn a10_lacunary_gap_law() {
    let mut failures = Vec::new();
    let spec = LacunarySpec { n_min: 0, n_max: 4 };
    // Independent five-term brute force: gaps of 2^(2^n) for n = 0..=3.
    let gaps: Vec<f64> = (0..4u32)
        .map(|n| 2f64.powi(1 << (n + 1)) - 2f64.powi(1 << n))
        .collect();
    let (k, c) = (3.0, 10.0);
    let oracle = (0..=2i32).find(|&n0| {
        (n0..4).all(|n| {
            ((n + 1)..4).all(|m| gaps[m as usize] > k * gaps[n as usize] + c)
        })
    });
    let got = lacunary_gap_threshold(k, c, &spec);
    if got != oracle {
        failures.push(format!("threshold {got:?}, oracle {oracle:?}"));
    }
    if got != lacunary_gap_threshold(k, c, &spec) {
        failures.push("rerun disagreed".into());
    }
    verdict("A10 lacunary-gap-law", failures);
}

#[test]
fn a11_determinism_and_performance() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let bin = env!("CARGO_BIN_EXE_coarselab");
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).display().to_string();

    // Inputs for the file-driven subcommands.
    let cantor_csv = path("cantor.csv");
    let lac_csv = path("lac.csv");
    let comb_graph = path("comb.graph");
    let setup = [
        vec!["gen", "--kind", "cantor", "--cantor-depth", "3", "--out", &cantor_csv],
        vec!["gen", "--kind", "lacunary", "--out", &lac_csv],
        vec!["gen", "--kind", "comb", "--out", &comb_graph],
    ];
    for args in &setup {
        let out = Command::new(bin).args(args).output().unwrap();
        assert!(out.status.success(), "setup {args:?} failed");
    }
    let matrix: Vec<(&str, Vec<String>)> = vec![
        ("gen", vec!["gen".into(), "--kind".into(), "cantor".into(), "--cantor-depth".into(), "3".into(), "--out".into(), path("cantor2.csv")]),
        ("fill", vec!["fill".into(), "--in".into(), cantor_csv.clone(), "--levels".into(), "4".into(), "--out".into(), path("fill.graph"), "--meta".into(), path("fill.meta.json")]),
        ("analyze", vec!["analyze".into(), "--in".into(), comb_graph.clone(), "--triangles".into(), "500".into(), "--seed".into(), "7".into()]),
        ("boundary", vec!["boundary".into(), "--in".into(), cantor_csv.clone(), "--levels".into(), "4".into()]),
        ("perfectness", vec!["perfectness".into(), "--in".into(), lac_csv.clone()]),
        ("centroid-coverage", vec!["centroid-coverage".into(), "--in".into(), cantor_csv.clone(), "--levels".into(), "4".into(), "--seed".into(), "11".into()]),
        ("rigidity", vec!["rigidity".into(), "--space".into(), "lacunary".into(), "--depth".into(), "55".into(), "--D".into(), "0.5".into(), "--count".into(), "2".into(), "--seed".into(), "3".into()]),
        ("rich", vec!["rich".into(), "--space".into(), "tree".into(), "--depth".into(), "3".into(), "--r0".into(), "3".into(), "--r1".into(), "3".into(), "--r2".into(), "3".into()]),
    ];

    for (name, args) in &matrix {
        let mut outputs = Vec::new();
        for threads in ["1", "1", "4", "4"] {
            let out = Command::new(bin)
                .args(args)
                .env("COARSELAB_THREADS", threads)
                .output()
                .unwrap();
            if !out.status.success() {
                failures.push(format!(
                    "{name} exited nonzero: {}",
                    String::from_utf8_lossy(&out.stderr)
                ));
                break;
            }
            outputs.push(out.stdout);
        }
        if outputs.len() == 4 && !outputs.windows(2).all(|w| w[0] == w[1]) {
            failures.push(format!("{name}: output differs across runs/threads"));
        }
        // Reports carry the vertex cap; parse one to confirm graphs stay
        // within it where a size is reported.
        if let Some(first) = outputs.first() {
            let v: serde_json::Value = serde_json::from_slice(first).unwrap();
            if let Some(count) = v.get("vertex_count").and_then(|c| c.as_u64()) {
                if count > 5000 {
                    failures.push(format!("{name}: graph has {count} vertices"));
                }
            }
            if v.get("schema").and_then(|s| s.as_u64()) != Some(1) {
                failures.push(format!("{name}: missing schema tag"));
            }
        }
    }

    let elapsed = start.elapsed();
    println!("A11 subcommand matrix finished in {elapsed:?}");
    if elapsed.as_secs() >= 600 {
        failures.push(format!("matrix took {elapsed:?}"));
    }
    verdict("A11 determinism-and-performance", failures);
}
