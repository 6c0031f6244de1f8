//! Orchestration behind the CLI: typed arguments per subcommand, report
//! envelopes with embedded seeds and caps, deterministic JSON rendering,
//! and the key=value config file.
//!
//! Reports are serialized with fixed field order and written byte-for-byte
//! identically for identical configs, seeds, and inputs, regardless of the
//! worker thread count.

use std::collections::BTreeMap;
use std::path::{Path as FsPath, PathBuf};

use serde::Serialize;

use crate::boundary::{
    self, default_radii, perfectness_profile, rho_matrix, sandwich_violations, visual_metric,
    visual_metric_space, PerfectnessProfile, VisualMetricParams,
};
use crate::centroids::{centroid_coverage, CentroidParams, CoverageReport};
use crate::error::{Error, Result};
use crate::filling::{
    build_filling_capped, leaf_boundary, pole_radius, BoundaryApprox, FillingGraph, FillingParams,
};
use crate::generators::{
    gen_cantor_capped, gen_comb_capped, gen_lacunary, gen_tree_capped, CantorSpec, CombSpec,
    LacunarySpec,
};
use crate::graph::GeodesicGraph;
use crate::hyperbolicity::{analyze, four_point_delta, HyperbolicityReport, SampleSpec};
use crate::io;
use crate::rich::{
    check_condition1, check_condition2, derive_constants, pole_from_rich, CaseSample,
    Condition1Report, Condition2Report, RichConstants,
};
use crate::rigidity::{
    build_phi_segment, comb_stretch_map, compose_schedule, core_length, far_vertex_displacement,
    find_segments, fit_qi_constants, PairSample, SegmentStats,
};
use crate::space::FiniteMetricSpace;

pub const SCHEMA_VERSION: u32 = 1;

/// Scan caps shared by the subcommands.
#[derive(Debug, Clone, Serialize)]
pub struct Caps {
    pub vertex_cap: usize,
    pub pair_cap: usize,
    pub triple_budget: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            vertex_cap: 5000,
            pair_cap: 2_000_000,
            triple_budget: 2000,
        }
    }
}

/// Applies `COARSELAB_THREADS` to the global worker pool. Call once at
/// process start; later calls are no-ops.
pub fn configure_threads_from_env() {
    if let Ok(v) = std::env::var("COARSELAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

/// Parses the `key=value` config file format; later keys override earlier
/// ones, `#` starts a comment.
pub fn parse_config(text: &str) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// The generated space kinds the pipeline subcommands accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Cantor,
    Lacunary,
    Tree,
    Comb,
}

impl std::str::FromStr for SpaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cantor" => Ok(SpaceKind::Cantor),
            "lacunary" => Ok(SpaceKind::Lacunary),
            "tree" => Ok(SpaceKind::Tree),
            "comb" => Ok(SpaceKind::Comb),
            other => Err(Error::InvalidInput(format!("unknown space kind {other:?}"))),
        }
    }
}

/// Spec knobs for the generated spaces, with the corpus defaults.
#[derive(Debug, Clone, Serialize)]
pub struct SpaceArgs {
    pub cantor_depth: u32,
    pub cantor_ratio: f64,
    pub n_min: i32,
    pub n_max: i32,
    pub valence: usize,
    pub tree_depth: u32,
    pub teeth: Vec<usize>,
}

impl Default for SpaceArgs {
    fn default() -> Self {
        Self {
            cantor_depth: 5,
            cantor_ratio: 1.0 / 3.0,
            n_min: 0,
            n_max: 3,
            valence: 3,
            tree_depth: 4,
            teeth: vec![2, 4, 6, 8, 10, 12],
        }
    }
}

impl SpaceArgs {
    pub fn cantor_spec(&self) -> CantorSpec {
        CantorSpec {
            depth: self.cantor_depth,
            ratio: self.cantor_ratio,
        }
    }

    pub fn lacunary_spec(&self) -> LacunarySpec {
        LacunarySpec {
            n_min: self.n_min,
            n_max: self.n_max,
        }
    }

    pub fn comb_spec(&self) -> CombSpec {
        CombSpec {
            tree_valence: self.valence,
            tree_depth: self.tree_depth,
            teeth: self.teeth.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// gen

#[derive(Debug, Clone)]
pub struct GenArgs {
    pub kind: SpaceKind,
    pub space: SpaceArgs,
    pub out: PathBuf,
    pub caps: Caps,
}

#[derive(Debug, Serialize)]
pub struct GenReport {
    pub schema: u32,
    pub kind: SpaceKind,
    pub format: &'static str,
    pub points: usize,
    pub out: String,
    pub caps: Caps,
}

pub fn gen_run(args: &GenArgs) -> Result<GenReport> {
    let (format, points, text) = match args.kind {
        SpaceKind::Cantor => {
            let m = gen_cantor_capped(&args.space.cantor_spec(), args.caps.vertex_cap)?;
            ("metric_csv", m.point_count(), io::write_metric_csv(&m))
        }
        SpaceKind::Lacunary => {
            let m = gen_lacunary(&args.space.lacunary_spec())?;
            ("metric_csv", m.point_count(), io::write_metric_csv(&m))
        }
        SpaceKind::Tree => {
            let t = gen_tree_capped(args.space.valence, args.space.tree_depth, args.caps.vertex_cap)?;
            ("graph", t.graph.vertex_count(), io::write_graph(&t.graph))
        }
        SpaceKind::Comb => {
            let c = gen_comb_capped(&args.space.comb_spec(), args.caps.vertex_cap)?;
            ("graph", c.graph.vertex_count(), io::write_graph(&c.graph))
        }
    };
    io::write_file(&args.out, &text)?;
    Ok(GenReport {
        schema: SCHEMA_VERSION,
        kind: args.kind,
        format,
        points,
        out: args.out.display().to_string(),
        caps: args.caps.clone(),
    })
}

// ---------------------------------------------------------------------------
// fill

#[derive(Debug, Clone)]
pub struct FillArgs {
    pub input: PathBuf,
    pub params: FillingParams,
    pub out: PathBuf,
    pub meta_out: Option<PathBuf>,
    pub caps: Caps,
}

#[derive(Debug, Serialize)]
pub struct FillReport {
    pub schema: u32,
    pub params: FillingParams,
    pub diameter: f64,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub root: usize,
    pub leaves: Vec<usize>,
    pub pole_radius: u32,
    pub vertices: Vec<FillVertexMeta>,
    pub caps: Caps,
}

#[derive(Debug, Serialize)]
pub struct FillVertexMeta {
    pub id: usize,
    pub level: u32,
    pub center: String,
    pub radius: f64,
}

pub fn fill_run(args: &FillArgs) -> Result<FillReport> {
    let space = io::read_metric_csv(&io::read_to_string(&args.input)?)?;
    let filling = build_filling_capped(&space, &args.params, args.caps.vertex_cap)?;
    io::write_file(&args.out, &io::write_graph(&filling.graph))?;
    let leaves = filling.leaves();
    let report = FillReport {
        schema: SCHEMA_VERSION,
        params: args.params.clone(),
        diameter: filling.diameter,
        vertex_count: filling.graph.vertex_count(),
        edge_count: filling.graph.edge_count(),
        root: filling.root,
        pole_radius: pole_radius(&filling.graph, filling.root, &leaves)?,
        leaves,
        vertices: filling
            .vertices
            .iter()
            .enumerate()
            .map(|(id, v)| FillVertexMeta {
                id,
                level: v.level,
                center: v.center_label.clone(),
                radius: v.radius,
            })
            .collect(),
        caps: args.caps.clone(),
    };
    if let Some(meta) = &args.meta_out {
        io::write_file(meta, &to_json(&report))?;
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// analyze

#[derive(Debug, Clone)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    pub triangles: usize,
    pub seed: u64,
    pub caps: Caps,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub schema: u32,
    #[serde(flatten)]
    pub report: HyperbolicityReport,
    pub seed: u64,
    pub caps: Caps,
}

pub fn analyze_run(args: &AnalyzeArgs) -> Result<AnalyzeReport> {
    let graph = io::read_graph(&io::read_to_string(&args.input)?)?;
    let spec = SampleSpec {
        triangles: args.triangles,
        seed: args.seed,
        ..SampleSpec::default()
    };
    Ok(AnalyzeReport {
        schema: SCHEMA_VERSION,
        report: analyze(&graph, &spec),
        seed: args.seed,
        caps: args.caps.clone(),
    })
}

// ---------------------------------------------------------------------------
// boundary

#[derive(Debug, Clone)]
pub struct BoundaryArgs {
    pub input: PathBuf,
    pub params: FillingParams,
    pub epsilon: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub caps: Caps,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct BoundaryReport {
    pub schema: u32,
    pub filling: FillingParams,
    pub delta_four_point: f64,
    pub visual: VisualMetricParams,
    pub labels: Vec<String>,
    pub products: Vec<Vec<f64>>,
    pub rho: Vec<Vec<f64>>,
    pub visual_metric: Vec<Vec<f64>>,
    pub sandwich_violations: usize,
    pub profile: PerfectnessProfile,
    pub seed: u64,
    pub caps: Caps,
}

fn rows(values: &[f64], k: usize) -> Vec<Vec<f64>> {
    (0..k).map(|i| values[i * k..(i + 1) * k].to_vec()).collect()
}

pub fn boundary_run(args: &BoundaryArgs) -> Result<BoundaryReport> {
    let space = io::read_metric_csv(&io::read_to_string(&args.input)?)?;
    let filling = build_filling_capped(&space, &args.params, args.caps.vertex_cap)?;
    let delta = four_point_delta(&filling.graph);
    let b = leaf_boundary(&filling);
    let table = boundary::boundary_products(&filling.graph, &b, filling.root);
    let params = match args.epsilon {
        Some(eps) => VisualMetricParams {
            basepoint: filling.root,
            epsilon: eps,
        },
        None => VisualMetricParams::default_for(filling.root, delta),
    };
    params.validate(delta)?;
    let k = table.len();
    let rho = rho_matrix(&table, &params);
    let d = visual_metric(&rho, k);
    let violations = sandwich_violations(&rho, &d, k).len();
    let vspace = visual_metric_space(&b, &d)?;
    let radii = default_radii(&vspace, None);
    let profile = perfectness_profile(&vspace, &radii)?;
    if let Some(dir) = &args.out_dir {
        io::write_file(&dir.join("products.csv"), &io::matrix_csv(&b.center_labels, &table.values))?;
        io::write_file(&dir.join("rho.csv"), &io::matrix_csv(&b.center_labels, &rho))?;
        io::write_file(&dir.join("visual.csv"), &io::matrix_csv(&b.center_labels, &d))?;
    }
    Ok(BoundaryReport {
        schema: SCHEMA_VERSION,
        filling: args.params.clone(),
        delta_four_point: delta,
        visual: params,
        labels: b.center_labels.clone(),
        products: rows(&table.values, k),
        rho: rows(&rho, k),
        visual_metric: rows(&d, k),
        sandwich_violations: violations,
        profile,
        seed: args.seed,
        caps: args.caps.clone(),
    })
}

// ---------------------------------------------------------------------------
// perfectness

#[derive(Debug, Clone)]
pub struct PerfectnessArgs {
    pub input: PathBuf,
    pub r0: Option<f64>,
    pub caps: Caps,
}

#[derive(Debug, Serialize)]
pub struct PerfectnessReport {
    pub schema: u32,
    pub r0: f64,
    pub profile: PerfectnessProfile,
    pub caps: Caps,
}

pub fn perfectness_run(args: &PerfectnessArgs) -> Result<PerfectnessReport> {
    let space = io::read_metric_csv(&io::read_to_string(&args.input)?)?;
    let radii = default_radii(&space, args.r0);
    let profile = perfectness_profile(&space, &radii)?;
    Ok(PerfectnessReport {
        schema: SCHEMA_VERSION,
        r0: radii[0],
        profile,
        caps: args.caps.clone(),
    })
}

// ---------------------------------------------------------------------------
// centroid coverage

#[derive(Debug, Clone)]
pub struct CoverageArgs {
    pub input: PathBuf,
    pub params: FillingParams,
    pub rho: Option<f64>,
    pub seed: u64,
    pub caps: Caps,
}

#[derive(Debug, Serialize)]
pub struct CoverageRunReport {
    pub schema: u32,
    pub filling: FillingParams,
    pub delta_four_point: f64,
    #[serde(flatten)]
    pub coverage: CoverageReport,
    pub caps: Caps,
}

pub fn coverage_run(args: &CoverageArgs) -> Result<CoverageRunReport> {
    let space = io::read_metric_csv(&io::read_to_string(&args.input)?)?;
    let filling = build_filling_capped(&space, &args.params, args.caps.vertex_cap)?;
    let delta = four_point_delta(&filling.graph);
    let b = leaf_boundary(&filling);
    let rho = args.rho.unwrap_or(3.0 * delta);
    let coverage = centroid_coverage(
        &filling.graph,
        &b,
        &CentroidParams::geodesic(rho),
        args.caps.triple_budget,
        args.seed,
    )?;
    Ok(CoverageRunReport {
        schema: SCHEMA_VERSION,
        filling: args.params.clone(),
        delta_four_point: delta,
        coverage,
        caps: args.caps.clone(),
    })
}

// ---------------------------------------------------------------------------
// experiment spaces shared by rigidity and rich

/// A graph with a root and designated boundary representatives.
pub struct Experiment {
    pub graph: GeodesicGraph,
    pub root: usize,
    pub boundary: BoundaryApprox,
    pub filling: Option<FillingGraph>,
    pub comb: Option<crate::generators::CombGraph>,
    pub space: Option<FiniteMetricSpace>,
}

/// Builds the experiment graph for a space kind: fillings for the metric
/// spaces (at `max_level = depth`), the graphs themselves for trees and
/// combs (boundary = tree leaves).
pub fn build_experiment(
    kind: SpaceKind,
    space_args: &SpaceArgs,
    depth: u32,
    caps: &Caps,
) -> Result<Experiment> {
    match kind {
        SpaceKind::Cantor | SpaceKind::Lacunary => {
            let space = match kind {
                SpaceKind::Cantor => gen_cantor_capped(&space_args.cantor_spec(), caps.vertex_cap)?,
                _ => gen_lacunary(&space_args.lacunary_spec())?,
            };
            let params = FillingParams {
                r: 0.5,
                max_level: depth,
                ball_factor: 2.0,
            };
            let filling = build_filling_capped(&space, &params, caps.vertex_cap)?;
            let boundary = leaf_boundary(&filling);
            Ok(Experiment {
                graph: filling.graph.clone(),
                root: filling.root,
                boundary,
                filling: Some(filling),
                comb: None,
                space: Some(space),
            })
        }
        SpaceKind::Tree => {
            let t = gen_tree_capped(space_args.valence, depth, caps.vertex_cap)?;
            let boundary = BoundaryApprox::from_vertices(t.leaves.clone());
            Ok(Experiment {
                graph: t.graph,
                root: t.root,
                boundary,
                filling: None,
                comb: None,
                space: None,
            })
        }
        SpaceKind::Comb => {
            let mut spec = space_args.comb_spec();
            spec.tree_depth = depth;
            let c = gen_comb_capped(&spec, caps.vertex_cap)?;
            let boundary = BoundaryApprox::from_vertices(c.tree_leaves.clone());
            Ok(Experiment {
                graph: c.graph.clone(),
                root: c.root,
                boundary,
                filling: None,
                comb: Some(c),
                space: None,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// rigidity

#[derive(Debug, Clone)]
pub struct RigidityArgs {
    pub kind: SpaceKind,
    pub space: SpaceArgs,
    /// Filling depth (metric spaces) or tree depth (tree and comb).
    pub depth: u32,
    pub d_param: f64,
    pub count: usize,
    pub seed: u64,
    pub caps: Caps,
    /// For combs: also run the tooth-halving stretch probe.
    pub halve_teeth: bool,
    pub csv_out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct ScheduleJson {
    pub segments: Vec<ScheduleSegmentJson>,
    pub exhausted: bool,
}

#[derive(Debug, Serialize)]
pub struct ScheduleSegmentJson {
    pub leaf: usize,
    pub start: usize,
    pub end: usize,
    pub length: usize,
}

#[derive(Debug, Serialize)]
pub struct CompositeStats {
    pub displacement: u32,
    pub k: f64,
    pub c: f64,
}

#[derive(Debug, Serialize)]
pub struct StretchStats {
    pub displacement: u32,
    pub k: f64,
    pub c: f64,
    pub tree_fixed: bool,
}

#[derive(Debug, Serialize)]
pub struct RigidityReport {
    pub schema: u32,
    pub space: SpaceKind,
    pub depth: u32,
    pub d_param: f64,
    pub delta_four_point: f64,
    pub l_pole: u32,
    pub schedule: ScheduleJson,
    pub per_segment: Vec<SegmentStats>,
    pub composite: CompositeStats,
    pub far_vertex_fixing: bool,
    pub comb_stretch: Option<StretchStats>,
    pub seed: u64,
    pub caps: Caps,
}

pub fn rigidity_run(args: &RigidityArgs) -> Result<RigidityReport> {
    let exp = build_experiment(args.kind, &args.space, args.depth, &args.caps)?;
    let delta = four_point_delta(&exp.graph);
    let l_pole = pole_radius(&exp.graph, exp.root, &exp.boundary.representatives)?;
    let schedule = find_segments(
        &exp.graph,
        exp.root,
        &exp.boundary,
        l_pole as f64,
        delta,
        args.d_param,
        args.count,
    )?;
    let pair_sample = PairSample {
        cap: args.caps.pair_cap,
        seed: args.seed,
    };
    let mut per_segment = Vec::new();
    for seg in &schedule.segments {
        let map = build_phi_segment(&exp.graph, &seg.path, args.d_param)?;
        let fit = fit_qi_constants(&exp.graph, &map, &pair_sample);
        per_segment.push(SegmentStats {
            leaf: seg.leaf,
            start: seg.path.first(),
            end: seg.path.last(),
            length: seg.path.len(),
            core_length: core_length(seg.path.len(), args.d_param),
            displacement: map.displacement,
            k: fit.k,
            c: fit.c,
        });
    }
    let composed = compose_schedule(&exp.graph, &schedule)?;
    let composite_fit = fit_qi_constants(&exp.graph, &composed, &pair_sample);
    let paths: Vec<&crate::graph::Path> = schedule.segments.iter().map(|s| &s.path).collect();
    let far =
        far_vertex_displacement(&exp.graph, &composed, &paths, l_pole as f64 + 3.0 * delta);
    let comb_stretch = if args.halve_teeth {
        let comb = exp
            .comb
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("--halve-teeth needs --space comb".into()))?;
        let plan: Vec<(usize, usize)> = (0..comb.teeth.len())
            .map(|i| (i, comb.tooth_len(i) / 2))
            .collect();
        let stretch = comb_stretch_map(comb, &plan)?;
        let fit = fit_qi_constants(&exp.graph, &stretch, &pair_sample);
        let tree_fixed = (0..comb.tree_vertex_count).all(|v| stretch.apply(v) == v);
        Some(StretchStats {
            displacement: stretch.displacement,
            k: fit.k,
            c: fit.c,
            tree_fixed,
        })
    } else {
        None
    };
    if let Some(csv) = &args.csv_out {
        let mut text = String::from("length,core_length,displacement\n");
        for s in &per_segment {
            text.push_str(&format!("{},{},{}\n", s.length, s.core_length, s.displacement));
        }
        io::write_file(csv, &text)?;
    }
    Ok(RigidityReport {
        schema: SCHEMA_VERSION,
        space: args.kind,
        depth: args.depth,
        d_param: args.d_param,
        delta_four_point: delta,
        l_pole,
        schedule: ScheduleJson {
            segments: schedule
                .segments
                .iter()
                .map(|s| ScheduleSegmentJson {
                    leaf: s.leaf,
                    start: s.path.first(),
                    end: s.path.last(),
                    length: s.path.len(),
                })
                .collect(),
            exhausted: schedule.exhausted,
        },
        per_segment,
        composite: CompositeStats {
            displacement: composed.displacement,
            k: composite_fit.k,
            c: composite_fit.c,
        },
        far_vertex_fixing: far == 0,
        comb_stretch,
        seed: args.seed,
        caps: args.caps.clone(),
    })
}

// ---------------------------------------------------------------------------
// rich

#[derive(Debug, Clone)]
pub struct RichArgs {
    pub kind: SpaceKind,
    pub space: SpaceArgs,
    pub depth: u32,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub sample: usize,
    pub seed: u64,
    pub caps: Caps,
}

#[derive(Debug, Serialize)]
pub struct RichReport {
    pub schema: u32,
    pub space: SpaceKind,
    pub depth: u32,
    pub delta_four_point: f64,
    pub constants: RichConstants,
    pub pole_from_rich: f64,
    pub condition1: Condition1Report,
    pub condition2: Condition2Report,
    pub seed: u64,
    pub caps: Caps,
}

pub fn rich_run(args: &RichArgs) -> Result<RichReport> {
    let exp = build_experiment(args.kind, &args.space, args.depth, &args.caps)?;
    let delta = four_point_delta(&exp.graph);
    let constants = derive_constants(args.r0, args.r1, args.r2, delta)?;
    let sample = CaseSample {
        cap: args.sample,
        seed: args.seed,
    };
    let condition1 = check_condition1(
        &exp.graph,
        &exp.boundary,
        args.r0,
        args.r1,
        args.r2,
        &sample,
    )?;
    let condition2 = check_condition2(&exp.graph, &exp.boundary, &constants, &sample)?;
    Ok(RichReport {
        schema: SCHEMA_VERSION,
        space: args.kind,
        depth: args.depth,
        delta_four_point: delta,
        pole_from_rich: pole_from_rich(args.r0, args.r1, delta),
        constants,
        condition1,
        condition2,
        seed: args.seed,
        caps: args.caps.clone(),
    })
}

// ---------------------------------------------------------------------------

/// Writes the JSON report to `--report` when given; the CLI prints it to
/// stdout either way.
pub fn emit(json: &str, out: Option<&FsPath>) -> Result<()> {
    if let Some(path) = out {
        io::write_file(path, json)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let cfg = parse_config("a = 1\n# comment\nb=two\nbad line\na=3\n");
        assert_eq!(cfg.get("a").map(String::as_str), Some("3"));
        assert_eq!(cfg.get("b").map(String::as_str), Some("two"));
        assert_eq!(cfg.len(), 2);
    }

    #[test]
    fn space_kind_parsing() {
        assert_eq!("cantor".parse::<SpaceKind>().unwrap(), SpaceKind::Cantor);
        assert!("sphere".parse::<SpaceKind>().is_err());
    }
}
