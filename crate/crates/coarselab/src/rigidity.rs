//! Self-maps with large displacement that fix everything far away: segment
//! schedules, the piecewise stretch map on a segment, its composition across
//! a schedule, quasi-isometry constant fitting, and the lacunary and comb
//! non-rigidity probes.
//!
//! The stretch map on a geodesic segment `[y, z]` doubles arclength on the
//! first third of the trimmed core and compresses the rest by half, moving
//! the one-third point by a third of the core length while fixing both
//! near-end regions pointwise. Across a schedule of pairwise-far segments
//! the moved sets are disjoint (verified, not assumed), so the factors
//! compose into a single map whose displacement is the max over segments.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filling::BoundaryApprox;
use crate::generators::{CombGraph, LacunarySpec};
use crate::graph::{GeodesicGraph, Path};

/// A total self-map of a graph's vertex set.
#[derive(Debug, Clone)]
pub struct VertexMap {
    pub map: Vec<usize>,
    /// Max over vertices of `d(x, f(x))`.
    pub displacement: u32,
}

impl VertexMap {
    pub fn new(graph: &GeodesicGraph, map: Vec<usize>) -> Self {
        assert_eq!(map.len(), graph.vertex_count());
        let displacement = map
            .iter()
            .enumerate()
            .map(|(x, &fx)| graph.dist(x, fx))
            .max()
            .unwrap_or(0);
        Self { map, displacement }
    }

    pub fn identity(graph: &GeodesicGraph) -> Self {
        Self {
            map: (0..graph.vertex_count()).collect(),
            displacement: 0,
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Vertices the map does not fix, ascending.
    pub fn moved_vertices(&self) -> Vec<usize> {
        self.map
            .iter()
            .enumerate()
            .filter(|(x, &fx)| *x != fx)
            .map(|(x, _)| x)
            .collect()
    }
}

/// `X_y(R)` and `X_z(R)` for a segment: the vertices whose entire projection
/// set lies in the closed `R`-ball of the respective endpoint.
#[derive(Debug, Clone)]
pub struct NearSets {
    pub radius: f64,
    pub near_start: Vec<usize>,
    pub near_end: Vec<usize>,
}

impl NearSets {
    pub fn contains_start(&self, v: usize) -> bool {
        self.near_start.binary_search(&v).is_ok()
    }

    pub fn contains_end(&self, v: usize) -> bool {
        self.near_end.binary_search(&v).is_ok()
    }

    pub fn in_union(&self, v: usize) -> bool {
        self.contains_start(v) || self.contains_end(v)
    }

    pub fn disjoint(&self) -> bool {
        self.near_start
            .iter()
            .all(|v| self.near_end.binary_search(v).is_err())
    }
}

/// Computes the near sets of a geodesic segment by scanning full projection
/// sets.
pub fn near_sets(graph: &GeodesicGraph, segment: &Path, radius: f64) -> Result<NearSets> {
    segment.validate(graph, true)?;
    let y = segment.first();
    let z = segment.last();
    let mut near_start = Vec::new();
    let mut near_end = Vec::new();
    for v in 0..graph.vertex_count() {
        let proj = graph.projection_set(segment, v);
        if proj.iter().all(|&p| (graph.dist(p, y) as f64) <= radius) {
            near_start.push(v);
        }
        if proj.iter().all(|&p| (graph.dist(p, z) as f64) <= radius) {
            near_end.push(v);
        }
    }
    Ok(NearSets {
        radius,
        near_start,
        near_end,
    })
}

/// The piecewise stretch of `[0, l]`: doubles on the first third, then
/// grows at slope one half, fixing both endpoints.
pub fn phi_l(t: f64, l: f64) -> Result<f64> {
    if l <= 0.0 {
        return Err(Error::InvalidInput("phi_l needs l > 0".into()));
    }
    if !(0.0..=l).contains(&t) {
        return Err(Error::InvalidInput(format!(
            "phi_l argument {t} outside [0, {l}]"
        )));
    }
    if t <= l / 3.0 {
        Ok(2.0 * t)
    } else {
        Ok(2.0 * l / 3.0 + 0.5 * (t - l / 3.0))
    }
}

/// Rounds half toward zero (toward the start of the chart).
fn round_half_down(x: f64) -> usize {
    let fl = x.floor();
    if x - fl > 0.5 {
        fl as usize + 1
    } else {
        fl as usize
    }
}

/// One segment of a schedule: a subsegment of a root-to-leaf geodesic.
#[derive(Debug, Clone)]
pub struct ScheduleSegment {
    /// The boundary representative whose ray carries the segment.
    pub leaf: usize,
    pub path: Path,
}

impl ScheduleSegment {
    pub fn length(&self) -> usize {
        self.path.len()
    }
}

/// A schedule of pairwise-far segments with strictly increasing lengths.
#[derive(Debug, Clone)]
pub struct SegmentSchedule {
    pub segments: Vec<ScheduleSegment>,
    /// True when the scan could not reach the requested segment count.
    pub exhausted: bool,
    pub d_param: f64,
    pub l_pole: f64,
    pub delta: f64,
}

impl SegmentSchedule {
    pub fn min_separation(&self) -> f64 {
        10.0 * self.l_pole + 10.0 * self.delta + 1.0
    }

    /// Checks the schedule invariants exactly: geodesic segments on rays,
    /// pairwise separation, minimum and strictly increasing lengths, and
    /// boundary projections near the endpoints.
    pub fn verify(&self, graph: &GeodesicGraph, boundary: &BoundaryApprox) -> Result<()> {
        let mut last_len = 0usize;
        for (i, seg) in self.segments.iter().enumerate() {
            seg.path.validate(graph, true)?;
            if (seg.path.len() as f64) < 100.0 * self.d_param {
                return Err(Error::InvariantViolation(format!(
                    "segment {i} shorter than 100D"
                )));
            }
            if i > 0 && seg.path.len() <= last_len {
                return Err(Error::InvariantViolation(
                    "segment lengths not strictly increasing".into(),
                ));
            }
            last_len = seg.path.len();
            let y = seg.path.first();
            let z = seg.path.last();
            for &rep in &boundary.representatives {
                for p in graph.projection_set(&seg.path, rep) {
                    let near = (graph.dist(p, y) as f64) <= self.d_param
                        || (graph.dist(p, z) as f64) <= self.d_param;
                    if !near {
                        return Err(Error::InvariantViolation(format!(
                            "projection of representative {rep} lands mid-segment {i}"
                        )));
                    }
                }
            }
            for other in &self.segments[..i] {
                let sep = graph.set_distance(&seg.path.vertices, &other.path.vertices) as f64;
                if sep < self.min_separation() {
                    return Err(Error::InvariantViolation(format!(
                        "segments too close: {sep} < {}",
                        self.min_separation()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Greedy scan of root-to-leaf rays for subsegments whose interior stays
/// clear of the `D`-neighborhood of every boundary projection, filtered to
/// the schedule invariants. An empty schedule is a meaningful outcome: it is
/// what dense boundary projections produce.
pub fn find_segments(
    graph: &GeodesicGraph,
    root: usize,
    boundary: &BoundaryApprox,
    l_pole: f64,
    delta: f64,
    d_param: f64,
    count_target: usize,
) -> Result<SegmentSchedule> {
    if d_param <= 0.0 {
        return Err(Error::InvalidInput("D must be positive".into()));
    }
    let mut candidates: Vec<(usize, usize, Path)> = Vec::new();
    for (order, &leaf) in boundary.representatives.iter().enumerate() {
        let ray = graph.shortest_geodesic(root, leaf)?;
        let ray_len = ray.len();
        if ray_len == 0 {
            continue;
        }
        // Positions on the ray hit by some boundary projection.
        let mut proj_positions: Vec<usize> = Vec::new();
        for &rep in &boundary.representatives {
            for p in graph.projection_set(&ray, rep) {
                let pos = ray.vertices.iter().position(|&v| v == p).unwrap();
                proj_positions.push(pos);
            }
        }
        proj_positions.sort_unstable();
        proj_positions.dedup();
        // A position is blocked when it sits within D of a projection;
        // distances along a geodesic are arclength differences.
        let blocked = |t: usize| {
            proj_positions
                .iter()
                .any(|&s| (t.abs_diff(s) as f64) <= d_param)
        };
        let mut t = 0;
        while t <= ray_len {
            if blocked(t) {
                t += 1;
                continue;
            }
            let start = t;
            while t < ray_len && !blocked(t + 1) {
                t += 1;
            }
            if t > start {
                candidates.push((t - start, order, ray.subpath(start, t)));
            }
            t += 1;
        }
    }
    // Keep corridors meeting the length threshold and the endpoint-projection
    // invariant on the subsegment itself.
    candidates.retain(|(len, _, path)| {
        if (*len as f64) < 100.0 * d_param {
            return false;
        }
        let y = path.first();
        let z = path.last();
        boundary.representatives.iter().all(|&rep| {
            graph.projection_set(path, rep).into_iter().all(|p| {
                (graph.dist(p, y) as f64) <= d_param || (graph.dist(p, z) as f64) <= d_param
            })
        })
    });
    // Shortest-first greedy keeps lengths strictly increasing and enforces
    // pairwise separation.
    candidates.sort_by_key(|(len, order, path)| (*len, *order, path.first()));
    let min_separation = 10.0 * l_pole + 10.0 * delta + 1.0;
    let mut segments: Vec<ScheduleSegment> = Vec::new();
    for (len, order, path) in candidates {
        if segments.len() >= count_target {
            break;
        }
        if let Some(last) = segments.last() {
            if len <= last.path.len() {
                continue;
            }
        }
        let far_enough = segments.iter().all(|kept| {
            graph.set_distance(&path.vertices, &kept.path.vertices) as f64 >= min_separation
        });
        if !far_enough {
            continue;
        }
        segments.push(ScheduleSegment {
            leaf: boundary.representatives[order],
            path,
        });
    }
    let exhausted = segments.len() < count_target;
    let schedule = SegmentSchedule {
        segments,
        exhausted,
        d_param,
        l_pole,
        delta,
    };
    schedule.verify(graph, boundary)?;
    Ok(schedule)
}

/// Builds the stretch map of one segment: identity on the two near sets,
/// and on everything else the composition of projection, the chart of the
/// trimmed core `[y', z']`, the piecewise stretch, and rounding half toward
/// `y'`.
pub fn build_phi_segment(
    graph: &GeodesicGraph,
    segment: &Path,
    d_param: f64,
) -> Result<VertexMap> {
    segment.validate(graph, true)?;
    let len = segment.len();
    if (len as f64) < 100.0 * d_param {
        return Err(Error::SegmentTooShort {
            len,
            required: 100.0 * d_param,
        });
    }
    let near = near_sets(graph, segment, 3.0 * d_param)?;
    // Trimmed core: arclengths strictly farther than 3D from both endpoints.
    let t_lo = (3.0 * d_param).floor() as usize + 1;
    let t_hi = len - t_lo;
    if t_hi <= t_lo {
        return Err(Error::SegmentTooShort {
            len,
            required: 100.0 * d_param,
        });
    }
    let core_len = (t_hi - t_lo) as f64;
    let mut map: Vec<usize> = (0..graph.vertex_count()).collect();
    for (x, slot) in map.iter_mut().enumerate() {
        if near.in_union(x) {
            continue;
        }
        let proj = graph.projection_set(segment, x);
        let candidate = proj
            .iter()
            .filter_map(|&p| {
                let pos = segment.vertices.iter().position(|&v| v == p).unwrap();
                let off_start = (graph.dist(p, segment.first()) as f64) > 3.0 * d_param;
                let off_end = (graph.dist(p, segment.last()) as f64) > 3.0 * d_param;
                (off_start && off_end).then_some((p, pos))
            })
            .min();
        let (_, pos) = candidate.ok_or_else(|| {
            Error::InvariantViolation(format!(
                "vertex {x} is outside both near sets but has no projection in the core"
            ))
        })?;
        let chart = (pos - t_lo) as f64;
        let image = phi_l(chart, core_len)?;
        let target = t_lo + round_half_down(image);
        *slot = segment.at(target);
    }
    Ok(VertexMap::new(graph, map))
}

/// Composes the per-segment maps of a schedule. Every vertex must be moved
/// by at most one factor; the operation verifies that and fails loudly when
/// the schedule violates it.
pub fn compose_schedule(
    graph: &GeodesicGraph,
    schedule: &SegmentSchedule,
) -> Result<VertexMap> {
    let factors: Vec<VertexMap> = schedule
        .segments
        .iter()
        .map(|seg| build_phi_segment(graph, &seg.path, schedule.d_param))
        .collect::<Result<_>>()?;
    let mut owner: Vec<Option<usize>> = vec![None; graph.vertex_count()];
    for (i, f) in factors.iter().enumerate() {
        for v in f.moved_vertices() {
            if let Some(j) = owner[v] {
                return Err(Error::InvariantViolation(format!(
                    "vertex {v} moved by segments {j} and {i}; moved sets overlap"
                )));
            }
            owner[v] = Some(i);
        }
    }
    let mut map: Vec<usize> = (0..graph.vertex_count()).collect();
    for (v, slot) in owner.iter().enumerate() {
        if let Some(i) = slot {
            map[v] = factors[*i].apply(v);
        }
    }
    Ok(VertexMap::new(graph, map))
}

/// How pairs entering a constant fit were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    Exhaustive,
    Sampled,
}

/// Pair sampling policy for constant fitting.
#[derive(Debug, Clone, Serialize)]
pub struct PairSample {
    /// Exhaustive below this many pairs, seeded sample of this size above.
    pub cap: usize,
    pub seed: u64,
}

impl Default for PairSample {
    fn default() -> Self {
        Self {
            cap: 2_000_000,
            seed: 0,
        }
    }
}

/// Fitted quasi-isometry constants.
#[derive(Debug, Clone, Serialize)]
pub struct QiFit {
    pub k: f64,
    pub c: f64,
    pub pairs_scanned: usize,
    pub mode: PairMode,
    pub seed: u64,
}

/// Sweeps `K` over the grid `1, 1.25, ..., 8`, computing for each the
/// minimal `C` making both quasi-isometry inequalities hold on every
/// scanned pair, and reports the smallest `K` whose `C` comes within
/// `2 * best + 1` of the best `C` on the grid.
///
/// Plain lexicographic (C, K) minimization drifts to the grid edge: at huge
/// `K` the lower inequality is so weak that only collapsed pairs contribute
/// to `C`. The threshold keeps the fit at the smallest multiplicative
/// constant that actually explains the map.
pub fn fit_qi_constants(
    graph: &GeodesicGraph,
    map: &VertexMap,
    sample: &PairSample,
) -> QiFit {
    let n = graph.vertex_count();
    let total_pairs = n * (n - 1) / 2;
    let (pairs, mode): (Vec<(usize, usize)>, PairMode) = if total_pairs <= sample.cap {
        let mut out = Vec::with_capacity(total_pairs);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push((i, j));
            }
        }
        (out, PairMode::Exhaustive)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sample.seed);
        let mut out = Vec::with_capacity(sample.cap);
        while out.len() < sample.cap {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i != j {
                out.push((i.min(j), i.max(j)));
            }
        }
        (out, PairMode::Sampled)
    };
    let grid: Vec<f64> = (0..=28).map(|i| 1.0 + 0.25 * i as f64).collect();
    let required: Vec<f64> = grid
        .par_iter()
        .map(|&k| {
            pairs
                .iter()
                .map(|&(i, j)| {
                    let d = graph.dist(i, j) as f64;
                    let df = graph.dist(map.apply(i), map.apply(j)) as f64;
                    (df - k * d).max(d / k - df).max(0.0)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let best_c = required.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = 2.0 * best_c + 1.0;
    let (k, c) = grid
        .iter()
        .zip(&required)
        .find(|(_, &c)| c <= threshold)
        .map(|(&k, &c)| (k, c))
        .expect("threshold admits at least the best grid point");
    QiFit {
        k,
        c,
        pairs_scanned: pairs.len(),
        mode,
        seed: sample.seed,
    }
}

/// Max displacement among the vertices farther than `radius` from every
/// schedule segment; zero means the map fixes everything far away.
pub fn far_vertex_displacement(
    graph: &GeodesicGraph,
    map: &VertexMap,
    segments: &[&Path],
    radius: f64,
) -> u32 {
    (0..graph.vertex_count())
        .filter(|&v| {
            segments
                .iter()
                .all(|seg| (graph.dist_to_path(v, seg) as f64) > radius)
        })
        .map(|v| graph.dist(v, map.apply(v)))
        .max()
        .unwrap_or(0)
}

/// Least index `n0` with at least one pair in range such that every later
/// gap beats `K * gap + C`; `None` when the range holds no such index.
pub fn lacunary_gap_threshold(k: f64, c: f64, spec: &LacunarySpec) -> Option<i32> {
    if k < 1.0 || c < 0.0 {
        return None;
    }
    if spec.n_max - spec.n_min < 2 {
        return None;
    }
    let gap = |n: i32| -> f64 {
        let hi = 1u128 << (1u32 << (n + 1));
        let lo = 1u128 << (1u32 << n);
        (hi - lo) as f64
    };
    // Gaps g_n for n in [n_min, n_max - 1].
    'outer: for n0 in spec.n_min..=(spec.n_max - 2) {
        for n in n0..spec.n_max {
            for m in (n + 1)..spec.n_max {
                if gap(m) <= k * gap(n) + c {
                    continue 'outer;
                }
            }
        }
        return Some(n0);
    }
    None
}

/// Rescales each planned tooth of a comb to a target length, fixing the tree
/// pointwise. Tooth positions map through the rounded linear rescale,
/// clamped to the existing tooth.
pub fn comb_stretch_map(comb: &CombGraph, plan: &[(usize, usize)]) -> Result<VertexMap> {
    let mut map: Vec<usize> = (0..comb.graph.vertex_count()).collect();
    for &(tooth, target) in plan {
        if tooth >= comb.teeth.len() {
            return Err(Error::MissingTooth {
                index: tooth,
                count: comb.teeth.len(),
            });
        }
        let len = comb.tooth_len(tooth);
        for pos in 1..=len {
            let scaled = pos as f64 * target as f64 / len as f64;
            let new_pos = round_half_down(scaled).min(len);
            map[comb.teeth[tooth][pos - 1]] = if new_pos == 0 {
                comb.attachment
            } else {
                comb.teeth[tooth][new_pos - 1]
            };
        }
    }
    Ok(VertexMap::new(&comb.graph, map))
}

/// Per-segment measurements for reports.
#[derive(Debug, Clone, Serialize)]
pub struct SegmentStats {
    pub leaf: usize,
    pub start: usize,
    pub end: usize,
    pub length: usize,
    /// Length of the trimmed core the stretch acts on.
    pub core_length: usize,
    pub displacement: u32,
    pub k: f64,
    pub c: f64,
}

/// Core length of a segment after the 3D trim.
pub fn core_length(segment_len: usize, d_param: f64) -> usize {
    let t_lo = (3.0 * d_param).floor() as usize + 1;
    segment_len.saturating_sub(2 * t_lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_comb, gen_lacunary, gen_tree, CombSpec};
    use crate::filling::{build_filling, leaf_boundary, pole_radius, FillingParams};
    use crate::graph::shapes::path_graph;
    use crate::hyperbolicity::four_point_delta;
    use proptest::prelude::*;

    #[test]
    fn near_sets_basics_on_path() {
        let g = path_graph(11);
        let seg = g.shortest_geodesic(0, 10).unwrap();
        let near = near_sets(&g, &seg, 0.0).unwrap();
        // y itself belongs to X_y(0).
        assert!(near.contains_start(0));
        assert!(near.contains_end(10));
        // The midpoint projects to itself, so it is in neither set for
        // R < len/2.
        let near = near_sets(&g, &seg, 4.0).unwrap();
        assert!(!near.in_union(5));
        assert!(near.disjoint());
    }

    #[test]
    fn near_sets_on_tree_are_hanging_components() {
        let t = gen_tree(3, 4).unwrap();
        let seg = t
            .graph
            .shortest_geodesic(t.leaves[0], t.leaves[23])
            .unwrap();
        let r = 2.0;
        let near = near_sets(&t.graph, &seg, r).unwrap();
        let y = seg.first();
        let z = seg.last();
        for v in 0..t.graph.vertex_count() {
            // Tree projections are unique, so membership reduces to where
            // the single projection sits.
            let proj = t.graph.projection_set(&seg, v);
            assert_eq!(proj.len(), 1);
            let expected_start = (t.graph.dist(proj[0], y) as f64) <= r;
            let expected_end = (t.graph.dist(proj[0], z) as f64) <= r;
            assert_eq!(near.contains_start(v), expected_start);
            assert_eq!(near.contains_end(v), expected_end);
        }
    }

    #[test]
    fn phi_l_fixed_values() {
        assert_eq!(phi_l(0.0, 30.0).unwrap(), 0.0);
        assert_eq!(phi_l(10.0, 30.0).unwrap(), 20.0);
        // Second branch: 2*30/3 + (16 - 10)/2 = 23.
        assert_eq!(phi_l(16.0, 30.0).unwrap(), 23.0);
        assert_eq!(phi_l(30.0, 30.0).unwrap(), 30.0);
        assert!(phi_l(-1.0, 30.0).is_err());
        assert!(phi_l(31.0, 30.0).is_err());
    }

    proptest! {
        #[test]
        fn phi_l_is_increasing_bijective_two_lipschitz(
            l in 1u32..200,
            a in 0u32..=600,
            b in 0u32..=600,
        ) {
            let l = l as f64;
            // Rational arguments t = l * a / 600.
            let t = l * a.min(600) as f64 / 600.0;
            let s = l * b.min(600) as f64 / 600.0;
            let ft = phi_l(t, l).unwrap();
            let fs = phi_l(s, l).unwrap();
            prop_assert!(ft >= 0.0 && ft <= l + 1e-9);
            if t < s {
                prop_assert!(ft < fs);
            }
            // (2, 0) distortion both ways.
            prop_assert!((ft - fs).abs() <= 2.0 * (t - s).abs() + 1e-9);
            prop_assert!((ft - fs).abs() >= (t - s).abs() / 2.0 - 1e-9);
        }
    }

    #[test]
    fn phi_segment_on_long_path() {
        let g = path_graph(121);
        let seg = g.shortest_geodesic(0, 120).unwrap();
        let d_param = 1.0;
        let map = build_phi_segment(&g, &seg, d_param).unwrap();
        // Endpoints fixed.
        assert_eq!(map.apply(0), 0);
        assert_eq!(map.apply(120), 120);
        // Core is [4, 116]; the one-third point moves by core/3.
        let core = core_length(120, d_param);
        assert_eq!(core, 112);
        let third = core / 3;
        assert_eq!(map.apply(4 + third), 4 + 2 * third);
        assert!(map.displacement >= (core / 3) as u32);
    }

    #[test]
    fn phi_segment_too_short_errors() {
        let g = path_graph(30);
        let seg = g.shortest_geodesic(0, 29).unwrap();
        let err = build_phi_segment(&g, &seg, 1.0).unwrap_err();
        assert!(matches!(err, Error::SegmentTooShort { .. }));
    }

    #[test]
    fn compose_of_disjoint_segments_takes_max_displacement() {
        let g = path_graph(351);
        let seg1 = g.shortest_geodesic(0, 120).unwrap();
        let seg2 = g.shortest_geodesic(200, 350).unwrap();
        let m1 = build_phi_segment(&g, &seg1, 1.0).unwrap();
        let m2 = build_phi_segment(&g, &seg2, 1.0).unwrap();
        let schedule = SegmentSchedule {
            segments: vec![
                ScheduleSegment {
                    leaf: 120,
                    path: seg1,
                },
                ScheduleSegment {
                    leaf: 350,
                    path: seg2,
                },
            ],
            exhausted: false,
            d_param: 1.0,
            l_pole: 0.0,
            delta: 0.0,
        };
        let composed = compose_schedule(&g, &schedule).unwrap();
        assert_eq!(
            composed.displacement,
            m1.displacement.max(m2.displacement)
        );
        // Single-segment composition equals the segment map.
        let single = SegmentSchedule {
            segments: vec![schedule.segments[0].clone()],
            ..schedule.clone()
        };
        let one = compose_schedule(&g, &single).unwrap();
        assert_eq!(one.map, m1.map);
    }

    #[test]
    fn compose_empty_schedule_is_identity() {
        let g = path_graph(10);
        let schedule = SegmentSchedule {
            segments: vec![],
            exhausted: true,
            d_param: 1.0,
            l_pole: 0.0,
            delta: 0.0,
        };
        let m = compose_schedule(&g, &schedule).unwrap();
        assert_eq!(m.displacement, 0);
        assert_eq!(m.map, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn overlapping_moved_sets_fail_loudly() {
        let g = path_graph(121);
        let seg = g.shortest_geodesic(0, 120).unwrap();
        let schedule = SegmentSchedule {
            segments: vec![
                ScheduleSegment {
                    leaf: 120,
                    path: seg.clone(),
                },
                ScheduleSegment { leaf: 120, path: seg },
            ],
            exhausted: false,
            d_param: 1.0,
            l_pole: 0.0,
            delta: 0.0,
        };
        let err = compose_schedule(&g, &schedule).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn identity_and_isometry_fit_to_one_zero() {
        let g = path_graph(50);
        let fit = fit_qi_constants(&g, &VertexMap::identity(&g), &PairSample::default());
        assert_eq!((fit.k, fit.c), (1.0, 0.0));
        assert_eq!(fit.mode, PairMode::Exhaustive);
        // Relabeling isometry: reverse the path.
        let rev = VertexMap::new(&g, (0..50).rev().collect());
        let fit = fit_qi_constants(&g, &rev, &PairSample::default());
        assert_eq!((fit.k, fit.c), (1.0, 0.0));
    }

    #[test]
    fn phi_fit_on_path_is_close_to_two() {
        let g = path_graph(301);
        let seg = g.shortest_geodesic(0, 300).unwrap();
        let map = build_phi_segment(&g, &seg, 1.0).unwrap();
        let fit = fit_qi_constants(&g, &map, &PairSample::default());
        assert!(fit.k <= 2.0, "fitted k = {}", fit.k);
        assert!(fit.c <= 10.0, "fitted c = {}", fit.c);
    }

    #[test]
    fn phi_fits_stable_across_segment_lengths() {
        // Maps on segments of lengths 100D, 200D, 400D share their fitted
        // constants within 25%: the constants depend on the trim scale, not
        // the segment length.
        let d_param = 1.0;
        let sample = PairSample::default();
        let mut fits = Vec::new();
        for len in [100usize, 200, 400] {
            let g = path_graph(len + 1);
            let seg = g.shortest_geodesic(0, len).unwrap();
            let map = build_phi_segment(&g, &seg, d_param).unwrap();
            let fit = fit_qi_constants(&g, &map, &sample);
            fits.push((fit.k, fit.c));
        }
        for (k, c) in &fits[1..] {
            assert!(k.max(fits[0].0) <= 1.25 * k.min(fits[0].0), "k drifted: {fits:?}");
            assert!(c.max(fits[0].1) <= 1.25 * c.min(fits[0].1), "c drifted: {fits:?}");
        }
    }

    #[test]
    fn comb_teeth_receive_projections_only_at_the_attachment() {
        // A tooth, viewed as a geodesic segment from the attachment to its
        // tip, has every tree-leaf projection exactly at the attachment, so
        // long teeth qualify under the endpoint-projection criterion.
        let comb = gen_comb(&CombSpec {
            tree_valence: 3,
            tree_depth: 3,
            teeth: vec![3, 7],
        })
        .unwrap();
        for tooth in 0..comb.teeth.len() {
            let tip = comb.tooth_tip(tooth);
            let seg = comb.graph.shortest_geodesic(comb.attachment, tip).unwrap();
            for &leaf in &comb.tree_leaves {
                assert_eq!(
                    comb.graph.projection_set(&seg, leaf),
                    vec![comb.attachment]
                );
            }
        }
    }

    #[test]
    fn gap_threshold_examples() {
        let spec = LacunarySpec { n_min: 0, n_max: 4 };
        // Gaps strictly increase, so K=1, C=0 works immediately.
        assert_eq!(lacunary_gap_threshold(1.0, 0.0, &spec), Some(0));
        // Five-term scan for K=3, C=10: g = [2, 12, 240, 65280]; n0 = 0
        // fails at (0, 1) since 12 <= 3*2 + 10, and n0 = 1 works.
        assert_eq!(lacunary_gap_threshold(3.0, 10.0, &spec), Some(1));
        // Huge K relative to the range.
        assert_eq!(lacunary_gap_threshold(1e6, 0.0, &spec), None);
        // Range with no pair at all.
        assert_eq!(
            lacunary_gap_threshold(1.0, 0.0, &LacunarySpec { n_min: 0, n_max: 1 }),
            None
        );
    }

    #[test]
    fn comb_stretch_identity_and_halving() {
        let comb = gen_comb(&CombSpec {
            tree_valence: 3,
            tree_depth: 4,
            teeth: vec![2, 4, 6, 8, 10, 12],
        })
        .unwrap();
        // Identity plan.
        let id_plan: Vec<(usize, usize)> =
            (0..6).map(|i| (i, comb.tooth_len(i))).collect();
        let m = comb_stretch_map(&comb, &id_plan).unwrap();
        assert_eq!(m.displacement, 0);
        // Halving every tooth moves the longest tip by half its length.
        let plan: Vec<(usize, usize)> = (0..6).map(|i| (i, comb.tooth_len(i) / 2)).collect();
        let m = comb_stretch_map(&comb, &plan).unwrap();
        assert_eq!(m.displacement, 6);
        for v in 0..comb.tree_vertex_count {
            assert_eq!(m.apply(v), v, "tree vertex {v} moved");
        }
        // A missing tooth errors.
        assert!(matches!(
            comb_stretch_map(&comb, &[(9, 1)]),
            Err(Error::MissingTooth { index: 9, count: 6 })
        ));
    }

    #[test]
    fn cantor_filling_yields_empty_schedule() {
        use crate::generators::{gen_cantor, CantorSpec};
        // Deep filling of the Cantor endpoints: boundary projections pepper
        // every ray, so no corridor reaches the length threshold.
        let space = gen_cantor(&CantorSpec::default()).unwrap();
        let f = build_filling(
            &space,
            &FillingParams {
                r: 0.5,
                max_level: 12,
                ball_factor: 2.0,
            },
        )
        .unwrap();
        let b = leaf_boundary(&f);
        let l = pole_radius(&f.graph, f.root, &b.representatives).unwrap() as f64;
        let delta = four_point_delta(&f.graph);
        let schedule =
            find_segments(&f.graph, f.root, &b, l, delta, 0.5, 2).unwrap();
        assert!(schedule.segments.is_empty());
        assert!(schedule.exhausted);
    }

    #[test]
    fn lacunary_filling_yields_segments_with_verified_invariants() {
        let space = gen_lacunary(&LacunarySpec { n_min: 0, n_max: 3 }).unwrap();
        let f = build_filling(
            &space,
            &FillingParams {
                r: 0.5,
                max_level: 40,
                ball_factor: 2.0,
            },
        )
        .unwrap();
        let b = leaf_boundary(&f);
        let l = pole_radius(&f.graph, f.root, &b.representatives).unwrap() as f64;
        let delta = four_point_delta(&f.graph);
        let d_param = 0.25;
        let schedule = find_segments(&f.graph, f.root, &b, l, delta, d_param, 1).unwrap();
        assert!(
            !schedule.segments.is_empty(),
            "expected a corridor on the isolated-point ray"
        );
        schedule.verify(&f.graph, &b).unwrap();
        // Near sets of every schedule segment are disjoint, and everything
        // outside their union hugs the segment.
        for seg in &schedule.segments {
            let near = near_sets(&f.graph, &seg.path, 3.0 * d_param).unwrap();
            assert!(near.disjoint());
            for v in 0..f.graph.vertex_count() {
                if !near.in_union(v) {
                    assert!(
                        (f.graph.dist_to_path(v, &seg.path) as f64) <= l + 3.0 * delta,
                        "vertex {v} far from segment yet not in a near set"
                    );
                }
            }
        }
        // Per-segment displacements grow along the schedule while the
        // fitted constants stay put.
        let sample = PairSample::default();
        let mut last_disp = 0;
        for seg in &schedule.segments {
            let map = build_phi_segment(&f.graph, &seg.path, d_param).unwrap();
            assert!(map.displacement > last_disp);
            last_disp = map.displacement;
            let fit = fit_qi_constants(&f.graph, &map, &sample);
            assert!(fit.k <= 2.0 && fit.c <= 10.0, "fit ({}, {})", fit.k, fit.c);
        }
        // The composed map moves the one-third point and fixes far vertices.
        let composed = compose_schedule(&f.graph, &schedule).unwrap();
        let core = core_length(schedule.segments[0].path.len(), d_param);
        assert!(composed.displacement as usize >= core / 3 - 1);
        let paths: Vec<&Path> = schedule.segments.iter().map(|s| &s.path).collect();
        let far = far_vertex_displacement(&f.graph, &composed, &paths, l + 3.0 * delta);
        assert_eq!(far, 0);
        // Everything sits within L + 3*delta + 1 of the image.
        let mut image: Vec<usize> = composed.map.clone();
        image.sort_unstable();
        image.dedup();
        let to_image = f.graph.multi_source_distances(&image);
        let worst = to_image.iter().copied().max().unwrap();
        assert!(
            (worst as f64) <= l + 3.0 * delta + 1.0,
            "image not roughly full: gap {worst}"
        );
    }
}
