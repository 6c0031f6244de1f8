//! Gromov products and the three hyperbolicity constants.
//!
//! `four_point_delta` is exact and exhaustive (quartic scan over unordered
//! quadruples, integer arithmetic in doubled units). The Rips and thin
//! constants quantify over geodesic triangles, so they are exhaustive only
//! up to a vertex cap and seeded-sampled above it.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GeodesicGraph;

/// Gromov product from the three pairwise distances: `(d(x,w)+d(y,w)-d(x,y))/2`.
#[inline]
pub fn gromov_product(d_wx: f64, d_wy: f64, d_xy: f64) -> f64 {
    (d_wx + d_wy - d_xy) / 2.0
}

/// Gromov product of graph vertices `x, y` with respect to basepoint `w`,
/// in hop units (may be half-integral).
pub fn graph_gromov_product(graph: &GeodesicGraph, w: usize, x: usize, y: usize) -> f64 {
    gromov_product(
        graph.dist(w, x) as f64,
        graph.dist(w, y) as f64,
        graph.dist(x, y) as f64,
    )
}

/// Gromov products of a vertex family with respect to a fixed basepoint.
#[derive(Debug, Clone, Serialize)]
pub struct GromovProductTable {
    /// Basepoint vertex.
    pub basepoint: usize,
    /// The vertices the table is indexed by.
    pub members: Vec<usize>,
    /// Row-major `members.len() x members.len()` product values.
    pub values: Vec<f64>,
}

impl GromovProductTable {
    pub fn compute(graph: &GeodesicGraph, basepoint: usize, members: &[usize]) -> Self {
        let k = members.len();
        let mut values = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                values[i * k + j] =
                    graph_gromov_product(graph, basepoint, members[i], members[j]);
            }
        }
        Self {
            basepoint,
            members: members.to_vec(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.members.len() + j]
    }
}

/// Doubled four-point defect: max over unordered quadruples of
/// `largest pair sum - second largest pair sum` among the three pairings.
fn four_point_double_delta(dist: &[u32], n: usize) -> u32 {
    if n < 4 {
        return 0;
    }
    (0..n - 3)
        .into_par_iter()
        .map(|i| {
            let mut best = 0u32;
            let di = &dist[i * n..(i + 1) * n];
            for j in (i + 1)..(n - 2) {
                let dij = di[j];
                let dj = &dist[j * n..(j + 1) * n];
                for k in (j + 1)..(n - 1) {
                    let dik = di[k];
                    let djk = dj[k];
                    let dk = &dist[k * n..(k + 1) * n];
                    for l in (k + 1)..n {
                        let s1 = dij + dk[l];
                        let s2 = dik + dj[l];
                        let s3 = di[l] + djk;
                        let (a, b) = if s1 >= s2 { (s1, s2) } else { (s2, s1) };
                        let defect = if s3 >= a {
                            s3 - a
                        } else if s3 >= b {
                            a - s3
                        } else {
                            a - b
                        };
                        if defect > best {
                            best = defect;
                        }
                    }
                }
            }
            best
        })
        .max()
        .unwrap_or(0)
}

/// Exact four-point hyperbolicity constant of the graph metric.
pub fn four_point_delta(graph: &GeodesicGraph) -> f64 {
    four_point_double_delta(graph.dist_matrix(), graph.vertex_count()) as f64 / 2.0
}

/// Sampling parameters for the triangle-based constants.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SampleSpec {
    /// Number of seeded triangles when sampling.
    pub triangles: usize,
    /// RNG seed; two runs with the same seed scan the same triangles.
    pub seed: u64,
    /// Graphs with at most this many vertices are scanned exhaustively.
    pub exhaustive_cap: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            triangles: 2000,
            seed: 0,
            exhaustive_cap: 60,
        }
    }
}

impl SampleSpec {
    pub fn exhaustive_for(&self, graph: &GeodesicGraph) -> bool {
        graph.vertex_count() <= self.exhaustive_cap
    }

    /// The triangle list the constants quantify over: every unordered vertex
    /// triple below the cap, a seeded sample above it.
    fn triangle_list(&self, graph: &GeodesicGraph) -> Vec<(usize, usize, usize)> {
        let n = graph.vertex_count();
        if self.exhaustive_for(graph) {
            let mut out = Vec::new();
            for x in 0..n {
                for y in (x + 1)..n {
                    for z in (y + 1)..n {
                        out.push((x, y, z));
                    }
                }
            }
            return out;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.triangles);
        while out.len() < self.triangles {
            let x = rng.gen_range(0..n);
            let y = rng.gen_range(0..n);
            let z = rng.gen_range(0..n);
            if x != y && y != z && x != z {
                out.push((x, y, z));
            }
        }
        out
    }
}

fn triangle_sides(
    graph: &GeodesicGraph,
    x: usize,
    y: usize,
    z: usize,
) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let sxy = graph.shortest_geodesic(x, y).expect("valid vertices");
    let syz = graph.shortest_geodesic(y, z).expect("valid vertices");
    let sxz = graph.shortest_geodesic(x, z).expect("valid vertices");
    (sxy.vertices, syz.vertices, sxz.vertices)
}

/// Rips constant over the scanned triangles: the largest distance from a
/// point of one side to the union of the other two sides.
pub fn rips_delta(graph: &GeodesicGraph, spec: &SampleSpec) -> f64 {
    let triangles = spec.triangle_list(graph);
    triangles
        .par_iter()
        .map(|&(x, y, z)| {
            let (sxy, syz, sxz) = triangle_sides(graph, x, y, z);
            let mut worst = 0u32;
            for (side, others) in [
                (&sxy, [&syz, &sxz]),
                (&syz, [&sxy, &sxz]),
                (&sxz, [&sxy, &syz]),
            ] {
                for &p in side.iter() {
                    let d = others
                        .iter()
                        .flat_map(|o| o.iter())
                        .map(|&q| graph.dist(p, q))
                        .min()
                        .unwrap_or(0);
                    worst = worst.max(d);
                }
            }
            worst
        })
        .max()
        .unwrap_or(0) as f64
}

/// Where a side vertex lands on the comparison tripod, in doubled units
/// measured from the tripod center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum TripodSpot {
    Center,
    Leg(u8, u32),
}

fn tripod_spot(double_t: u32, double_internal: u32, near_leg: u8, far_leg: u8) -> TripodSpot {
    match double_t.cmp(&double_internal) {
        std::cmp::Ordering::Less => TripodSpot::Leg(near_leg, double_internal - double_t),
        std::cmp::Ordering::Equal => TripodSpot::Center,
        std::cmp::Ordering::Greater => TripodSpot::Leg(far_leg, double_t - double_internal),
    }
}

/// Thin constant over the scanned triangles: the largest diameter of a fiber
/// of the comparison-tripod map.
///
/// Side `[x, y]` maps isometrically onto the legs at `v_x` and `v_y`; two side
/// vertices share a fiber exactly when they land on the same leg at the same
/// distance from the center. Internal points sit at the Gromov products
/// `(y|z)_x`, `(x|z)_y`, `(x|y)_z`, which are half-integral in hop units, so
/// everything is keyed in doubled units.
pub fn thin_delta(graph: &GeodesicGraph, spec: &SampleSpec) -> f64 {
    const LEG_X: u8 = 0;
    const LEG_Y: u8 = 1;
    const LEG_Z: u8 = 2;
    let triangles = spec.triangle_list(graph);
    triangles
        .par_iter()
        .map(|&(x, y, z)| {
            let (sxy, syz, sxz) = triangle_sides(graph, x, y, z);
            let dxy = graph.dist(x, y);
            let dyz = graph.dist(y, z);
            let dxz = graph.dist(x, z);
            // 2a = d(x,y)+d(x,z)-d(y,z), the doubled product (y|z)_x; same
            // pattern at the other corners.
            let two_a = dxy + dxz - dyz;
            let two_b = dxy + dyz - dxz;
            let mut fibers: HashMap<TripodSpot, Vec<usize>> = HashMap::new();
            for (t, &v) in sxy.iter().enumerate() {
                fibers
                    .entry(tripod_spot(2 * t as u32, two_a, LEG_X, LEG_Y))
                    .or_default()
                    .push(v);
            }
            for (t, &v) in sxz.iter().enumerate() {
                fibers
                    .entry(tripod_spot(2 * t as u32, two_a, LEG_X, LEG_Z))
                    .or_default()
                    .push(v);
            }
            for (t, &v) in syz.iter().enumerate() {
                fibers
                    .entry(tripod_spot(2 * t as u32, two_b, LEG_Y, LEG_Z))
                    .or_default()
                    .push(v);
            }
            let mut worst = 0u32;
            for members in fibers.values() {
                for (i, &p) in members.iter().enumerate() {
                    for &q in &members[i + 1..] {
                        worst = worst.max(graph.dist(p, q));
                    }
                }
            }
            worst
        })
        .max()
        .unwrap_or(0) as f64
}

/// The three constants together with the sampling record.
#[derive(Debug, Clone, Serialize)]
pub struct HyperbolicityReport {
    pub delta_four_point: f64,
    pub delta_rips: f64,
    pub delta_thin: f64,
    pub sample_spec: SampleSpecRecord,
}

/// Sampling parameters as they entered a report, plus whether the scan was
/// exhaustive for the graph at hand.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SampleSpecRecord {
    pub triangles: usize,
    pub seed: u64,
    pub exhaustive_cap: usize,
    pub exhaustive: bool,
}

/// Runs all three constants on one graph.
pub fn analyze(graph: &GeodesicGraph, spec: &SampleSpec) -> HyperbolicityReport {
    HyperbolicityReport {
        delta_four_point: four_point_delta(graph),
        delta_rips: rips_delta(graph, spec),
        delta_thin: thin_delta(graph, spec),
        sample_spec: SampleSpecRecord {
            triangles: spec.triangles,
            seed: spec.seed,
            exhaustive_cap: spec.exhaustive_cap,
            exhaustive: spec.exhaustive_for(graph),
        },
    }
}

/// Working delta used downstream where a single constant is needed:
/// the exact four-point constant.
pub fn working_delta(graph: &GeodesicGraph) -> f64 {
    four_point_delta(graph)
}

/// Validates vertex arguments and returns the Gromov product; the arithmetic
/// itself cannot fail.
pub fn checked_gromov_product(
    graph: &GeodesicGraph,
    w: usize,
    x: usize,
    y: usize,
) -> Result<f64> {
    let n = graph.vertex_count();
    for v in [w, x, y] {
        if v >= n {
            return Err(Error::VertexOutOfRange { index: v, len: n });
        }
    }
    Ok(graph_gromov_product(graph, w, x, y))
}
