//! Quasi-centroid sets of boundary triples and how well they cover the
//! space.
//!
//! A centroid of a triple is a vertex within `rho` of all three side
//! geodesics. Quasi-geodesics are instantiated as the lexicographic
//! geodesics (`K = 1`, `C = 0`), which makes every computed set a certified
//! inner approximation of the general quasi-geodesic set; reports record
//! the instantiation. The coverage statistic `M` is the largest distance
//! from any vertex to the union of centroid sets over the scanned triples.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filling::BoundaryApprox;
use crate::graph::{GeodesicGraph, Path};

/// Quasi-centroid parameters. Only the geodesic instantiation is computed;
/// `k` and `c` are recorded so reports are self-describing.
#[derive(Debug, Clone, Serialize)]
pub struct CentroidParams {
    pub k: f64,
    pub c: f64,
    pub rho: f64,
}

impl CentroidParams {
    pub fn geodesic(rho: f64) -> Self {
        Self { k: 1.0, c: 0.0, rho }
    }

    fn validate(&self) -> Result<()> {
        if self.k != 1.0 || self.c != 0.0 {
            return Err(Error::InvalidInput(
                "only the geodesic instantiation (k=1, c=0) is computed".into(),
            ));
        }
        if self.rho < 0.0 {
            return Err(Error::InvalidInput("rho must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Centroid set of one triple. Members are sorted ascending.
#[derive(Debug, Clone, Serialize)]
pub struct CentroidSet {
    pub triple: [usize; 3],
    pub members: Vec<usize>,
}

impl CentroidSet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn side_paths(graph: &GeodesicGraph, triple: [usize; 3]) -> Result<[Path; 3]> {
    let [a, b, c] = triple;
    Ok([
        graph.shortest_geodesic(a, b)?,
        graph.shortest_geodesic(b, c)?,
        graph.shortest_geodesic(a, c)?,
    ])
}

/// Vertices within `rho` of each of the three lexicographic side geodesics.
pub fn quasi_centroids(
    graph: &GeodesicGraph,
    triple: [usize; 3],
    params: &CentroidParams,
) -> Result<CentroidSet> {
    params.validate()?;
    let [a, b, c] = triple;
    if a == b || b == c || a == c {
        let dup = if a == b { a } else { c };
        return Err(Error::RepeatedBoundaryPoint(dup));
    }
    let sides = side_paths(graph, triple)?;
    let dists: Vec<Vec<u32>> = sides
        .iter()
        .map(|s| graph.multi_source_distances(&s.vertices))
        .collect();
    let members = (0..graph.vertex_count())
        .filter(|&v| dists.iter().all(|d| (d[v] as f64) <= params.rho))
        .collect();
    Ok(CentroidSet { triple, members })
}

/// Max pairwise distance among the members.
pub fn centroid_diameter(graph: &GeodesicGraph, set: &CentroidSet) -> Result<u32> {
    if set.members.is_empty() {
        return Err(Error::EmptyCentroidSet);
    }
    let mut best = 0;
    for (i, &p) in set.members.iter().enumerate() {
        for &q in &set.members[i + 1..] {
            best = best.max(graph.dist(p, q));
        }
    }
    Ok(best)
}

/// Whether the set intersects each of the triple's side geodesics.
pub fn meets_all_sides(graph: &GeodesicGraph, set: &CentroidSet) -> Result<bool> {
    let sides = side_paths(graph, set.triple)?;
    Ok(sides.iter().all(|side| {
        side.vertices
            .iter()
            .any(|v| set.members.binary_search(v).is_ok())
    }))
}

/// How the triples entering a coverage scan were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleMode {
    Exhaustive,
    Sampled,
}

/// Coverage of the space by centroid sets of boundary triples.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub params: CentroidParams,
    /// Max over vertices of the distance to the union of centroid sets.
    pub m: u32,
    /// Least vertex attaining the max.
    pub argmax_vertex: usize,
    pub triples_scanned: usize,
    pub mode: TripleMode,
    pub seed: u64,
    pub boundary_size: usize,
    /// Size of the centroid union.
    pub union_size: usize,
}

fn all_triples(k: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            for l in (j + 1)..k {
                out.push([i, j, l]);
            }
        }
    }
    out
}

fn triple_count(k: usize) -> usize {
    k * (k - 1) * (k - 2) / 6
}

/// Scans centroid sets over boundary triples (exhaustive when the triple
/// count fits the budget, seeded sample otherwise) and measures `M`.
pub fn centroid_coverage(
    graph: &GeodesicGraph,
    boundary: &BoundaryApprox,
    params: &CentroidParams,
    triple_budget: usize,
    seed: u64,
) -> Result<CoverageReport> {
    params.validate()?;
    let k = boundary.len();
    if k < 3 {
        return Err(Error::InvalidInput(format!(
            "coverage needs at least 3 boundary representatives, got {k}"
        )));
    }
    let (index_triples, mode) = if triple_count(k) <= triple_budget {
        (all_triples(k), TripleMode::Exhaustive)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(triple_budget);
        while out.len() < triple_budget {
            let mut t = [
                rng.gen_range(0..k),
                rng.gen_range(0..k),
                rng.gen_range(0..k),
            ];
            t.sort_unstable();
            if t[0] != t[1] && t[1] != t[2] {
                out.push(t);
            }
        }
        (out, TripleMode::Sampled)
    };
    let reps = &boundary.representatives;
    let sets: Vec<CentroidSet> = index_triples
        .par_iter()
        .map(|&[i, j, l]| quasi_centroids(graph, [reps[i], reps[j], reps[l]], params))
        .collect::<Result<_>>()?;
    let mut union: Vec<usize> = sets.iter().flat_map(|s| s.members.iter().copied()).collect();
    union.sort_unstable();
    union.dedup();
    if union.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no centroids found at rho = {}; increase rho",
            params.rho
        )));
    }
    let dist = graph.multi_source_distances(&union);
    let m = dist.iter().copied().max().unwrap_or(0);
    let argmax_vertex = dist.iter().position(|&d| d == m).unwrap_or(0);
    Ok(CoverageReport {
        params: params.clone(),
        m,
        argmax_vertex,
        triples_scanned: index_triples.len(),
        mode,
        seed,
        boundary_size: k,
        union_size: union.len(),
    })
}

/// True when every projection of `x` onto the segment lies in the centroid
/// set of `{x, y, z}` at `rho = 10 * delta`, with `y`, `z` the segment's
/// endpoints.
pub fn projection_centroid_check(
    graph: &GeodesicGraph,
    segment: &Path,
    x: usize,
    delta: f64,
) -> Result<bool> {
    segment.validate(graph, true)?;
    let (y, z) = (segment.first(), segment.last());
    let proj = graph.projection_set(segment, x);
    if x == y || x == z {
        // x is its own projection and trivially its own centroid.
        return Ok(true);
    }
    let params = CentroidParams::geodesic(10.0 * delta);
    let set = quasi_centroids(graph, [x, y, z], &params)?;
    Ok(proj.iter().all(|v| set.members.binary_search(v).is_ok()))
}
