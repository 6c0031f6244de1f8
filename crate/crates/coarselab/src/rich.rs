//! Geodesic-richness conditions on truncations, their derived constants,
//! and the pole constant they imply.
//!
//! Bi-infinite geodesics are modeled as lexicographic geodesics between
//! distinct boundary representatives; truncation slack is recorded per case
//! instead of asserting the untruncated statements. Distances between
//! geodesics are set distances (min over vertex pairs).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filling::BoundaryApprox;
use crate::graph::GeodesicGraph;

/// The base constants together with the two derived ones.
#[derive(Debug, Clone, Serialize)]
pub struct RichConstants {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    pub delta: f64,
}

/// Derives `r3 = 2*r1 + r2 + r0 + 1000*delta + 1` and
/// `r4 = 2*r1 + 3*r2 + r0 + 1000*delta + 1`.
pub fn derive_constants(r0: f64, r1: f64, r2: f64, delta: f64) -> Result<RichConstants> {
    for (name, v) in [("r0", r0), ("r1", r1), ("r2", r2), ("delta", delta)] {
        if v < 0.0 {
            return Err(Error::InvalidInput(format!("{name} must be nonnegative")));
        }
    }
    Ok(RichConstants {
        r0,
        r1,
        r2,
        r3: 2.0 * r1 + r2 + r0 + 1000.0 * delta + 1.0,
        r4: 2.0 * r1 + 3.0 * r2 + r0 + 1000.0 * delta + 1.0,
        delta,
    })
}

/// Pole constant implied by the first richness condition:
/// `max(r1 + delta, r0)`.
pub fn pole_from_rich(r0: f64, r1: f64, delta: f64) -> f64 {
    (r1 + delta).max(r0)
}

/// Case sampling policy: exhaustive below the cap, seeded sample above.
#[derive(Debug, Clone, Serialize)]
pub struct CaseSample {
    pub cap: usize,
    pub seed: u64,
}

impl Default for CaseSample {
    fn default() -> Self {
        Self {
            cap: 20_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseMode {
    Exhaustive,
    Sampled,
}

/// Witness for the first condition: a representative pair whose geodesic
/// passes close to `p` while nearly realizing `d(p, q)` from `q`.
#[derive(Debug, Clone, Serialize)]
pub struct Witness1 {
    pub pair: [usize; 2],
    pub d_p_gamma: f64,
    /// `|d(q, gamma) - d(p, q)|`, the realized deviation.
    pub deviation: f64,
}

/// One checked vertex pair.
#[derive(Debug, Clone, Serialize)]
pub struct Condition1Case {
    pub p: usize,
    pub q: usize,
    pub d_pq: f64,
    pub witness: Option<Witness1>,
}

/// Report for the first condition over the scanned pairs.
#[derive(Debug, Clone, Serialize)]
pub struct Condition1Report {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub checked: usize,
    pub skipped: usize,
    pub failures: usize,
    pub holds: bool,
    pub mode: CaseMode,
    pub seed: u64,
    pub cases: Vec<Condition1Case>,
}

impl Condition1Report {
    /// The failing vertices `p`, ascending and deduplicated.
    pub fn failure_points(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .cases
            .iter()
            .filter(|c| c.witness.is_none())
            .map(|c| c.p)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Geodesics between all distinct representative pairs, with the distance
/// from every vertex to each geodesic precomputed.
struct GeodesicFamily {
    pairs: Vec<[usize; 2]>,
    dist_to: Vec<Vec<u32>>,
    /// Set distances between family members.
    between: Vec<Vec<u32>>,
}

impl GeodesicFamily {
    fn build(graph: &GeodesicGraph, boundary: &BoundaryApprox) -> Result<Self> {
        let reps = &boundary.representatives;
        if reps.len() < 2 {
            return Err(Error::InvalidInput(
                "richness checks need at least 2 boundary representatives".into(),
            ));
        }
        let mut pairs = Vec::new();
        let mut paths = Vec::new();
        for i in 0..reps.len() {
            for j in (i + 1)..reps.len() {
                pairs.push([reps[i], reps[j]]);
                paths.push(graph.shortest_geodesic(reps[i], reps[j])?);
            }
        }
        let dist_to: Vec<Vec<u32>> = paths
            .iter()
            .map(|p| graph.multi_source_distances(&p.vertices))
            .collect();
        let mut between = vec![vec![0u32; pairs.len()]; pairs.len()];
        for a in 0..pairs.len() {
            for b in 0..pairs.len() {
                between[a][b] = paths[a]
                    .vertices
                    .iter()
                    .map(|&v| dist_to[b][v])
                    .min()
                    .unwrap_or(u32::MAX);
            }
        }
        Ok(Self {
            pairs,
            dist_to,
            between,
        })
    }
}

/// Checks whether every far-enough vertex pair is nearly realized by some
/// representative-pair geodesic.
pub fn check_condition1(
    graph: &GeodesicGraph,
    boundary: &BoundaryApprox,
    r0: f64,
    r1: f64,
    r2: f64,
    sample: &CaseSample,
) -> Result<Condition1Report> {
    let family = GeodesicFamily::build(graph, boundary)?;
    let n = graph.vertex_count();
    // p and q play different roles, so the scan runs over ordered pairs.
    let total = n * (n - 1);
    let (pairs, mode): (Vec<(usize, usize)>, CaseMode) = if total <= sample.cap {
        let mut out = Vec::with_capacity(total);
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    out.push((p, q));
                }
            }
        }
        (out, CaseMode::Exhaustive)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sample.seed);
        let mut out = Vec::with_capacity(sample.cap);
        while out.len() < sample.cap {
            let p = rng.gen_range(0..n);
            let q = rng.gen_range(0..n);
            if p != q {
                out.push((p, q));
            }
        }
        (out, CaseMode::Sampled)
    };
    let mut cases = Vec::new();
    let mut skipped = 0usize;
    let mut failures = 0usize;
    for (p, q) in pairs {
        let d_pq = graph.dist(p, q) as f64;
        if d_pq < r0 {
            skipped += 1;
            continue;
        }
        let witness = family.pairs.iter().enumerate().find_map(|(gi, &pair)| {
            let d_p = family.dist_to[gi][p] as f64;
            let dev = (family.dist_to[gi][q] as f64 - d_pq).abs();
            (d_p < r1 && dev < r2).then_some(Witness1 {
                pair,
                d_p_gamma: d_p,
                deviation: dev,
            })
        });
        if witness.is_none() {
            failures += 1;
        }
        cases.push(Condition1Case {
            p,
            q,
            d_pq,
            witness,
        });
    }
    Ok(Condition1Report {
        r0,
        r1,
        r2,
        checked: cases.len(),
        skipped,
        failures,
        holds: failures == 0,
        mode,
        seed: sample.seed,
        cases,
    })
}

/// Witness for the second condition: a geodesic close to `p` whose distance
/// to the reference geodesic nearly equals `d(p, gamma)`.
#[derive(Debug, Clone, Serialize)]
pub struct Witness2 {
    pub pair: [usize; 2],
    pub d_p_gamma2: f64,
    pub deviation: f64,
}

/// One checked `(geodesic, point)` case.
#[derive(Debug, Clone, Serialize)]
pub struct Condition2Case {
    pub gamma: [usize; 2],
    pub p: usize,
    pub d_p_gamma: f64,
    pub witness: Option<Witness2>,
}

/// Report for the second condition.
#[derive(Debug, Clone, Serialize)]
pub struct Condition2Report {
    pub r3: f64,
    pub r4: f64,
    pub checked: usize,
    pub failures: usize,
    pub holds: bool,
    pub mode: CaseMode,
    pub seed: u64,
    pub cases: Vec<Condition2Case>,
}

/// Checks whether every `(geodesic, point)` case admits a nearby geodesic at
/// nearly the prescribed distance. The reference geodesic itself is an
/// admissible witness.
pub fn check_condition2(
    graph: &GeodesicGraph,
    boundary: &BoundaryApprox,
    constants: &RichConstants,
    sample: &CaseSample,
) -> Result<Condition2Report> {
    let family = GeodesicFamily::build(graph, boundary)?;
    let n = graph.vertex_count();
    let total = family.pairs.len() * n;
    let (case_list, mode): (Vec<(usize, usize)>, CaseMode) = if total <= sample.cap {
        let mut out = Vec::with_capacity(total);
        for gi in 0..family.pairs.len() {
            for p in 0..n {
                out.push((gi, p));
            }
        }
        (out, CaseMode::Exhaustive)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sample.seed);
        let out = (0..sample.cap)
            .map(|_| (rng.gen_range(0..family.pairs.len()), rng.gen_range(0..n)))
            .collect();
        (out, CaseMode::Sampled)
    };
    let mut cases = Vec::new();
    let mut failures = 0usize;
    for (gi, p) in case_list {
        let d_p_gamma = family.dist_to[gi][p] as f64;
        let witness = (0..family.pairs.len()).find_map(|gj| {
            let d_p2 = family.dist_to[gj][p] as f64;
            let dev = (d_p_gamma - family.between[gj][gi] as f64).abs();
            (d_p2 < constants.r3 && dev < constants.r4).then_some(Witness2 {
                pair: family.pairs[gj],
                d_p_gamma2: d_p2,
                deviation: dev,
            })
        });
        if witness.is_none() {
            failures += 1;
        }
        cases.push(Condition2Case {
            gamma: family.pairs[gi],
            p,
            d_p_gamma,
            witness,
        });
    }
    Ok(Condition2Report {
        r3: constants.r3,
        r4: constants.r4,
        checked: cases.len(),
        failures,
        holds: failures == 0,
        mode,
        seed: sample.seed,
        cases,
    })
}
