//! Boundary products, the visual quasi-metric and its chain metric, and
//! uniform-perfectness profiling.
//!
//! Boundary points are truncation representatives (deep filling vertices or
//! tree leaves); their pairwise Gromov products stand in for the products of
//! boundary classes. The visual quasi-metric is `rho = exp(-eps * product)`
//! off the diagonal and `0` on it, and the visual metric is the
//! chain-infimum metrization of `rho`, computed as shortest paths in the
//! complete graph weighted by `rho`.

use serde::ser::Serializer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filling::BoundaryApprox;
use crate::graph::GeodesicGraph;
use crate::hyperbolicity::GromovProductTable;
use crate::space::FiniteMetricSpace;

/// Basepoint and exponent of the visual quasi-metric.
#[derive(Debug, Clone, Serialize)]
pub struct VisualMetricParams {
    pub basepoint: usize,
    pub epsilon: f64,
}

impl VisualMetricParams {
    /// Largest admissible epsilon is `min(1, 1/(5*delta))` with
    /// `delta = max(four_point_delta, 1)`; the default backs off by 1%.
    pub fn default_for(basepoint: usize, delta: f64) -> Self {
        let cap = 1f64.min(1.0 / (5.0 * delta.max(1.0)));
        Self {
            basepoint,
            epsilon: 0.99 * cap,
        }
    }

    pub fn validate(&self, delta: f64) -> Result<()> {
        let cap = 1f64.min(1.0 / (5.0 * delta.max(1.0)));
        if !(self.epsilon > 0.0 && self.epsilon < cap) {
            return Err(Error::InvalidInput(format!(
                "epsilon {} outside (0, {cap})",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Gromov products between boundary representatives with respect to `w`.
/// The diagonal carries `d(rep, w)`, the finite truncation of the infinite
/// self-product.
pub fn boundary_products(
    graph: &GeodesicGraph,
    boundary: &BoundaryApprox,
    w: usize,
) -> GromovProductTable {
    GromovProductTable::compute(graph, w, &boundary.representatives)
}

/// Symmetric matrix `rho(i, j) = exp(-eps * product)`, zero on the diagonal.
pub fn rho_matrix(table: &GromovProductTable, params: &VisualMetricParams) -> Vec<f64> {
    let k = table.len();
    let mut rho = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                rho[i * k + j] = (-params.epsilon * table.value(i, j)).exp();
            }
        }
    }
    rho
}

/// Chain-infimum metric of `rho`: all-pairs shortest paths in the complete
/// graph weighted by `rho`. The output satisfies the triangle inequality by
/// construction.
pub fn visual_metric(rho: &[f64], k: usize) -> Vec<f64> {
    let mut d = rho.to_vec();
    for mid in 0..k {
        for i in 0..k {
            let dim = d[i * k + mid];
            for j in 0..k {
                let via = dim + d[mid * k + j];
                if via < d[i * k + j] {
                    d[i * k + j] = via;
                }
            }
        }
    }
    d
}

/// Pairs violating the two-sided estimate `rho/2 <= d <= rho`; empty on
/// every boundary computed with an admissible epsilon.
pub fn sandwich_violations(rho: &[f64], d: &[f64], k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let r = rho[i * k + j];
            let v = d[i * k + j];
            if !(r / 2.0 <= v && v <= r) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Wraps the visual metric into a labeled metric space so it can be profiled
/// like any other input.
pub fn visual_metric_space(
    boundary: &BoundaryApprox,
    d: &[f64],
) -> Result<FiniteMetricSpace> {
    FiniteMetricSpace::new(boundary.center_labels.clone(), d.to_vec())
}

/// A gap ratio: finite, or the sentinel for "no other point in the ball".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapRatio {
    Finite(f64),
    Infinite,
}

impl GapRatio {
    pub fn is_infinite(&self) -> bool {
        matches!(self, GapRatio::Infinite)
    }

    fn max(self, other: GapRatio) -> GapRatio {
        match (self, other) {
            (GapRatio::Infinite, _) | (_, GapRatio::Infinite) => GapRatio::Infinite,
            (GapRatio::Finite(a), GapRatio::Finite(b)) => GapRatio::Finite(a.max(b)),
        }
    }
}

impl Serialize for GapRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GapRatio::Finite(v) => serializer.serialize_f64(*v),
            GapRatio::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// One `(point, radius)` measurement.
#[derive(Debug, Clone, Serialize)]
pub struct PointGapRecord {
    pub point: String,
    pub radius: f64,
    /// `radius / max{d(x,y) : 0 < d(x,y) <= radius}`, or the sentinel when
    /// the closed ball holds no other point.
    pub ratio: GapRatio,
}

/// Uniform-perfectness profile over a radii grid.
#[derive(Debug, Clone, Serialize)]
pub struct PerfectnessProfile {
    pub radii: Vec<f64>,
    pub records: Vec<PointGapRecord>,
    /// Per-radius `max` of the point ratios; the sentinel propagates.
    pub s_estimate: Vec<GapRatio>,
}

impl PerfectnessProfile {
    pub fn finite_everywhere(&self) -> bool {
        self.s_estimate.iter().all(|s| !s.is_infinite())
    }

    pub fn hits_infinite(&self) -> bool {
        self.s_estimate.iter().any(|s| s.is_infinite())
    }
}

/// Geometric grid with ratio 1/2 from `r0` down to the smallest positive
/// distance of the space.
pub fn default_radii(space: &FiniteMetricSpace, r0: Option<f64>) -> Vec<f64> {
    let top = r0.unwrap_or_else(|| space.diameter());
    let floor = space.min_positive_distance();
    let mut radii = Vec::new();
    let mut r = top;
    while r >= floor && r > 0.0 {
        radii.push(r);
        r /= 2.0;
    }
    if radii.is_empty() {
        radii.push(top);
    }
    radii
}

/// Profiles how uniformly perfect the space looks at each grid radius: for
/// every point and radius, the smallest annulus factor that still catches a
/// neighbor, aggregated by max over points.
pub fn perfectness_profile(space: &FiniteMetricSpace, radii: &[f64]) -> Result<PerfectnessProfile> {
    if space.point_count() < 2 {
        return Err(Error::InvalidInput("profile needs at least 2 points".into()));
    }
    if radii.is_empty() {
        return Err(Error::InvalidInput("profile needs a radii grid".into()));
    }
    for w in radii.windows(2) {
        if w[0] <= w[1] {
            return Err(Error::InvalidInput(
                "radii must be sorted strictly descending".into(),
            ));
        }
    }
    if *radii.last().unwrap() <= 0.0 {
        return Err(Error::InvalidInput("radii must be positive".into()));
    }
    let n = space.point_count();
    let mut records = Vec::with_capacity(n * radii.len());
    let mut s_estimate = vec![GapRatio::Finite(0.0); radii.len()];
    for x in 0..n {
        for (ri, &r) in radii.iter().enumerate() {
            let best_d = (0..n)
                .filter(|&y| y != x)
                .map(|y| space.dist(x, y))
                .filter(|&d| d > 0.0 && d <= r)
                .fold(f64::NEG_INFINITY, f64::max);
            let ratio = if best_d.is_finite() {
                GapRatio::Finite(r / best_d)
            } else {
                GapRatio::Infinite
            };
            s_estimate[ri] = s_estimate[ri].max(ratio);
            records.push(PointGapRecord {
                point: space.labels()[x].clone(),
                radius: r,
                ratio,
            });
        }
    }
    Ok(PerfectnessProfile {
        radii: radii.to_vec(),
        records,
        s_estimate,
    })
}
