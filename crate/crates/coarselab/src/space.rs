//! Finite metric spaces with labeled points.

use crate::error::{Error, Result};

/// Absolute tolerance for metric validation; inputs may come from floating
/// point pipelines.
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// Default cap on point count for generated and loaded spaces.
pub const DEFAULT_POINT_CAP: usize = 4096;

/// A finite metric space: labeled points and a validated distance matrix.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    n: usize,
}

impl FiniteMetricSpace {
    /// Validates symmetry, zero diagonal, positivity off the diagonal, and
    /// the triangle inequality, all within [`METRIC_TOLERANCE`].
    pub fn new(labels: Vec<String>, dist: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidMetric("space has no points".into()));
        }
        if dist.len() != n * n {
            return Err(Error::InvalidMetric(format!(
                "distance matrix has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidMetric("duplicate point labels".into()));
        }
        let at = |i: usize, j: usize| dist[i * n + j];
        for i in 0..n {
            if at(i, i).abs() > METRIC_TOLERANCE {
                return Err(Error::InvalidMetric(format!(
                    "nonzero diagonal at point {}",
                    labels[i]
                )));
            }
            for j in 0..n {
                if (at(i, j) - at(j, i)).abs() > METRIC_TOLERANCE {
                    return Err(Error::InvalidMetric(format!(
                        "asymmetry between {} and {}",
                        labels[i], labels[j]
                    )));
                }
                if i != j && at(i, j) <= 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "nonpositive distance between {} and {}",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if at(i, k) > at(i, j) + at(j, k) + METRIC_TOLERANCE {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails on ({}, {}, {})",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }
        Ok(Self { labels, dist, n })
    }

    /// Builds the space from points on the real line with Euclidean distance.
    pub fn from_line_points(labels: Vec<String>, coords: &[f64]) -> Result<Self> {
        let n = coords.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = (coords[i] - coords[j]).abs();
            }
        }
        Self::new(labels, dist)
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn dist_matrix(&self) -> &[f64] {
        &self.dist
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest strictly positive distance.
    pub fn min_positive_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d = self.dist(i, j);
                if d > 0.0 && d < best {
                    best = d;
                }
            }
        }
        best
    }
}
