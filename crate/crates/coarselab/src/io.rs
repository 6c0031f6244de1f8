//! File formats: plain-text graphs, CSV distance matrices, and CSV matrix
//! dumps for reports.
//!
//! Graph files: first line `V E`, then `E` lines `u v` with 0-based vertex
//! indices. Metric files: CSV with a header row of point labels followed by
//! the full distance matrix, one row per point.

use std::fmt::Write as _;
use std::path::Path as FsPath;

use crate::error::{Error, Result};
use crate::graph::GeodesicGraph;
use crate::space::FiniteMetricSpace;

pub fn write_graph(graph: &GeodesicGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", graph.vertex_count(), graph.edge_count());
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_graph(text: &str) -> Result<GeodesicGraph> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let mut parts = header.split_whitespace();
    let n: usize = parse_field(parts.next(), "vertex count")?;
    let e: usize = parse_field(parts.next(), "edge count")?;
    let mut edges = Vec::with_capacity(e);
    for line in lines {
        let mut parts = line.split_whitespace();
        let u: usize = parse_field(parts.next(), "edge endpoint")?;
        let v: usize = parse_field(parts.next(), "edge endpoint")?;
        edges.push((u, v));
    }
    if edges.len() != e {
        return Err(Error::Parse(format!(
            "graph file declares {e} edges but lists {}",
            edges.len()
        )));
    }
    GeodesicGraph::new(n, &edges)
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, what: &str) -> Result<T> {
    field
        .ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("invalid {what}")))
}

pub fn write_metric_csv(space: &FiniteMetricSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", space.labels().join(","));
    let n = space.point_count();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{}", space.dist(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn read_metric_csv(text: &str) -> Result<FiniteMetricSpace> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty metric file".into()))?;
    let labels: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let n = labels.len();
    let mut dist = Vec::with_capacity(n * n);
    for (i, line) in lines.enumerate() {
        if i >= n {
            return Err(Error::Parse("metric file has too many rows".into()));
        }
        for cell in line.split(',') {
            let v: f64 = cell
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad distance value {cell:?}")))?;
            dist.push(v);
        }
    }
    if dist.len() != n * n {
        return Err(Error::Parse(format!(
            "metric file has {} entries, expected {}",
            dist.len(),
            n * n
        )));
    }
    FiniteMetricSpace::new(labels, dist)
}

/// CSV dump of a square f64 matrix with row/column labels.
pub fn matrix_csv(labels: &[String], values: &[f64]) -> String {
    let n = labels.len();
    let mut out = String::new();
    let _ = writeln!(out, ",{}", labels.join(","));
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{}", values[i * n + j])).collect();
        let _ = writeln!(out, "{},{}", labels[i], row.join(","));
    }
    out
}

pub fn read_to_string(path: &FsPath) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

pub fn write_file(path: &FsPath, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(std::fs::write(path, content)?)
}
