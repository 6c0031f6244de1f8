//! Deterministic corpus of example spaces: Cantor-type endpoint sets,
//! doubly-exponential lacunary sets, regular trees, and combs (a tree with
//! segments glued at one vertex).
//!
//! Identical specs always produce identical labeled output; there is no
//! randomness anywhere in this module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GeodesicGraph, DEFAULT_VERTEX_CAP};
use crate::space::{FiniteMetricSpace, DEFAULT_POINT_CAP};

/// Zero-padded point labels that sort in index order.
pub fn index_labels(count: usize) -> Vec<String> {
    let width = count.saturating_sub(1).to_string().len().max(1);
    (0..count).map(|i| format!("p{i:0width$}")).collect()
}

/// Parameters of the Cantor-type endpoint set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CantorSpec {
    /// Number of subdivision steps, at least 1.
    pub depth: u32,
    /// Contraction ratio of each end interval, in (0, 1/2). Default 1/3.
    pub ratio: f64,
}

impl Default for CantorSpec {
    fn default() -> Self {
        Self {
            depth: 5,
            ratio: 1.0 / 3.0,
        }
    }
}

/// Endpoints of the depth-level construction intervals of the Cantor set on
/// `[0, 1]`, with Euclidean distances. A depth-`d` run subdivides `d` times
/// and keeps the `2^(d+1)` interval endpoints; at the default ratio `1/3` the
/// minimum gap is `(1 - 2*ratio) * ratio^(d-1)`.
pub fn gen_cantor(spec: &CantorSpec) -> Result<FiniteMetricSpace> {
    gen_cantor_capped(spec, DEFAULT_POINT_CAP)
}

pub fn gen_cantor_capped(spec: &CantorSpec, cap: usize) -> Result<FiniteMetricSpace> {
    if spec.depth < 1 {
        return Err(Error::InvalidInput("cantor depth must be >= 1".into()));
    }
    if !(spec.ratio > 0.0 && spec.ratio < 0.5) {
        return Err(Error::InvalidInput(
            "cantor ratio must lie in (0, 1/2)".into(),
        ));
    }
    let point_count = 1usize
        .checked_shl(spec.depth + 1)
        .filter(|&c| c <= cap)
        .ok_or(Error::VertexCapExceeded {
            actual: usize::MAX,
            cap,
            context: Some(format!("cantor depth {}", spec.depth)),
        })?;
    let mut intervals = vec![(0.0f64, 1.0f64)];
    for _ in 0..spec.depth {
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for (a, b) in intervals {
            let w = b - a;
            next.push((a, a + spec.ratio * w));
            next.push((b - spec.ratio * w, b));
        }
        intervals = next;
    }
    let mut coords = Vec::with_capacity(point_count);
    for (a, b) in intervals {
        coords.push(a);
        coords.push(b);
    }
    coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
    FiniteMetricSpace::from_line_points(index_labels(coords.len()), &coords)
}

/// Parameters of the lacunary set `{ +-2^(2^n) : n_min <= n <= n_max }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LacunarySpec {
    pub n_min: i32,
    pub n_max: i32,
}

impl Default for LacunarySpec {
    fn default() -> Self {
        Self { n_min: 0, n_max: 3 }
    }
}

/// The signed doubly-exponential point set with Euclidean distances.
/// Values are computed exactly in integer arithmetic; the growth is doubly
/// exponential, so the range is capped at six indices.
pub fn gen_lacunary(spec: &LacunarySpec) -> Result<FiniteMetricSpace> {
    if spec.n_min < 0 {
        return Err(Error::InvalidInput("lacunary n_min must be >= 0".into()));
    }
    if spec.n_max < spec.n_min {
        return Err(Error::InvalidInput("lacunary range is empty".into()));
    }
    if spec.n_max - spec.n_min > 5 {
        return Err(Error::InvalidInput(
            "lacunary range wider than 6 indices".into(),
        ));
    }
    let mut values = Vec::new();
    for n in spec.n_min..=spec.n_max {
        if n > 6 {
            return Err(Error::Overflow { n });
        }
        let exponent = 1u32 << n;
        values.push(1u128 << exponent);
    }
    let mut coords: Vec<f64> = values.iter().rev().map(|&v| -(v as f64)).collect();
    coords.extend(values.iter().map(|&v| v as f64));
    FiniteMetricSpace::from_line_points(index_labels(coords.len()), &coords)
}

/// A rooted regular tree: the root and every internal vertex have the given
/// valence, and all leaves sit at the same depth.
#[derive(Debug, Clone)]
pub struct TreeGraph {
    pub graph: GeodesicGraph,
    pub root: usize,
    pub leaves: Vec<usize>,
    /// Depth of each vertex below the root.
    pub depth: Vec<u32>,
}

pub fn gen_tree(valence: usize, depth: u32) -> Result<TreeGraph> {
    gen_tree_capped(valence, depth, DEFAULT_VERTEX_CAP)
}

pub fn gen_tree_capped(valence: usize, depth: u32, cap: usize) -> Result<TreeGraph> {
    if valence < 3 {
        return Err(Error::InvalidInput("tree valence must be >= 3".into()));
    }
    if depth < 1 {
        return Err(Error::InvalidInput("tree depth must be >= 1".into()));
    }
    let mut edges = Vec::new();
    let mut depths = vec![0u32];
    let mut frontier = vec![0usize];
    let mut next_id = 1usize;
    for level in 1..=depth {
        let children_per = if level == 1 { valence } else { valence - 1 };
        let mut next_frontier = Vec::with_capacity(frontier.len() * children_per);
        for &parent in &frontier {
            for _ in 0..children_per {
                if next_id >= cap {
                    return Err(Error::VertexCapExceeded {
                        actual: next_id + 1,
                        cap,
                        context: Some(format!("tree valence {valence} depth {depth}")),
                    });
                }
                edges.push((parent, next_id));
                depths.push(level);
                next_frontier.push(next_id);
                next_id += 1;
            }
        }
        frontier = next_frontier;
    }
    let graph = GeodesicGraph::with_cap(next_id, &edges, cap)?;
    Ok(TreeGraph {
        graph,
        root: 0,
        leaves: frontier,
        depth: depths,
    })
}

/// Parameters of the comb: a regular tree plus disjoint paths (the "teeth")
/// glued at one designated non-root vertex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CombSpec {
    pub tree_valence: usize,
    pub tree_depth: u32,
    /// Tooth lengths in edge units, each at least 1.
    pub teeth: Vec<usize>,
}

/// A comb together with the bookkeeping the stretch map needs.
#[derive(Debug, Clone)]
pub struct CombGraph {
    pub graph: GeodesicGraph,
    pub root: usize,
    /// Leaves of the underlying tree (the teeth tips are not among them).
    pub tree_leaves: Vec<usize>,
    /// Number of vertices belonging to the tree part.
    pub tree_vertex_count: usize,
    /// The vertex all teeth are glued to.
    pub attachment: usize,
    /// Tooth vertices by arclength from the attachment: `teeth[i][k]` sits
    /// at arclength `k + 1` on tooth `i`.
    pub teeth: Vec<Vec<usize>>,
}

impl CombGraph {
    /// Tip vertex of tooth `i`.
    pub fn tooth_tip(&self, i: usize) -> usize {
        *self.teeth[i].last().expect("teeth have positive length")
    }

    pub fn tooth_len(&self, i: usize) -> usize {
        self.teeth[i].len()
    }
}

/// Glues each tooth to the first child of the root, identifying the tooth's
/// endpoint 0 with that vertex.
pub fn gen_comb(spec: &CombSpec) -> Result<CombGraph> {
    gen_comb_capped(spec, DEFAULT_VERTEX_CAP)
}

pub fn gen_comb_capped(spec: &CombSpec, cap: usize) -> Result<CombGraph> {
    let tree = gen_tree_capped(spec.tree_valence, spec.tree_depth, cap)?;
    let tree_vertex_count = tree.graph.vertex_count();
    let attachment = 1;
    let mut edges: Vec<(usize, usize)> = tree.graph.edges().to_vec();
    let mut next_id = tree_vertex_count;
    let mut teeth = Vec::with_capacity(spec.teeth.len());
    for (i, &len) in spec.teeth.iter().enumerate() {
        if len == 0 {
            return Err(Error::InvalidInput(format!(
                "tooth {i} has length 0; teeth must have length >= 1"
            )));
        }
        let mut tooth = Vec::with_capacity(len);
        let mut prev = attachment;
        for _ in 0..len {
            if next_id >= cap {
                return Err(Error::VertexCapExceeded {
                    actual: next_id + 1,
                    cap,
                    context: Some("comb teeth".into()),
                });
            }
            edges.push((prev, next_id));
            tooth.push(next_id);
            prev = next_id;
            next_id += 1;
        }
        teeth.push(tooth);
    }
    let graph = GeodesicGraph::with_cap(next_id, &edges, cap)?;
    Ok(CombGraph {
        graph,
        root: tree.root,
        tree_leaves: tree.leaves,
        tree_vertex_count,
        attachment,
        teeth,
    })
}
