//! Hyperbolic filling of a finite metric space.
//!
//! Level `n` holds a maximal separated net of the space at scale
//! `r^n * diam`, built greedily over points in label order so the whole
//! construction is deterministic. Two vertices on the same or neighboring
//! levels are joined exactly when some point of the space lies in both of
//! their net-scale closed balls. `ball_factor` does not affect adjacency;
//! it scales the covering radius recorded per vertex, which downstream
//! consumers use to interpret a vertex as a ball of the space.
//!
//! The level-0 net is always the single first point, so the graph has a
//! unique root, and the deepest-level vertices stand in for the boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GeodesicGraph, DEFAULT_VERTEX_CAP};
use crate::space::FiniteMetricSpace;

/// Construction parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FillingParams {
    /// Scale ratio between consecutive levels, in (0, 1/2].
    pub r: f64,
    /// Deepest level; the level-`max_level` net models the boundary.
    pub max_level: u32,
    /// Factor applied to the recorded covering radius, at least 1.
    pub ball_factor: f64,
}

impl Default for FillingParams {
    fn default() -> Self {
        Self {
            r: 0.5,
            max_level: 5,
            ball_factor: 2.0,
        }
    }
}

impl FillingParams {
    fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r <= 0.5) {
            return Err(Error::InvalidInput("filling r must lie in (0, 1/2]".into()));
        }
        if self.max_level < 1 {
            return Err(Error::InvalidInput("filling max_level must be >= 1".into()));
        }
        if self.ball_factor < 1.0 {
            return Err(Error::InvalidInput("ball_factor must be >= 1".into()));
        }
        Ok(())
    }
}

/// One vertex of the filling: a level and a center point of the space.
#[derive(Debug, Clone, Serialize)]
pub struct FillingVertex {
    pub level: u32,
    /// Index of the center in the underlying space.
    pub center: usize,
    /// Center label, copied for self-contained reports.
    pub center_label: String,
    /// Recorded covering radius `ball_factor * r^level * diam`.
    pub radius: f64,
}

/// The filling graph plus per-vertex metadata.
#[derive(Debug, Clone)]
pub struct FillingGraph {
    pub graph: GeodesicGraph,
    pub vertices: Vec<FillingVertex>,
    pub params: FillingParams,
    pub root: usize,
    pub diameter: f64,
}

impl FillingGraph {
    /// Vertices on the deepest level.
    pub fn leaves(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.level == self.params.max_level)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn level(&self, v: usize) -> u32 {
        self.vertices[v].level
    }
}

/// Builds the filling. Fails with the level reached if the vertex cap would
/// be exceeded.
pub fn build_filling(space: &FiniteMetricSpace, params: &FillingParams) -> Result<FillingGraph> {
    build_filling_capped(space, params, DEFAULT_VERTEX_CAP)
}

pub fn build_filling_capped(
    space: &FiniteMetricSpace,
    params: &FillingParams,
    cap: usize,
) -> Result<FillingGraph> {
    params.validate()?;
    if space.point_count() < 2 {
        return Err(Error::InvalidInput(
            "filling needs a space with at least 2 points".into(),
        ));
    }
    let diam = space.diameter();
    // Scale thresholds carry a small slack so that distances equal to a
    // threshold up to floating-point noise compare as equal; the Cantor
    // endpoint sets hit thresholds exactly.
    let tol = 1e-9 * diam.max(1.0);

    // Greedy net order: point indices sorted by label.
    let mut order: Vec<usize> = (0..space.point_count()).collect();
    order.sort_by(|&a, &b| space.labels()[a].cmp(&space.labels()[b]));

    let mut vertices: Vec<FillingVertex> = Vec::new();
    let mut level_ranges: Vec<std::ops::Range<usize>> = Vec::new();
    for level in 0..=params.max_level {
        let sep = params.r.powi(level as i32) * diam;
        let start = vertices.len();
        let mut centers: Vec<usize> = Vec::new();
        for &p in &order {
            if centers.iter().all(|&c| space.dist(p, c) > sep + tol) {
                centers.push(p);
                if vertices.len() + centers.len() > cap {
                    return Err(Error::VertexCapExceeded {
                        actual: vertices.len() + centers.len(),
                        cap,
                        context: Some(format!("filling reached level {level}")),
                    });
                }
            }
        }
        for &c in &centers {
            vertices.push(FillingVertex {
                level,
                center: c,
                center_label: space.labels()[c].clone(),
                radius: params.ball_factor * sep,
            });
        }
        level_ranges.push(start..vertices.len());
    }

    // Net-scale ball of each vertex, as a bitset over the points of Z.
    let words = space.point_count().div_ceil(64);
    let mut balls = vec![0u64; vertices.len() * words];
    for (i, v) in vertices.iter().enumerate() {
        let sep = params.r.powi(v.level as i32) * diam;
        for p in 0..space.point_count() {
            if space.dist(v.center, p) <= sep + tol {
                balls[i * words + p / 64] |= 1 << (p % 64);
            }
        }
    }
    let intersects = |a: usize, b: usize| {
        (0..words).any(|w| balls[a * words + w] & balls[b * words + w] != 0)
    };

    let mut edges = Vec::new();
    for level in 0..=params.max_level as usize {
        let range = level_ranges[level].clone();
        // Same-level pairs.
        for a in range.clone() {
            for b in (a + 1)..range.end {
                if intersects(a, b) {
                    edges.push((a, b));
                }
            }
        }
        // Pairs with the next level down.
        if level < params.max_level as usize {
            let below = level_ranges[level + 1].clone();
            for a in range {
                for b in below.clone() {
                    if intersects(a, b) {
                        edges.push((a, b));
                    }
                }
            }
        }
    }

    let graph = GeodesicGraph::with_cap(vertices.len(), &edges, cap)?;
    Ok(FillingGraph {
        graph,
        vertices,
        params: params.clone(),
        root: 0,
        diameter: diam,
    })
}

/// Minimal `L` such that every vertex lies within `L` of some geodesic from
/// the root to a leaf. Exact: per-vertex minima over the chosen geodesics.
pub fn pole_radius(graph: &GeodesicGraph, root: usize, leaves: &[usize]) -> Result<u32> {
    if leaves.is_empty() {
        return Err(Error::InvalidInput(
            "pole radius needs at least one leaf".into(),
        ));
    }
    let mut best = vec![u32::MAX; graph.vertex_count()];
    for &leaf in leaves {
        let geo = graph.shortest_geodesic(root, leaf)?;
        let d = graph.multi_source_distances(&geo.vertices);
        for (b, dv) in best.iter_mut().zip(d) {
            *b = (*b).min(dv);
        }
    }
    Ok(best.into_iter().max().unwrap_or(0))
}

/// Designated boundary representatives of a truncated space.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryApprox {
    /// Representative vertices (deepest filling level, or any caller-chosen
    /// stand-ins such as tree leaves).
    pub representatives: Vec<usize>,
    /// Label of the center each representative carries, when known.
    pub center_labels: Vec<String>,
}

impl BoundaryApprox {
    pub fn from_vertices(representatives: Vec<usize>) -> Self {
        let center_labels = representatives.iter().map(|v| v.to_string()).collect();
        Self {
            representatives,
            center_labels,
        }
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Boundary representatives of a filling: its leaves, tagged with their
/// center points.
pub fn leaf_boundary(filling: &FillingGraph) -> BoundaryApprox {
    let representatives = filling.leaves();
    let center_labels = representatives
        .iter()
        .map(|&v| filling.vertices[v].center_label.clone())
        .collect();
    BoundaryApprox {
        representatives,
        center_labels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_cantor, gen_lacunary, gen_tree, CantorSpec, LacunarySpec};
    use crate::hyperbolicity::four_point_delta;
    use crate::space::FiniteMetricSpace;

    fn two_point_space() -> FiniteMetricSpace {
        FiniteMetricSpace::from_line_points(vec!["a".into(), "b".into()], &[0.0, 1.0]).unwrap()
    }

    #[test]
    fn two_point_filling_is_path_shaped() {
        let f = build_filling(
            &two_point_space(),
            &FillingParams {
                r: 0.5,
                max_level: 1,
                ball_factor: 2.0,
            },
        )
        .unwrap();
        // Root plus one level-1 vertex per point, no edge between the two
        // level-1 vertices: a 3-vertex path through the root.
        assert_eq!(f.graph.vertex_count(), 3);
        assert_eq!(f.graph.edge_count(), 2);
        assert_eq!(f.leaves().len(), 2);
        assert_eq!(f.graph.dist(1, 2), 2);
    }

    #[test]
    fn one_level_filling_has_single_root_covering_everything() {
        let space = gen_cantor(&CantorSpec::default()).unwrap();
        let f = build_filling(
            &space,
            &FillingParams {
                r: 0.5,
                max_level: 1,
                ball_factor: 2.0,
            },
        )
        .unwrap();
        let roots: Vec<_> = f.vertices.iter().filter(|v| v.level == 0).collect();
        assert_eq!(roots.len(), 1);
        assert_eq!(f.root, 0);
        // Root is adjacent to every level-1 vertex.
        for v in 1..f.graph.vertex_count() {
            if f.level(v) == 1 {
                assert_eq!(f.graph.dist(f.root, v), 1);
            }
        }
    }

    #[test]
    fn cantor_filling_at_one_third_aligned_depth_has_one_leaf_per_interval() {
        // At r = 1/3 and max_level equal to the construction depth, the
        // deepest separation equals the deepest interval length, so exactly
        // one endpoint per construction interval survives the strict greedy.
        let space = gen_cantor(&CantorSpec {
            depth: 5,
            ratio: 1.0 / 3.0,
        })
        .unwrap();
        let f = build_filling(
            &space,
            &FillingParams {
                r: 1.0 / 3.0,
                max_level: 5,
                ball_factor: 2.0,
            },
        )
        .unwrap();
        assert_eq!(f.leaves().len(), 2usize.pow(5));
    }

    #[test]
    fn every_point_covered_by_a_leaf_center() {
        let space = gen_cantor(&CantorSpec::default()).unwrap();
        let params = FillingParams::default();
        let f = build_filling(&space, &params).unwrap();
        let leaf_sep = params.r.powi(params.max_level as i32) * space.diameter() + 1e-9;
        let leaves = f.leaves();
        for p in 0..space.point_count() {
            let covered = leaves
                .iter()
                .any(|&v| space.dist(f.vertices[v].center, p) <= leaf_sep);
            assert!(covered, "point {p} not covered");
        }
    }

    #[test]
    fn filling_delta_bounded_across_levels() {
        let space = gen_cantor(&CantorSpec::default()).unwrap();
        let mut deltas = Vec::new();
        for max_level in 3..=7 {
            let f = build_filling(
                &space,
                &FillingParams {
                    r: 0.5,
                    max_level,
                    ball_factor: 2.0,
                },
            )
            .unwrap();
            deltas.push(four_point_delta(&f.graph).max(0.5));
        }
        let at3 = deltas[0];
        for d in &deltas {
            assert!(*d <= 2.0 * at3, "delta grew past 2x the level-3 value");
        }
    }

    #[test]
    fn pole_radius_of_rooted_tree_is_zero() {
        let t = gen_tree(3, 3).unwrap();
        assert_eq!(pole_radius(&t.graph, t.root, &t.leaves).unwrap(), 0);
    }

    #[test]
    fn pole_radius_of_comb_is_longest_tooth() {
        use crate::generators::{gen_comb, CombSpec};
        let c = gen_comb(&CombSpec {
            tree_valence: 3,
            tree_depth: 3,
            teeth: (1..=5).collect(),
        })
        .unwrap();
        // Teeth hang off every root-to-leaf geodesic, so the tip of the
        // longest tooth is the farthest vertex.
        let l = pole_radius(&c.graph, c.root, &c.tree_leaves).unwrap();
        assert_eq!(l, 5);
    }

    #[test]
    fn pole_radius_of_cantor_filling_is_small() {
        let space = gen_cantor(&CantorSpec::default()).unwrap();
        let f = build_filling(&space, &FillingParams::default()).unwrap();
        let l = pole_radius(&f.graph, f.root, &f.leaves()).unwrap();
        assert!(l <= 2, "pole radius {l} exceeds the expected bound");
    }

    #[test]
    fn boundary_of_deep_lacunary_filling_has_one_leaf_per_point() {
        let space = gen_lacunary(&LacunarySpec { n_min: 0, n_max: 3 }).unwrap();
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
        assert_eq!(b.len(), space.point_count());
    }

    #[test]
    fn two_point_boundary_has_two_representatives() {
        let f = build_filling(
            &two_point_space(),
            &FillingParams {
                r: 0.5,
                max_level: 3,
                ball_factor: 2.0,
            },
        )
        .unwrap();
        assert_eq!(leaf_boundary(&f).len(), 2);
    }

    #[test]
    fn cap_error_reports_level() {
        let space = gen_cantor(&CantorSpec::default()).unwrap();
        let err = build_filling_capped(
            &space,
            &FillingParams {
                r: 0.5,
                max_level: 6,
                ball_factor: 2.0,
            },
            10,
        )
        .unwrap_err();
        match err {
            Error::VertexCapExceeded { context, .. } => {
                assert!(context.unwrap().contains("level"));
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }
}
