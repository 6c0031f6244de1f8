//! Connected unit-edge graphs with cached all-pairs distances, geodesics,
//! and projections.
//!
//! Every downstream computation treats a [`GeodesicGraph`] as an immutable
//! metric space in hop units. Geodesics are made deterministic by always
//! returning the lexicographically least vertex sequence among the shortest
//! paths; set-valued operations (projections) return the full set instead.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Default cap on vertex count for cached all-pairs distance matrices.
pub const DEFAULT_VERTEX_CAP: usize = 5000;

/// A connected graph with unit edge lengths and a cached distance matrix.
#[derive(Debug, Clone)]
pub struct GeodesicGraph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    dist: Vec<u32>,
    n: usize,
}

impl GeodesicGraph {
    /// Builds the graph from undirected edges over vertices `0..n`,
    /// checking connectivity and caching all-pairs distances via BFS.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::with_cap(n, edges, DEFAULT_VERTEX_CAP)
    }

    pub fn with_cap(n: usize, edges: &[(usize, usize)], cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("graph needs at least one vertex".into()));
        }
        if n > cap {
            return Err(Error::VertexCapExceeded {
                actual: n,
                cap,
                context: None,
            });
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { index: w, len: n });
                }
            }
            if u == v {
                continue;
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let dist = all_pairs_bfs(&adjacency)?;
        Ok(Self {
            adjacency,
            edges: normalized,
            dist,
            n,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted `(min, max)` pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Hop distance between two vertices.
    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    /// One row of the distance matrix (distances from `u`).
    #[inline]
    pub fn dist_row(&self, u: usize) -> &[u32] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    /// The full cached distance matrix, row-major.
    pub fn dist_matrix(&self) -> &[u32] {
        &self.dist
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// Distance from `v` to the closest vertex of `set`.
    pub fn dist_to_set(&self, v: usize, set: &[usize]) -> u32 {
        set.iter().map(|&u| self.dist(v, u)).min().unwrap_or(u32::MAX)
    }

    /// Minimum distance between two vertex sets.
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> u32 {
        a.iter()
            .map(|&u| self.dist_to_set(u, b))
            .min()
            .unwrap_or(u32::MAX)
    }

    /// Distances from every vertex to the nearest vertex of `sources`,
    /// by multi-source BFS. Faster than scanning the matrix when `sources`
    /// is large.
    pub fn multi_source_distances(&self, sources: &[usize]) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &v in &self.adjacency[u] {
                if dist[v] == u32::MAX {
                    dist[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Single-source BFS distances; used to cross-check the cached matrix.
    pub fn bfs_from(&self, source: usize) -> Vec<u32> {
        bfs(&self.adjacency, source)
    }

    /// The geodesic from `x` to `y` with the lexicographically least vertex
    /// sequence among all shortest paths.
    ///
    /// Greedy descent is enough: every shortest path must step to a neighbor
    /// one hop closer to `y`, so picking the smallest such neighbor at every
    /// step yields the least sequence.
    pub fn shortest_geodesic(&self, x: usize, y: usize) -> Result<Path> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let mut vertices = Vec::with_capacity(self.dist(x, y) as usize + 1);
        let mut current = x;
        vertices.push(current);
        while current != y {
            let remaining = self.dist(current, y);
            let next = self.adjacency[current]
                .iter()
                .copied()
                .find(|&v| self.dist(v, y) + 1 == remaining)
                .expect("connected graph always has a descent neighbor");
            vertices.push(next);
            current = next;
        }
        Ok(Path { vertices })
    }

    /// All vertices of `segment` at minimal distance from `x`.
    pub fn projection_set(&self, segment: &Path, x: usize) -> Vec<usize> {
        let best = segment
            .vertices
            .iter()
            .map(|&v| self.dist(x, v))
            .min()
            .expect("paths are nonempty");
        segment
            .vertices
            .iter()
            .copied()
            .filter(|&v| self.dist(x, v) == best)
            .collect()
    }

    /// Distance from `x` to the path, as a vertex set.
    pub fn dist_to_path(&self, x: usize, path: &Path) -> u32 {
        self.dist_to_set(x, &path.vertices)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange {
                index: v,
                len: self.n,
            });
        }
        Ok(())
    }
}

/// A vertex walk; geodesic when its hop length equals the endpoint distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<usize>,
}

impl Path {
    pub fn new(vertices: Vec<usize>) -> Self {
        assert!(!vertices.is_empty(), "paths must contain a vertex");
        Self { vertices }
    }

    /// Hop length: vertex count minus one.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    /// Vertex at arclength `t` from the first endpoint.
    pub fn at(&self, t: usize) -> usize {
        self.vertices[t]
    }

    /// The subpath between arclengths `from..=to`.
    pub fn subpath(&self, from: usize, to: usize) -> Path {
        Path::new(self.vertices[from..=to].to_vec())
    }

    /// Checks consecutive adjacency, and the geodesic property when asked.
    pub fn validate(&self, graph: &GeodesicGraph, expect_geodesic: bool) -> Result<()> {
        for pair in self.vertices.windows(2) {
            if graph.dist(pair[0], pair[1]) != 1 {
                return Err(Error::InvariantViolation(format!(
                    "path vertices {} and {} are not adjacent",
                    pair[0], pair[1]
                )));
            }
        }
        if expect_geodesic && self.len() as u32 != graph.dist(self.first(), self.last()) {
            return Err(Error::InvariantViolation(format!(
                "path of length {} between {} and {} is not geodesic",
                self.len(),
                self.first(),
                self.last()
            )));
        }
        Ok(())
    }
}

fn bfs(adjacency: &[Vec<usize>], source: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adjacency.len()];
    dist[source] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        for &v in &adjacency[u] {
            if dist[v] == u32::MAX {
                dist[v] = du + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// BFS from every vertex; errors with a witness pair if the graph is
/// disconnected.
fn all_pairs_bfs(adjacency: &[Vec<usize>]) -> Result<Vec<u32>> {
    let n = adjacency.len();
    let mut dist = vec![0u32; n * n];
    for s in 0..n {
        let row = bfs(adjacency, s);
        if let Some(t) = row.iter().position(|&d| d == u32::MAX) {
            return Err(Error::Disconnected { from: s, to: t });
        }
        dist[s * n..(s + 1) * n].copy_from_slice(&row);
    }
    Ok(dist)
}

/// Convenience constructors used across tests and examples.
pub mod shapes {
    use super::GeodesicGraph;

    pub fn path_graph(n: usize) -> GeodesicGraph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        GeodesicGraph::new(n, &edges).expect("path graph is connected")
    }

    pub fn cycle_graph(n: usize) -> GeodesicGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        GeodesicGraph::new(n, &edges).expect("cycle graph is connected")
    }
}

#[cfg(test)]
mod tests {
    use super::shapes::{cycle_graph, path_graph};
    use super::*;

    #[test]
    fn path_graph_distances() {
        let g = path_graph(3);
        assert_eq!(g.dist(0, 2), 2);
        assert_eq!(g.dist(2, 0), 2);
        assert_eq!(g.dist(1, 1), 0);
    }

    #[test]
    fn single_vertex_matrix_is_zero() {
        let g = GeodesicGraph::new(1, &[]).unwrap();
        assert_eq!(g.dist_matrix(), &[0]);
    }

    #[test]
    fn four_cycle_distances() {
        // Hand BFS on C4: opposite vertices at 2, adjacent at 1.
        let g = cycle_graph(4);
        assert_eq!(g.dist(0, 2), 2);
        assert_eq!(g.dist(1, 3), 2);
        assert_eq!(g.dist(0, 1), 1);
        assert_eq!(g.dist(0, 3), 1);
    }

    #[test]
    fn matrix_symmetric_zero_diagonal_triangle() {
        let g = cycle_graph(7);
        let n = g.vertex_count();
        for i in 0..n {
            assert_eq!(g.dist(i, i), 0);
            for j in 0..n {
                assert_eq!(g.dist(i, j), g.dist(j, i));
                for k in 0..n {
                    assert!(g.dist(i, k) <= g.dist(i, j) + g.dist(j, k));
                }
            }
        }
    }

    #[test]
    fn matrix_matches_bfs_rows() {
        let g = cycle_graph(9);
        for s in 0..g.vertex_count() {
            assert_eq!(g.bfs_from(s), g.dist_row(s).to_vec());
        }
    }

    #[test]
    fn disconnected_graph_names_witness() {
        let err = GeodesicGraph::new(4, &[(0, 1), (2, 3)]).unwrap_err();
        match err {
            Error::Disconnected { from, to } => {
                assert_eq!(from, 0);
                assert_eq!(to, 2);
            }
            other => panic!("expected Disconnected, got {other:?}"),
        }
    }

    #[test]
    fn geodesic_is_single_vertex_when_endpoints_coincide() {
        let g = path_graph(4);
        let p = g.shortest_geodesic(2, 2).unwrap();
        assert_eq!(p.vertices, vec![2]);
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn geodesic_in_tree_is_unique_tree_path() {
        // Star with center 0.
        let g = GeodesicGraph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = g.shortest_geodesic(1, 3).unwrap();
        assert_eq!(p.vertices, vec![1, 0, 3]);
    }

    #[test]
    fn four_cycle_tie_break_is_lexicographic() {
        let g = cycle_graph(4);
        // Both 0-1-2 and 0-3-2 are geodesics; the least sequence wins.
        let p = g.shortest_geodesic(0, 2).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2]);
    }

    #[test]
    fn projection_of_point_on_segment_is_itself() {
        let g = path_graph(5);
        let seg = g.shortest_geodesic(0, 4).unwrap();
        assert_eq!(g.projection_set(&seg, 2), vec![2]);
    }

    #[test]
    fn tripod_projection_is_center() {
        // Legs 1-0, 2-0, 3-0 extended: leaf 4 behind 1, leaf 5 behind 2, leaf 6 behind 3.
        let g = GeodesicGraph::new(
            7,
            &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)],
        )
        .unwrap();
        let seg = g.shortest_geodesic(5, 6).unwrap();
        assert_eq!(g.projection_set(&seg, 4), vec![0]);
    }

    #[test]
    fn four_cycle_projection_tie_returns_both_endpoints() {
        let g = cycle_graph(4);
        // The far side 1-2-3 is a geodesic; vertex 0 is equidistant from its
        // two endpoints, so the projection is the tie {1, 3}.
        let seg = Path::new(vec![1, 2, 3]);
        seg.validate(&g, true).unwrap();
        let mut proj = g.projection_set(&seg, 0);
        proj.sort_unstable();
        assert_eq!(proj, vec![1, 3]);
    }

    #[test]
    fn subpath_slices_arclengths() {
        let g = path_graph(6);
        let p = g.shortest_geodesic(0, 5).unwrap();
        let sub = p.subpath(1, 3);
        assert_eq!(sub.vertices, vec![1, 2, 3]);
        sub.validate(&g, true).unwrap();
    }
}
