//! Coarse-geometry laboratory for finite geodesic graphs and finite metric
//! spaces.
//!
//! The crate builds and probes the objects of boundary-rigidity experiments
//! at desk scale:
//!
//! - hyperbolicity constants (exact four-point, sampled Rips and thin) and
//!   Gromov products over [`graph::GeodesicGraph`];
//! - a deterministic corpus of example spaces ([`generators`]): Cantor
//!   endpoint sets, doubly-exponential lacunary sets, regular trees, combs;
//! - hyperbolic fillings of finite metric spaces ([`filling`]) with poles
//!   and leaf boundaries;
//! - visual quasi-metrics and chain metrics on the boundary, plus
//!   uniform-perfectness profiling ([`boundary`]);
//! - quasi-centroid sets of boundary triples and their coverage of the
//!   space ([`centroids`]);
//! - the displacement-unbounded self-map built from a schedule of far-apart
//!   geodesic segments ([`rigidity`]);
//! - geodesic-richness conditions and their derived constants ([`rich`]).
//!
//! Everything is deterministic: sampled scans are seeded, greedy
//! constructions order by label, and parallel reductions are
//! order-independent, so reports are byte-identical across runs and thread
//! counts.

pub mod boundary;
pub mod centroids;
pub mod error;
pub mod filling;
pub mod generators;
pub mod graph;
pub mod hyperbolicity;
pub mod io;
pub mod rich;
pub mod rigidity;
pub mod run;
pub mod space;

pub use error::{Error, Result};
