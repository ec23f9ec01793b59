//! Tricolor percolation on the body-centered cubic lattice.
//!
//! Cells of the truncated-octahedron tessellation of space are indexed by the
//! lattice `2Z³ ∪ (2Z³ + (1,1,1))`. Each cell is colored red, yellow or blue
//! independently; edges of the tessellation whose three incident cells carry
//! all three colors form disjoint loops and paths, which this crate traces,
//! counts and measures.

pub mod coloring;
pub mod error;
pub mod estimators;
pub mod flow;
pub mod lattice;
pub mod permutohedral;
pub mod prf;
pub mod tracer;

pub use coloring::{Color, Coloring, ProbVector};
pub use error::{Error, Result};
pub use lattice::{CellCoord, EdgeClique, Region, VertexClique};
pub use tracer::{DirectedEdgeState, PathRecord, Termination};
