//! Normal surface machinery over generalized 3-dimensional triangulations.
//!
//! The crate covers the combinatorics of face-identified tetrahedra
//! ([`triangulation`], [`skeleton`]), standard normal coordinates and their
//! matching equations ([`normal`]), exact extreme-ray enumeration for the
//! resulting cones ([`cone`]), detection of splitting and spanning central
//! surfaces ([`detect`]), the gadget constructions used to encode cubic
//! graphs as triangulations ([`gadgets`]), and the abstract constraint
//! problem that one-in-three satisfiability reduces to ([`abstract_problem`]).

pub mod abstract_problem;
pub mod cli;
pub mod cone;
pub mod detect;
pub mod disc;
pub mod gadgets;
pub mod linalg;
pub mod normal;
pub mod perm;
pub mod skeleton;
pub mod triangulation;

pub use disc::DiscType;
pub use normal::{EulerFunctional, MatchingSystem, NormalVector, SurfaceInfo};
pub use perm::Perm4;
pub use skeleton::{is_3manifold, vertex_links, LinkShape, Skeleton, VertexLink};
pub use triangulation::{Gluing, Triangulation, TriangulationError};
