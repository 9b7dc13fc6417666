//! Exact verification of almost contact metric structures.
//!
//! Manifolds are described by a frame over a single coordinate chart, a
//! metric and almost contact data given on that frame. From that the crate
//! derives the Levi-Civita connection, curvature, Ricci and *-Ricci
//! tensors, checks Kenmotsu and (κ,μ)′-almost-Kenmotsu identities, and fits
//! or verifies *-conformal η-Ricci solitons.

pub mod curvature;
pub mod fit;
pub mod geometry;
pub mod scalar;
pub mod soliton;
pub mod structure;

pub use geometry::{FrameOp, FrameVec, Manifold, ManifoldData, Tensor2, VectorField};
pub use scalar::{parse_expr, Point, Rational, ScalarField, Value, ZeroVerdict};
