//! Convex valuations on polytopes: geometry kernel, seeded sampling,
//! valuation evaluation, the exact algebra of rotation-invariant valuations,
//! and a Monte Carlo harness that checks the algebra on concrete bodies.

pub mod algebra;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod sampling;
pub mod valuations;

pub use algebra::{InvariantValuation, KinematicTensor, ScaledRational, SoAlgebra};
pub use error::{Error, Result};
pub use geometry::{Frame, HalfspaceRep, Point, Polytope, Rotation};
pub use harness::{Estimate, VerificationReport};
pub use sampling::RngStream;
pub use valuations::{FormalValuation, IntrinsicVector, Valuation};
