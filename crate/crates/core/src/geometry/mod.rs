//! Convex polytope kernel for ambient dimension up to four.
//!
//! Bodies are stored by vertices; facets, affine hull and relative volume are
//! computed once at construction. Empty intersections are `None`, never a
//! polytope.

pub mod generators;
pub mod hull;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod polytope;

pub use generators::{ball_approx, ball_bracket, box_body, cross_polytope, cube, simplex};
pub use hull::{Facet, EPS_VERTEX};
pub use io::{parse_body, BodySpec};
pub use linalg::{Matrix, Point, MAX_DIM};
pub use measures::{intrinsic_volume, intrinsic_volumes};
pub use polytope::{Frame, Halfspace, HalfspaceRep, Polytope, PolytopeJson, Rotation, EPS_GEOM};
