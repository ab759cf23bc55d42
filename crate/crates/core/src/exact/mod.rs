//! Exact rational geometry: scalars, points, the simplex solver and the
//! convex-body predicates everything else is built on.

pub mod hpoly;
pub mod hull;
pub mod lp;
pub mod point;
pub mod region;
pub mod scalar;

pub use hpoly::{Halfspace, HPolyhedron, Sense};
pub use hull::{
    convex_position, hull_membership, hulls_disjoint, hulls_intersect, multi_hulls_intersect, HullRelation,
    SeparationWitness, VPolytope,
};
pub use point::Point;
pub use region::Region;
pub use scalar::Scalar;
