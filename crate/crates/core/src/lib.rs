//! Exact-arithmetic workbench for Tverberg-type intersection problems on
//! unions of convex sets.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: rational scalars, points, an exact simplex solver and the
//!   convex-body predicates built on it (hull membership, disjointness,
//!   separation, facet irredundancy).
//! * [`constructions`]: the scalloped planar grids, their refined variant
//!   and the torus-product lift into higher dimension.
//! * [`certify`]: machine-checkable certificates that those grids are
//!   lower-bound witnesses, plus exhaustive partition oracles.
//! * [`separating`]: planar separating systems, incidences, the local
//!   improvement search and the auxiliary plane graph.
//! * [`turan`]: hypercube-free extremal sets, box-Turán numbers,
//!   intersection hypergraphs, shattering and polyhedral thickening.
//! * [`svg`]: deterministic figure output for planar artifacts.

pub mod certify;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod hashing;
pub mod random;
pub mod separating;
pub mod svg;
pub mod trig;
pub mod turan;

pub use error::{Error, Result};
pub use exact::{Point, Scalar};

/// Version string recorded in manifests and reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Schema tag carried by every persisted JSON artifact.
pub const SCHEMA: &str = "v1";
