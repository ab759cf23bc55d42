//! Combinatorial engines for the disjoint-union upper bound: hypercube-free
//! tuple sets, box-type Turán numbers, geometric intersection hypergraphs,
//! the empty-tuple lemma, shattering oracles and polyhedral thickening.

pub mod boxes;
pub mod geometric;
pub mod hypercube;
pub mod shatter;

pub use boxes::{box_turan, check_box_freeness, BoxTuran, BoxViolation, Hypergraph};
pub use geometric::{
    find_empty_tuple, intersection_hypergraph, polyhedral_thickening, random_disjoint_unions, random_families, random_separated_pairs, verify_thickening, EmptyTupleMethod, Thickening,
};
pub use hypercube::{
    contains_hypercube, is_hypercube_free, max_hypercube_free, power_bound_holds, verify_recursion_bound, FResult,
    FTable, RecursionCheck, TupleSet,
};
pub use shatter::{halfplane_hypergraph, r_shattered, vc_dimension, VcResult};
