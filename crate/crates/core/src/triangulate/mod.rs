//! Regular branches for polynomial systems, differential prolongation, and
//! elimination of one differential existential.

pub mod branch;
pub mod prolong;
pub mod qediff;

pub use branch::{triangulate_system, triangulate_with, BranchKind, RegularBranch, TriOptions};
pub use prolong::{diff_prolong_reduce, Prolongation};
pub use qediff::qe_exists_diff;
