//! The reduction-tree construction: fair expansion of open branches,
//! axiom cuts, proof assembly and countermodels for open branches.

mod branch;
mod search;

pub use branch::{step_branch, AxiomRecord, BranchState, BranchTrace, ImportError, Step};
pub use search::{build_reduction_tree, Budget, Search, SearchOutcome, UnknownReason};
