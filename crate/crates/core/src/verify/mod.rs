//! Verification tools: graph folding for free-basis and membership tests,
//! the exact word-identity suite, and finite permutation witnesses.

pub mod graph;
pub mod identities;
pub mod perm;
pub mod witness;

pub use graph::{build_graph, is_free_basis, Edge, GraphError, SubgroupGraph, WedgeBuild};
pub use identities::{check_identities, negative_controls, to_json_lines, CheckRecord};
pub use perm::Perm;
pub use witness::{
    find_witness, validate_witness, PermAssignment, WitnessError, WitnessOptions, WitnessReport,
    WitnessStatus,
};
