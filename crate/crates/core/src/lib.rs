//! Exact solver for linear optimization over max-min fuzzy relational equations
//! `a_i ⊗ x = max_j min{a_ij, x_i, x_j} = b_i`.
//!
//! The pipeline classifies rows, builds extremal solutions, prunes selector
//! domains with seven necessary-condition rules, enumerates the remaining
//! triples and picks the best candidate of each nonempty cell.

pub mod error;
pub mod extremals;
pub mod fixtures;
pub mod gen;
pub mod model;
pub mod oracle;
pub mod reduction;
pub mod scalar;
pub mod solver;
pub mod vertexcover;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use extremals::{
    aggregate_bounds, cell_of, classify_rows, extremal_solutions, selector_bounds, BoundVectors,
    Cell, ExtremalSet, RowClass, RowClassification, SelectorBounds, Variant,
};
pub use model::{
    load_instance, parse_vector, squarify, Instance, InstanceDoc, MembershipReport, RowReport,
    Sense,
};
pub use reduction::{reduce, MaskMatrices, ReductionState, RuleFiring};
pub use scalar::Scalar;
pub use solver::{
    enumerate_admissible, feasible_region, gate_feasibility, make_candidate, solve,
    solve_with, Candidate, InfeasibilityCause, Solution, SolveOptions, Statistics, Status, Triple,
};
pub use vertexcover::{graph_to_instance, solve_cover, verify_structure, CoverResult, Graph};
