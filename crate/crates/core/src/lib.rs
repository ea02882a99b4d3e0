//! Approximation of the minimum directed tree cover problem.
//!
//! A directed tree cover of a digraph is a rooted branching whose touched
//! vertices meet every arc. This crate provides:
//!
//! - [`solver`]: a three-phase primal-dual algorithm computing, for a fixed
//!   root, a branching cover together with a dual certificate whose value
//!   bounds the optimum from below, plus a driver that tries every root;
//! - [`reduction`]: the embedding of weighted set cover into the rooted
//!   problem and the lift of solutions back;
//! - [`oracle`] and [`verify`]: exhaustive exact solvers and independent
//!   checkers for covers, branchings, dual feasibility and ratios;
//! - [`format`] and [`generate`]: line-based text formats and a seeded
//!   instance generator.
//!
//! All costs are exact rationals ([`Cost`]).

pub mod arborescence;
pub mod cost;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod reduction;
pub mod solver;
pub mod verify;

pub use cost::{harmonic, Cost, ExtCost};
pub use error::{CostError, GraphError, OracleError, ParseError, ReductionError, SolveError};
pub use graph::{ArcId, ArcSet, BranchingCover, Digraph, NodeId, NodeSet};
pub use solver::{solve, solve_root, DualLedger, Family, SolveResult, SolverState};
