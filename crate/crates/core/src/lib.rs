//! Locally checkable coloring problems on structured trees: balls and their
//! canonical types, a finite-palette solver with an exhaustive oracle,
//! automaton-presented binary trees, the Σ and Π problems on anchored
//! components, and the gadget encoding used to hide tree structure.
//!
//! ```
//! use lclkit::{decide_f, interior_vertices, sigma_coloring_from_branch, sigma_problem,
//!              truncate, verify, FDecision, TreeAutomaton};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let a = TreeAutomaton::full_binary();
//! if let FDecision::NotInF(w) = decide_f(&a) {
//!     let g = truncate(&a, 6);
//!     let f = sigma_coloring_from_branch(&a, &w, 6)?;
//!     assert!(verify(&g, &f, &sigma_problem(), &interior_vertices(&g, 6))?.ok);
//! }
//! # Ok(())
//! # }
//! ```

pub mod ball;
pub mod cli;
pub mod dot;
pub mod gadget;
pub mod graph;
pub mod lcl;
pub mod problems;
pub mod regtree;
pub mod sigma_pi;
pub mod solver;

pub use ball::{ball, canonical_type, BallError, BallType, RootedBall};
pub use dot::export_dot;
pub use gadget::{decode, encode, lift_problem, GadgetError, GadgetKind, PI_STAR_RADIUS};
pub use graph::{
    build_structured_graph, Coloring, Edge, EdgeKind, GraphError, Side, StructuredGraph, VertexId,
    VertexKind,
};
pub use lcl::{proper_coloring, verify, CheckMode, LclError, LocalProblem, Verdict};
pub use problems::{lenient_mode, problem_by_name};
pub use regtree::{
    branch_prefix, decide_f, enumerate_automata, truncate, AutomatonError, Bits, BranchWitness,
    FDecision, TreeAutomaton,
};
pub use sigma_pi::{
    build_component, component_colorable, extract_branch, interior_vertices, k_of,
    pi_coloring_for_component, pi_problem, sigma_coloring_from_branch, sigma_problem,
    ComponentSpec, SigmaPiError,
};
pub use solver::{
    exhaustive_oracle, exhaustive_oracle_with_cap, solve_finite_palette, SolveOutcome,
};
