//! Lights Out on arbitrary simple graphs.
//!
//! Pressing a vertex toggles it and all of its neighbors. From any starting
//! configuration, some set of presses toggles every vertex exactly once
//! (mod 2). This crate finds such sets two ways:
//!
//! - [`inductive`] builds one by induction over induced subgraphs, pairing
//!   up odd-degree vertices and then pressing everything;
//! - [`gf2`] solves `(A + I) x = 1` by Gaussian elimination over GF(2), and
//!   more generally any reachable target, with nullspace and minimum-weight
//!   search.
//!
//! [`oracle`] checks both against exhaustive enumeration.

pub mod bits;
pub mod error;
pub mod generate;
pub mod gf2;
pub mod graph;
pub mod inductive;
pub mod oracle;
pub mod parse;
pub mod trace;

pub use bits::BitVector;
pub use error::{GraphError, ParseError};
pub use generate::{generate, GraphKind};
pub use gf2::{
    build_system, eliminate, min_weight_solution, solve, solve_complement, solve_transition, Gf2Error, Gf2Matrix,
    LightsOutSystem, SolveOutcome,
};
pub use graph::{Configuration, Graph, GraphDoc, IndexMap, PressSet};
pub use inductive::{
    complementing_set, complementing_set_with, pair_toggle_set, InductiveConfig, InductiveError, MemoTable, PairToggle,
};
pub use oracle::{brute_force_solutions, enumerate_graphs, verify_theorem, GraphCorpus, TheoremReport};
pub use parse::parse_graph;
pub use trace::{Trace, TraceEvent};
