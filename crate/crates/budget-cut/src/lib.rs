//! Solvers for budget-constrained minimum and maximum cuts of undirected
//! graphs whose edges carry both a weight (the objective) and a cost
//! (the resource): find a two-way cut optimizing total weight subject to
//! total cut cost staying within a budget.
//!
//! The toolkit provides:
//!
//! * [`graph`] — the weighted/costed multigraph with contraction and exact
//!   undo, cut evaluation, cut-validity labelling, and block decomposition;
//! * [`mincut`] — Stoer-Wagner global minimum cut plus the budget-aware
//!   variant that stops as soon as any cut within budget appears;
//! * [`bounds`] — fractional-knapsack style bounds and the unconstrained
//!   min-cut lower bound;
//! * [`bnb`] — the exact branch-and-bound enumeration for both senses, with
//!   tree and block fast paths and an optional s-t terminal constraint;
//! * [`lagrangian`] — a Lagrangian-relaxation heuristic for the min-cut
//!   case, with intermediate-cut harvesting and local-search refinement;
//! * [`oracle`] — brute-force ground truth for desk-scale verification;
//! * [`instance`] — instance text formats, random generation, budget
//!   computation, and the knapsack-to-cut reduction.

pub mod bnb;
pub mod bounds;
pub mod error;
pub mod graph;
pub mod instance;
pub mod lagrangian;
pub mod mincut;
pub mod oracle;

pub use error::{Error, Result};
pub use graph::{Cut, EdgeId, Side, VertexId, WeightedGraph};
