//! Counting labeled copies, homomorphisms and walks of trees in graphs.
//!
//! The crate evaluates the classical lower bounds on these counts in log
//! space, implements the oriented random embedding process together with its
//! probability weights (exact rationals), and ships a harness that checks the
//! resulting inequalities on small graph families.

pub mod bounds;
pub mod counting;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod io;
pub mod measure;
pub mod numeric;
pub mod tree;

pub use bounds::{compare_count_to_bound, evaluate_bounds, Bound, BoundReport, Comparison};
pub use counting::{
    count_copies, count_homomorphisms, count_homomorphisms_bruteforce, count_star_formula,
    count_walks, max_induced_copy_degree, path_walk_ratio, CountMethod, CountResult, WorkCap,
};
pub use error::{Error, Result};
pub use graph::Graph;
pub use measure::{Embedding, GTable, MeasureKind};
pub use tree::{GoodLabeling, Tree};
