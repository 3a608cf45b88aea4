//! Oblivious online stacking for MAX k-CUT on interval overlap graphs.
//!
//! Items with storage-time intervals are assigned to one of `k` LIFO stacks
//! by looking only at the item's own interval: the center picks a cell of a
//! fixed grid on `[0, 1]` and the cells are colored cyclically. Two items
//! conflict when their intervals overlap (intersect without containment).
//!
//! The crate provides the random instance models, the coloring rule, overlap
//! graph tooling with exact and greedy MAX k-CUT solvers, closed-form
//! probabilities of a same-stack conflict, and Monte Carlo estimators that
//! check them.
//!
//! Geometry and closed forms are generic over [`Scalar`], so they run on
//! `f32`, `f64` or exact rationals; the aliases below fix the common choices.

pub mod analysis;
pub mod coloring;
pub mod error;
mod fenwick;
pub mod graph;
pub mod model;
pub mod scalar;

pub use coloring::{random_coloring, ColorRule, Coloring};
pub use error::{Error, Result};
pub use graph::{
    build_overlap_graph, count_overlapping_pairs, evaluate_cut, greedy_kcut, max_kcut_exact, overlaps, CutStats,
    OverlapGraph,
};
pub use model::{
    generate_extended, generate_scheinerman, standard_max_len, validate_assumption, Interval, LengthDensity,
    ModelParams,
};
pub use scalar::{FloatScalar, Scalar};

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type Interval64 = Interval<f64>;
pub type Interval32 = Interval<f32>;
pub type ExactInterval = Interval<Exact>;

pub type ColorRule64 = ColorRule<f64>;
pub type ExactColorRule = ColorRule<Exact>;

pub type ModelParams64 = ModelParams<f64>;
pub type LengthDensity64 = LengthDensity<f64>;
