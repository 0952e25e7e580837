//! Structured approval domains: domination, consecutive-ones recognition,
//! linearly consistent (LC) orders, interval and tree models, and the L/R
//! labeling used to refute voter/candidate interval membership.

mod c1p;
mod dominance;
pub mod fixtures;
pub mod generate;
mod intervals;
mod labeling;
mod lc;
mod tree;
pub mod twosat;

pub use c1p::{consecutive_ones_order, is_consecutive_order, order_for_sets, Axis};
pub use dominance::{
    dominates, find_dominations, is_domination_free, remove_dominated_columns,
    undominated_candidates,
};
pub use intervals::{
    intervals_to_matrix, lc_order_to_vcci_intervals, vcci_intervals_to_lc_order, vci_to_lc_order,
    Interval, IntervalMode, IntervalModel,
};
pub use labeling::{lr_labeling_feasible, refute_vci_small, Label, LrLabeling};
pub use lc::{check_lc_order, check_lc_order_naive, find_lc_order_bruteforce, LinearOrderWitness};
pub use tree::{tree_model_to_matrix, TreeModel};

use thiserror::Error;

/// Largest side accepted by the exhaustive searches.
pub const BRUTE_FORCE_LIMIT: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("matrix is {rows}x{cols}; exhaustive search is limited to {limit}x{limit}")]
    TooLarge {
        rows: usize,
        cols: usize,
        limit: usize,
    },
    #[error("interval model has mode {found:?}, expected {expected:?}")]
    WrongMode {
        expected: IntervalMode,
        found: IntervalMode,
    },
    #[error("orders are not a linearly consistent witness for this matrix")]
    NotLcWitness,
    #[error("voter {0} approves no candidate")]
    EmptyRow(usize),
    #[error("candidate {0} has no supporter")]
    EmptyColumn(usize),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("interval {index} has left endpoint {left} above right endpoint {right}")]
    InvalidInterval {
        index: usize,
        left: String,
        right: String,
    },
    #[error("model has no voters or no candidates")]
    EmptyModel,
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("subtree of {0} is not connected")]
    DisconnectedSubtree(String),
    #[error("subtree of {0} is empty")]
    EmptySubtree(String),
}
