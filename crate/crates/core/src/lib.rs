//! Exact winner determination for Thiele committee rules on structured
//! approval domains.
//!
//! The pipeline solves the linear relaxation of the standard Thiele integer
//! program with an exact rational simplex, shifts fractional mass along
//! candidate dominations, and re-solves the domination-free residual, whose
//! vertices are integral on voter/candidate interval and linearly consistent
//! profiles. The [`domains`] module recognizes and converts between those
//! profile classes and [`hardness`] builds the tree-representation gadgets
//! together with brute-force oracles.

pub mod domains;
pub mod election;
pub mod hardness;
pub mod rational;
pub mod ratlp;
pub mod solver;
pub mod thiele_lp;

pub use election::{
    build_election, make_rule_weights, score_committee, ApprovalMatrix, Committee, Election,
    ElectionError, Rule, WeightSpec, WeightSystem,
};
pub use rational::Rational;
