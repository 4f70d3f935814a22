//! simmer: ingredient networks and pairwise recipe-rating prediction.
//!
//! The library turns a recipe/review corpus into ingredient networks
//! (complement, substitute, preference), derives network-structural
//! features, and trains a boosted-tree classifier that predicts which of
//! two similar recipes users rate higher.
//!
//! Start from [`pipeline::run_pipeline`] for the end-to-end flow, or see
//! the `examples/` directory for one runnable example per capability.

pub mod corpus;
pub mod features;
pub mod gbt;
pub mod ingredients;
pub mod mining;
pub mod network;
pub mod numeric;
pub mod pairs;
pub mod pipeline;
pub mod rules;
pub mod seeded;
