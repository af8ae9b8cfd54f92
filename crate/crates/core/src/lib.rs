//! Decision-theoretic mediation of message alerts.
//!
//! The crate combines a Bayesian model of a user's attentional focus with a
//! calibrated classifier of message criticality, and weighs the expected
//! cost of interrupting the user against the expected cost of letting a
//! message wait for the user's next unprompted inbox check.

pub mod api;
pub mod attention;
pub mod bayesnet;
pub mod classifier;
pub mod harness;
pub mod models;
pub mod policy;
pub mod rng;
pub mod utility;
