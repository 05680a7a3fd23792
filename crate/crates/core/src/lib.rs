//! Jointly designed binary PAM for two senders with correlated binary sources
//! on a Gaussian multiple-access channel: exact MAP error analysis, bounds,
//! constellation designers, Monte-Carlo simulation and experiment tooling.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod decoder;
pub mod design;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod montecarlo;
pub mod source;
