//! Computes the masking fault-tolerance distance between a nominal model and
//! a fault-extended implementation.
//!
//! The pipeline: parse guarded-command models ([`gcl`]), compile them to
//! explicit labelled transition systems ([`semantics`]), build the two-player
//! masking game ([`game`]), and solve it for the exact rational distance
//! ([`solver`]). [`relations`] contains direct relational definitions of
//! masking simulation used as independent oracles.

pub mod game;
pub mod gcl;
pub mod relations;
pub mod semantics;
pub mod solver;
