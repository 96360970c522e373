//! Exact computation with coherent distributions: pairs (or finite families)
//! of conditional probabilities of a common event.
//!
//! The crate provides
//! - an exact rational kernel ([`numeric`]),
//! - a certified rational simplex solver ([`lp`]),
//! - finite-support joint opinion laws and the classical example
//!   constructions ([`laws`]),
//! - exact coherence checking with witnesses and certificates ([`coherence`]),
//! - extremal optimization of target functionals over coherent laws on
//!   finite grids ([`extremal`]),
//! - enumeration of the polygon of extreme 2x2 coherent laws on a rectangle
//!   ([`polytope`]), and
//! - closed-form bound evaluators used as test oracles ([`bounds`]).

pub mod bounds;
pub mod coherence;
pub mod extremal;
pub mod laws;
pub mod lp;
pub mod numeric;
pub mod polytope;

pub use numeric::{parse_rational, Rational};
