//! Numerical laboratory for non-autonomous discrete dynamical systems.
//!
//! A non-autonomous system applies a *sequence* of continuous self-maps
//! f_1, f_2, ... of a metric space in order, rather than iterating a single
//! map. This crate builds such sequences from a closed constructor set,
//! drives their orbits and k-th iterate systems, and searches for concrete
//! witness evidence of sensitivity, collective/synchronous sensitivity,
//! transitivity, and dense periodic points, bundling the results into
//! reproducible certification pipelines with explicit constants.
//!
//! Everything is deterministic given a seed: searches combine fixed scan
//! grids with seeded random sampling, and every pipeline echoes its full
//! configuration so a report can be reproduced byte for byte.
//!
//! Start with the runnable programs in `examples/` — each demonstrates one
//! capability end to end — or the `nads` binary for config-driven runs.

// numeric parameter guards are written `!(x > 0)` so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod banks;
pub mod config;
pub mod error;
pub mod linear;
pub mod map;
pub mod modulus;
pub mod periodic;
pub mod point;
pub mod preservation;
pub mod report;
pub mod run;
pub mod schedule;
pub mod sensitivity;
pub mod sequence;
pub mod space;
pub mod transitivity;
pub mod witness;

pub use error::{Error, Result};
pub use map::MapExpr;
pub use point::Point;
pub use schedule::Schedule;
pub use sequence::{LimitRule, MapSequence, Orbit, SequenceVariant};
pub use space::{Norm, StateSpace};
