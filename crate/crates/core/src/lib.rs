//! Cohort partitioning of campus contact networks by recursive Max-Cut, and
//! SIR outbreak comparison against uniformly random cohorts.
//!
//! The pipeline is: generate a course enrollment network ([`netgen`]), split
//! students into cohorts ([`cohort`], backed by the solvers in [`qubomc`]),
//! drop inter-cohort class edges, optionally add dormitory interaction edges,
//! and simulate outbreaks on the result ([`sir`]). [`harness`] runs paired
//! solver-vs-random experiments and parameter sweeps.

pub mod cohort;
pub mod error;
pub mod graph;
pub mod harness;
pub mod netgen;
pub mod qubomc;
pub mod rng;
pub mod sir;

pub use error::{Error, Result};
pub use graph::{EdgeTag, Graph};
