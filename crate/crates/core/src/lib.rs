//! Hybrid Nelder-Mead simplex / non-dominated sorting genetic optimizer.
//!
//! The crate is organized bottom-up:
//!
//! - [`objective`]: bounded problems, evaluation counting, individuals.
//! - [`simplex`]: regular-simplex construction and the reflect/expand/contract loop.
//! - [`nsga`]: non-dominated sorting, tournament selection, crossover, mutation.
//! - [`driver`]: the hybrid generational loop ([`driver::run`]).
//! - [`benchmarks`]: the ten multimodal test problems.
//! - [`timetable`]: the multi-user remote-lab scheduling model.
//! - [`harness`]: batch experiments, success statistics and output files.

pub mod benchmarks;
pub mod driver;
pub mod error;
pub mod harness;
pub mod nsga;
pub mod objective;
pub mod simplex;
pub mod timetable;

pub use driver::{run, RunResult, SnsgaConfig, StopReason};
pub use error::{Error, Result};
pub use objective::{Bounds, EvalCounter, Individual, Interval, ObjectiveProblem, Population};
