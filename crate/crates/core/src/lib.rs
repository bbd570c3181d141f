//! Simulation and inference for the telegraph process.
//!
//! The telegraph process moves on the real line at speed `±v`, flipping
//! direction at the events of a rate-`λ` Poisson process. This crate
//! simulates exact paths (event-driven, no time discretization), evaluates
//! the closed-form moments of the position, and estimates the switching
//! rate `λ` from positions observed on an equidistant grid. A replication
//! harness runs reproducible Monte Carlo experiments over the estimators.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable the default
//! `std` feature and enable `libm` to build for targets without a standard
//! library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("telegraph-core needs either the `std` or the `libm` feature");

mod float;

pub mod error;
pub mod estimators;
pub mod montecarlo;
pub mod moments;
pub mod quad;
pub mod search;
pub mod simulate;
pub mod specfn;

pub use error::{Error, Result};
pub use estimators::{EstimateResult, EstimatorKind, Tolerances};
pub use montecarlo::{ExperimentConfig, MonteCarloSummary};
pub use simulate::{DiscreteSample, Direction, ModelParams, TelegraphPath};
