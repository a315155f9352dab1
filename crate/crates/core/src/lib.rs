//! Multi-armed bandits with arm-size-corrected upper confidence bounds.
//!
//! UCB-Large replaces the classical confidence coefficient `b_n` with
//! `b_{n/K}` when there are `K` arms, trading a little exploration for
//! exploitation when arms are many. This crate provides:
//!
//! - [`reward_models`]: arm distributions and large-deviations rate kernels;
//! - [`confidence`]: schedules `b_m` and upper confidence bound solvers;
//! - [`policies`]: UCB-Large, UCB-Agrawal, UCB-BK and Thompson sampling;
//! - [`simulator`]: seeded, paired Monte-Carlo regret experiments;
//! - [`cli`]: the `ucb-large` command-line front end and CSV format.
//!
//! ```
//! use ucb_large::confidence::ucb_bernoulli;
//!
//! let u = ucb_bernoulli(0.5, 1, std::f64::consts::LN_2).unwrap();
//! assert!((u - (0.5 + 3f64.sqrt() / 4.0)).abs() < 1e-12);
//! ```

pub mod cli;
pub mod confidence;
mod error;
pub mod policies;
pub mod reward_models;
pub mod rng;
pub mod simulator;

pub use error::{Error, Result};
