//! Experiment runner behind the `qed` command: compilation, noisy
//! simulation with post-selection, syndrome-schedule sweeps, the detection
//! model curves and the noisy-identity benchmark.
//!
//! Every random draw descends from one master seed. A grid point gets a
//! seed mixed from the master seed and its coordinates, trial `t` of that
//! point a seed mixed from the point seed and `t`, and shot `i` of the
//! trial the simulator's stream `(trial seed, i)`. Results therefore do not
//! depend on the thread count or on which points ran before.

pub mod commands;
pub mod error;
pub mod runner;
pub mod seed;

pub use error::{Error, Result};
