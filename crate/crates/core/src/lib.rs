//! Search for critical edge-colorings of complete graphs with the
//! cross-entropy method, and independent verification of the resulting
//! Ramsey lower-bound certificates.
//!
//! - [`graph`]: colorings of `K_n`, their color-class graphs, matrix I/O.
//! - [`pattern`]: registry of forbidden-pattern counters and the reward.
//! - [`policy`]: the feed-forward policy and its training step.
//! - [`trainer`]: the batch loop; [`checkpoint`] and [`config`] around it.
//! - [`certify`]: independent verification and the bundled critical colorings.

pub mod certify;
pub mod checkpoint;
pub mod config;
pub mod error;
pub mod graph;
pub mod pattern;
pub mod policy;
pub mod trainer;

pub use error::{Error, Result};
