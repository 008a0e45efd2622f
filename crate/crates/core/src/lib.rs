//! Zero-error and vanishing-error capacity analysis for state-dependent
//! discrete memoryless channels with noiseless feedback.
//!
//! The crate decides when error-free communication is possible under
//! fixed-, bounded-, and variable-length feedback coding for each pattern of
//! state knowledge at the encoder and decoder, computes the matching
//! capacities numerically, and simulates the zero-error protocols that make
//! those capacities achievable.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod fixtures;
pub mod info;
pub mod oracles;
pub mod positivity;
pub mod reductions;
pub mod rng;
pub mod si;
pub mod simulation;

pub use channel::{load_channel, validate, ChannelDoc, Dmc, SdDmc, ValidationReport};
pub use error::{Error, Result};
pub use positivity::{Decision, Verdict, Witness};
pub use reductions::StrategyLetter;
pub use si::{Regime, SiModel, StateInfo};
