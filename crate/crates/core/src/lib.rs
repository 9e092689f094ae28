//! Performance model of LAA and Wi-Fi sharing one unlicensed channel.
//!
//! The LAA small cell runs a listen-before-talk controller that cycles
//! between OFF, sensing and ON phases, and buffers LAA packets in a finite
//! FIFO queue while the channel is unavailable. The crate provides:
//!
//! * [`model`]: the state space `(phase, laa, wifi, queued)`, the transition
//!   gates, and the sparse generator of the continuous-time Markov chain.
//! * [`solver`]: stationary distribution by a direct linear solve and by a
//!   Gauss-Seidel balance sweep, plus LAA/Wi-Fi dropping probabilities.
//! * [`sim`]: a future-event-list simulator of the same system with
//!   pluggable service and phase-duration distributions.
//! * [`experiments`]: the reference validation grids, the queue-size sweep
//!   and analytic-vs-simulation comparison rows.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod experiments;
pub mod model;
pub mod sim;
pub mod solver;
pub mod stats;

pub use model::{
    build_rate_matrix, enumerate_states, ModelError, ModelParams, Phase, RateMatrix, SenseRelease,
    SystemState, ThresholdMode, Transition, TransitionKind,
};
pub use sim::{
    run_replication, run_simulation, DistributionSpec, Family, FastStartMode, SimConfig, SimError,
    SimStats,
};
pub use solver::{
    blocking_probabilities, solve_direct, solve_iterative, SolveError, StationaryResult,
};
