//! State space, transition gates and generator matrix of the coexistence
//! chain.

pub(crate) mod gates;
mod matrix;
mod params;
mod state;

pub use gates::{packet_transitions, phase_transitions, transitions, Transition, TransitionKind};
pub use matrix::{build_rate_matrix, RateMatrix};
pub use params::{ModelParams, SenseRelease, ThresholdMode};
pub use state::{enumerate_states, free_queue_slots, free_servers, Phase, SystemState};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam {
        name: &'static str,
        reason: &'static str,
    },
    #[error("state {0} is outside the state space of these parameters")]
    OutOfDomain(SystemState),
}
