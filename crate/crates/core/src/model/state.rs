use alloc::vec::Vec;
use core::fmt;

use super::{ModelError, ModelParams};

/// Channel phase of the LAA listen-before-talk controller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Off = 0,
    Sensing = 1,
    On = 2,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::Off, Phase::Sensing, Phase::On];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: u32) -> Option<Phase> {
        match i {
            0 => Some(Phase::Off),
            1 => Some(Phase::Sensing),
            2 => Some(Phase::On),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Phase::Off => "off",
            Phase::Sensing => "sensing",
            Phase::On => "on",
        }
    }
}

/// System state `(w, x, y, z)`: channel phase, LAA packets in service,
/// Wi-Fi packets in service, LAA packets waiting in the FIFO queue.
///
/// The derived ordering is lexicographic in field order, which is also the
/// enumeration order of [`enumerate_states`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SystemState {
    pub phase: Phase,
    pub laa: u32,
    pub wifi: u32,
    pub queued: u32,
}

impl SystemState {
    pub const fn new(phase: Phase, laa: u32, wifi: u32, queued: u32) -> Self {
        SystemState {
            phase,
            laa,
            wifi,
            queued,
        }
    }

    /// Idle state (no packets anywhere) in the given phase.
    pub const fn idle(phase: Phase) -> Self {
        SystemState::new(phase, 0, 0, 0)
    }

    pub fn busy_servers(&self) -> u32 {
        self.laa + self.wifi
    }

    /// Whether the state belongs to the state space of `params`.
    pub fn is_valid_for(&self, params: &ModelParams) -> bool {
        (params.lbt_enabled || self.phase == Phase::On)
            && self.busy_servers() <= params.servers
            && self.queued <= params.effective_queue()
    }

    pub(crate) fn check(&self, params: &ModelParams) -> Result<(), ModelError> {
        if self.is_valid_for(params) {
            Ok(())
        } else {
            Err(ModelError::OutOfDomain(*self))
        }
    }
}

impl fmt::Display for SystemState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.phase as u8, self.laa, self.wifi, self.queued
        )
    }
}

/// Every state of the chain in lexicographic `(w, x, y, z)` order.
///
/// Without LBT the phase is pinned to ON; without buffering the queue
/// dimension collapses to `z = 0`.
pub fn enumerate_states(params: &ModelParams) -> Result<Vec<SystemState>, ModelError> {
    params.validate()?;
    let phases: &[Phase] = if params.lbt_enabled {
        &Phase::ALL
    } else {
        &[Phase::On]
    };
    let d = params.servers;
    let q = params.effective_queue();
    let mut states = Vec::new();
    for &phase in phases {
        for laa in 0..=d {
            for wifi in 0..=(d - laa) {
                for queued in 0..=q {
                    states.push(SystemState::new(phase, laa, wifi, queued));
                }
            }
        }
    }
    Ok(states)
}

/// Free unlicensed servers, `D_f = D - x - y`.
pub fn free_servers(state: &SystemState, params: &ModelParams) -> u32 {
    params.servers.saturating_sub(state.busy_servers())
}

/// Free queue slots, `Q_f = Q_eff - z`.
pub fn free_queue_slots(state: &SystemState, params: &ModelParams) -> u32 {
    params.effective_queue().saturating_sub(state.queued)
}
