//! Discrete-event simulation of the coexistence system.
//!
//! The simulator keeps a [`SystemState`] mirror of the analytic chain plus
//! a future-event list, and applies the same gates as the model. Because
//! every duration is drawn from a [`DistributionSpec`], it can also run
//! with non-exponential service and phase times.

mod calendar;
mod dist;
mod engine;

pub use dist::{DistributionSpec, Family};
pub use engine::run_replication;

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use thiserror::Error;

use crate::model::{ModelError, ModelParams, SystemState};
use crate::stats::mean_ci95;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid simulation config: {0}")]
    InvalidConfig(&'static str),
    #[error("event calendar corrupted at t={now}: next event at t={next}")]
    CalendarCorrupted { now: f64, next: f64 },
}

/// How a queued LAA packet reaches a free server once the cell is ON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FastStartMode {
    /// After an exponential delay with rate `μ_on'`, as in the chain.
    #[default]
    Exponential,
    /// Without delay.
    Immediate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    /// LAA plus Wi-Fi arrivals generated per replication.
    pub sessions: u64,
    pub seed: u64,
    pub replications: u32,
    /// Leading fraction of the arrivals excluded from statistics.
    pub warmup_fraction: f64,
    /// `None` switches the stream off (zero arrival rate).
    pub laa_interarrival: Option<DistributionSpec>,
    pub wifi_interarrival: Option<DistributionSpec>,
    pub laa_service: DistributionSpec,
    pub wifi_service: DistributionSpec,
    pub sense_duration: DistributionSpec,
    pub on_duration: DistributionSpec,
    pub off_duration: DistributionSpec,
    pub fast_start_mode: FastStartMode,
}

impl SimConfig {
    pub const DEFAULT_SESSIONS: u64 = 1_000_000;
    pub const DEFAULT_WARMUP: f64 = 0.05;

    /// Exponential everything, with means taken from the model rates.
    pub fn exponential(params: ModelParams) -> Self {
        SimConfig {
            params,
            sessions: Self::DEFAULT_SESSIONS,
            seed: 1,
            replications: 1,
            warmup_fraction: Self::DEFAULT_WARMUP,
            laa_interarrival: DistributionSpec::from_rate(params.lambda_laa),
            wifi_interarrival: DistributionSpec::from_rate(params.lambda_wifi),
            laa_service: DistributionSpec::exponential(1.0 / params.mu_laa),
            wifi_service: DistributionSpec::exponential(1.0 / params.mu_wifi),
            sense_duration: DistributionSpec::exponential(1.0 / params.mu_sense),
            on_duration: DistributionSpec::exponential(1.0 / params.mu_on),
            off_duration: DistributionSpec::exponential(1.0 / params.mu_off),
            fast_start_mode: FastStartMode::Exponential,
        }
    }

    pub fn with_sessions(mut self, sessions: u64) -> Self {
        self.sessions = sessions;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_replications(mut self, replications: u32) -> Self {
        self.replications = replications;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.params.validate()?;
        if self.sessions == 0 {
            return Err(SimError::InvalidConfig("sessions must be positive"));
        }
        if self.replications == 0 {
            return Err(SimError::InvalidConfig(
                "at least one replication is required",
            ));
        }
        if !(0.0..1.0).contains(&self.warmup_fraction) {
            return Err(SimError::InvalidConfig(
                "warmup_fraction must lie in [0, 1)",
            ));
        }
        if self.laa_interarrival.is_none() && self.wifi_interarrival.is_none() {
            return Err(SimError::InvalidConfig("no arrival stream is active"));
        }
        let specs = [
            self.laa_interarrival,
            self.wifi_interarrival,
            Some(self.laa_service),
            Some(self.wifi_service),
            Some(self.sense_duration),
            Some(self.on_duration),
            Some(self.off_duration),
        ];
        if specs.iter().flatten().all(DistributionSpec::is_valid) {
            Ok(())
        } else {
            Err(SimError::InvalidConfig(
                "distribution means (and cv) must be positive",
            ))
        }
    }

    /// Generator for replication `index`: same seed, separate ChaCha stream.
    pub(crate) fn stream(&self, index: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(index));
        rng
    }
}

/// Counters and estimates of a simulation run. Counts cover the measured
/// (post-warmup) part and are summed over replications; probabilities and
/// time fractions are replication means.
#[derive(Debug, Clone, PartialEq)]
pub struct SimStats {
    pub replications: u32,
    pub laa_arrivals: u64,
    pub laa_drops: u64,
    /// LAA arrivals that found a free server but a non-empty queue while
    /// ON; the chain has no transition for them and does not count them
    /// as drops.
    pub laa_ignored: u64,
    pub laa_admitted: u64,
    pub laa_completed: u64,
    pub wifi_arrivals: u64,
    pub wifi_drops: u64,
    /// Wi-Fi arrivals that found the channel held by Wi-Fi traffic.
    pub wifi_ignored: u64,
    pub wifi_admitted: u64,
    pub wifi_completed: u64,
    /// LAA (in service or queued) and Wi-Fi packets left at the end.
    pub laa_in_system_end: u64,
    pub wifi_in_system_end: u64,
    pub p_drop_laa: f64,
    pub p_drop_wifi: f64,
    pub ci_halfwidth_laa: f64,
    pub ci_halfwidth_wifi: f64,
    /// No LAA (resp. Wi-Fi) arrival was measured; the estimate is 0.
    pub laa_undefined: bool,
    pub wifi_undefined: bool,
    /// Fraction of measured time per phase, indexed by [`crate::Phase::index`].
    pub time_in_phase: [f64; 3],
    /// Fraction of measured time per state, in enumeration order.
    pub state_occupancy: Vec<(SystemState, f64)>,
    pub measured_time: f64,
}

/// Runs `config.replications` independent replications and aggregates
/// them with Student-t 95% confidence intervals.
pub fn run_simulation(config: &SimConfig) -> Result<SimStats, SimError> {
    config.validate()?;
    let reps = (0..config.replications)
        .map(|i| run_replication(config, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(aggregate(&reps))
}

/// Combines per-replication results. A single replication is returned
/// unchanged.
pub fn aggregate(reps: &[SimStats]) -> SimStats {
    if let [only] = reps {
        return only.clone();
    }
    let n = reps.len() as f64;
    let sum = |f: fn(&SimStats) -> u64| reps.iter().map(f).sum::<u64>();
    let p_laa: Vec<f64> = reps.iter().map(|r| r.p_drop_laa).collect();
    let p_wifi: Vec<f64> = reps.iter().map(|r| r.p_drop_wifi).collect();
    let (p_drop_laa, ci_halfwidth_laa) = mean_ci95(&p_laa);
    let (p_drop_wifi, ci_halfwidth_wifi) = mean_ci95(&p_wifi);

    let mut time_in_phase = [0.0; 3];
    for r in reps {
        for (acc, v) in time_in_phase.iter_mut().zip(r.time_in_phase) {
            *acc += v / n;
        }
    }
    let mut state_occupancy = reps[0].state_occupancy.clone();
    for (k, slot) in state_occupancy.iter_mut().enumerate() {
        slot.1 = reps.iter().map(|r| r.state_occupancy[k].1).sum::<f64>() / n;
    }

    SimStats {
        replications: reps.len() as u32,
        laa_arrivals: sum(|r| r.laa_arrivals),
        laa_drops: sum(|r| r.laa_drops),
        laa_ignored: sum(|r| r.laa_ignored),
        laa_admitted: sum(|r| r.laa_admitted),
        laa_completed: sum(|r| r.laa_completed),
        wifi_arrivals: sum(|r| r.wifi_arrivals),
        wifi_drops: sum(|r| r.wifi_drops),
        wifi_ignored: sum(|r| r.wifi_ignored),
        wifi_admitted: sum(|r| r.wifi_admitted),
        wifi_completed: sum(|r| r.wifi_completed),
        laa_in_system_end: sum(|r| r.laa_in_system_end),
        wifi_in_system_end: sum(|r| r.wifi_in_system_end),
        p_drop_laa,
        p_drop_wifi,
        ci_halfwidth_laa,
        ci_halfwidth_wifi,
        laa_undefined: reps.iter().all(|r| r.laa_undefined),
        wifi_undefined: reps.iter().all(|r| r.wifi_undefined),
        time_in_phase,
        state_occupancy,
        measured_time: reps.iter().map(|r| r.measured_time).sum(),
    }
}
