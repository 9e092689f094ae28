use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::calendar::{Calendar, Event};
use super::{DistributionSpec, FastStartMode, SimConfig, SimError, SimStats};
use crate::model::gates::{
    completion_dequeues, fast_start_enabled, laa_can_queue, laa_can_start, off_to_sense_enabled,
    sense_to_off_enabled, sense_to_on_enabled,
};
use crate::model::{enumerate_states, ModelParams, Phase, SystemState};

#[derive(Debug, Default, Clone, Copy)]
struct Counters {
    laa_arrivals: u64,
    laa_drops: u64,
    laa_ignored: u64,
    laa_admitted: u64,
    laa_completed: u64,
    wifi_arrivals: u64,
    wifi_drops: u64,
    wifi_ignored: u64,
    wifi_admitted: u64,
    wifi_completed: u64,
}

struct Engine<'a> {
    cfg: &'a SimConfig,
    params: &'a ModelParams,
    rng: ChaCha8Rng,
    calendar: Calendar,
    now: f64,
    state: SystemState,
    phase_epoch: u64,
    fast_epoch: u64,
    fast_pending: bool,
    states: Vec<SystemState>,
    occupancy: Vec<f64>,
    measuring: bool,
    measure_start: f64,
    counts: Counters,
}

/// Runs one replication. Replication `i` draws from its own ChaCha stream
/// of `config.seed`, so results depend only on `(config, i)`.
pub fn run_replication(config: &SimConfig, replication_index: u32) -> Result<SimStats, SimError> {
    config.validate()?;
    let params = &config.params;
    let states = enumerate_states(params)?;
    let start_phase = if params.lbt_enabled {
        Phase::Off
    } else {
        Phase::On
    };
    let eng = Engine {
        cfg: config,
        params,
        rng: config.stream(replication_index),
        calendar: Calendar::default(),
        now: 0.0,
        state: SystemState::idle(start_phase),
        phase_epoch: 0,
        fast_epoch: 0,
        fast_pending: false,
        occupancy: vec![0.0; states.len()],
        states,
        measuring: false,
        measure_start: 0.0,
        counts: Counters::default(),
    };
    eng.run()
}

impl Engine<'_> {
    fn sample(&mut self, d: DistributionSpec) -> f64 {
        d.sample(&mut self.rng)
    }

    fn after(&mut self, d: DistributionSpec, event: Event) {
        let t = self.now + self.sample(d);
        self.calendar.schedule(t, event);
    }

    fn enter_phase(&mut self, phase: Phase) {
        self.state.phase = phase;
        self.arm_phase_timer();
    }

    fn arm_phase_timer(&mut self) {
        if !self.params.lbt_enabled {
            return;
        }
        self.phase_epoch += 1;
        let d = match self.state.phase {
            Phase::Off => self.cfg.off_duration,
            Phase::Sensing => self.cfg.sense_duration,
            Phase::On => self.cfg.on_duration,
        };
        self.after(d, Event::PhaseExpire(self.phase_epoch));
    }

    fn start_laa_service(&mut self) {
        self.after(self.cfg.laa_service, Event::LaaDeparture);
    }

    fn run(mut self) -> Result<SimStats, SimError> {
        let sessions = self.cfg.sessions;
        let warmup = (sessions as f64 * self.cfg.warmup_fraction) as u64;
        self.measuring = warmup == 0;

        if let Some(d) = self.cfg.laa_interarrival {
            self.after(d, Event::LaaArrival);
        }
        if let Some(d) = self.cfg.wifi_interarrival {
            self.after(d, Event::WifiArrival);
        }
        self.arm_phase_timer();

        let mut arrivals = 0u64;
        while arrivals < sessions {
            let next = self.calendar.pop().ok_or(SimError::CalendarCorrupted {
                now: self.now,
                next: f64::NAN,
            })?;
            if next.time.is_nan() || next.time < self.now {
                return Err(SimError::CalendarCorrupted {
                    now: self.now,
                    next: next.time,
                });
            }
            if self.measuring {
                let k = self.state_index();
                self.occupancy[k] += next.time - self.now;
            }
            self.now = next.time;

            match next.event {
                Event::LaaArrival => {
                    arrivals += 1;
                    self.on_laa_arrival();
                    if let Some(d) = self.cfg.laa_interarrival {
                        self.after(d, Event::LaaArrival);
                    }
                }
                Event::WifiArrival => {
                    arrivals += 1;
                    self.on_wifi_arrival();
                    if let Some(d) = self.cfg.wifi_interarrival {
                        self.after(d, Event::WifiArrival);
                    }
                }
                Event::LaaDeparture => self.on_laa_departure(),
                Event::WifiDeparture => self.on_wifi_departure(),
                Event::PhaseExpire(epoch) => {
                    if epoch == self.phase_epoch {
                        self.on_phase_expire();
                    }
                }
                Event::FastStart(epoch) => {
                    if self.fast_pending && epoch == self.fast_epoch {
                        self.fast_pending = false;
                        self.fast_start();
                    }
                }
            }
            self.refresh_fast_start();
            debug_assert!(self.state.is_valid_for(self.params), "{}", self.state);

            if !self.measuring && arrivals == warmup {
                self.measuring = true;
                self.measure_start = self.now;
                self.counts = Counters::default();
            }
        }
        Ok(self.finish())
    }

    fn state_index(&self) -> usize {
        self.states
            .binary_search(&self.state)
            .expect("simulated state stays inside the state space")
    }

    fn on_laa_arrival(&mut self) {
        self.counts.laa_arrivals += 1;
        let s = self.state;
        if laa_can_start(&s, self.params) {
            self.state.laa += 1;
            self.counts.laa_admitted += 1;
            self.start_laa_service();
        } else if laa_can_queue(&s, self.params) {
            self.state.queued += 1;
            self.counts.laa_admitted += 1;
        } else if s.queued == self.params.effective_queue() {
            self.counts.laa_drops += 1;
        } else {
            self.counts.laa_ignored += 1;
        }
    }

    fn on_wifi_arrival(&mut self) {
        self.counts.wifi_arrivals += 1;
        let s = self.state;
        if s.busy_servers() < self.params.servers {
            self.state.wifi += 1;
            self.counts.wifi_admitted += 1;
            let d = self.cfg.wifi_service;
            self.after(d, Event::WifiDeparture);
        } else if s.laa == self.params.servers {
            self.counts.wifi_drops += 1;
        } else {
            self.counts.wifi_ignored += 1;
        }
    }

    fn on_laa_departure(&mut self) {
        self.counts.laa_completed += 1;
        if completion_dequeues(&self.state, self.params) {
            self.state.queued -= 1;
            self.start_laa_service();
        } else {
            self.state.laa -= 1;
        }
    }

    fn on_wifi_departure(&mut self) {
        self.counts.wifi_completed += 1;
        if completion_dequeues(&self.state, self.params) {
            self.state.wifi -= 1;
            self.state.laa += 1;
            self.state.queued -= 1;
            self.start_laa_service();
        } else {
            self.state.wifi -= 1;
        }
    }

    fn on_phase_expire(&mut self) {
        let s = self.state;
        match s.phase {
            Phase::On => self.enter_phase(Phase::Sensing),
            Phase::Sensing if sense_to_on_enabled(&s, self.params) => self.enter_phase(Phase::On),
            Phase::Sensing if sense_to_off_enabled(&s, self.params) => self.enter_phase(Phase::Off),
            Phase::Off if off_to_sense_enabled(&s, self.params) => self.enter_phase(Phase::Sensing),
            // no exit enabled yet: draw a fresh dwell in the same phase
            _ => self.arm_phase_timer(),
        }
    }

    fn fast_start(&mut self) {
        if fast_start_enabled(&self.state, self.params) {
            self.state.laa += 1;
            self.state.queued -= 1;
            self.start_laa_service();
        }
    }

    fn refresh_fast_start(&mut self) {
        match self.cfg.fast_start_mode {
            FastStartMode::Immediate => {
                while fast_start_enabled(&self.state, self.params) {
                    self.fast_start();
                }
            }
            FastStartMode::Exponential => {
                let enabled = fast_start_enabled(&self.state, self.params);
                if enabled && !self.fast_pending {
                    self.fast_pending = true;
                    self.fast_epoch += 1;
                    let d = DistributionSpec::exponential(1.0 / self.params.fast_start_rate());
                    self.after(d, Event::FastStart(self.fast_epoch));
                } else if !enabled && self.fast_pending {
                    self.fast_pending = false;
                    self.fast_epoch += 1;
                }
            }
        }
    }

    fn finish(self) -> SimStats {
        let c = self.counts;
        let span = self.now - self.measure_start;
        let frac = |t: f64| if span > 0.0 { t / span } else { 0.0 };
        let mut time_in_phase = [0.0; 3];
        let mut state_occupancy = Vec::with_capacity(self.states.len());
        for (s, &t) in self.states.iter().zip(&self.occupancy) {
            time_in_phase[s.phase.index()] += frac(t);
            state_occupancy.push((*s, frac(t)));
        }
        let ratio = |num: u64, den: u64| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        SimStats {
            replications: 1,
            laa_arrivals: c.laa_arrivals,
            laa_drops: c.laa_drops,
            laa_ignored: c.laa_ignored,
            laa_admitted: c.laa_admitted,
            laa_completed: c.laa_completed,
            wifi_arrivals: c.wifi_arrivals,
            wifi_drops: c.wifi_drops,
            wifi_ignored: c.wifi_ignored,
            wifi_admitted: c.wifi_admitted,
            wifi_completed: c.wifi_completed,
            laa_in_system_end: u64::from(self.state.laa + self.state.queued),
            wifi_in_system_end: u64::from(self.state.wifi),
            p_drop_laa: ratio(c.laa_drops, c.laa_arrivals),
            p_drop_wifi: ratio(c.wifi_drops, c.wifi_arrivals),
            ci_halfwidth_laa: 0.0,
            ci_halfwidth_wifi: 0.0,
            laa_undefined: c.laa_arrivals == 0,
            wifi_undefined: c.wifi_arrivals == 0,
            time_in_phase,
            state_occupancy,
            measured_time: span,
        }
    }
}
