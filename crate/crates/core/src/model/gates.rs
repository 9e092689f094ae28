use alloc::vec::Vec;

use super::{ModelError, ModelParams, Phase, SenseRelease, SystemState};

/// Which gate produced a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TransitionKind {
    /// δ₁: LAA arrival finds the cell ON, a free server and an empty queue.
    LaaArrivalServe,
    /// δ₂: LAA service completes and the server is released.
    LaaComplete,
    /// δ₃: Wi-Fi arrival finds a free server.
    WifiArrivalServe,
    /// δ₄: Wi-Fi service completes and the server is released.
    WifiComplete,
    /// δ₅: LAA arrival is buffered.
    LaaArrivalQueue,
    /// δ₆: LAA completion hands the server to the head of the queue.
    LaaCompleteDequeue,
    /// δ₇: Wi-Fi completion hands the server to the head of the LAA queue.
    WifiCompleteHandover,
    /// δ₈: a queued LAA packet is started on a free server while ON.
    FastStart,
    /// δ₁₇
    SenseToOn,
    /// δ₁₈
    OffToSense,
    /// δ₁₉
    SenseToOff,
    /// δ₂₀
    OnToSense,
}

impl TransitionKind {
    pub fn is_phase_change(self) -> bool {
        matches!(
            self,
            TransitionKind::SenseToOn
                | TransitionKind::OffToSense
                | TransitionKind::SenseToOff
                | TransitionKind::OnToSense
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub from: SystemState,
    pub to: SystemState,
    pub rate: f64,
    pub kind: TransitionKind,
}

struct Emitter<'a> {
    from: SystemState,
    out: &'a mut Vec<Transition>,
}

impl Emitter<'_> {
    fn emit(&mut self, kind: TransitionKind, to: SystemState, rate: f64) {
        // zero-rate gates (e.g. λ = 0) contribute nothing
        if rate > 0.0 {
            self.out.push(Transition {
                from: self.from,
                to,
                rate,
                kind,
            });
        }
    }
}

/// LAA may start service on arrival: cell ON, a server free, queue empty.
pub(crate) fn laa_can_start(s: &SystemState, p: &ModelParams) -> bool {
    s.phase == Phase::On && s.busy_servers() < p.servers && s.queued == 0
}

/// LAA arrival is buffered: a slot is free and either every server is busy
/// or the cell is not ON.
pub(crate) fn laa_can_queue(s: &SystemState, p: &ModelParams) -> bool {
    s.queued < p.effective_queue() && (s.busy_servers() == p.servers || s.phase != Phase::On)
}

/// Completions hand the server to the queue instead of releasing it.
pub(crate) fn completion_dequeues(s: &SystemState, p: &ModelParams) -> bool {
    s.phase == Phase::On && s.queued > 0 && s.busy_servers() == p.servers
}

/// Fast start of a queued packet. Only the LBT controller switches ON,
/// so the gate is closed without LBT.
pub(crate) fn fast_start_enabled(s: &SystemState, p: &ModelParams) -> bool {
    p.lbt_enabled && s.phase == Phase::On && s.wifi == 0 && s.queued > 0 && s.laa < p.servers
}

pub(crate) fn sense_to_on_enabled(s: &SystemState, p: &ModelParams) -> bool {
    s.phase == Phase::Sensing && s.laa == 0 && s.wifi == 0 && p.activation_passes(s.queued)
}

pub(crate) fn off_to_sense_enabled(s: &SystemState, p: &ModelParams) -> bool {
    s.phase == Phase::Off && p.activation_passes(s.queued)
}

pub(crate) fn sense_to_off_enabled(s: &SystemState, p: &ModelParams) -> bool {
    if s.phase != Phase::Sensing {
        return false;
    }
    let channel = match p.sense_release {
        SenseRelease::WifiHeld => s.laa == 0 && s.wifi >= 1,
        SenseRelease::ChannelBusy => s.busy_servers() > 0,
        SenseRelease::ThresholdOnly => false,
    };
    channel || p.deactivation_passes(s.queued)
}

/// Forward packet-event transitions (arrivals, completions, queue moves)
/// leaving `state`.
///
/// An arrival with no eligible gate is a drop (or, for the uncounted cases,
/// simply lost); it produces no transition.
pub fn packet_transitions(
    state: &SystemState,
    params: &ModelParams,
) -> Result<Vec<Transition>, ModelError> {
    state.check(params)?;
    let mut out = Vec::new();
    push_packet_transitions(state, params, &mut out);
    Ok(out)
}

/// Phase-controller transitions leaving `state`. Empty without LBT.
pub fn phase_transitions(
    state: &SystemState,
    params: &ModelParams,
) -> Result<Vec<Transition>, ModelError> {
    state.check(params)?;
    let mut out = Vec::new();
    push_phase_transitions(state, params, &mut out);
    Ok(out)
}

/// Packet and phase transitions leaving `state`.
pub fn transitions(
    state: &SystemState,
    params: &ModelParams,
) -> Result<Vec<Transition>, ModelError> {
    state.check(params)?;
    let mut out = Vec::new();
    push_packet_transitions(state, params, &mut out);
    push_phase_transitions(state, params, &mut out);
    Ok(out)
}

pub(crate) fn push_packet_transitions(s: &SystemState, p: &ModelParams, out: &mut Vec<Transition>) {
    use TransitionKind::*;
    let SystemState {
        phase,
        laa,
        wifi,
        queued,
    } = *s;
    let dequeue = completion_dequeues(s, p);
    let mut e = Emitter { from: *s, out };

    if laa_can_start(s, p) {
        e.emit(
            LaaArrivalServe,
            SystemState::new(phase, laa + 1, wifi, queued),
            p.lambda_laa,
        );
    }
    if laa > 0 {
        let rate = f64::from(laa) * p.mu_laa;
        if dequeue {
            e.emit(
                LaaCompleteDequeue,
                SystemState::new(phase, laa, wifi, queued - 1),
                rate,
            );
        } else {
            e.emit(
                LaaComplete,
                SystemState::new(phase, laa - 1, wifi, queued),
                rate,
            );
        }
    }
    if s.busy_servers() < p.servers {
        e.emit(
            WifiArrivalServe,
            SystemState::new(phase, laa, wifi + 1, queued),
            p.lambda_wifi,
        );
    }
    if wifi > 0 {
        let rate = f64::from(wifi) * p.mu_wifi;
        if dequeue {
            e.emit(
                WifiCompleteHandover,
                SystemState::new(phase, laa + 1, wifi - 1, queued - 1),
                rate,
            );
        } else {
            e.emit(
                WifiComplete,
                SystemState::new(phase, laa, wifi - 1, queued),
                rate,
            );
        }
    }
    if laa_can_queue(s, p) {
        e.emit(
            LaaArrivalQueue,
            SystemState::new(phase, laa, wifi, queued + 1),
            p.lambda_laa,
        );
    }
    if fast_start_enabled(s, p) {
        e.emit(
            FastStart,
            SystemState::new(phase, laa + 1, wifi, queued - 1),
            p.fast_start_rate(),
        );
    }
}

pub(crate) fn push_phase_transitions(s: &SystemState, p: &ModelParams, out: &mut Vec<Transition>) {
    use TransitionKind::*;
    if !p.lbt_enabled {
        return;
    }
    let with_phase = |phase| SystemState { phase, ..*s };
    let mut e = Emitter { from: *s, out };
    if sense_to_on_enabled(s, p) {
        e.emit(SenseToOn, with_phase(Phase::On), p.mu_sense);
    }
    if off_to_sense_enabled(s, p) {
        e.emit(OffToSense, with_phase(Phase::Sensing), p.mu_off);
    }
    if sense_to_off_enabled(s, p) {
        e.emit(SenseToOff, with_phase(Phase::Off), p.mu_sense);
    }
    if s.phase == Phase::On {
        e.emit(OnToSense, with_phase(Phase::Sensing), p.mu_on);
    }
}
