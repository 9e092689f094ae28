use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::gates::{push_packet_transitions, push_phase_transitions};
use super::{enumerate_states, ModelError, ModelParams, Phase, SystemState};

/// Sparse generator of the chain.
///
/// Off-diagonal rates are stored twice, row-major for outflow and
/// column-major for inflow, so balance sweeps can read incoming flow
/// without a separate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    params: ModelParams,
    states: Vec<SystemState>,
    exit_rates: Vec<f64>,
    out_start: Vec<usize>,
    out_edges: Vec<(usize, f64)>,
    in_start: Vec<usize>,
    in_edges: Vec<(usize, f64)>,
}

/// Enumerates the states, evaluates every gate and assembles the generator.
/// Parallel gates between the same pair of states are summed.
pub fn build_rate_matrix(params: &ModelParams) -> Result<RateMatrix, ModelError> {
    let states = enumerate_states(params)?;
    let index = |s: &SystemState| states.binary_search(s).ok();

    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut buf = Vec::new();
    for (i, s) in states.iter().enumerate() {
        buf.clear();
        push_packet_transitions(s, params, &mut buf);
        push_phase_transitions(s, params, &mut buf);
        for t in &buf {
            let j = index(&t.to).ok_or(ModelError::OutOfDomain(t.to))?;
            debug_assert_ne!(i, j);
            *merged.entry((i, j)).or_insert(0.0) += t.rate;
        }
    }
    Ok(RateMatrix::assemble(*params, states, merged))
}

impl RateMatrix {
    /// Assembles a matrix from explicit `(from, to, rate)` entries over a
    /// caller-chosen, strictly increasing list of state labels. Useful for
    /// small hand-built chains; `params` is only consulted by the
    /// dropping-probability sums.
    pub fn from_entries(
        params: ModelParams,
        states: Vec<SystemState>,
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, ModelError> {
        if !states.windows(2).all(|w| w[0] < w[1]) {
            return Err(ModelError::InvalidParam {
                name: "states",
                reason: "state labels must be strictly increasing",
            });
        }
        let mut merged = BTreeMap::new();
        for (i, j, rate) in entries {
            if i >= states.len() || j >= states.len() || i == j {
                return Err(ModelError::InvalidParam {
                    name: "entries",
                    reason: "entry indices must be distinct and in range",
                });
            }
            if !(rate.is_finite() && rate >= 0.0) {
                return Err(ModelError::InvalidParam {
                    name: "entries",
                    reason: "rates must be finite and non-negative",
                });
            }
            if rate > 0.0 {
                *merged.entry((i, j)).or_insert(0.0) += rate;
            }
        }
        Ok(RateMatrix::assemble(params, states, merged))
    }

    fn assemble(
        params: ModelParams,
        states: Vec<SystemState>,
        merged: BTreeMap<(usize, usize), f64>,
    ) -> Self {
        let n = states.len();
        let mut out_start = alloc::vec![0usize; n + 1];
        let mut in_start = alloc::vec![0usize; n + 1];
        for &(i, j) in merged.keys() {
            out_start[i + 1] += 1;
            in_start[j + 1] += 1;
        }
        for k in 0..n {
            out_start[k + 1] += out_start[k];
            in_start[k + 1] += in_start[k];
        }
        let mut exit_rates = alloc::vec![0.0; n];
        let mut out_edges = Vec::with_capacity(merged.len());
        let mut in_edges = alloc::vec![(0usize, 0.0f64); merged.len()];
        let mut in_fill = in_start.clone();
        // BTreeMap iterates in (from, to) order, so out_edges is already CSR
        for (&(i, j), &rate) in &merged {
            exit_rates[i] += rate;
            out_edges.push((j, rate));
            in_edges[in_fill[j]] = (i, rate);
            in_fill[j] += 1;
        }
        RateMatrix {
            params,
            states,
            exit_rates,
            out_start,
            out_edges,
            in_start,
            in_edges,
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn states(&self) -> &[SystemState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, state: &SystemState) -> Option<usize> {
        self.states.binary_search(state).ok()
    }

    /// Total outflow rate of each state (the negated generator diagonal).
    pub fn exit_rates(&self) -> &[f64] {
        &self.exit_rates
    }

    /// Number of non-zero off-diagonal entries.
    pub fn nnz(&self) -> usize {
        self.out_edges.len()
    }

    /// `(to, rate)` pairs leaving state `i`.
    pub fn outgoing(&self, i: usize) -> &[(usize, f64)] {
        &self.out_edges[self.out_start[i]..self.out_start[i + 1]]
    }

    /// `(from, rate)` pairs entering state `i`.
    pub fn incoming(&self, i: usize) -> &[(usize, f64)] {
        &self.in_edges[self.in_start[i]..self.in_start[i + 1]]
    }

    /// Off-diagonal rate from `i` to `j` (0 when absent).
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.outgoing(i)
            .iter()
            .find(|&&(k, _)| k == j)
            .map_or(0.0, |&(_, r)| r)
    }

    /// All `(from, to, rate)` entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.len()).flat_map(move |i| self.outgoing(i).iter().map(move |&(j, r)| (i, j, r)))
    }

    /// Largest `|Σ_j q_ij|` over rows of the full generator.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let off: f64 = self.outgoing(i).iter().map(|&(_, r)| r).sum();
                libm::fabs(off - self.exit_rates[i])
            })
            .fold(0.0, f64::max)
    }

    /// Indices of the idle states `(w, 0, 0, 0)`, one per phase present.
    pub fn idle_states(&self) -> Vec<usize> {
        Phase::ALL
            .iter()
            .filter_map(|&w| self.index_of(&SystemState::idle(w)))
            .collect()
    }
}
