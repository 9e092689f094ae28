//! Stationary distribution of the coexistence chain and the dropping
//! probabilities derived from it.
//!
//! Two independent routes are provided: [`solve_direct`] (dense LU on the
//! global-balance system) and [`solve_iterative`] (Gauss-Seidel sweep of
//! `π_i = inflow_i / outflow_i`). States that cannot be reached from any
//! idle state get probability zero; the reachable part must be a single
//! communicating class.

mod direct;
mod iterative;
mod structure;

pub use direct::solve_direct;
pub use iterative::{solve_iterative, DEFAULT_MAX_ITER, DEFAULT_TOL};
pub use structure::{recurrent_class, ClosedClass};

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::model::{build_rate_matrix, ModelError, ModelParams, Phase, RateMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    /// The states reachable from the idle states do not form one
    /// communicating class.
    #[error("reducible chain: {} closed class(es) {}, {transient} transient reachable state(s)", .closed.len(), ClassList(.closed))]
    Reducible {
        closed: Vec<ClosedClass>,
        transient: usize,
    },
    #[error("singular balance system (pivot {pivot} at column {column})")]
    Singular { column: usize, pivot: f64 },
    #[error("no convergence after {iterations} sweeps (last relative change {change:e})")]
    NotConverged { iterations: usize, change: f64 },
}

struct ClassList<'a>(&'a [ClosedClass]);

impl fmt::Display for ClassList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, class) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{class}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryResult {
    /// Probability of each state, indexed like [`RateMatrix::states`].
    pub pi: Vec<f64>,
    pub p_block_laa: f64,
    pub p_block_wifi: f64,
    /// Largest absolute global-balance violation `|inflow − outflow|`.
    pub residual: f64,
    /// Sweeps performed; 0 for the direct solve.
    pub iterations: usize,
}

impl StationaryResult {
    pub(crate) fn finish(matrix: &RateMatrix, pi: Vec<f64>, iterations: usize) -> Self {
        let (p_block_laa, p_block_wifi) = blocking_probabilities(matrix, &pi);
        let residual = balance_residuals(matrix, &pi)
            .into_iter()
            .fold(0.0, f64::max);
        StationaryResult {
            pi,
            p_block_laa,
            p_block_wifi,
            residual,
            iterations,
        }
    }

    /// Long-run fraction of time in each phase.
    pub fn phase_fractions(&self, matrix: &RateMatrix) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (s, p) in matrix.states().iter().zip(&self.pi) {
            out[s.phase.index()] += p;
        }
        out
    }
}

/// Dropping probabilities `(P_b,ℓ, P_b,w)` of a normalised distribution.
///
/// By PASTA these are state-probability sums. An LAA arrival is dropped in
/// states with a full queue (`z = Q_eff`) where it also cannot start
/// service; with a queue this is just `z = Q`. A Wi-Fi arrival is dropped
/// when every server holds an LAA packet (`x = D`).
pub fn blocking_probabilities(matrix: &RateMatrix, pi: &[f64]) -> (f64, f64) {
    let p = matrix.params();
    let q = p.effective_queue();
    let mut laa = 0.0;
    let mut wifi = 0.0;
    for (s, &prob) in matrix.states().iter().zip(pi) {
        let can_start = s.phase == Phase::On && s.busy_servers() < p.servers && s.queued == 0;
        if s.queued == q && !can_start {
            laa += prob;
        }
        if s.laa == p.servers {
            wifi += prob;
        }
    }
    (laa.clamp(0.0, 1.0), wifi.clamp(0.0, 1.0))
}

/// Per-state `|Σ_j π_j q_ji − π_i q_i|`.
pub fn balance_residuals(matrix: &RateMatrix, pi: &[f64]) -> Vec<f64> {
    (0..matrix.len())
        .map(|i| {
            let inflow: f64 = matrix.incoming(i).iter().map(|&(j, r)| pi[j] * r).sum();
            libm::fabs(inflow - pi[i] * matrix.exit_rates()[i])
        })
        .collect()
}

/// Solver selection for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Direct,
    Iterative { tol: f64, max_iter: usize },
}

impl Method {
    pub fn iterative() -> Self {
        Method::Iterative {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Builds the generator for `params` and solves it.
pub fn solve(
    params: &ModelParams,
    method: Method,
) -> Result<(RateMatrix, StationaryResult), SolveError> {
    let matrix = build_rate_matrix(params)?;
    let result = match method {
        Method::Direct => solve_direct(&matrix)?,
        Method::Iterative { tol, max_iter } => solve_iterative(&matrix, tol, max_iter)?,
    };
    Ok((matrix, result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SystemState;

    #[test]
    fn blocking_without_laa_traffic() {
        let (m, r) = solve(&ModelParams::table2(0.0), Method::Direct).unwrap();
        assert_eq!(r.p_block_wifi, 0.0);
        assert_eq!(r.p_block_laa, 0.0);
        // Wi-Fi alone is an M/M/1/1 loss system: busy with 5/45
        let busy = m.index_of(&SystemState::new(Phase::On, 0, 1, 0)).unwrap();
        assert!((r.pi[busy] - 5.0 / 45.0).abs() < 1e-14);
    }

    #[test]
    fn unbuffered_laa_loss_set() {
        // LAA loses every arrival that cannot start immediately
        let p = ModelParams {
            buffering_enabled: false,
            ..ModelParams::table2(25.0)
        };
        let (_, r) = solve(&p, Method::Direct).unwrap();
        // two-class M/M/1/1: idle probability 1 / (1 + 25/25 + 5/40)
        let idle = 1.0 / (1.0 + 1.0 + 0.125);
        assert!((r.p_block_laa - (1.0 - idle)).abs() < 1e-12);
        assert!((r.p_block_wifi - idle).abs() < 1e-12);
    }

    #[test]
    fn residuals_small() {
        let (m, r) = solve(&ModelParams::table1(50.0), Method::Direct).unwrap();
        assert!(balance_residuals(&m, &r.pi).iter().all(|&v| v <= 1e-10));
        let fr = r.phase_fractions(&m);
        assert!((fr.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
