use alloc::vec;

use super::{recurrent_class, SolveError, StationaryResult};
use crate::model::RateMatrix;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

const FLOOR: f64 = 1e-300;

/// Gauss-Seidel sweep of the balance equations
/// `π_i ← Σ_{j≠i} π_j q_ji / q_i`, renormalised after every sweep.
///
/// Stops when the largest relative change between sweeps is below `tol`.
/// A Jacobi update oscillates on this chain (the no-LBT chain is nearly
/// periodic), so in-place updates are required.
pub fn solve_iterative(
    matrix: &RateMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<StationaryResult, SolveError> {
    let class = recurrent_class(matrix)?;
    let n = matrix.len();
    let mut pi = vec![0.0; n];
    let start = 1.0 / class.len() as f64;
    for &i in &class {
        pi[i] = start;
    }
    let mut prev = pi.clone();
    let exit = matrix.exit_rates();

    let mut change = f64::INFINITY;
    for sweep in 1..=max_iter {
        prev.copy_from_slice(&pi);
        for &i in &class {
            let inflow: f64 = matrix.incoming(i).iter().map(|&(j, r)| pi[j] * r).sum();
            pi[i] = inflow / exit[i];
        }
        let total: f64 = class.iter().map(|&i| pi[i]).sum();
        change = 0.0;
        for &i in &class {
            pi[i] /= total;
            let rel = libm::fabs(pi[i] - prev[i]) / pi[i].max(FLOOR);
            change = change.max(rel);
        }
        if change < tol {
            return Ok(StationaryResult::finish(matrix, pi, sweep));
        }
    }
    Err(SolveError::NotConverged {
        iterations: max_iter,
        change,
    })
}
