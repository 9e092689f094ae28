use alloc::vec;
use alloc::vec::Vec;

use super::{recurrent_class, SolveError, StationaryResult};
use crate::model::RateMatrix;

/// Solves `πQ = 0, Σπ = 1` by Gaussian elimination with partial pivoting.
///
/// The system is restricted to the recurrent class; the last balance
/// equation is replaced by the normalisation row.
pub fn solve_direct(matrix: &RateMatrix) -> Result<StationaryResult, SolveError> {
    let class = recurrent_class(matrix)?;
    let m = class.len();
    let mut local = vec![usize::MAX; matrix.len()];
    for (k, &i) in class.iter().enumerate() {
        local[i] = k;
    }

    // row k: inflow into class[k] minus its outflow
    let mut a = vec![0.0f64; m * m];
    for (k, &i) in class.iter().enumerate() {
        a[k * m + k] = -matrix.exit_rates()[i];
        for &(j, r) in matrix.incoming(i) {
            if local[j] != usize::MAX {
                a[k * m + local[j]] += r;
            }
        }
    }
    let mut b = vec![0.0f64; m];
    a[(m - 1) * m..].fill(1.0);
    b[m - 1] = 1.0;

    let x = lu_solve(&mut a, &mut b, m)?;

    let mut pi = vec![0.0; matrix.len()];
    for (k, &i) in class.iter().enumerate() {
        // round-off can leave tiny negatives on near-zero states
        pi[i] = x[k].max(0.0);
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|p| *p /= total);
    Ok(StationaryResult::finish(matrix, pi, 0))
}

fn lu_solve(a: &mut [f64], b: &mut [f64], m: usize) -> Result<Vec<f64>, SolveError> {
    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(libm::fabs(*v)));
    for col in 0..m {
        let (pivot_row, pivot) = (col..m)
            .map(|r| (r, a[r * m + col]))
            .max_by(|x, y| libm::fabs(x.1).total_cmp(&libm::fabs(y.1)))
            .expect("non-empty column");
        if pivot.is_nan() || libm::fabs(pivot) <= scale * 1e-300 {
            return Err(SolveError::Singular { column: col, pivot });
        }
        if pivot_row != col {
            for c in 0..m {
                a.swap(col * m + c, pivot_row * m + c);
            }
            b.swap(col, pivot_row);
        }
        for r in col + 1..m {
            let f = a[r * m + col] / pivot;
            if f == 0.0 {
                continue;
            }
            for c in col..m {
                a[r * m + c] -= f * a[col * m + c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; m];
    for r in (0..m).rev() {
        let s: f64 = (r + 1..m).map(|c| a[r * m + c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r * m + r];
    }
    Ok(x)
}
