//! Dense tableau simplex for `max cᵗx  s.t.  A x ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! The origin is always a basic feasible point, so no phase one is needed.
//! Bland's rule picks pivots, which rules out cycling on the degenerate
//! vertices the max-margin problem starts from.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("right-hand side must be nonnegative")]
    InfeasibleOrigin,
    #[error("objective is unbounded")]
    Unbounded,
    #[error("iteration limit reached")]
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: DVector<f64>,
    pub objective: f64,
}

const EPS: f64 = 1e-12;

pub fn maximize(c: &DVector<f64>, a: &DMatrix<f64>, b: &DVector<f64>) -> Result<LpSolution, LpError> {
    let (m, n) = a.shape();
    if b.iter().any(|&v| v < 0.0) {
        return Err(LpError::InfeasibleOrigin);
    }
    // Columns: n decision variables, m slacks, then the right-hand side.
    let width = n + m + 1;
    let mut t = DMatrix::zeros(m + 1, width);
    for r in 0..m {
        for j in 0..n {
            t[(r, j)] = a[(r, j)];
        }
        t[(r, n + r)] = 1.0;
        t[(r, width - 1)] = b[r];
    }
    for j in 0..n {
        t[(m, j)] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let limit = 50 * (m + n + 10);
    for _ in 0..limit {
        let Some(enter) = (0..n + m).find(|&j| t[(m, j)] < -EPS) else {
            let mut x = DVector::zeros(n);
            for (r, &var) in basis.iter().enumerate() {
                if var < n {
                    x[var] = t[(r, width - 1)];
                }
            }
            return Ok(LpSolution { objective: t[(m, width - 1)], x });
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..m {
            let coef = t[(r, enter)];
            if coef > EPS {
                let ratio = t[(r, width - 1)] / coef;
                let better = match leave {
                    None => true,
                    Some((lr, best)) => ratio < best - EPS || (ratio <= best + EPS && basis[r] < basis[lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((row, _)) = leave else { return Err(LpError::Unbounded) };
        pivot(&mut t, row, enter);
        basis[row] = enter;
    }
    Err(LpError::IterationLimit)
}

fn pivot(t: &mut DMatrix<f64>, row: usize, col: usize) {
    let p = t[(row, col)];
    t.row_mut(row).scale_mut(1.0 / p);
    let pivot_row = t.row(row).into_owned();
    for r in 0..t.nrows() {
        if r != row {
            let f = t[(r, col)];
            if f != 0.0 {
                let mut target = t.row_mut(r);
                target -= &pivot_row * f;
            }
        }
    }
}
