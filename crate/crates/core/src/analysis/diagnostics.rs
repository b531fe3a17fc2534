use nalgebra::{DMatrix, DVector, SVD};
use serde::Serialize;

use super::matrix_rows;
use crate::linalg::{nullspace, RankDecision};
use crate::polytope::Framework;
use crate::tolerances::Tolerances;

/// Least-squares fit `p′_i ≈ A p_i + t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineFit {
    pub a: Vec<Vec<f64>>,
    pub t: Vec<f64>,
    /// `‖fit − p′‖_F / ‖p′‖_F`.
    pub residual: f64,
    pub is_affine: bool,
    /// `‖sym(A)‖_F ‖p − p̄‖_F / ‖p′‖_F`: how far the fit is from a rigid motion.
    pub symmetric_part: f64,
    /// Affine with skew-symmetric `A`.
    pub is_trivial: bool,
}

pub fn affine_flex_test(flex: &DMatrix<f64>, config: &DMatrix<f64>, tol: &Tolerances) -> AffineFit {
    let (n, d) = config.shape();
    let mean = config.row_mean();
    let centered = DMatrix::from_fn(n, d, |i, k| config[(i, k)] - mean[k]);
    let design = DMatrix::from_fn(n, d + 1, |i, k| if k < d { centered[(i, k)] } else { 1.0 });
    let flex_norm = flex.norm();
    let solution = SVD::new(design.clone(), true, true)
        .solve(flex, 1e-14 * centered.norm().max(1.0))
        .expect("U and V requested");
    let fit = &design * &solution;
    let residual = if flex_norm > 0.0 { (&fit - flex).norm() / flex_norm } else { 0.0 };

    // Rows 0..d of the solution hold Aᵗ; row d holds t for centered input.
    let a = solution.rows(0, d).transpose();
    let t_centered = solution.row(d).transpose();
    let t: DVector<f64> = &t_centered - &a * mean.transpose();
    let sym = (&a + a.transpose()) * 0.5;
    let symmetric_part = if flex_norm > 0.0 { sym.norm() * centered.norm() / flex_norm } else { 0.0 };
    let is_affine = residual <= tol.residual_holds;
    AffineFit {
        a: matrix_rows(&a),
        t: t.iter().copied().collect(),
        residual,
        is_affine,
        symmetric_part,
        is_trivial: is_affine && symmetric_part <= tol.residual_holds,
    }
}

/// Nonzero symmetric `Q` with `uᵗ Q u = 0` for every edge direction `u`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConicAtInfinity {
    pub exists: bool,
    /// Unit Frobenius-norm representative when one exists.
    pub q: Option<Vec<Vec<f64>>>,
    /// Dimension of the solution space.
    pub dimension: usize,
    pub rank: RankDecision,
}

pub fn conic_at_infinity(fw: &Framework, tol: &Tolerances) -> ConicAtInfinity {
    let d = fw.dim();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (a..d).map(move |b| (a, b))).collect();
    let mut system = DMatrix::zeros(fw.edges().len(), pairs.len());
    for (r, e) in fw.edges().iter().enumerate() {
        let u = fw.point(e.i) - fw.point(e.j);
        let u = u.normalize();
        for (c, &(a, b)) in pairs.iter().enumerate() {
            system[(r, c)] = if a == b { u[a] * u[a] } else { 2.0 * u[a] * u[b] };
        }
    }
    let (kernel, rank) = nullspace(&system, tol.rank);
    let q = (kernel.ncols() > 0).then(|| {
        let v = kernel.column(0);
        let mut q = DMatrix::zeros(d, d);
        for (c, &(a, b)) in pairs.iter().enumerate() {
            q[(a, b)] = v[c];
            q[(b, a)] = v[c];
        }
        matrix_rows(&(q.normalize()))
    });
    ConicAtInfinity { exists: kernel.ncols() > 0, q, dimension: kernel.ncols(), rank }
}
