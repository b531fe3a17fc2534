//! Rigidity matrix, infinitesimal flexes and equilibrium stresses.
//!
//! Configuration-shaped vectors are flattened vertex-major: coordinate `k`
//! of vertex `i` lives at index `i·d + k`. Both the flex kernel and the
//! stress cokernel are taken from dense SVDs at one shared rank decision, so
//! `rank + dim(flexes) = n·d` and `rank + dim(stresses) = |E|` hold exactly.

use nalgebra::{DMatrix, DVector, SVD};
use thiserror::Error;

use crate::linalg::{nullspace_with_rank, numerical_rank_with_gap, range_basis, singular_values, RankDecision};
use crate::polytope::Framework;
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RigidityError {
    #[error("configuration spans an affine space of dimension {affine_rank} in R^{dim}")]
    NotFullSpan { affine_rank: usize, dim: usize },
}

/// One row per edge; row `(i, j)` holds `p_i − p_j` in vertex `i`'s columns
/// and `p_j − p_i` in vertex `j`'s.
#[derive(Debug, Clone)]
pub struct RigidityMatrix {
    matrix: DMatrix<f64>,
    dim: usize,
}

impl RigidityMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv = singular_values(&self.matrix);
        sv.resize(self.matrix.nrows().min(self.matrix.ncols()), 0.0);
        sv
    }

    pub fn rank(&self, tol: &Tolerances) -> RankDecision {
        numerical_rank_with_gap(&self.singular_values(), tol.rank, tol.gap_ratio)
    }
}

pub fn rigidity_matrix(fw: &Framework) -> RigidityMatrix {
    let d = fw.dim();
    let mut matrix = DMatrix::zeros(fw.edges().len(), fw.n_points() * d);
    for (r, e) in fw.edges().iter().enumerate() {
        for k in 0..d {
            let diff = fw.config()[(e.i, k)] - fw.config()[(e.j, k)];
            matrix[(r, e.i * d + k)] = diff;
            matrix[(r, e.j * d + k)] = -diff;
        }
    }
    RigidityMatrix { matrix, dim: d }
}

/// Flattens an `n × d` configuration-shaped matrix.
pub fn flatten(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(m.len(), m.row_iter().flat_map(|r| r.iter().copied().collect::<Vec<_>>()))
}

/// Inverse of [`flatten`].
pub fn unflatten(v: &DVector<f64>, dim: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(v.len() / dim, dim, v.as_slice())
}

/// Orthonormal basis (columns) of the trivial flexes `v_i = S p_i + t` with
/// `S` skew-symmetric. Its dimension is `d(d+1)/2`.
pub fn trivial_flex_basis(config: &DMatrix<f64>) -> Result<DMatrix<f64>, RigidityError> {
    let (n, d) = config.shape();
    let expected = d * (d + 1) / 2;
    let mean = config.row_mean();
    let centered = DMatrix::from_fn(n, d, |i, k| config[(i, k)] - mean[k]);
    let mut gens = DMatrix::zeros(n * d, expected);
    let mut col = 0;
    for k in 0..d {
        for i in 0..n {
            gens[(i * d + k, col)] = 1.0;
        }
        col += 1;
    }
    for a in 0..d {
        for b in (a + 1)..d {
            // S = E_ab − E_ba.
            for i in 0..n {
                gens[(i * d + a, col)] = centered[(i, b)];
                gens[(i * d + b, col)] = -centered[(i, a)];
            }
            col += 1;
        }
    }
    for j in 0..expected {
        let norm = gens.column(j).norm();
        if norm > 0.0 {
            gens.column_mut(j).scale_mut(1.0 / norm);
        }
    }
    let (basis, decision) = range_basis(&gens, Tolerances::default().rank);
    if decision.rank < expected {
        let affine_rank = crate::polytope::affine_rank(config, Tolerances::default().geom);
        return Err(RigidityError::NotFullSpan { affine_rank, dim: d });
    }
    Ok(basis)
}

/// Kernel of the rigidity matrix split into trivial and nontrivial parts.
#[derive(Debug, Clone)]
pub struct FlexBasis {
    /// Columns: orthonormal trivial flexes.
    pub trivial: DMatrix<f64>,
    /// Columns: orthonormal flexes orthogonal to every trivial flex.
    pub nontrivial: DMatrix<f64>,
    pub rank: RankDecision,
    /// False when the projected kernel did not have the expected dimension.
    pub split_consistent: bool,
    pub tol_used: f64,
    dim: usize,
}

impl FlexBasis {
    pub fn kernel_dim(&self) -> usize {
        self.trivial.ncols() + self.nontrivial.ncols()
    }

    pub fn trivial_flex(&self, k: usize) -> DMatrix<f64> {
        unflatten(&self.trivial.column(k).into_owned(), self.dim)
    }

    pub fn nontrivial_flex(&self, k: usize) -> DMatrix<f64> {
        unflatten(&self.nontrivial.column(k).into_owned(), self.dim)
    }

    pub fn trivial_flexes(&self) -> Vec<DMatrix<f64>> {
        (0..self.trivial.ncols()).map(|k| self.trivial_flex(k)).collect()
    }

    pub fn nontrivial_flexes(&self) -> Vec<DMatrix<f64>> {
        (0..self.nontrivial.ncols()).map(|k| self.nontrivial_flex(k)).collect()
    }

    /// Trivial then nontrivial, all `n × d`.
    pub fn all_flexes(&self) -> Vec<DMatrix<f64>> {
        let mut out = self.trivial_flexes();
        out.extend(self.nontrivial_flexes());
        out
    }
}

pub fn flex_space(fw: &Framework, tol: &Tolerances) -> Result<FlexBasis, RigidityError> {
    let r = rigidity_matrix(fw);
    let rank = r.rank(tol);
    let kernel = nullspace_with_rank(r.matrix(), rank.rank);
    let trivial = trivial_flex_basis(fw.config())?;
    let t = trivial.ncols();

    // Remove the trivial span. The trivial flexes lie inside the kernel, so
    // the singular values of the projection are ≈0 (t of them) or ≈1.
    let projected = &kernel - &trivial * (trivial.transpose() * &kernel);
    let expected = kernel.ncols().saturating_sub(t);
    let (nontrivial, split) = if projected.ncols() == 0 {
        (DMatrix::zeros(kernel.nrows(), 0), 0)
    } else {
        let svd = SVD::new(projected, true, false);
        let found = svd.singular_values.iter().filter(|&&s| s > 0.5).count();
        let u = svd.u.expect("requested U");
        (u.columns(0, found).into_owned(), found)
    };
    let split_consistent = split == expected && kernel.ncols() >= t;
    Ok(FlexBasis { trivial, nontrivial, rank, split_consistent, tol_used: tol.rank, dim: fw.dim() })
}

/// Basis of the equilibrium stresses, as edge coefficients and as matrices.
#[derive(Debug, Clone)]
pub struct StressBasis {
    /// Columns: orthonormal edge-indexed coefficient vectors `ω`.
    pub coefficients: DMatrix<f64>,
    /// `Ω = Σ ω_ij (e_i − e_j)(e_i − e_j)ᵗ` for each column.
    pub matrices: Vec<DMatrix<f64>>,
    pub rank: RankDecision,
}

impl StressBasis {
    pub fn dim(&self) -> usize {
        self.coefficients.ncols()
    }
}

pub fn stress_space(fw: &Framework, tol: &Tolerances) -> StressBasis {
    let r = rigidity_matrix(fw);
    let rank = r.rank(tol);
    let coefficients = nullspace_with_rank(&r.matrix().transpose(), rank.rank);
    let matrices = coefficients.column_iter().map(|w| stress_matrix(fw, &w.into_owned())).collect();
    StressBasis { coefficients, matrices, rank }
}

/// Assembles the stress matrix of edge coefficients `omega`.
/// Off-diagonal entries are `Ω_ij = −ω_ij`; rows sum to zero exactly.
pub fn stress_matrix(fw: &Framework, omega: &DVector<f64>) -> DMatrix<f64> {
    let n = fw.n_points();
    let mut m = DMatrix::zeros(n, n);
    for (e, &w) in fw.edges().iter().zip(omega.iter()) {
        m[(e.i, e.i)] += w;
        m[(e.j, e.j)] += w;
        m[(e.i, e.j)] -= w;
        m[(e.j, e.i)] -= w;
    }
    m
}

/// Edge coefficients `ω_ij = −Ω_ij` read back from a stress matrix.
pub fn stress_coefficients(fw: &Framework, omega: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(fw.edges().len(), fw.edges().iter().map(|e| -omega[(e.i, e.j)]))
}

/// Per-vertex equilibrium defect `max_i ‖Σ_j ω_ij (p_i − p_j)‖`.
pub fn equilibrium_defect(fw: &Framework, omega: &DVector<f64>) -> f64 {
    let r = rigidity_matrix(fw);
    let force = r.matrix().transpose() * omega;
    let d = fw.dim();
    (0..fw.n_points()).map(|i| force.rows(i * d, d).norm()).fold(0.0, f64::max)
}
