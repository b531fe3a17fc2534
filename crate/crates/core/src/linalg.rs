//! Dense linear-algebra helpers with a single rank policy.
//!
//! Every dimension the crate reports goes through [`numerical_rank`], which
//! thresholds singular values relative to the largest one and records the
//! gap ratio `σ_rank / σ_{rank+1}` so that a near-threshold decision is never
//! silent.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use serde::Serialize;

/// Outcome of thresholding a list of singular values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankDecision {
    pub rank: usize,
    /// `σ_rank / σ_{rank+1}`; `None` when there is no value on one side of
    /// the cut or the first discarded value is exactly zero.
    pub gap_ratio: Option<f64>,
    pub ambiguous: bool,
    pub sigma_max: f64,
}

impl RankDecision {
    /// Gap ratio with "no gap to measure" mapped to infinity.
    pub fn gap(&self) -> f64 {
        self.gap_ratio.unwrap_or(f64::INFINITY)
    }
}

/// Counts the singular values strictly above `tol_rel · σ_max`.
///
/// `singular_values` must be nonincreasing and nonnegative. A decision is
/// ambiguous when the gap ratio around the cut is below `min_gap`.
pub fn numerical_rank_with_gap(singular_values: &[f64], tol_rel: f64, min_gap: f64) -> RankDecision {
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    if sigma_max <= 0.0 {
        return RankDecision { rank: 0, gap_ratio: None, ambiguous: false, sigma_max: 0.0 };
    }
    let cut = tol_rel * sigma_max;
    let rank = singular_values.iter().take_while(|&&s| s > cut).count();
    let gap_ratio = if rank == 0 || rank == singular_values.len() {
        None
    } else {
        let below = singular_values[rank];
        (below > 0.0).then(|| singular_values[rank - 1] / below)
    };
    let ambiguous = gap_ratio.is_some_and(|g| g < min_gap);
    RankDecision { rank, gap_ratio, ambiguous, sigma_max }
}

/// [`numerical_rank_with_gap`] with the default 10× ambiguity ratio.
pub fn numerical_rank(singular_values: &[f64], tol_rel: f64) -> RankDecision {
    numerical_rank_with_gap(singular_values, tol_rel, 10.0)
}

/// Singular values of `a` in nonincreasing order.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    SVD::new(a.clone(), false, false).singular_values.iter().copied().collect()
}

/// Full right singular basis of `a` (columns of `V`, ordered by decreasing
/// singular value) together with the singular values, padded with zeros up
/// to the column count.
fn right_singular(a: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return (DMatrix::zeros(0, 0), Vec::new());
    }
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v = svd.v_t.expect("requested V").transpose();
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.resize(cols, 0.0);
    (v, sv)
}

/// Orthonormal basis (as columns) of the kernel of `a`, of dimension
/// `cols − rank`.
pub fn nullspace_with_rank(a: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    let cols = a.ncols();
    let (v, _) = right_singular(a);
    let keep = cols.saturating_sub(rank);
    if keep == 0 {
        return DMatrix::zeros(cols, 0);
    }
    v.columns(cols - keep, keep).into_owned()
}

/// Kernel of `a` at relative tolerance `tol_rel`.
pub fn nullspace(a: &DMatrix<f64>, tol_rel: f64) -> (DMatrix<f64>, RankDecision) {
    let (v, sv) = right_singular(a);
    let decision = numerical_rank(&sv, tol_rel);
    let cols = a.ncols();
    let keep = cols - decision.rank;
    let basis = if keep == 0 { DMatrix::zeros(cols, 0) } else { v.columns(cols - keep, keep).into_owned() };
    (basis, decision)
}

/// Orthonormal basis of the column space of `a` at relative tolerance.
pub fn range_basis(a: &DMatrix<f64>, tol_rel: f64) -> (DMatrix<f64>, RankDecision) {
    if a.is_empty() {
        return (DMatrix::zeros(a.nrows(), 0), numerical_rank(&[], tol_rel));
    }
    let svd = SVD::new(a.clone(), true, false);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let decision = numerical_rank(&sv, tol_rel);
    let u = svd.u.expect("requested U");
    (u.columns(0, decision.rank).into_owned(), decision)
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues ascending.
pub struct SortedEigen {
    pub values: DVector<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: DMatrix<f64>,
}

pub fn sorted_symmetric_eigen(sym: &DMatrix<f64>) -> SortedEigen {
    let n = sym.nrows();
    if n == 0 {
        return SortedEigen { values: DVector::zeros(0), vectors: DMatrix::zeros(0, 0) };
    }
    // Symmetrize so roundoff asymmetry cannot leak into the solver.
    let sym = (sym + sym.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    SortedEigen { values, vectors }
}

/// Signed eigenvalue counts at a relative zero threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl Inertia {
    pub fn of(values: &[f64], tol_rel: f64) -> Self {
        let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let cut = tol_rel * scale;
        let negative = values.iter().filter(|&&v| v < -cut).count();
        let positive = values.iter().filter(|&&v| v > cut).count();
        Inertia { negative, zero: values.len() - negative - positive, positive }
    }

    pub fn rank(&self) -> usize {
        self.negative + self.positive
    }
}

/// Largest singular value, used as the operator norm.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}
