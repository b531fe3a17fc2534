//! Projected form of the strong stress-flex condition: drop the last
//! coordinate of a rotated polytope and test the bar framework of the
//! shadow against the discarded heights.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{AnalysisError, ConditionVerdict};
use crate::polytope::{skeleton_framework, Framework, Polytope};
use crate::rigidity::{flex_space, stress_space};
use crate::rng::{random_rotation, seeded, STREAM_ROTATION};
use crate::tolerances::Tolerances;

/// Rotations tried before giving up on a non-degenerate shadow.
pub const MAX_ROTATIONS: usize = 10;
/// Shortest projected edge allowed, relative to the polytope diameter.
const MIN_EDGE_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionRow {
    pub stress: usize,
    pub flex: usize,
    /// `hᵗ Ψ q′`, one entry per projected coordinate.
    pub cond1: Vec<f64>,
    /// `‖cond1‖ / (‖h‖ ‖Ψ‖_F ‖q′‖_F)`.
    pub cond1_relative: f64,
    /// `hᵗ Ψ (q′·q)`.
    pub cond2: f64,
    /// `|cond2| / (‖h‖ ‖Ψ‖_F ‖q′‖_F max_i ‖q_i‖)`.
    pub cond2_relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionReport {
    pub seed: u64,
    pub rotation_attempts: usize,
    pub projected_dim: usize,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub stress_dim: usize,
    pub flex_dim: usize,
    pub trivial_flex_dim: usize,
    pub nontrivial_flex_dim: usize,
    pub rows: Vec<ProjectionRow>,
    pub max_cond1: Option<f64>,
    pub max_cond2: Option<f64>,
    pub verdict: ConditionVerdict,
}

fn shadow(poly: &Polytope, rotation: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let d = poly.dim();
    let centroid = poly.centroid();
    let n = poly.n_vertices();
    let centered = DMatrix::from_fn(n, d, |i, k| poly.vertices()[(i, k)] - centroid[k]);
    let rotated = centered * rotation.transpose();
    let q = rotated.columns(0, d - 1).into_owned();
    let h = rotated.column(d - 1).into_owned();
    (q, h)
}

fn usable(poly: &Polytope, q: &DMatrix<f64>, tol: &Tolerances) -> Option<Framework> {
    let min_len = MIN_EDGE_RATIO * poly.diameter();
    let short = poly.edges().iter().any(|&(i, j)| (q.row(i) - q.row(j)).norm() < min_len);
    if short {
        return None;
    }
    let fw = Framework::new(q.clone(), skeleton_framework(poly).edges().to_vec()).ok()?;
    flex_space(&fw, tol).ok().map(|_| fw)
}

pub fn projection_check(poly: &Polytope, seed: u64, tol: &Tolerances) -> Result<ProjectionReport, AnalysisError> {
    let d = poly.dim();
    if d < 2 {
        return Err(AnalysisError::DimensionTooSmall(d));
    }
    let mut rng = seeded(seed, STREAM_ROTATION);
    let mut found = None;
    for attempt in 1..=MAX_ROTATIONS {
        let rotation = random_rotation(&mut rng, d);
        let (q, h) = shadow(poly, &rotation);
        if let Some(fw) = usable(poly, &q, tol) {
            found = Some((attempt, fw, q, h));
            break;
        }
    }
    let (attempts, fw, q, h) = found.ok_or(AnalysisError::DegenerateProjection { attempts: MAX_ROTATIONS })?;

    let stresses = stress_space(&fw, tol);
    let flexes = flex_space(&fw, tol)?;
    let all = flexes.all_flexes();
    let h_norm = h.norm();
    let q_max = q.row_iter().map(|r| r.norm()).fold(0.0, f64::max);

    let mut rows = Vec::with_capacity(stresses.dim() * all.len());
    for (s, psi) in stresses.matrices.iter().enumerate() {
        let weights = psi.transpose() * &h;
        let psi_norm = psi.norm();
        for (k, flex) in all.iter().enumerate() {
            let dots = DVector::from_fn(flex.nrows(), |i, _| flex.row(i).dot(&q.row(i)));
            let cond1 = flex.transpose() * &weights;
            let cond2 = weights.dot(&dots);
            let scale = h_norm * psi_norm * flex.norm();
            let rel = |x: f64, s: f64| if s > 0.0 { x / s } else { 0.0 };
            rows.push(ProjectionRow {
                stress: s,
                flex: k,
                cond1_relative: rel(cond1.norm(), scale),
                cond1: cond1.iter().copied().collect(),
                cond2,
                cond2_relative: rel(cond2.abs(), scale * q_max),
            });
        }
    }
    let max_cond1 = rows.iter().map(|r| r.cond1_relative).reduce(f64::max);
    let max_cond2 = rows.iter().map(|r| r.cond2_relative).reduce(f64::max);
    let overall = match (max_cond1, max_cond2) {
        (Some(a), Some(b)) => Some(a.max(b)),
        _ => None,
    };
    Ok(ProjectionReport {
        seed,
        rotation_attempts: attempts,
        projected_dim: d - 1,
        n_vertices: poly.n_vertices(),
        n_edges: poly.edges().len(),
        stress_dim: stresses.dim(),
        flex_dim: flexes.kernel_dim(),
        trivial_flex_dim: flexes.trivial.ncols(),
        nontrivial_flex_dim: flexes.nontrivial.ncols(),
        rows,
        max_cond1,
        max_cond2,
        verdict: ConditionVerdict::of_max(overall, tol),
    })
}
