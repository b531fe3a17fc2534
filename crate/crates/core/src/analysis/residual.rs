use nalgebra::DMatrix;
use serde::Serialize;

use super::{AnalysisError, ConditionVerdict};
use crate::polytope::ConedFramework;
use crate::rigidity::StressBasis;
use crate::stress::{IzmestievStress, StressError};
use crate::tolerances::Tolerances;

/// Apex row of `Ω·p̂′`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub residual: Vec<f64>,
    /// `‖r‖ / (‖Ω‖_F · ‖p̂′‖_F)`, zero when either norm vanishes.
    pub relative: f64,
    pub verdict: ConditionVerdict,
}

fn check_shapes(omega: &DMatrix<f64>, flex: &DMatrix<f64>, fw: &ConedFramework) -> Result<(), AnalysisError> {
    let n = fw.n_points();
    if omega.shape() != (n, n) {
        return Err(AnalysisError::ShapeMismatch { expected: (n, n), got: omega.shape() });
    }
    if flex.shape() != (n, fw.dim()) {
        return Err(AnalysisError::ShapeMismatch { expected: (n, fw.dim()), got: flex.shape() });
    }
    Ok(())
}

pub fn stress_flex_residual(
    omega: &DMatrix<f64>,
    flex: &DMatrix<f64>,
    fw: &ConedFramework,
    tol: &Tolerances,
) -> Result<ResidualReport, AnalysisError> {
    check_shapes(omega, flex, fw)?;
    let row = omega.row(fw.cone_index()) * flex;
    let denom = omega.norm() * flex.norm();
    let relative = if denom > 0.0 { row.norm() / denom } else { 0.0 };
    Ok(ResidualReport {
        residual: row.iter().copied().collect(),
        relative,
        verdict: ConditionVerdict::classify(relative, tol),
    })
}

/// `tr(p̂′ᵗ Ω p̂′)`.
pub fn prestress_energy(omega: &DMatrix<f64>, flex: &DMatrix<f64>) -> Result<f64, AnalysisError> {
    let n = omega.nrows();
    if omega.ncols() != n || flex.nrows() != n {
        return Err(AnalysisError::ShapeMismatch { expected: (n, flex.ncols()), got: flex.shape() });
    }
    Ok((flex.transpose() * omega * flex).trace())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairResidual {
    pub stress: String,
    pub flex: usize,
    pub residual: Vec<f64>,
    pub relative: f64,
    pub verdict: ConditionVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressFlexTable {
    pub pairs: Vec<PairResidual>,
    pub max_relative: Option<f64>,
    pub verdict: ConditionVerdict,
}

/// Residuals for every `(stress, flex)` pair.
pub fn stress_flex_table(
    fw: &ConedFramework,
    stresses: &[(String, DMatrix<f64>)],
    flexes: &[DMatrix<f64>],
    tol: &Tolerances,
) -> Result<StressFlexTable, AnalysisError> {
    let mut pairs = Vec::with_capacity(stresses.len() * flexes.len());
    for (label, omega) in stresses {
        for (k, flex) in flexes.iter().enumerate() {
            let r = stress_flex_residual(omega, flex, fw, tol)?;
            pairs.push(PairResidual {
                stress: label.clone(),
                flex: k,
                residual: r.residual,
                relative: r.relative,
                verdict: r.verdict,
            });
        }
    }
    let max_relative = pairs.iter().map(|p| p.relative).reduce(f64::max);
    Ok(StressFlexTable { verdict: ConditionVerdict::of_max(max_relative, tol), pairs, max_relative })
}

/// Every basis stress (`basis_k`) plus the certified block stress
/// (`izmestiev`) when one exists.
pub fn stresses_for_analysis(
    basis: &StressBasis,
    izmestiev: &Result<IzmestievStress, StressError>,
) -> Vec<(String, DMatrix<f64>)> {
    let mut out: Vec<(String, DMatrix<f64>)> =
        basis.matrices.iter().enumerate().map(|(k, m)| (format!("basis_{k}"), m.clone())).collect();
    if let Ok(iz) = izmestiev {
        if iz.certificate.passed() {
            out.push(("izmestiev".to_string(), iz.omega.clone()));
        }
    }
    out
}
