use nalgebra::DMatrix;
use serde::Serialize;

use super::diagnostics::{affine_flex_test, conic_at_infinity, AffineFit, ConicAtInfinity};
use super::{matrix_rows, AnalysisError};
use crate::linalg::{sorted_symmetric_eigen, spectral_norm};
use crate::polytope::ConedFramework;
use crate::rigidity::{flex_space, unflatten};
use crate::stress::strictly_proper_check;
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityKind {
    PrestressStable,
    Indefinite,
    Degenerate,
}

/// A zero mode of the projected form, with its affine diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroMode {
    pub eigenvalue: f64,
    pub affine: AffineFit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityVerdict {
    /// `Q_ab = tr(v_aᵗ Ω v_b)` over the nontrivial flex basis.
    pub form: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: Option<f64>,
    /// Eigenvalues within `±tol_pd` count as zero.
    pub tol_pd: f64,
    pub kind: StabilityKind,
    /// No nontrivial flexes: stable by default.
    pub vacuous: bool,
    pub omega_strictly_proper: bool,
    pub zero_modes: Vec<ZeroMode>,
    pub conic: Option<ConicAtInfinity>,
    pub note: Option<String>,
}

pub fn stability_test(
    fw: &ConedFramework,
    omega: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<StabilityVerdict, AnalysisError> {
    let n = fw.n_points();
    if omega.shape() != (n, n) {
        return Err(AnalysisError::ShapeMismatch { expected: (n, n), got: omega.shape() });
    }
    let flexes = flex_space(fw, tol)?;
    let omega_strictly_proper = strictly_proper_check(omega, fw).all;
    let tol_pd = tol.eig * spectral_norm(omega);
    let basis: Vec<DMatrix<f64>> = flexes.nontrivial_flexes();
    let k = basis.len();
    if k == 0 {
        return Ok(StabilityVerdict {
            form: Vec::new(),
            eigenvalues: Vec::new(),
            min_eigenvalue: None,
            tol_pd,
            kind: StabilityKind::PrestressStable,
            vacuous: true,
            omega_strictly_proper,
            zero_modes: Vec::new(),
            conic: None,
            note: Some("no nontrivial infinitesimal flexes: first-order rigid".to_string()),
        });
    }

    let omega_v: Vec<DMatrix<f64>> = basis.iter().map(|v| omega * v).collect();
    let form = DMatrix::from_fn(k, k, |a, b| basis[a].dot(&omega_v[b]));
    let eig = sorted_symmetric_eigen(&form);
    let min = eig.values[0];
    let kind = if min > tol_pd {
        StabilityKind::PrestressStable
    } else if min < -tol_pd {
        StabilityKind::Indefinite
    } else {
        StabilityKind::Degenerate
    };

    let mut zero_modes = Vec::new();
    for (j, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() <= tol_pd {
            let coeffs = eig.vectors.column(j);
            let flat = &flexes.nontrivial * coeffs;
            let mode = unflatten(&flat, fw.dim());
            zero_modes.push(ZeroMode { eigenvalue: lambda, affine: affine_flex_test(&mode, fw.config(), tol) });
        }
    }
    let conic = (!zero_modes.is_empty()).then(|| conic_at_infinity(fw, tol));
    let note = (!omega_strictly_proper).then(|| "stress is not strictly proper".to_string());

    Ok(StabilityVerdict {
        form: matrix_rows(&form),
        eigenvalues: eig.values.iter().copied().collect(),
        min_eigenvalue: Some(min),
        tol_pd,
        kind,
        vacuous: false,
        omega_strictly_proper,
        zero_modes,
        conic,
        note,
    })
}
