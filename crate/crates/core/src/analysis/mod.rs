//! Numerical tests of the stress-flex condition and prestress stability.
//!
//! All residuals are relative and classified with two thresholds: at or
//! below [`Tolerances::residual_holds`] the condition holds, above
//! [`Tolerances::residual_fails`] it fails, and the band between is
//! inconclusive.

mod diagnostics;
mod lemma;
mod projection;
mod residual;
mod stability;
mod sweep;

use serde::Serialize;
use thiserror::Error;

use crate::polytope::PolytopeError;
use crate::rigidity::RigidityError;
use crate::stress::StressError;
use crate::tolerances::Tolerances;

pub use diagnostics::{affine_flex_test, conic_at_infinity, AffineFit, ConicAtInfinity};
pub use lemma::{check_lemma_psd, lemma_random_suite, LemmaChecker, LemmaReport, LemmaSuite, LemmaVerdict};
pub use projection::{projection_check, ProjectionReport, ProjectionRow};
pub use residual::{
    prestress_energy, stress_flex_residual, stress_flex_table, stresses_for_analysis, PairResidual, ResidualReport,
    StressFlexTable,
};
pub use stability::{stability_test, StabilityKind, StabilityVerdict, ZeroMode};
pub use sweep::{
    analyze_instance, summarize, sweep_strong_conjecture, ApexStrategy, InstanceError, InstanceReport, SweepReport,
    SweepSummary,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch { expected: (usize, usize), got: (usize, usize) },
    #[error("projected configuration stayed degenerate after {attempts} rotations")]
    DegenerateProjection { attempts: usize },
    #[error("projection needs dimension at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error(transparent)]
    Stress(#[from] StressError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionVerdict {
    Holds,
    Inconclusive,
    Fails,
    /// Nothing to test (no stress or no flex).
    Vacuous,
}

impl ConditionVerdict {
    pub fn classify(relative: f64, tol: &Tolerances) -> Self {
        if relative <= tol.residual_holds {
            ConditionVerdict::Holds
        } else if relative > tol.residual_fails {
            ConditionVerdict::Fails
        } else {
            ConditionVerdict::Inconclusive
        }
    }

    /// Verdict for the largest of a set of residuals.
    pub fn of_max(max: Option<f64>, tol: &Tolerances) -> Self {
        max.map_or(ConditionVerdict::Vacuous, |m| Self::classify(m, tol))
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionVerdict::Holds => "holds",
            ConditionVerdict::Inconclusive => "inconclusive",
            ConditionVerdict::Fails => "fails",
            ConditionVerdict::Vacuous => "vacuous",
        }
    }
}

pub(crate) fn matrix_rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}
