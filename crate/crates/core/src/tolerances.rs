use serde::{Deserialize, Serialize};

/// Thresholds shared by every pipeline. All values are relative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Singular values at or below `rank · σ_max` count as zero.
    pub rank: f64,
    /// A rank decision whose gap ratio falls below this is flagged ambiguous.
    pub gap_ratio: f64,
    /// Eigenvalues at or below `eig · |λ|_max` in magnitude count as zero.
    pub eig: f64,
    /// Facet planarity and affine span, relative to the bounding-box diameter.
    pub geom: f64,
    /// Relative residuals at or below this mean the condition holds.
    pub residual_holds: f64,
    /// Relative residuals above this mean the condition fails.
    pub residual_fails: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-9,
            gap_ratio: 10.0,
            eig: 1e-9,
            geom: 1e-9,
            residual_holds: 1e-8,
            residual_fails: 1e-3,
        }
    }
}
