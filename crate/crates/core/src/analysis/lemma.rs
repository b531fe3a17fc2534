//! Nonnegativity of `xᵗΩx` on the `Ω`-orthogonal complement of the last
//! coordinate vector, for symmetric `Ω` with one negative eigenvalue and a
//! negative last diagonal entry.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::linalg::{sorted_symmetric_eigen, Inertia};
use crate::rng::{gaussian_vector, seeded, STREAM_LEMMA};
use crate::tolerances::Tolerances;

/// Allowed negativity of `xᵗΩx`, relative to `‖Ω‖₂ ‖x‖²`.
pub const LEMMA_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaVerdict {
    Satisfied,
    Violated,
    /// A hypothesis failed; the inequality is not claimed.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub negative_eigenvalues: usize,
    pub one_negative: bool,
    pub corner: f64,
    pub corner_negative: bool,
    /// Last entry of `Ωx`.
    pub last_entry: f64,
    pub last_entry_zero: bool,
    pub quadratic: f64,
    /// `xᵗΩx / (‖Ω‖₂ ‖x‖²)`.
    pub normalized: f64,
    pub verdict: LemmaVerdict,
}

/// Caches the spectrum of `Ω` for repeated checks.
pub struct LemmaChecker<'a> {
    omega: &'a DMatrix<f64>,
    inertia: Inertia,
    norm: f64,
    tol: Tolerances,
}

impl<'a> LemmaChecker<'a> {
    pub fn new(omega: &'a DMatrix<f64>, tol: &Tolerances) -> Self {
        let eig = sorted_symmetric_eigen(omega);
        let inertia = Inertia::of(eig.values.as_slice(), tol.eig);
        let norm = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Self { omega, inertia, norm, tol: *tol }
    }

    pub fn check(&self, x: &DVector<f64>) -> LemmaReport {
        let last = self.omega.nrows() - 1;
        let corner = self.omega[(last, last)];
        let omega_x = self.omega * x;
        let last_entry = omega_x[last];
        let xx = x.norm_squared();
        let quadratic = x.dot(&omega_x);
        let normalized = if self.norm > 0.0 && xx > 0.0 { quadratic / (self.norm * xx) } else { 0.0 };

        let one_negative = self.inertia.negative == 1;
        let corner_negative = corner < -self.tol.eig * self.norm;
        let last_entry_zero = last_entry.abs() <= self.tol.rank * self.norm * xx.sqrt();
        let verdict = if !(one_negative && corner_negative && last_entry_zero) {
            LemmaVerdict::NotApplicable
        } else if normalized >= -LEMMA_SLACK {
            LemmaVerdict::Satisfied
        } else {
            LemmaVerdict::Violated
        };
        LemmaReport {
            negative_eigenvalues: self.inertia.negative,
            one_negative,
            corner,
            corner_negative,
            last_entry,
            last_entry_zero,
            quadratic,
            normalized,
            verdict,
        }
    }

    /// Gaussian vector projected onto `{x : (Ωx)_last = 0}`.
    pub fn hypothesis_vector<R: rand::Rng>(&self, rng: &mut R) -> DVector<f64> {
        let n = self.omega.nrows();
        let w = self.omega.column(n - 1).into_owned();
        let x = gaussian_vector(rng, n);
        let ww = w.norm_squared();
        if ww == 0.0 {
            return x;
        }
        &x - &w * (w.dot(&x) / ww)
    }
}

pub fn check_lemma_psd(omega: &DMatrix<f64>, x: &DVector<f64>, tol: &Tolerances) -> LemmaReport {
    LemmaChecker::new(omega, tol).check(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaSuite {
    pub count: usize,
    pub satisfied: usize,
    pub violated: usize,
    pub not_applicable: usize,
    /// Smallest `xᵗΩx / (‖Ω‖₂ ‖x‖²)` over applicable vectors.
    pub min_normalized: Option<f64>,
}

/// `count` seeded vectors satisfying the last-entry hypothesis.
pub fn lemma_random_suite(omega: &DMatrix<f64>, count: usize, seed: u64, tol: &Tolerances) -> LemmaSuite {
    let checker = LemmaChecker::new(omega, tol);
    let mut rng = seeded(seed, STREAM_LEMMA);
    let mut suite = LemmaSuite { count, satisfied: 0, violated: 0, not_applicable: 0, min_normalized: None };
    for _ in 0..count {
        let x = checker.hypothesis_vector(&mut rng);
        let r = checker.check(&x);
        match r.verdict {
            LemmaVerdict::Satisfied => suite.satisfied += 1,
            LemmaVerdict::Violated => suite.violated += 1,
            LemmaVerdict::NotApplicable => {
                suite.not_applicable += 1;
                continue;
            }
        }
        suite.min_normalized = Some(suite.min_normalized.map_or(r.normalized, |m: f64| m.min(r.normalized)));
    }
    suite
}
