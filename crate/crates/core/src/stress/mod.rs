//! The block stress of a convex polytope coned from an interior point.
//!
//! The stress is recovered from the coned framework's stress space rather
//! than built from volumes. With the apex at the origin, any stress has the
//! block form
//!
//! ```text
//!     Ω = [ M   α ]      α = −M·1,   b = 1ᵗ M 1,
//!         [ αᵗ  b ]
//! ```
//!
//! and the [`Certificate`] checks, one boolean each: support on the skeleton,
//! negative skeleton entries, `M p = 0`, rank `n − d`, a single negative
//! eigenvalue, `α > 0` and `b < 0`.

mod lp;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{sorted_symmetric_eigen, Inertia};
use crate::polytope::{cone, ConedFramework, EdgeLabel, Framework, Labeling, Polytope, PolytopeError};
use crate::rigidity::stress_space;
use crate::tolerances::Tolerances;

pub use lp::{maximize, LpError, LpSolution};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StressError {
    #[error("the framework has no nonzero equilibrium stress")]
    EmptyStressSpace,
    #[error("no stress with cables positive and struts negative (best margin {margin:e})")]
    NoSignProperStress { margin: f64 },
    #[error("sign-proper stress failed certification: {failed:?} ({negative_eigenvalues} negative eigenvalues, rank {rank})")]
    CertificateFailed { failed: Vec<&'static str>, negative_eigenvalues: usize, rank: usize },
    #[error("margin problem failed: {0}")]
    Lp(#[from] LpError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Individually assertable checks on a candidate block stress.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    /// `M_ij = 0` for `i ≠ j` not joined by a skeleton edge.
    pub non_edges_zero: bool,
    /// `M_ij < 0` on every skeleton edge.
    pub edges_negative: bool,
    /// `M p = 0` with the apex at the origin.
    pub annihilates_configuration: bool,
    /// `Ω 1 = 0`.
    pub annihilates_ones: bool,
    /// `α = −M 1` and `b = 1ᵗ M 1`.
    pub block_identities: bool,
    pub m_rank: usize,
    pub m_rank_ok: bool,
    pub m_negative_eigenvalues: usize,
    pub m_one_negative: bool,
    pub omega_rank: usize,
    pub omega_rank_ok: bool,
    pub omega_nullity: usize,
    pub omega_nullity_ok: bool,
    pub omega_negative_eigenvalues: usize,
    pub omega_one_negative: bool,
    /// Same negative count for `M` and `Ω`, and one more zero for `Ω`.
    pub interlacing: bool,
    pub alpha_positive: bool,
    pub b_negative: bool,
    pub strictly_proper: bool,
    /// Spectrum of `Ω`, ascending.
    pub omega_eigenvalues: Vec<f64>,
}

impl Certificate {
    fn checks(&self) -> [(&'static str, bool); 14] {
        [
            ("non_edges_zero", self.non_edges_zero),
            ("edges_negative", self.edges_negative),
            ("annihilates_configuration", self.annihilates_configuration),
            ("annihilates_ones", self.annihilates_ones),
            ("block_identities", self.block_identities),
            ("m_rank", self.m_rank_ok),
            ("m_one_negative", self.m_one_negative),
            ("omega_rank", self.omega_rank_ok),
            ("omega_nullity", self.omega_nullity_ok),
            ("omega_one_negative", self.omega_one_negative),
            ("interlacing", self.interlacing),
            ("alpha_positive", self.alpha_positive),
            ("b_negative", self.b_negative),
            ("strictly_proper", self.strictly_proper),
        ]
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks().into_iter().filter(|(_, ok)| !ok).map(|(name, _)| name).collect()
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }
}

/// How the stress was chosen from the stress space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Selection {
    /// The stress space is one-dimensional.
    Unique,
    /// Maximum signed margin over a higher-dimensional stress space.
    MaxMargin { margin: f64 },
}

#[derive(Debug, Clone)]
pub struct IzmestievStress {
    /// `(n+1) × (n+1)`, apex last.
    pub omega: DMatrix<f64>,
    pub m_block: DMatrix<f64>,
    pub alpha: DVector<f64>,
    pub b: f64,
    /// Edge coefficients `ω`, normalized so the smallest cable `|ω|` is 1.
    pub coefficients: DVector<f64>,
    pub stress_dim: usize,
    pub selection: Selection,
    pub certificate: Certificate,
}

impl IzmestievStress {
    /// Turns a failed certificate into [`StressError::CertificateFailed`].
    pub fn certified(self) -> Result<Self, StressError> {
        if self.certificate.passed() {
            Ok(self)
        } else {
            Err(StressError::CertificateFailed {
                failed: self.certificate.failed(),
                negative_eigenvalues: self.certificate.omega_negative_eigenvalues,
                rank: self.certificate.omega_rank,
            })
        }
    }
}

/// Rigid translation moving the apex to the origin.
pub fn translate_to_apex_origin(fw: &ConedFramework) -> ConedFramework {
    fw.translated(&-fw.apex())
}

/// `+1` on skeleton edges, `−1` on cone edges: the sign a proper `ω` has.
fn edge_signs(fw: &ConedFramework) -> Vec<f64> {
    fw.edges().iter().map(|e| if fw.is_cone_edge(e) { -1.0 } else { 1.0 }).collect()
}

/// Finds a sign-proper stress of the coned framework and certifies it.
///
/// Certification failures are recorded in the returned certificate; use
/// [`IzmestievStress::certified`] to treat them as errors.
pub fn izmestiev_stress(fw: &ConedFramework, tol: &Tolerances) -> Result<IzmestievStress, StressError> {
    let fw0 = translate_to_apex_origin(fw);
    let basis = stress_space(&fw0, tol);
    let k = basis.dim();
    if k == 0 {
        return Err(StressError::EmptyStressSpace);
    }
    let signs = edge_signs(&fw0);
    let (mut omega_coeffs, selection) = if k == 1 {
        let mut w = basis.coefficients.column(0).into_owned();
        let orient: f64 = w.iter().zip(&signs).map(|(x, s)| x * s).sum();
        if orient < 0.0 {
            w.neg_mut();
        }
        (w, Selection::Unique)
    } else {
        let (w, margin) = max_margin(&basis.coefficients, &signs)?;
        (w, Selection::MaxMargin { margin })
    };

    let scale = omega_coeffs.amax();
    let margin = omega_coeffs.iter().zip(&signs).map(|(x, s)| x * s).fold(f64::INFINITY, f64::min);
    if !(scale > 0.0 && margin > tol.eig * scale) {
        return Err(StressError::NoSignProperStress { margin: if scale > 0.0 { margin / scale } else { 0.0 } });
    }
    let min_cable = omega_coeffs
        .iter()
        .zip(&signs)
        .filter(|(_, &s)| s > 0.0)
        .map(|(x, _)| x.abs())
        .fold(f64::INFINITY, f64::min);
    if min_cable.is_finite() {
        omega_coeffs /= min_cable;
    }

    let omega = crate::rigidity::stress_matrix(&fw0, &omega_coeffs);
    let n = fw0.n_base();
    let m_block = omega.view((0, 0), (n, n)).into_owned();
    let alpha = omega.view((0, n), (n, 1)).column(0).into_owned();
    let b = omega[(n, n)];
    let certificate = certify(&omega, &fw0, tol);
    Ok(IzmestievStress { omega, m_block, alpha, b, coefficients: omega_coeffs, stress_dim: k, selection, certificate })
}

/// Maximizes `t` subject to `s_e (B c)_e ≥ t` over the box `‖c‖_∞ ≤ 1`.
fn max_margin(basis: &DMatrix<f64>, signs: &[f64]) -> Result<(DVector<f64>, f64), StressError> {
    let (edges, k) = basis.shape();
    // Variables: c⁺ (k), c⁻ (k), t.
    let vars = 2 * k + 1;
    let mut a = DMatrix::zeros(edges + 2 * k, vars);
    let mut b = DVector::zeros(edges + 2 * k);
    for e in 0..edges {
        for j in 0..k {
            let v = signs[e] * basis[(e, j)];
            a[(e, j)] = -v;
            a[(e, k + j)] = v;
        }
        a[(e, 2 * k)] = 1.0;
    }
    for j in 0..2 * k {
        a[(edges + j, j)] = 1.0;
        b[edges + j] = 1.0;
    }
    let mut c = DVector::zeros(vars);
    c[2 * k] = 1.0;
    let sol = maximize(&c, &a, &b)?;
    let coeffs = DVector::from_iterator(k, (0..k).map(|j| sol.x[j] - sol.x[k + j]));
    Ok((basis * coeffs, sol.objective))
}

/// Runs every check on `omega` for the coned framework `fw0` (apex at origin).
pub fn certify(omega: &DMatrix<f64>, fw0: &ConedFramework, tol: &Tolerances) -> Certificate {
    let n = fw0.n_base();
    let d = fw0.dim();
    let m = omega.view((0, 0), (n, n)).into_owned();
    let alpha = omega.view((0, n), (n, 1)).column(0).into_owned();
    let b = omega[(n, n)];
    let scale = omega.amax();
    let cut = tol.eig * scale;
    let fro = omega.norm();

    let mut is_edge = vec![vec![false; n]; n];
    let mut edges_negative = true;
    for e in fw0.edges().iter().filter(|e| !fw0.is_cone_edge(e)) {
        is_edge[e.i][e.j] = true;
        is_edge[e.j][e.i] = true;
        edges_negative &= m[(e.i, e.j)] < -cut;
    }
    let non_edges_zero = (0..n).all(|i| (0..n).all(|j| i == j || is_edge[i][j] || m[(i, j)].abs() <= cut));

    let p = fw0.config();
    let base = p.view((0, 0), (n, d)).into_owned();
    let annihilates_configuration = (&m * &base).norm() <= tol.rank * m.norm() * base.norm();
    let ones = DVector::repeat(n + 1, 1.0);
    let annihilates_ones = (omega * &ones).norm() <= tol.rank * fro * ones.norm();
    let m_ones = &m * DVector::repeat(n, 1.0);
    let block_identities = (&alpha + &m_ones).norm() <= tol.rank * fro * (n as f64).sqrt()
        && (b - m_ones.sum()).abs() <= tol.rank * fro * n as f64;

    let m_eig = sorted_symmetric_eigen(&m);
    let o_eig = sorted_symmetric_eigen(omega);
    let m_in = Inertia::of(m_eig.values.as_slice(), tol.eig);
    let o_in = Inertia::of(o_eig.values.as_slice(), tol.eig);
    let target_rank = n.saturating_sub(d);

    Certificate {
        non_edges_zero,
        edges_negative,
        annihilates_configuration,
        annihilates_ones,
        block_identities,
        m_rank: m_in.rank(),
        m_rank_ok: m_in.rank() == target_rank,
        m_negative_eigenvalues: m_in.negative,
        m_one_negative: m_in.negative == 1,
        omega_rank: o_in.rank(),
        omega_rank_ok: o_in.rank() == target_rank,
        omega_nullity: o_in.zero,
        omega_nullity_ok: o_in.zero == d + 1,
        omega_negative_eigenvalues: o_in.negative,
        omega_one_negative: o_in.negative == 1,
        interlacing: o_in.negative == m_in.negative && o_in.zero == m_in.zero + 1,
        alpha_positive: alpha.iter().all(|&a| a > cut),
        b_negative: b < -cut,
        strictly_proper: strictly_proper_check(omega, fw0).all,
        omega_eigenvalues: o_eig.values.iter().copied().collect(),
    }
}

/// Per-edge sign verdicts of a stress matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProperReport {
    /// Cables need `Ω_ij < 0`, struts `Ω_ij > 0`; bars always pass.
    pub per_edge: Vec<bool>,
    pub all: bool,
}

pub fn strictly_proper_check(omega: &DMatrix<f64>, fw: &Framework) -> ProperReport {
    let scale = omega.amax();
    let cut = Tolerances::default().eig * scale;
    let per_edge: Vec<bool> = fw
        .edges()
        .iter()
        .map(|e| {
            let w = omega[(e.i, e.j)];
            match e.label {
                EdgeLabel::Cable => w < -cut,
                EdgeLabel::Strut => w > cut,
                EdgeLabel::Bar => true,
            }
        })
        .collect();
    let all = scale > 0.0 && per_edge.iter().all(|&ok| ok);
    ProperReport { per_edge, all }
}

/// Unnormalized Wachspress coordinates of `point` read off the block stress.
#[derive(Debug, Clone)]
pub struct Wachspress {
    pub alpha: DVector<f64>,
    /// `Σ α_i = −b`.
    pub sum: f64,
}

impl Wachspress {
    /// Coordinates scaled to sum to one.
    pub fn normalized(&self) -> DVector<f64> {
        &self.alpha / self.alpha.sum()
    }
}

pub fn wachspress(poly: &Polytope, point: &DVector<f64>, tol: &Tolerances) -> Result<Wachspress, StressError> {
    let fw = cone(poly, point, Labeling::Tensegrity)?;
    let iz = izmestiev_stress(&fw, tol)?.certified()?;
    Ok(Wachspress { sum: -iz.b, alpha: iz.alpha })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{make_named, NamedPolytope};
    use crate::rigidity::stress_space;

    fn coned_cube(apex: [f64; 3]) -> ConedFramework {
        let p = make_named(NamedPolytope::Cube);
        cone(&p, &DVector::from_row_slice(&apex), Labeling::Tensegrity).unwrap()
    }

    #[test]
    fn cube_at_centroid_certifies() {
        let iz = izmestiev_stress(&coned_cube([0.0; 3]), &Tolerances::default()).unwrap();
        let c = &iz.certificate;
        assert!(c.passed(), "{:?}", c.failed());
        assert_eq!((c.omega_rank, c.omega_nullity, c.omega_negative_eigenvalues), (5, 4, 1));
        assert_eq!(iz.stress_dim, 1);
        assert_eq!(iz.selection, Selection::Unique);
        let a0 = iz.alpha[0];
        assert!(iz.alpha.iter().all(|a| (a - a0).abs() < 1e-9 * a0));
        assert!((iz.alpha.sum() + iz.b).abs() < 1e-12 * iz.alpha.sum());
    }

    #[test]
    fn proper_check_cases() {
        let fw = coned_cube([0.0; 3]);
        let iz = izmestiev_stress(&fw, &Tolerances::default()).unwrap();
        assert!(strictly_proper_check(&iz.omega, &fw).all);
        let neg = strictly_proper_check(&-&iz.omega, &fw);
        assert!(!neg.all);
        assert!(neg.per_edge.iter().all(|ok| !ok));
        let zero = DMatrix::zeros(9, 9);
        assert!(!strictly_proper_check(&zero, &fw).all);
    }

    #[test]
    fn tetrahedron_certifies_and_generic_placement_has_no_stress() {
        let p = make_named(NamedPolytope::Tetrahedron);
        let fw = cone(&p, &DVector::from_row_slice(&[0.1, 0.05, -0.02]), Labeling::Tensegrity).unwrap();
        // K5 in general position has one stress (10 edges, rank 9).
        assert_eq!(stress_space(&fw, &Tolerances::default()).dim(), 1);
        let iz = izmestiev_stress(&fw, &Tolerances::default()).unwrap();
        assert!(iz.certificate.passed(), "{:?}", iz.certificate.failed());

        let cube = make_named(NamedPolytope::Cube);
        let mut rng = crate::rng::seeded(5, crate::rng::STREAM_PLACEMENT);
        let fw = cone(&cube, &cube.centroid(), Labeling::Tensegrity).unwrap();
        let generic = fw.with_config(DMatrix::from_fn(9, 3, |_, _| rand::Rng::random::<f64>(&mut rng))).unwrap();
        assert_eq!(izmestiev_stress(&generic, &Tolerances::default()).unwrap_err(), StressError::EmptyStressSpace);
    }

    #[test]
    fn translation_leaves_stresses_unchanged() {
        let fw = coned_cube([0.1, 0.2, 0.3]);
        let moved = translate_to_apex_origin(&fw);
        assert!(moved.apex().norm() == 0.0);
        let tol = Tolerances::default();
        let a = stress_space(&fw, &tol);
        let b = stress_space(&moved, &tol);
        assert_eq!(a.dim(), b.dim());
        let ia = izmestiev_stress(&fw, &tol).unwrap();
        let same = translate_to_apex_origin(&translate_to_apex_origin(&fw));
        assert_eq!(same.config(), moved.config());
        let ib = izmestiev_stress(&moved, &tol).unwrap();
        assert!((&ia.omega - &ib.omega).amax() < 1e-9 * ia.omega.amax());
    }

    #[test]
    fn cuboctahedron_uses_max_margin() {
        let p = make_named(NamedPolytope::Cuboctahedron);
        let fw = cone(&p, &p.centroid(), Labeling::Tensegrity).unwrap();
        let iz = izmestiev_stress(&fw, &Tolerances::default()).unwrap();
        assert_eq!(iz.stress_dim, 4);
        assert!(matches!(iz.selection, Selection::MaxMargin { margin } if margin > 0.0));
        assert!(iz.certificate.strictly_proper);
    }

    #[test]
    fn wachspress_at_cube_centroid_is_uniform() {
        let w = wachspress(&make_named(NamedPolytope::Cube), &DVector::zeros(3), &Tolerances::default()).unwrap();
        let n = w.normalized();
        assert!(n.iter().all(|x| (x - 0.125).abs() < 1e-12));
        assert!((w.alpha.sum() - w.sum).abs() < 1e-12 * w.sum);
    }
}
