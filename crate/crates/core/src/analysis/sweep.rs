use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::residual::{stress_flex_table, stresses_for_analysis, StressFlexTable};
use super::{AnalysisError, ConditionVerdict};
use crate::linalg::RankDecision;
use crate::polytope::{cone, Labeling, Polytope, PolytopeSource};
use crate::rigidity::{flex_space, rigidity_matrix, stress_space};
use crate::rng::{seeded, unit_vector, STREAM_APEX};
use crate::stress::izmestiev_stress;
use crate::tolerances::Tolerances;

/// Where the cone point goes.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ApexStrategy {
    Centroid,
    /// Convex combination of the vertices with weights drawn from `U(0.05, 1)`.
    InteriorRandom,
    /// `centroid + s R u` with `u` uniform on the sphere, `s ~ U(1.5, 3)` and
    /// `R` the largest vertex distance from the centroid.
    ExteriorRandom,
    Explicit(Vec<f64>),
}

impl ApexStrategy {
    pub fn label(&self) -> &'static str {
        match self {
            ApexStrategy::Centroid => "centroid",
            ApexStrategy::InteriorRandom => "interior-random",
            ApexStrategy::ExteriorRandom => "exterior-random",
            ApexStrategy::Explicit(_) => "explicit",
        }
    }

    pub fn place(&self, poly: &Polytope, seed: u64) -> DVector<f64> {
        let centroid = poly.centroid();
        match self {
            ApexStrategy::Centroid => centroid,
            ApexStrategy::InteriorRandom => {
                let mut rng = seeded(seed, STREAM_APEX);
                let w: Vec<f64> = (0..poly.n_vertices()).map(|_| rng.random_range(0.05..1.0)).collect();
                let total: f64 = w.iter().sum();
                let weights = DVector::from_iterator(w.len(), w.iter().map(|x| x / total));
                poly.vertices().transpose() * weights
            }
            ApexStrategy::ExteriorRandom => {
                let mut rng = seeded(seed, STREAM_APEX + 1);
                let radius = poly.vertices().row_iter().map(|r| (r.transpose() - &centroid).norm()).fold(0.0, f64::max);
                let dir = unit_vector(&mut rng, poly.dim());
                let s: f64 = rng.random_range(1.5..3.0);
                centroid + dir * (s * radius)
            }
            ApexStrategy::Explicit(x) => DVector::from_column_slice(x),
        }
    }

    /// Whether the placed apex is strictly inside, when that is known.
    pub fn interior(&self, poly: &Polytope, apex: &DVector<f64>, tol: &Tolerances) -> Option<bool> {
        let convex = poly.is_convex(tol.geom);
        match self {
            // Only convex inputs are guaranteed; the 4-cube is the one d ≠ 3 model.
            ApexStrategy::Centroid | ApexStrategy::InteriorRandom => match convex {
                Some(false) => None,
                _ => Some(true),
            },
            ApexStrategy::ExteriorRandom => Some(false),
            ApexStrategy::Explicit(_) => match convex {
                Some(true) => Some(strictly_inside(poly, apex, tol)),
                _ => None,
            },
        }
    }
}

fn strictly_inside(poly: &Polytope, x: &DVector<f64>, tol: &Tolerances) -> bool {
    let margin = tol.geom * poly.diameter();
    (0..poly.facets().len()).all(|f| {
        let (normal, offset) = poly.facet_plane(f);
        normal.dot(x) - offset < -margin
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceReport {
    pub seed: u64,
    pub strategy: &'static str,
    pub apex: Vec<f64>,
    pub interior: Option<bool>,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub rank: RankDecision,
    pub trivial_flex_dim: usize,
    pub nontrivial_flex_dim: usize,
    pub stress_dim: usize,
    pub izmestiev_certified: bool,
    pub izmestiev_error: Option<String>,
    pub table: StressFlexTable,
}

impl InstanceReport {
    pub fn max_relative(&self) -> Option<f64> {
        self.table.max_relative
    }

    pub fn verdict(&self) -> ConditionVerdict {
        self.table.verdict
    }
}

/// Every basis stress (plus the certified block stress) against every
/// nontrivial flex of `poly` coned at the strategy's apex.
pub fn analyze_instance(
    poly: &Polytope,
    strategy: &ApexStrategy,
    seed: u64,
    tol: &Tolerances,
) -> Result<InstanceReport, AnalysisError> {
    let apex = strategy.place(poly, seed);
    let fw = cone(poly, &apex, Labeling::Tensegrity)?;
    let rank = rigidity_matrix(&fw).rank(tol);
    let flexes = flex_space(&fw, tol)?;
    let basis = stress_space(&fw, tol);
    let izmestiev = izmestiev_stress(&fw, tol);
    let stresses = stresses_for_analysis(&basis, &izmestiev);
    let table = stress_flex_table(&fw, &stresses, &flexes.nontrivial_flexes(), tol)?;
    let (izmestiev_certified, izmestiev_error) = match izmestiev.and_then(|s| s.certified()) {
        Ok(_) => (true, None),
        Err(e) => (false, Some(e.to_string())),
    };
    Ok(InstanceReport {
        seed,
        strategy: strategy.label(),
        interior: strategy.interior(poly, &apex, tol),
        apex: apex.iter().copied().collect(),
        n_vertices: poly.n_vertices(),
        n_edges: fw.edges().len(),
        rank,
        trivial_flex_dim: flexes.trivial.ncols(),
        nontrivial_flex_dim: flexes.nontrivial.ncols(),
        stress_dim: basis.dim(),
        izmestiev_certified,
        izmestiev_error,
        table,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceError {
    pub seed: u64,
    pub strategy: &'static str,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub errors: usize,
    pub max_relative: Option<f64>,
    pub median_relative: Option<f64>,
    pub holds: usize,
    pub inconclusive: usize,
    pub fails: usize,
    pub vacuous: usize,
    pub certified: usize,
    pub verdict: ConditionVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    /// Seed-major, strategies in the order given.
    pub instances: Vec<InstanceReport>,
    pub errors: Vec<InstanceError>,
    pub summary: SweepSummary,
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    Some(if xs.len() % 2 == 1 { xs[m] } else { 0.5 * (xs[m - 1] + xs[m]) })
}

pub fn summarize(instances: &[InstanceReport], errors: usize, tol: &Tolerances) -> SweepSummary {
    let maxima: Vec<f64> = instances.iter().filter_map(InstanceReport::max_relative).collect();
    let count = |v: ConditionVerdict| instances.iter().filter(|r| r.verdict() == v).count();
    let max_relative = maxima.iter().copied().reduce(f64::max);
    SweepSummary {
        instances: instances.len(),
        errors,
        max_relative,
        median_relative: median(maxima),
        holds: count(ConditionVerdict::Holds),
        inconclusive: count(ConditionVerdict::Inconclusive),
        fails: count(ConditionVerdict::Fails),
        vacuous: count(ConditionVerdict::Vacuous),
        certified: instances.iter().filter(|r| r.izmestiev_certified).count(),
        verdict: ConditionVerdict::of_max(max_relative, tol),
    }
}

/// Runs instances in parallel; the report order does not depend on scheduling.
pub fn sweep_strong_conjecture(
    source: &PolytopeSource,
    seeds: &[u64],
    strategies: &[ApexStrategy],
    tol: &Tolerances,
) -> SweepReport {
    let jobs: Vec<(u64, &ApexStrategy)> =
        seeds.iter().flat_map(|&s| strategies.iter().map(move |st| (s, st))).collect();
    let results: Vec<Result<InstanceReport, InstanceError>> = jobs
        .par_iter()
        .map(|&(seed, strategy)| {
            source
                .build(seed)
                .map_err(AnalysisError::from)
                .and_then(|poly| analyze_instance(&poly, strategy, seed, tol))
                .map_err(|e| InstanceError { seed, strategy: strategy.label(), error: e.to_string() })
        })
        .collect();
    let mut instances = Vec::new();
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(i) => instances.push(i),
            Err(e) => errors.push(e),
        }
    }
    let summary = summarize(&instances, errors.len(), tol);
    SweepReport { instances, errors, summary }
}
