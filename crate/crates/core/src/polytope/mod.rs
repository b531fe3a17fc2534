//! Polytopes, their coned frameworks, and the generators that feed the
//! experiments.
//!
//! A [`Polytope`] is a vertex configuration plus a list of oriented face
//! cycles. The one-skeleton is derived from consecutive pairs in the cycles.
//! For `d = 3` the faces are the facets; the 4-dimensional hypercube stores
//! its square 2-faces instead, which determine the same edge set.

mod framework;
mod named;
mod off;
mod random;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::singular_values;
use crate::tolerances::Tolerances;

pub use framework::{ConedFramework, Edge, EdgeLabel, Framework, Labeling};
pub use named::{make_named, NamedPolytope};
pub use off::{parse_off, serialize_off, OffError, OffErrorKind};
pub use random::{random_halfspace_polytope, random_simple_polytope, HalfspacePolytope, MAX_ATTEMPTS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolytopeError {
    #[error("{n} vertices cannot span R^{dim}")]
    TooFewVertices { n: usize, dim: usize },
    #[error("vertices span an affine space of dimension {affine_rank}, expected {dim}")]
    NotFullSpan { affine_rank: usize, dim: usize },
    #[error("facet {facet} has {len} vertices, at least 3 required")]
    ShortFacet { facet: usize, len: usize },
    #[error("facet {facet} references vertex {index} but only {n} vertices exist")]
    FacetIndex { facet: usize, index: usize, n: usize },
    #[error("facet {facet} repeats vertex {index}")]
    RepeatedVertex { facet: usize, index: usize },
    #[error("facet {facet} deviates from its best-fit plane by {deviation:e}")]
    NonPlanarFacet { facet: usize, deviation: f64 },
    #[error("invalid edge ({i}, {j}): {reason}")]
    InvalidEdge { i: usize, j: usize, reason: &'static str },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("configuration shape mismatch")]
    ShapeMismatch,
    #[error("apex has dimension {got}, polytope has dimension {expected}")]
    ApexDimension { expected: usize, got: usize },
    #[error("expected {expected} slide factors, got {got}")]
    SlideLength { expected: usize, got: usize },
    #[error("slide factor {index} is {value}, must be positive")]
    NonPositiveSlide { index: usize, value: f64 },
    #[error("operation requires dimension 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("{planes} random halfspaces do not bound a polytope")]
    Unbounded { planes: usize },
    #[error("random draw stayed degenerate after {attempts} attempts")]
    DegenerateDraw { attempts: usize },
    #[error("unknown polytope name {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Off(#[from] OffError),
}

/// Vertices, oriented face cycles and the derived one-skeleton.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolytopeMirror", into = "PolytopeMirror")]
pub struct Polytope {
    vertices: DMatrix<f64>,
    facets: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

/// JSON mirror `{dim, vertices: [[..]], facets: [[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct PolytopeMirror {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Vec<usize>>,
}

impl TryFrom<PolytopeMirror> for Polytope {
    type Error = PolytopeError;

    fn try_from(m: PolytopeMirror) -> Result<Self, Self::Error> {
        if m.vertices.iter().any(|v| v.len() != m.dim) {
            return Err(PolytopeError::ShapeMismatch);
        }
        Polytope::from_rows(m.dim, &m.vertices, m.facets)
    }
}

impl From<Polytope> for PolytopeMirror {
    fn from(p: Polytope) -> Self {
        PolytopeMirror {
            dim: p.dim(),
            vertices: p.vertices.row_iter().map(|r| r.iter().copied().collect()).collect(),
            facets: p.facets,
        }
    }
}

impl Polytope {
    /// Validates with the default geometric tolerance.
    pub fn new(vertices: DMatrix<f64>, facets: Vec<Vec<usize>>) -> Result<Self, PolytopeError> {
        Self::with_tolerance(vertices, facets, Tolerances::default().geom)
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f64>], facets: Vec<Vec<usize>>) -> Result<Self, PolytopeError> {
        let vertices = DMatrix::from_fn(rows.len(), dim, |i, k| rows[i][k]);
        Self::new(vertices, facets)
    }

    pub fn with_tolerance(
        vertices: DMatrix<f64>,
        facets: Vec<Vec<usize>>,
        tol_geom: f64,
    ) -> Result<Self, PolytopeError> {
        let (n, dim) = vertices.shape();
        if vertices.iter().any(|x| !x.is_finite()) {
            return Err(PolytopeError::NonFinite);
        }
        if n < dim + 1 {
            return Err(PolytopeError::TooFewVertices { n, dim });
        }
        let diameter = bbox_diameter(&vertices);
        let affine_rank = affine_rank(&vertices, tol_geom);
        if affine_rank < dim {
            return Err(PolytopeError::NotFullSpan { affine_rank, dim });
        }
        for (f, cycle) in facets.iter().enumerate() {
            if cycle.len() < 3 {
                return Err(PolytopeError::ShortFacet { facet: f, len: cycle.len() });
            }
            let mut seen = vec![false; n];
            for &index in cycle {
                if index >= n {
                    return Err(PolytopeError::FacetIndex { facet: f, index, n });
                }
                if std::mem::replace(&mut seen[index], true) {
                    return Err(PolytopeError::RepeatedVertex { facet: f, index });
                }
            }
            if dim >= 3 {
                let deviation = plane_deviation(&vertices, cycle);
                if deviation > tol_geom * diameter {
                    return Err(PolytopeError::NonPlanarFacet { facet: f, deviation });
                }
            }
        }
        let edges = derive_edges(&facets);
        Ok(Self { vertices, facets, edges })
    }

    /// Rows are vertices.
    pub fn vertices(&self) -> &DMatrix<f64> {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> DVector<f64> {
        self.vertices.row(i).transpose()
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.nrows()
    }

    pub fn dim(&self) -> usize {
        self.vertices.ncols()
    }

    pub fn centroid(&self) -> DVector<f64> {
        self.vertices.row_mean().transpose()
    }

    pub fn diameter(&self) -> f64 {
        bbox_diameter(&self.vertices)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_vertices()];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// `V − E + F` over the stored faces.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.edges.len() as i64 + self.facets.len() as i64
    }

    /// Every edge lies on exactly two faces.
    pub fn is_closed(&self) -> bool {
        let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for cycle in &self.facets {
            for (a, b) in cycle_pairs(cycle) {
                *count.entry(ordered(a, b)).or_default() += 1;
            }
        }
        count.values().all(|&c| c == 2)
    }

    /// For `d = 3`: each facet plane has every other vertex strictly on one
    /// side. `None` in other dimensions, where faces are not facets.
    pub fn is_convex(&self, tol_geom: f64) -> Option<bool> {
        if self.dim() != 3 {
            return None;
        }
        let scale = tol_geom * self.diameter();
        let convex = self.facets.iter().all(|cycle| {
            let (normal, offset) = best_fit_plane(&self.vertices, cycle);
            let mut sign = 0.0_f64;
            (0..self.n_vertices()).filter(|i| !cycle.contains(i)).all(|i| {
                let s = normal.dot(&self.vertex(i)) - offset;
                if s.abs() <= scale {
                    return false;
                }
                if sign == 0.0 {
                    sign = s.signum();
                }
                s.signum() == sign
            })
        });
        Some(convex)
    }

    /// Unit outward normal and offset of facet `f`'s best-fit plane (`d = 3`),
    /// oriented so that the centroid lies on the negative side.
    pub fn facet_plane(&self, f: usize) -> (DVector<f64>, f64) {
        let (mut normal, mut offset) = best_fit_plane(&self.vertices, &self.facets[f]);
        if normal.dot(&self.centroid()) - offset > 0.0 {
            normal = -normal;
            offset = -offset;
        }
        (normal, offset)
    }

    /// Applies `x ↦ A x + t` to every vertex; combinatorics unchanged.
    pub fn transformed(&self, linear: &DMatrix<f64>, shift: &DVector<f64>) -> Result<Self, PolytopeError> {
        let mut vertices = &self.vertices * linear.transpose();
        for mut row in vertices.row_iter_mut() {
            row += shift.transpose();
        }
        Self::new(vertices, self.facets.clone())
    }
}

/// Where polytopes for a sweep or a report come from.
#[derive(Debug, Clone, PartialEq)]
pub enum PolytopeSource {
    Named(NamedPolytope),
    RandomSimple { planes: usize },
    Fixed(Box<Polytope>),
}

impl PolytopeSource {
    /// Seed only matters for random generators.
    pub fn build(&self, seed: u64) -> Result<Polytope, PolytopeError> {
        match self {
            PolytopeSource::Named(name) => Ok(make_named(*name)),
            PolytopeSource::RandomSimple { planes } => random_simple_polytope(seed, *planes),
            PolytopeSource::Fixed(p) => Ok((**p).clone()),
        }
    }
}

/// Cones the skeleton of `poly` over `apex`.
///
/// The apex becomes point `n`; skeleton edges come first in sorted order,
/// followed by the struts `(i, n)` for `i = 0..n`.
pub fn cone(poly: &Polytope, apex: &DVector<f64>, labeling: Labeling) -> Result<ConedFramework, PolytopeError> {
    let (n, dim) = poly.vertices.shape();
    if apex.len() != dim {
        return Err(PolytopeError::ApexDimension { expected: dim, got: apex.len() });
    }
    let mut config = poly.vertices.clone().insert_row(n, 0.0);
    config.row_mut(n).copy_from(&apex.transpose());
    let (skeleton, spoke) = match labeling {
        Labeling::Tensegrity => (EdgeLabel::Cable, EdgeLabel::Strut),
        Labeling::Bars => (EdgeLabel::Bar, EdgeLabel::Bar),
    };
    let edges = poly
        .edges
        .iter()
        .map(|&(i, j)| Edge::new(i, j, skeleton))
        .chain((0..n).map(|i| Edge::new(i, n, spoke)))
        .collect();
    ConedFramework::from_parts(Framework::new(config, edges)?)
}

/// The bar framework of the skeleton alone.
pub fn skeleton_framework(poly: &Polytope) -> Framework {
    let edges = poly.edges.iter().map(|&(i, j)| Edge::new(i, j, EdgeLabel::Bar)).collect();
    Framework::new(poly.vertices.clone(), edges).expect("derived edges are valid")
}

/// Moves each base vertex along its line to the apex:
/// `p_i ↦ apex + t_i (p_i − apex)`.
pub fn slide(fw: &ConedFramework, t: &[f64]) -> Result<ConedFramework, PolytopeError> {
    let n = fw.n_base();
    if t.len() != n {
        return Err(PolytopeError::SlideLength { expected: n, got: t.len() });
    }
    if let Some((index, &value)) = t.iter().enumerate().find(|(_, &v)| v.is_nan() || v <= 0.0) {
        return Err(PolytopeError::NonPositiveSlide { index, value });
    }
    let apex = fw.apex().transpose();
    let mut config = fw.config().clone();
    for (i, &ti) in t.iter().enumerate() {
        if ti != 1.0 {
            let moved = &apex + (config.row(i) - &apex) * ti;
            config.row_mut(i).copy_from(&moved);
        }
    }
    fw.with_config(config)
}

/// Seeded slide factors drawn uniformly from `[0.5, 1.5]`.
pub fn random_slide_factors(seed: u64, n: usize) -> Vec<f64> {
    use rand::Rng;
    let mut rng = crate::rng::seeded(seed, crate::rng::STREAM_SLIDE);
    (0..n).map(|_| rng.random_range(0.5..1.5)).collect()
}

/// Same graph with every point, apex included, drawn from a standard
/// Gaussian.
pub fn generic_placement(fw: &ConedFramework, seed: u64) -> ConedFramework {
    let mut rng = crate::rng::seeded(seed, crate::rng::STREAM_PLACEMENT);
    let (n, d) = fw.config().shape();
    let flat = crate::rng::gaussian_vector(&mut rng, n * d);
    fw.with_config(DMatrix::from_row_slice(n, d, flat.as_slice())).expect("same shape")
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn cycle_pairs(cycle: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    cycle.iter().zip(cycle.iter().cycle().skip(1)).map(|(&a, &b)| (a, b))
}

fn derive_edges(facets: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut edges: Vec<_> = facets.iter().flat_map(|c| cycle_pairs(c).map(|(a, b)| ordered(a, b))).collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

fn bbox_diameter(vertices: &DMatrix<f64>) -> f64 {
    let mut sq = 0.0;
    for col in vertices.column_iter() {
        let lo = col.min();
        let hi = col.max();
        sq += (hi - lo) * (hi - lo);
    }
    sq.sqrt()
}

fn centered_rows(vertices: &DMatrix<f64>, rows: &[usize]) -> DMatrix<f64> {
    let dim = vertices.ncols();
    let mut m = DMatrix::from_fn(rows.len(), dim, |r, k| vertices[(rows[r], k)]);
    let mean = m.row_mean();
    for mut row in m.row_iter_mut() {
        row -= &mean;
    }
    m
}

/// Affine dimension of the rows at relative tolerance `tol` of the diameter.
pub(crate) fn affine_rank(vertices: &DMatrix<f64>, tol: f64) -> usize {
    let rows: Vec<usize> = (0..vertices.nrows()).collect();
    let centered = centered_rows(vertices, &rows);
    let diameter = bbox_diameter(vertices);
    if diameter == 0.0 {
        return 0;
    }
    singular_values(&centered).iter().filter(|&&s| s > tol * diameter).count()
}

/// Third singular value of the centered face points: an upper bound on the
/// distance from any face vertex to the best-fit 2-plane.
fn plane_deviation(vertices: &DMatrix<f64>, cycle: &[usize]) -> f64 {
    singular_values(&centered_rows(vertices, cycle)).get(2).copied().unwrap_or(0.0)
}

fn best_fit_plane(vertices: &DMatrix<f64>, cycle: &[usize]) -> (DVector<f64>, f64) {
    let centered = centered_rows(vertices, cycle);
    let dim = vertices.ncols();
    // Smallest right singular vector of the (padded) centered points.
    let normal = crate::linalg::nullspace_with_rank(&centered, dim - 1).column(0).into_owned();
    let mean = DVector::from_iterator(dim, (0..dim).map(|k| cycle.iter().map(|&i| vertices[(i, k)]).sum::<f64>() / cycle.len() as f64));
    let offset = normal.dot(&mean);
    (normal, offset)
}
