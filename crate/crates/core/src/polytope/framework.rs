use std::collections::BTreeSet;
use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::PolytopeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeLabel {
    /// May not lengthen.
    Cable,
    /// May not shorten.
    Strut,
    Bar,
}

/// Edge `i < j` is not required; the pair is stored as given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub label: EdgeLabel,
}

impl Edge {
    pub fn new(i: usize, j: usize, label: EdgeLabel) -> Self {
        Self { i, j, label }
    }

    fn key(&self) -> (usize, usize) {
        (self.i.min(self.j), self.i.max(self.j))
    }
}

/// A configuration of points (rows of an `n × d` matrix) and a labeled graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Framework {
    config: DMatrix<f64>,
    edges: Vec<Edge>,
}

impl Framework {
    pub fn new(config: DMatrix<f64>, edges: Vec<Edge>) -> Result<Self, PolytopeError> {
        let n = config.nrows();
        let mut seen = BTreeSet::new();
        for e in &edges {
            if e.i == e.j {
                return Err(PolytopeError::InvalidEdge { i: e.i, j: e.j, reason: "loop" });
            }
            if e.i >= n || e.j >= n {
                return Err(PolytopeError::InvalidEdge { i: e.i, j: e.j, reason: "index out of range" });
            }
            if !seen.insert(e.key()) {
                return Err(PolytopeError::InvalidEdge { i: e.i, j: e.j, reason: "duplicate" });
            }
        }
        if config.iter().any(|x| !x.is_finite()) {
            return Err(PolytopeError::NonFinite);
        }
        Ok(Self { config, edges })
    }

    /// Rows are points.
    pub fn config(&self) -> &DMatrix<f64> {
        &self.config
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_points(&self) -> usize {
        self.config.nrows()
    }

    pub fn dim(&self) -> usize {
        self.config.ncols()
    }

    pub fn point(&self, i: usize) -> DVector<f64> {
        self.config.row(i).transpose()
    }

    /// Same graph on a different configuration of the same shape.
    pub fn with_config(&self, config: DMatrix<f64>) -> Result<Self, PolytopeError> {
        if config.shape() != self.config.shape() {
            return Err(PolytopeError::ShapeMismatch);
        }
        Self::new(config, self.edges.clone())
    }

    /// Every label replaced by bar.
    pub fn to_bars(&self) -> Self {
        let edges = self.edges.iter().map(|e| Edge::new(e.i, e.j, EdgeLabel::Bar)).collect();
        Self { config: self.config.clone(), edges }
    }

    /// Translates every point by `offset`.
    pub fn translated(&self, offset: &DVector<f64>) -> Self {
        let mut config = self.config.clone();
        for mut row in config.row_iter_mut() {
            row += offset.transpose();
        }
        Self { config, edges: self.edges.clone() }
    }
}

/// How coned edges are labeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Labeling {
    /// Cables on the skeleton, struts to the apex.
    #[default]
    Tensegrity,
    Bars,
}

/// A polytope skeleton coned over an apex. The apex is the last point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConedFramework {
    framework: Framework,
    cone_index: usize,
}

impl ConedFramework {
    pub(crate) fn from_parts(framework: Framework) -> Result<Self, PolytopeError> {
        let cone_index = framework
            .n_points()
            .checked_sub(1)
            .ok_or(PolytopeError::TooFewVertices { n: 0, dim: framework.dim() })?;
        Ok(Self { framework, cone_index })
    }

    pub fn framework(&self) -> &Framework {
        &self.framework
    }

    pub fn cone_index(&self) -> usize {
        self.cone_index
    }

    /// Number of polytope vertices (the apex excluded).
    pub fn n_base(&self) -> usize {
        self.cone_index
    }

    pub fn apex(&self) -> DVector<f64> {
        self.framework.point(self.cone_index)
    }

    pub fn is_cone_edge(&self, e: &Edge) -> bool {
        e.i == self.cone_index || e.j == self.cone_index
    }

    /// Same graph and apex index on another configuration.
    pub fn with_config(&self, config: DMatrix<f64>) -> Result<Self, PolytopeError> {
        Ok(Self { framework: self.framework.with_config(config)?, cone_index: self.cone_index })
    }

    pub fn translated(&self, offset: &DVector<f64>) -> Self {
        Self { framework: self.framework.translated(offset), cone_index: self.cone_index }
    }

    pub fn to_bars(&self) -> Self {
        Self { framework: self.framework.to_bars(), cone_index: self.cone_index }
    }
}

impl Deref for ConedFramework {
    type Target = Framework;

    fn deref(&self) -> &Framework {
        &self.framework
    }
}
