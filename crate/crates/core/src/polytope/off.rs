//! OFF reader and writer.
//!
//! Accepted layout: a header line `OFF`, a counts line `n f e`, `n`
//! coordinate lines with three numbers each, then `f` face lines
//! `k i_1 … i_k`. Text after `#` is a comment; blank lines are skipped.
//! Tokens after the `k` indices of a face line (colors) are ignored. The
//! edge count is not checked.

use std::fmt::{self, Write as _};

use nalgebra::DMatrix;
use thiserror::Error;

use super::{Polytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct OffError {
    /// 1-based; 0 when the error concerns the file as a whole.
    pub line: usize,
    pub kind: OffErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OffErrorKind {
    MalformedHeader(String),
    MalformedCounts,
    BadCoordinate(String),
    WrongCoordinateCount(usize),
    BadIndex(String),
    IndexOutOfRange { index: usize, n: usize },
    ShortFacet(usize),
    UnexpectedEof,
    TrailingData,
    Invalid(Box<PolytopeError>),
}

impl fmt::Display for OffErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OffErrorKind::MalformedHeader(h) => write!(f, "expected header \"OFF\", found {h:?}"),
            OffErrorKind::MalformedCounts => write!(f, "expected counts line \"n f e\""),
            OffErrorKind::BadCoordinate(t) => write!(f, "non-numeric coordinate {t:?}"),
            OffErrorKind::WrongCoordinateCount(k) => write!(f, "expected 3 coordinates, found {k}"),
            OffErrorKind::BadIndex(t) => write!(f, "invalid vertex index {t:?}"),
            OffErrorKind::IndexOutOfRange { index, n } => {
                write!(f, "vertex index {index} out of range for {n} vertices")
            }
            OffErrorKind::ShortFacet(k) => write!(f, "facet with {k} vertices, at least 3 required"),
            OffErrorKind::UnexpectedEof => write!(f, "unexpected end of file"),
            OffErrorKind::TrailingData => write!(f, "data after the last facet"),
            OffErrorKind::Invalid(e) => write!(f, "{e}"),
        }
    }
}

fn err(line: usize, kind: OffErrorKind) -> PolytopeError {
    PolytopeError::Off(OffError { line, kind })
}

/// Parses OFF text into a validated 3-dimensional polytope.
pub fn parse_off(text: &str) -> Result<Polytope, PolytopeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, raw)| (k + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let last_line = text.lines().count();

    let (line, header) = lines.next().ok_or_else(|| err(last_line, OffErrorKind::UnexpectedEof))?;
    if header != "OFF" {
        return Err(err(line, OffErrorKind::MalformedHeader(header.to_string())));
    }

    let (line, counts) = lines.next().ok_or_else(|| err(last_line, OffErrorKind::UnexpectedEof))?;
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| err(line, OffErrorKind::MalformedCounts))?;
    let &[n, f, ..] = counts.as_slice() else {
        return Err(err(line, OffErrorKind::MalformedCounts));
    };
    if counts.len() > 3 {
        return Err(err(line, OffErrorKind::MalformedCounts));
    }

    let mut vertices = DMatrix::zeros(n, 3);
    for i in 0..n {
        let (line, l) = lines.next().ok_or_else(|| err(last_line, OffErrorKind::UnexpectedEof))?;
        let tokens: Vec<&str> = l.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(err(line, OffErrorKind::WrongCoordinateCount(tokens.len())));
        }
        for (k, tok) in tokens.iter().enumerate() {
            let x: f64 = tok.parse().map_err(|_| err(line, OffErrorKind::BadCoordinate(tok.to_string())))?;
            if !x.is_finite() {
                return Err(err(line, OffErrorKind::BadCoordinate(tok.to_string())));
            }
            vertices[(i, k)] = x;
        }
    }

    let mut facets = Vec::with_capacity(f);
    let mut facet_lines = Vec::with_capacity(f);
    for _ in 0..f {
        let (line, l) = lines.next().ok_or_else(|| err(last_line, OffErrorKind::UnexpectedEof))?;
        let mut tokens = l.split_whitespace();
        let count_tok = tokens.next().unwrap_or("");
        let k: usize = count_tok.parse().map_err(|_| err(line, OffErrorKind::BadIndex(count_tok.to_string())))?;
        if k < 3 {
            return Err(err(line, OffErrorKind::ShortFacet(k)));
        }
        let mut cycle = Vec::with_capacity(k);
        for _ in 0..k {
            let tok = tokens.next().ok_or_else(|| err(line, OffErrorKind::ShortFacet(cycle.len())))?;
            let index: usize = tok.parse().map_err(|_| err(line, OffErrorKind::BadIndex(tok.to_string())))?;
            if index >= n {
                return Err(err(line, OffErrorKind::IndexOutOfRange { index, n }));
            }
            cycle.push(index);
        }
        facets.push(cycle);
        facet_lines.push(line);
    }
    if let Some((line, _)) = lines.next() {
        return Err(err(line, OffErrorKind::TrailingData));
    }

    Polytope::new(vertices, facets).map_err(|e| {
        // Attribute facet-level validation failures to their source line.
        let line = match &e {
            PolytopeError::NonPlanarFacet { facet, .. }
            | PolytopeError::RepeatedVertex { facet, .. }
            | PolytopeError::ShortFacet { facet, .. } => facet_lines[*facet],
            _ => 0,
        };
        err(line, OffErrorKind::Invalid(Box::new(e)))
    })
}

/// Writes the polytope as OFF. Coordinates use the shortest representation
/// that reads back to the same `f64`.
pub fn serialize_off(poly: &Polytope) -> Result<String, PolytopeError> {
    if poly.dim() != 3 {
        return Err(PolytopeError::UnsupportedDimension(poly.dim()));
    }
    let mut out = String::from("OFF\n");
    let _ = writeln!(out, "{} {} {}", poly.n_vertices(), poly.facets().len(), poly.edges().len());
    for row in poly.vertices().row_iter() {
        let _ = writeln!(out, "{:?} {:?} {:?}", row[0], row[1], row[2]);
    }
    for cycle in poly.facets() {
        let _ = write!(out, "{}", cycle.len());
        for i in cycle {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
    }
    Ok(out)
}
