//! Simple 3-polytopes cut out by random planes `{x : u_k · x ≤ 1}`.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::Rng;
use rand_distr::UnitSphere;

use super::named::oriented_cycle;
use super::{Polytope, PolytopeError};
use crate::rng::{seeded, STREAM_POLYTOPE};

/// Draws per call before giving up.
pub const MAX_ATTEMPTS: usize = 200;

/// Vertices closer than this (in plane slack) to a fourth plane make the
/// draw non-simple.
const SLACK_TOL: f64 = 1e-6;
const SINGULAR_TOL: f64 = 1e-12;

/// A random polytope together with the halfspaces that generated it.
#[derive(Debug, Clone)]
pub struct HalfspacePolytope {
    pub polytope: Polytope,
    /// Unit normals `u_k`; every constraint reads `u_k · x ≤ 1`.
    pub normals: Vec<Vector3<f64>>,
    /// `facet_planes[f]` is the index into `normals` of facet `f`.
    pub facet_planes: Vec<usize>,
    /// 1-based number of the draw that succeeded.
    pub attempts: usize,
}

enum Draw {
    Ok(HalfspacePolytope),
    Unbounded,
    Degenerate,
}

/// Intersection of `m` random halfspaces, retried until simple and bounded.
pub fn random_simple_polytope(seed: u64, m: usize) -> Result<Polytope, PolytopeError> {
    random_halfspace_polytope(seed, m).map(|h| h.polytope)
}

pub fn random_halfspace_polytope(seed: u64, m: usize) -> Result<HalfspacePolytope, PolytopeError> {
    if m < 4 {
        return Err(PolytopeError::Unbounded { planes: m });
    }
    let mut rng = seeded(seed, STREAM_POLYTOPE);
    let mut saw_bounded = false;
    for attempt in 1..=MAX_ATTEMPTS {
        let normals: Vec<Vector3<f64>> = (0..m)
            .map(|_| {
                let [x, y, z]: [f64; 3] = rng.sample(UnitSphere);
                Vector3::new(x, y, z)
            })
            .collect();
        match draw(normals) {
            Draw::Ok(mut h) => {
                h.attempts = attempt;
                return Ok(h);
            }
            Draw::Degenerate => saw_bounded = true,
            Draw::Unbounded => {}
        }
    }
    if saw_bounded {
        Err(PolytopeError::DegenerateDraw { attempts: MAX_ATTEMPTS })
    } else {
        Err(PolytopeError::Unbounded { planes: m })
    }
}

fn draw(normals: Vec<Vector3<f64>>) -> Draw {
    let m = normals.len();
    let mut verts: Vec<Vector3<f64>> = Vec::new();
    let mut planes_of: Vec<[usize; 3]> = Vec::new();
    for a in 0..m {
        for b in (a + 1)..m {
            for c in (b + 1)..m {
                let mat = Matrix3::from_rows(&[normals[a].transpose(), normals[b].transpose(), normals[c].transpose()]);
                let det = mat.determinant();
                let Some(inv) = mat.try_inverse() else { return Draw::Degenerate };
                let x = inv * Vector3::repeat(1.0);
                let mut feasible = true;
                for (k, u) in normals.iter().enumerate() {
                    if k == a || k == b || k == c {
                        continue;
                    }
                    let s = u.dot(&x) - 1.0;
                    if s > SLACK_TOL {
                        feasible = false;
                        break;
                    }
                    if s.abs() <= SLACK_TOL {
                        return Draw::Degenerate;
                    }
                }
                if feasible {
                    if det.abs() < SINGULAR_TOL {
                        return Draw::Degenerate;
                    }
                    verts.push(x);
                    planes_of.push([a, b, c]);
                }
            }
        }
    }
    if verts.len() < 4 {
        return Draw::Unbounded;
    }

    // Two vertices are adjacent when they share two planes.
    let n = verts.len();
    let mut adjacency = BTreeSet::new();
    let mut degree = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let shared = planes_of[i].iter().filter(|p| planes_of[j].contains(p)).count();
            if shared >= 2 {
                adjacency.insert((i, j));
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    if degree.iter().any(|&d| d < 3) {
        // A vertex with an edge running off to infinity.
        return Draw::Unbounded;
    }
    if degree.iter().any(|&d| d != 3) {
        return Draw::Degenerate;
    }

    let mut facets = Vec::new();
    let mut facet_planes = Vec::new();
    for (k, u) in normals.iter().enumerate() {
        let face: Vec<usize> = (0..n).filter(|&i| planes_of[i].contains(&k)).collect();
        if face.is_empty() {
            continue;
        }
        if face.len() < 3 {
            return Draw::Degenerate;
        }
        facets.push(oriented_cycle(&verts, &face, u));
        facet_planes.push(k);
    }

    let vertices = DMatrix::from_fn(n, 3, |i, k| verts[i][k]);
    let Ok(polytope) = Polytope::new(vertices, facets) else { return Draw::Degenerate };
    let derived: BTreeSet<(usize, usize)> = polytope.edges().iter().copied().collect();
    if derived != adjacency || polytope.euler_characteristic() != 2 {
        return Draw::Degenerate;
    }
    Draw::Ok(HalfspacePolytope { polytope, normals, facet_planes, attempts: 0 })
}
