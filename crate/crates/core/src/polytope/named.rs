use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Vector3};
use serde::{Deserialize, Serialize};

use super::{Polytope, PolytopeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedPolytope {
    Tetrahedron,
    Cube,
    Cuboctahedron,
    RhombicDodecahedron,
    Hypercube4,
}

impl NamedPolytope {
    pub const ALL: [NamedPolytope; 5] = [
        NamedPolytope::Tetrahedron,
        NamedPolytope::Cube,
        NamedPolytope::Cuboctahedron,
        NamedPolytope::RhombicDodecahedron,
        NamedPolytope::Hypercube4,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            NamedPolytope::Tetrahedron => "tetrahedron",
            NamedPolytope::Cube => "cube",
            NamedPolytope::Cuboctahedron => "cuboctahedron",
            NamedPolytope::RhombicDodecahedron => "rhombic_dodecahedron",
            NamedPolytope::Hypercube4 => "hypercube4",
        }
    }
}

impl fmt::Display for NamedPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NamedPolytope {
    type Err = PolytopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        NamedPolytope::ALL
            .into_iter()
            .find(|n| n.as_str() == key)
            .ok_or_else(|| PolytopeError::UnknownName(s.to_string()))
    }
}

/// Standard coordinates centered at the origin.
///
/// - tetrahedron: alternate vertices of `{±1}³`
/// - cube: `{±1}³`
/// - cuboctahedron: permutations of `(±1, ±1, 0)`
/// - rhombic dodecahedron: `{±1}³` and permutations of `(±2, 0, 0)`
/// - hypercube4: `{±1}⁴` with its 24 square 2-faces
pub fn make_named(name: NamedPolytope) -> Polytope {
    match name {
        NamedPolytope::Tetrahedron => {
            let verts = vec![v(1., 1., 1.), v(1., -1., -1.), v(-1., 1., -1.), v(-1., -1., 1.)];
            let normals: Vec<_> = verts.iter().map(|p| -p).collect();
            from_normals(&verts, &normals)
        }
        NamedPolytope::Cube => {
            let verts = sign_cube();
            from_normals(&verts, &axes())
        }
        NamedPolytope::Cuboctahedron => {
            let mut verts = Vec::new();
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                for sa in [1.0, -1.0] {
                    for sb in [1.0, -1.0] {
                        let mut p = Vector3::zeros();
                        p[a] = sa;
                        p[b] = sb;
                        verts.push(p);
                    }
                }
            }
            let mut normals = axes();
            normals.extend(sign_cube());
            from_normals(&verts, &normals)
        }
        NamedPolytope::RhombicDodecahedron => {
            let mut verts = sign_cube();
            verts.extend(axes().into_iter().map(|a| a * 2.0));
            let mut normals = Vec::new();
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                for sa in [1.0, -1.0] {
                    for sb in [1.0, -1.0] {
                        let mut n = Vector3::zeros();
                        n[a] = sa;
                        n[b] = sb;
                        normals.push(n);
                    }
                }
            }
            from_normals(&verts, &normals)
        }
        NamedPolytope::Hypercube4 => hypercube4(),
    }
}

fn v(x: f64, y: f64, z: f64) -> Vector3<f64> {
    Vector3::new(x, y, z)
}

fn sign_cube() -> Vec<Vector3<f64>> {
    let mut out = Vec::with_capacity(8);
    for x in [1.0, -1.0] {
        for y in [1.0, -1.0] {
            for z in [1.0, -1.0] {
                out.push(v(x, y, z));
            }
        }
    }
    out
}

fn axes() -> Vec<Vector3<f64>> {
    let mut out = Vec::with_capacity(6);
    for k in 0..3 {
        for s in [1.0, -1.0] {
            let mut a = Vector3::zeros();
            a[k] = s;
            out.push(a);
        }
    }
    out
}

/// Each facet is the set of vertices maximizing `n · x`, ordered
/// counter-clockwise seen from outside.
fn from_normals(verts: &[Vector3<f64>], normals: &[Vector3<f64>]) -> Polytope {
    let facets = normals
        .iter()
        .map(|n| {
            let top = verts.iter().map(|p| n.dot(p)).fold(f64::NEG_INFINITY, f64::max);
            let face: Vec<usize> = (0..verts.len()).filter(|&i| n.dot(&verts[i]) >= top - 1e-12).collect();
            oriented_cycle(verts, &face, n)
        })
        .collect();
    let vertices = DMatrix::from_fn(verts.len(), 3, |i, k| verts[i][k]);
    Polytope::new(vertices, facets).expect("named polytope is valid")
}

/// Sorts the coplanar points `face` by angle around their centroid so that
/// the cycle is counter-clockwise about `normal`.
pub(crate) fn oriented_cycle(verts: &[Vector3<f64>], face: &[usize], normal: &Vector3<f64>) -> Vec<usize> {
    let center = face.iter().map(|&i| verts[i]).sum::<Vector3<f64>>() / face.len() as f64;
    let n = normal.normalize();
    let e1 = (verts[face[0]] - center).normalize();
    let e2 = n.cross(&e1);
    let mut keyed: Vec<(f64, usize)> = face
        .iter()
        .map(|&i| {
            let r = verts[i] - center;
            (r.dot(&e2).atan2(r.dot(&e1)), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    keyed.into_iter().map(|(_, i)| i).collect()
}

fn hypercube4() -> Polytope {
    let vertices = DMatrix::from_fn(16, 4, |i, k| if (i >> k) & 1 == 1 { -1.0 } else { 1.0 });
    let mut faces = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (a + 1)..4 {
            let rest: Vec<usize> = (0..4).filter(|&k| k != a && k != b).collect();
            for bits in 0..4usize {
                let base = ((bits & 1) << rest[0]) | (((bits >> 1) & 1) << rest[1]);
                // Walk the square in the (a, b) plane.
                faces.push(vec![base, base | (1 << a), base | (1 << a) | (1 << b), base | (1 << b)]);
            }
        }
    }
    Polytope::new(vertices, faces).expect("hypercube is valid")
}
