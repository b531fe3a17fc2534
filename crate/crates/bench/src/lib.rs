//! Fixtures shared by the benchmarks in `benches/`.

use stressflex_core::polytope::make_named;
use stressflex_core::{cone, random_simple_polytope, ConedFramework, Labeling, NamedPolytope, Polytope};

/// Named solids plus a few random simple polytopes of growing size.
pub fn polytopes() -> Vec<(String, Polytope)> {
    let mut out: Vec<(String, Polytope)> = [NamedPolytope::Cube, NamedPolytope::Cuboctahedron, NamedPolytope::Hypercube4]
        .into_iter()
        .map(|n| (format!("{n:?}").to_lowercase(), make_named(n)))
        .collect();
    for planes in [10, 20, 40] {
        out.push((format!("random{planes}"), random_simple_polytope(7, planes).expect("bounded draw")));
    }
    out
}

/// The polytope coned at its centroid.
pub fn coned(poly: &Polytope) -> ConedFramework {
    cone(poly, &poly.centroid(), Labeling::Tensegrity).expect("centroid is interior")
}
