//! Cross-checks against independent constructions kept here in the tests.

use std::collections::BTreeSet;

use approx::assert_relative_eq;
use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use stressflex_core::analysis::stress_flex_residual;
use stressflex_core::polytope::{make_named, skeleton_framework, NamedPolytope};
use stressflex_core::rigidity::stress_coefficients;
use stressflex_core::*;

fn vertex3(p: &Polytope, i: usize) -> Vector3<f64> {
    Vector3::new(p.vertices()[(i, 0)], p.vertices()[(i, 1)], p.vertices()[(i, 2)])
}

/// Facets of the convex hull by brute force over vertex triples.
fn hull_facets(p: &Polytope) -> BTreeSet<BTreeSet<usize>> {
    let n = p.n_vertices();
    let eps = 1e-9 * p.diameter();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = vertex3(p, i);
                let normal = (vertex3(p, j) - a).cross(&(vertex3(p, k) - a));
                if normal.norm() < eps {
                    continue;
                }
                let normal = normal.normalize();
                let side: Vec<f64> = (0..n).map(|m| normal.dot(&(vertex3(p, m) - a))).collect();
                let above = side.iter().any(|&s| s > eps);
                let below = side.iter().any(|&s| s < -eps);
                if above && below {
                    continue;
                }
                out.insert((0..n).filter(|&m| side[m].abs() <= eps).collect());
            }
        }
    }
    out
}

/// Edges of the hull: vertex pairs sharing two hull facets.
fn hull_edges(facets: &BTreeSet<BTreeSet<usize>>, n: usize) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if facets.iter().filter(|f| f.contains(&i) && f.contains(&j)).count() == 2 {
                out.insert((i, j));
            }
        }
    }
    out
}

fn check_against_hull(p: &Polytope) {
    let hull = hull_facets(p);
    let ours: BTreeSet<BTreeSet<usize>> = p.facets().iter().map(|f| f.iter().copied().collect()).collect();
    assert_eq!(ours, hull);
    let edges: BTreeSet<(usize, usize)> = p.edges().iter().copied().collect();
    assert_eq!(edges, hull_edges(&hull, p.n_vertices()));
}

#[test]
fn named_solids_match_brute_force_hull() {
    for name in [
        NamedPolytope::Tetrahedron,
        NamedPolytope::Cube,
        NamedPolytope::Cuboctahedron,
        NamedPolytope::RhombicDodecahedron,
    ] {
        check_against_hull(&make_named(name));
    }
}

#[test]
fn random_simple_polytopes_match_brute_force_hull() {
    for seed in 0..15 {
        check_against_hull(&random_simple_polytope(seed, 9).unwrap());
    }
}

#[test]
fn hypercube_edges_are_hamming_neighbors() {
    let p = make_named(NamedPolytope::Hypercube4);
    let mut expected = BTreeSet::new();
    for i in 0..16 {
        for j in i + 1..16 {
            let differ = (0..4).filter(|&k| p.vertices()[(i, k)] != p.vertices()[(j, k)]).count();
            if differ == 1 {
                expected.insert((i, j));
            }
        }
    }
    assert_eq!(expected.len(), 32);
    assert_eq!(p.edges().iter().copied().collect::<BTreeSet<_>>(), expected);
}

/// Wachspress weights of a simple 3-polytope from the rational formula
/// `w_v(x) = |det(n_1, n_2, n_3)| / Π_k (c_k − n_k·x)` over the facets at `v`.
fn wachspress_rational(p: &Polytope, x: &DVector<f64>) -> DVector<f64> {
    let planes: Vec<(DVector<f64>, f64)> = (0..p.facets().len()).map(|f| p.facet_plane(f)).collect();
    let w = DVector::from_fn(p.n_vertices(), |v, _| {
        let at: Vec<usize> = (0..p.facets().len()).filter(|&f| p.facets()[f].contains(&v)).collect();
        assert_eq!(at.len(), 3, "vertex {v} is not simple");
        let cols: Vec<Vector3<f64>> = at.iter().map(|&f| Vector3::from_iterator(planes[f].0.iter().copied())).collect();
        let det = Matrix3::from_columns(&cols).determinant().abs();
        let heights: f64 = at.iter().map(|&f| planes[f].1 - planes[f].0.dot(x)).product();
        det / heights
    });
    &w / w.sum()
}

fn assert_wachspress_matches(p: &Polytope, x: &DVector<f64>) {
    let ours = wachspress(p, x, &Tolerances::default()).unwrap();
    let oracle = wachspress_rational(p, x);
    let normalized = ours.normalized();
    for i in 0..p.n_vertices() {
        assert_relative_eq!(normalized[i], oracle[i], max_relative = 1e-8);
    }
    assert_relative_eq!(ours.sum, ours.alpha.sum(), max_relative = 1e-12);
    // Linear precision: Σ w_i p_i = x.
    let recon = p.vertices().transpose() * &normalized;
    assert!((recon - x).norm() < 1e-9 * p.diameter());
}

#[test]
fn wachspress_tetrahedron_is_barycentric() {
    let p = make_named(NamedPolytope::Tetrahedron);
    let x = DVector::from_row_slice(&[0.2, -0.1, 0.15]);
    assert_wachspress_matches(&p, &x);

    // Barycentrics from the 4×4 affine system.
    let system = DMatrix::from_fn(4, 4, |r, c| if r < 3 { p.vertices()[(c, r)] } else { 1.0 });
    let rhs = DVector::from_row_slice(&[x[0], x[1], x[2], 1.0]);
    let bary = system.lu().solve(&rhs).unwrap();
    let ours = wachspress(&p, &x, &Tolerances::default()).unwrap().normalized();
    for i in 0..4 {
        assert_relative_eq!(ours[i], bary[i], max_relative = 1e-9);
    }

    let centroid = wachspress(&p, &p.centroid(), &Tolerances::default()).unwrap().normalized();
    assert!(centroid.iter().all(|w| (w - 0.25).abs() < 1e-10));
    let toward = &p.centroid() * 0.6 + p.vertex(0) * 0.4;
    let shifted = wachspress(&p, &toward, &Tolerances::default()).unwrap().normalized();
    assert!(shifted[0] > 0.25);
}

#[test]
fn wachspress_cube_off_centre() {
    let p = make_named(NamedPolytope::Cube);
    assert_wachspress_matches(&p, &DVector::from_row_slice(&[0.3, -0.55, 0.1]));
    assert_wachspress_matches(&p, &DVector::from_row_slice(&[-0.8, 0.7, 0.75]));
}

#[test]
fn wachspress_random_simple_polytopes() {
    for seed in 0..10 {
        let p = random_simple_polytope(seed, 10).unwrap();
        let x = analysis::ApexStrategy::InteriorRandom.place(&p, seed);
        assert_wachspress_matches(&p, &x);
    }
}

#[test]
fn residual_matches_edge_sum() {
    // Apex row of Ω p̂′ rewritten as Σ_i ω_{i,apex} (p̂′_apex − p̂′_i).
    let tol = Tolerances::default();
    for seed in 0..5 {
        let p = random_simple_polytope(seed, 8).unwrap();
        let fw = cone(&p, &p.centroid(), Labeling::Tensegrity).unwrap();
        let slid = slide(&fw, &polytope::random_slide_factors(seed, p.n_vertices())).unwrap();
        let stresses = stress_space(&slid, &tol);
        let flexes = flex_space(&slid, &tol).unwrap();
        let apex = slid.cone_index();
        for omega in &stresses.matrices {
            let coeffs = stress_coefficients(&slid, omega);
            for flex in flexes.nontrivial_flexes() {
                let mut oracle = DVector::zeros(3);
                for (e, w) in slid.edges().iter().zip(coeffs.iter()) {
                    if e.j == apex {
                        oracle += (flex.row(apex) - flex.row(e.i)).transpose() * *w;
                    }
                }
                let r = stress_flex_residual(omega, &flex, &slid, &tol).unwrap();
                for k in 0..3 {
                    assert!((r.residual[k] - oracle[k]).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn rhombic_dodecahedron_dimension_triple() {
    let p = make_named(NamedPolytope::RhombicDodecahedron);
    let fw = cone(&p, &p.centroid(), Labeling::Tensegrity).unwrap();
    let tol = Tolerances::default();
    assert_eq!(fw.edges().len(), 38);
    let rank = rigidity_matrix(&fw).rank(&tol).rank;
    assert_eq!(rank, 45 - 6 - 3);
    assert_eq!(stress_space(&fw, &tol).dim(), 38 - rank);
    assert_eq!(flex_space(&fw, &tol).unwrap().nontrivial.ncols(), 3);
}

#[test]
fn bare_cube_skeleton_is_flexible() {
    // 8 points, 12 bars: at least 24 − 12 − 6 = 6 nontrivial flexes.
    let fw = skeleton_framework(&make_named(NamedPolytope::Cube));
    let flexes = flex_space(&fw, &Tolerances::default()).unwrap();
    assert!(flexes.nontrivial.ncols() >= 6);
}
