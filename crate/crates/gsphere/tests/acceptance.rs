//! Acceptance suite: one test per criterion, exact arithmetic throughout.
//!
//! Run with `cargo test -p gsphere --test acceptance` (add `-- --nocapture`
//! to see the per-criterion PASS lines).

use std::sync::OnceLock;

use num_traits::{One, Zero};

use gsphere::complex::Complex;
use gsphere::cone::{self, edge_stress, star_chart};
use gsphere::invariants::{binomial, compute_vectors, glbt_report, mcmullen_residual, s_class};
use gsphere::linalg::Z;
use gsphere::stress::{
    affine_stress_defect, generic_embedding, linear_stress_defect, stress_basis, stress_dims,
    support, StressKind,
};
use gsphere::structure::{classify_g1, g_k_closed_form, is_stacked, GOneClass};

const SEED: u64 = 0xACCE97;

fn k25() -> &'static Complex {
    static CELL: OnceLock<Complex> = OnceLock::new();
    CELL.get_or_init(|| Complex::construct_k(2, 6).unwrap())
}

fn simplex_times_pentagon() -> Complex {
    Complex::simplex_boundary(4, "s")
        .unwrap()
        .join(&Complex::cycle(5, "p").unwrap())
        .unwrap()
}

/// Homology spheres exercised by the vector-identity criteria.
fn vector_suite() -> Vec<(String, Complex)> {
    let mut suite: Vec<(String, Complex)> = Vec::new();
    for d in 2..=7 {
        suite.push((format!("simplex_boundary_{d}"), Complex::simplex_boundary(d, "v").unwrap()));
    }
    for d in 2..=6 {
        suite.push((format!("cross_polytope_{d}"), Complex::construct_k(1, d).unwrap()));
    }
    suite.push(("K(2,5)".into(), k25().clone()));
    suite.push(("K(3,8)".into(), Complex::construct_k(3, 9).unwrap()));
    suite.push(("stacked_4_8".into(), Complex::connected_sum_stacked(4, 8).unwrap()));
    suite.push(("stacked_3_7".into(), Complex::connected_sum_stacked(3, 7).unwrap()));
    suite.push(("stacked_5_9".into(), Complex::connected_sum_stacked(5, 9).unwrap()));
    suite.push((
        "ds2*ds3".into(),
        Complex::simplex_boundary(2, "a")
            .unwrap()
            .join(&Complex::simplex_boundary(3, "b").unwrap())
            .unwrap(),
    ));
    suite.push((
        "ds3*ds3".into(),
        Complex::simplex_boundary(3, "a")
            .unwrap()
            .join(&Complex::simplex_boundary(3, "b").unwrap())
            .unwrap(),
    ));
    suite.push(("ds4*pentagon".into(), simplex_times_pentagon()));
    suite
}

/// The smaller suite used for kernel computations.
fn stress_suite() -> Vec<(String, Complex)> {
    vec![
        ("simplex_boundary_3".into(), Complex::simplex_boundary(3, "v").unwrap()),
        ("simplex_boundary_4".into(), Complex::simplex_boundary(4, "v").unwrap()),
        ("simplex_boundary_5".into(), Complex::simplex_boundary(5, "v").unwrap()),
        ("octahedron".into(), Complex::construct_k(1, 3).unwrap()),
        ("cross_polytope_4".into(), Complex::construct_k(1, 4).unwrap()),
        ("K(2,5)".into(), k25().clone()),
        ("stacked_4_7".into(), Complex::connected_sum_stacked(4, 7).unwrap()),
        (
            "ds2*ds3".into(),
            Complex::simplex_boundary(2, "a")
                .unwrap()
                .join(&Complex::simplex_boundary(3, "b").unwrap())
                .unwrap(),
        ),
        ("ds4*pentagon".into(), simplex_times_pentagon()),
    ]
}

#[test]
fn criterion_01_vector_identities() {
    for j in 1..=8 {
        let v = compute_vectors(&Complex::simplex_boundary(j, "v").unwrap()).unwrap();
        assert!(
            v.h.iter().all(|h| h.is_one()),
            "h of simplex boundary {j} must be all ones, got {:?}",
            v.h
        );
    }
    for (name, cx) in vector_suite() {
        let v = compute_vectors(&cx).unwrap();
        for i in 0..=v.d {
            assert_eq!(v.h[i], v.h[v.d - i], "Dehn-Sommerville fails for {name} at {i}");
        }
    }
    println!("criterion 01 (vector identities): PASS");
}

#[test]
fn criterion_02_mcmullen_residual() {
    for (name, cx) in vector_suite() {
        let d = (cx.dim() + 1) as usize;
        for k in 0..=(d - 1) / 2 {
            let residual = mcmullen_residual(&cx, k).unwrap();
            assert!(
                residual.is_zero(),
                "residual nonzero for {name} at k = {k}: {residual}"
            );
        }
    }
    println!("criterion 02 (vertex-link summation identity): PASS");
}

#[test]
fn criterion_03_stress_dimension_theorem() {
    for (name, cx) in stress_suite() {
        let v = compute_vectors(&cx).unwrap();
        let d = v.d;
        for k in 1..=d.div_ceil(2) {
            let dims = stress_dims(&cx, k as u32, 3, SEED).unwrap();
            assert_eq!(
                Z::from(dims.linear),
                v.h[k],
                "linear dimension mismatch for {name} at k = {k}"
            );
            assert_eq!(
                Z::from(dims.affine),
                v.g_extended(k),
                "affine dimension mismatch for {name} at k = {k}"
            );
            assert!(dims.unanimous, "trials disagreed for {name} at k = {k}");
        }
    }
    // The two named landmark values.
    let cross = Complex::construct_k(1, 4).unwrap();
    assert_eq!(stress_dims(&cross, 2, 3, SEED).unwrap().affine, 2);
    assert_eq!(stress_dims(k25(), 3, 3, SEED).unwrap().affine, 1);
    println!("criterion 03 (stress dimensions = (h_k, g_k)): PASS");
}

#[test]
fn criterion_04_unique_stress_structure_on_k25() {
    let cx = k25();
    let emb = generic_embedding(cx, 6, SEED);
    let basis = stress_basis(cx, &emb, 3, StressKind::Affine).unwrap();
    assert_eq!(basis.len(), 1, "affine 3-stress space must be a line");
    let omega = &basis[0];
    let supp = support(omega, cx).unwrap();

    // Every vertex participates.
    assert_eq!(supp.vertex_count(), 9, "support must contain every vertex");

    // Every missing 2-face has at least two of its edges in the support.
    for missing in cx.missing_faces() {
        assert_eq!(missing.card(), 3);
        let labels = cx.set_labels(missing);
        let mut edges_present = 0;
        for skip in 0..3 {
            let edge: Vec<&str> = labels
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, l)| l.as_str())
                .collect();
            if let Ok(set) = supp.vset(&edge) {
                if supp.is_face(&set) {
                    edges_present += 1;
                }
            }
        }
        assert!(
            edges_present >= 2,
            "missing face {labels:?} has only {edges_present} support edges"
        );
    }

    // Support lies in the union of the two stars of every edge.
    let d = 6usize;
    let _ = d;
    for edge in cx.faces_of_card(2).to_vec() {
        let labels = cx.set_labels(&edge);
        let star_a = cx.star(&cx.vset(&[&labels[0]]).unwrap()).unwrap();
        let star_b = cx.star(&cx.vset(&[&labels[1]]).unwrap()).unwrap();
        for face in omega.top_squarefree_faces() {
            let refs: Vec<&str> = face.iter().map(|s| s.as_str()).collect();
            let in_a = star_a.vset(&refs).map(|s| star_a.is_face(&s)).unwrap_or(false);
            let in_b = star_b.vset(&refs).map(|s| star_b.is_face(&s)).unwrap_or(false);
            assert!(
                in_a || in_b,
                "support face {face:?} escapes both stars of edge {labels:?}"
            );
        }
    }
    println!("criterion 04 (unique affine 3-stress structure on K(2,5)): PASS");
}

#[test]
fn criterion_05_cone_lemma() {
    // Lifts from the 4-cycle with fresh cone parameters.
    let square = Complex::cycle(4, "c").unwrap();
    let square_emb = generic_embedding(&square, 2, SEED);
    let square_a = cone::fresh_cone_values(&square, SEED ^ 0x1);
    let apex_cx = Complex::from_facet_strs(&["z"], &[&["z"]]).unwrap();
    let square_cone = square.join(&apex_cx).unwrap();
    let square_cone_emb = cone::cone_embedding(&square_emb, &square_a, "z").unwrap();
    for degree in [1u32, 2] {
        for omega in stress_basis(&square, &square_emb, degree, StressKind::Linear).unwrap() {
            let lifted = cone::lift(&omega, &square, &square_emb, &square_a, "z").unwrap();
            assert_eq!(linear_stress_defect(&lifted, &square_cone, &square_cone_emb), None);
            let expected = support(&omega, &square)
                .unwrap()
                .join(&apex_cx)
                .unwrap()
                .skeleton(degree as isize - 1)
                .unwrap();
            assert_eq!(support(&lifted, &square_cone).unwrap(), expected);
            let left = lifted.dc();
            let right = cone::lift(&omega.dc(), &square, &square_emb, &square_a, "z").unwrap();
            assert_eq!(left, right, "coefficient-exact commuting square");
        }
    }

    // Lifts from a vertex link in K(2,5), with the chart-induced parameters.
    let cx = k25();
    let emb = generic_embedding(cx, 6, SEED);
    let chart = star_chart(cx, &emb, "a1").unwrap();
    let star_emb = &chart.star_embedding;
    for degree in [2u32, 3] {
        let basis = stress_basis(&chart.link, &chart.link_embedding, degree, StressKind::Linear)
            .unwrap();
        assert!(!basis.is_empty());
        for omega in &basis {
            let lifted = cone::lift(
                omega,
                &chart.link,
                &chart.link_embedding,
                &chart.cone_values,
                "a1",
            )
            .unwrap();
            assert_eq!(linear_stress_defect(&lifted, &chart.star, star_emb), None);
            let apex = Complex::from_facet_strs(&["a1"], &[&["a1"]]).unwrap();
            let expected = support(omega, &chart.link)
                .unwrap()
                .join(&apex)
                .unwrap()
                .skeleton(degree as isize - 1)
                .unwrap();
            assert_eq!(support(&lifted, &chart.star).unwrap(), expected);
            let left = lifted.dc();
            let right = cone::lift(
                &omega.dc(),
                &chart.link,
                &chart.link_embedding,
                &chart.cone_values,
                "a1",
            )
            .unwrap();
            assert_eq!(left, right);
        }
    }
    println!("criterion 05 (cone lemma: support law and commuting square): PASS");
}

#[test]
fn criterion_06_edge_stress_postconditions() {
    // k = 2 on the 4-cross-polytope boundary.
    let cross = Complex::construct_k(1, 4).unwrap();
    let outcome = edge_stress(&cross, "a1", "b1", SEED).unwrap();
    assert!(!outcome.stress.is_zero());
    assert_eq!(outcome.stress.degree(), 2);
    assert_eq!(
        affine_stress_defect(&outcome.stress, &cross, &outcome.embedding),
        None
    );
    check_two_star_support(&cross, &outcome, "a1", "b1");

    // k = 3 on K(2,5): the result must be the unique affine 3-stress.
    let cx = k25();
    let outcome = edge_stress(cx, "a1", "b1", SEED).unwrap();
    assert!(!outcome.stress.is_zero());
    assert_eq!(
        affine_stress_defect(&outcome.stress, cx, &outcome.embedding),
        None
    );
    check_two_star_support(cx, &outcome, "a1", "b1");
    let unique = stress_basis(cx, &outcome.embedding, 3, StressKind::Affine).unwrap();
    assert_eq!(unique.len(), 1);
    assert_eq!(
        outcome.stress.normalized(),
        unique[0].normalized(),
        "edge stress must be a scalar multiple of the unique affine 3-stress"
    );
    println!("criterion 06 (edge stress postconditions): PASS");
}

fn check_two_star_support(
    cx: &Complex,
    outcome: &gsphere::cone::EdgeStressOutcome,
    u: &str,
    v: &str,
) {
    let star_u = cx.star(&cx.vset(&[u]).unwrap()).unwrap();
    let star_v = cx.star(&cx.vset(&[v]).unwrap()).unwrap();
    let is_face_of = |star: &Complex, face: &[String]| {
        let refs: Vec<&str> = face.iter().map(|s| s.as_str()).collect();
        star.vset(&refs).map(|s| star.is_face(&s)).unwrap_or(false)
    };
    for face in outcome.stress.top_squarefree_faces() {
        assert!(
            is_face_of(&star_u, &face) || is_face_of(&star_v, &face),
            "support face {face:?} escapes both stars"
        );
    }
    assert!(outcome.witness.iter().any(|l| l == u));
    assert!(
        !is_face_of(&star_v, &outcome.witness),
        "witness face must avoid st({v})"
    );
}

#[test]
fn criterion_07_stackedness() {
    for (d, n) in [(4usize, 6usize), (4, 8), (5, 8)] {
        let cx = Complex::connected_sum_stacked(d, n).unwrap();
        let v = compute_vectors(&cx).unwrap();
        assert!(v.g_extended(2).is_zero(), "stacked ({d},{n}) must have g_2 = 0");
        let report = is_stacked(&cx, 2).unwrap();
        assert!(report.stacked);
        let cert = report.certificate.unwrap();
        assert!(cert.boundary_matches && cert.levels_agree && cert.acyclic);
        assert_eq!(cert.ball.boundary().unwrap(), cx);
    }

    let contracted = k25().contract_edge("a1", "b1").unwrap();
    let v = compute_vectors(&contracted).unwrap();
    assert!(v.g_extended(3).is_zero());
    let report = is_stacked(&contracted, 3).unwrap();
    assert!(report.stacked, "contracted K(2,5) must be 2-stacked");
    assert!(report.certificate.is_some());

    // Nagel and the m-number corollary across the whole suite.
    for (name, cx) in vector_suite() {
        let report = glbt_report(&cx).unwrap();
        assert!(report.all_passed, "g/m report fails for {name}: {:?}", report.clauses);
    }
    println!("criterion 07 (stackedness and g/m inequalities): PASS");
}

#[test]
fn criterion_08_classification() {
    let three = classify_g1(k25(), 3).unwrap();
    assert_eq!(three.class, GOneClass::ThreeTriangles);

    // (k, d) = (2, 6): simplex boundary joined with a pentagon.
    let pentagon_case = classify_g1(&simplex_times_pentagon(), 2).unwrap();
    match &pentagon_case.class {
        GOneClass::SimplexBoundaryJoinSphere { simplex_dim, sphere } => {
            assert_eq!(*simplex_dim, 4);
            assert_eq!(sphere.vertex_count(), 5);
            let rebuilt = Complex::simplex_boundary(4, "s").unwrap().join(sphere).unwrap();
            assert_eq!(&rebuilt, &simplex_times_pentagon());
        }
        other => panic!("expected SimplexBoundaryJoinSphere, got {other:?}"),
    }

    // (k, d) = (3, 7): simplex boundary joined with the octahedron.
    let oct_join = Complex::simplex_boundary(4, "s")
        .unwrap()
        .join(&Complex::construct_k(1, 3).unwrap())
        .unwrap();
    let v = compute_vectors(&oct_join).unwrap();
    assert_eq!(v.d, 7);
    assert!(v.g_extended(3).is_one());
    let oct_case = classify_g1(&oct_join, 3).unwrap();
    match &oct_case.class {
        GOneClass::SimplexBoundaryJoinSphere { simplex_dim, sphere } => {
            assert_eq!(*simplex_dim, 4);
            assert_eq!(sphere, &Complex::construct_k(1, 3).unwrap());
        }
        other => panic!("expected SimplexBoundaryJoinSphere, got {other:?}"),
    }

    // Two simplex boundaries.
    let two = Complex::simplex_boundary(3, "a")
        .unwrap()
        .join(&Complex::simplex_boundary(3, "b").unwrap())
        .unwrap();
    let two_case = classify_g1(&two, 3).unwrap();
    assert_eq!(
        two_case.class,
        GOneClass::TwoSimplexBoundaries { j: 3, complement: 3 }
    );
    let rebuilt = two_case.factors[0].join(&two_case.factors[1]).unwrap();
    assert_eq!(rebuilt, two);
    println!("criterion 08 (g_k = 1 classification): PASS");
}

#[test]
fn criterion_09_closed_form_sweep() {
    let mut checked = 0;
    for i in 1..=4usize {
        for d in 1..=9usize {
            if !(2 * i < d && d <= 3 * i) {
                continue;
            }
            let cx = Complex::construct_k(i, d).unwrap();
            let v = compute_vectors(&cx).unwrap();
            assert_eq!(v.d, d);
            for j in 0..=d / 2 {
                let closed = g_k_closed_form(i, d, j).unwrap();
                assert_eq!(
                    closed,
                    v.g_extended(j),
                    "closed form disagrees for K({i},{}) at j = {j}",
                    d - 1
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 25, "sweep must cover the whole desk-scale range");
    println!("criterion 09 (closed form for g of K(i, d-1)): PASS");
}

#[test]
fn criterion_10_eleven_vertex_arithmetic() {
    let n = 11usize;
    let f1 = binomial(n, 2);
    assert_eq!(f1, Z::from(55));
    let f2 = Z::from(5) * binomial(n, 2) - Z::from(15 * n) + Z::from(36);
    assert_eq!(f2, Z::from(146));
    let m2 = binomial(n, 3) - &f2;
    assert_eq!(m2, Z::from(19));
    println!("criterion 10 (11-vertex arithmetic lock): PASS");
}

#[test]
fn suite_members_are_homology_spheres() {
    // Sanity for everything the criteria rely on; moderate sizes only.
    for (name, cx) in stress_suite() {
        assert!(
            gsphere::homology::is_homology_sphere(&cx).unwrap(),
            "{name} is not a homology sphere"
        );
    }
    let negative = Complex::simplex(4, "v").unwrap();
    assert!(!gsphere::homology::is_homology_sphere(&negative).unwrap());
    assert_eq!(s_class(k25()), 2);
}
