//! Structural laws of stress spaces beyond raw dimension counts.

use gsphere::complex::Complex;
use gsphere::invariants::compute_vectors;
use gsphere::linalg::{Q, RationalMatrix, Z};
use gsphere::stress::{
    generic_embedding, monomial_basis, stress_basis, Stress, StressKind,
};

const SEED: u64 = 0x1A5EED;

fn rank_of_stresses(stresses: &[Stress], cx: &Complex, k: u32) -> usize {
    let basis = monomial_basis(cx, k);
    let rows: Vec<Vec<Q>> = stresses
        .iter()
        .map(|s| s.to_vector(&basis).unwrap())
        .collect();
    if rows.is_empty() {
        return 0;
    }
    RationalMatrix::from_rows(rows).rank()
}

/// For 2k < d, affine k-stresses on vertex stars span the whole space.
#[test]
fn partition_of_unity_for_affine_stresses() {
    let instances: Vec<(Complex, u32)> = vec![
        (Complex::construct_k(2, 6).unwrap(), 2),
        (
            Complex::simplex_boundary(4, "s")
                .unwrap()
                .join(&Complex::cycle(5, "p").unwrap())
                .unwrap(),
            2,
        ),
    ];
    for (cx, k) in instances {
        let d = (cx.dim() + 1) as usize;
        assert!(2 * (k as usize) < d);
        let emb = generic_embedding(&cx, d, SEED);
        let mut star_stresses: Vec<Stress> = Vec::new();
        for v in cx.labels().to_vec() {
            let star = cx.star(&cx.vset(&[&v]).unwrap()).unwrap();
            star_stresses.extend(stress_basis(&star, &emb, k, StressKind::Affine).unwrap());
        }
        let rank = rank_of_stresses(&star_stresses, &cx, k);
        let expected = compute_vectors(&cx).unwrap().g_extended(k as usize);
        assert_eq!(Z::from(rank), expected, "star stresses must span");
        // And they genuinely are stresses of the ambient complex.
        for s in &star_stresses {
            assert_eq!(gsphere::stress::affine_stress_defect(s, &cx, &emb), None);
        }
    }
}

/// For odd d and k = (d+1)/2 the all-ones derivative is an isomorphism
/// between the degree-k and degree-(k-1) linear stress spaces.
#[test]
fn middle_derivative_is_isomorphism_in_odd_dimension() {
    let instances: Vec<Complex> = vec![
        Complex::connected_sum_stacked(3, 7).unwrap(),
        Complex::simplex_boundary(2, "a")
            .unwrap()
            .join(&Complex::simplex_boundary(3, "b").unwrap())
            .unwrap(),
    ];
    for cx in instances {
        let d = (cx.dim() + 1) as usize;
        assert!(d % 2 == 1);
        let k = d.div_ceil(2) as u32;
        let emb = generic_embedding(&cx, d, SEED);
        let upper = stress_basis(&cx, &emb, k, StressKind::Linear).unwrap();
        let lower = stress_basis(&cx, &emb, k - 1, StressKind::Linear).unwrap();
        assert_eq!(upper.len(), lower.len(), "h_k = h_{{k-1}} by symmetry");
        let images: Vec<Stress> = upper.iter().map(|s| s.dc()).collect();
        // Zero kernel: the images stay independent.
        assert_eq!(rank_of_stresses(&images, &cx, k - 1), upper.len());
        // Surjective: the images span the lower space.
        let mut all = images;
        all.extend(lower.iter().cloned());
        assert_eq!(rank_of_stresses(&all, &cx, k - 1), upper.len());
    }
}

/// A stress is pinned down by its squarefree top part: the squarefree
/// projections of a basis stay linearly independent.
#[test]
fn squarefree_projections_of_bases_are_independent() {
    let cx = Complex::construct_k(2, 6).unwrap();
    let emb = generic_embedding(&cx, 6, SEED);
    for (k, kind) in [(3u32, StressKind::Linear), (3, StressKind::Affine)] {
        let basis = stress_basis(&cx, &emb, k, kind).unwrap();
        let squarefree: Vec<_> = monomial_basis(&cx, k)
            .into_iter()
            .filter(|m| m.is_squarefree())
            .collect();
        let rows: Vec<Vec<Q>> = basis
            .iter()
            .map(|s| squarefree.iter().map(|m| s.coeff(m)).collect())
            .collect();
        let rank = RationalMatrix::from_rows(rows).rank();
        assert_eq!(rank, basis.len());
    }
}

/// Derivatives of stresses land where they should: on the vertex star.
#[test]
fn partial_derivative_lives_on_the_star() {
    let cx = Complex::construct_k(1, 4).unwrap();
    let emb = generic_embedding(&cx, 4, SEED);
    let basis = stress_basis(&cx, &emb, 2, StressKind::Linear).unwrap();
    for s in &basis {
        for v in cx.labels() {
            let derived = s.partial(v);
            if derived.is_zero() {
                continue;
            }
            let star = cx.star(&cx.vset(&[v]).unwrap()).unwrap();
            for face in derived.top_squarefree_faces() {
                let refs: Vec<&str> = face.iter().map(|x| x.as_str()).collect();
                let set = star.vset(&refs).unwrap();
                assert!(star.is_face(&set), "derivative escaped st({v})");
            }
        }
    }
}

/// Contracting a contractible edge of a homology 5-sphere drops g_3 by
/// exactly g_2 of the edge link, and preserves homology.
#[test]
fn contraction_identity_on_five_spheres() {
    let pentagon_join = Complex::simplex_boundary(4, "s")
        .unwrap()
        .join(&Complex::cycle(5, "p").unwrap())
        .unwrap();
    let hexagon_join = Complex::simplex_boundary(4, "s")
        .unwrap()
        .join(&Complex::cycle(6, "p").unwrap())
        .unwrap();
    let instances: Vec<(Complex, &str, &str)> = vec![
        (Complex::construct_k(2, 6).unwrap(), "a1", "b1"),
        (pentagon_join.clone(), "p1", "p2"), // edge inside the cycle factor
        (pentagon_join, "s1", "p1"),         // cross-factor edge
        (hexagon_join, "s2", "p4"),
    ];
    for (cx, u, v) in instances {
        let uv = cx.vset(&[u, v]).unwrap();
        let g2_link = compute_vectors(&cx.link(&uv).unwrap())
            .unwrap()
            .g_extended(2);
        let before = compute_vectors(&cx).unwrap().g_extended(3);
        let contracted = cx.contract_edge(u, v).unwrap();
        let after = compute_vectors(&contracted).unwrap().g_extended(3);
        assert_eq!(after, before - g2_link, "identity fails for edge {u}{v}");
        assert_eq!(
            gsphere::homology::betti_z2(&contracted),
            gsphere::homology::betti_z2(&cx),
            "contraction must preserve homology"
        );
    }
}
