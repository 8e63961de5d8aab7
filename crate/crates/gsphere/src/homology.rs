//! Reduced simplicial homology over Z/2 and the homology-sphere validator.
//!
//! Boundary matrices are stored as bit rows and reduced by XOR elimination.
//! Working over Z/2 keeps the linear algebra on machine words; the validator
//! checks the link condition for every face, computing each link fresh.

use crate::complex::Complex;
use crate::error::{Error, Result};

/// Rank of a bit matrix given as rows of 64-bit words.
fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let mut pivots: Vec<(usize, usize, Vec<u64>)> = Vec::new(); // (word, bit, row)
    for row in rows.iter_mut() {
        let mut r = std::mem::take(row);
        loop {
            let lead = r
                .iter()
                .enumerate()
                .find(|(_, w)| **w != 0)
                .map(|(i, w)| (i, w.trailing_zeros() as usize));
            let Some((word, bit)) = lead else { break };
            if let Some((_, _, prow)) = pivots.iter().find(|(pw, pb, _)| *pw == word && *pb == bit)
            {
                for (a, b) in r.iter_mut().zip(prow) {
                    *a ^= b;
                }
            } else {
                pivots.push((word, bit, r));
                rank += 1;
                break;
            }
        }
    }
    rank
}

/// Rank of the boundary map from `card`-element faces to `(card-1)`-element
/// faces. `card = 1` maps vertices onto the empty face.
fn boundary_rank(cx: &Complex, card: usize) -> usize {
    let sources = cx.faces_of_card(card);
    if sources.is_empty() {
        return 0;
    }
    if card == 0 {
        return 0;
    }
    if card == 1 {
        return 1; // every vertex maps to the empty face
    }
    let targets = cx.faces_of_card(card - 1);
    let words = targets.len().div_ceil(64);
    let rows: Vec<Vec<u64>> = sources
        .iter()
        .map(|face| {
            let mut row = vec![0u64; words];
            for sub in face.proper_cofacets() {
                let idx = targets.binary_search(&sub).expect("boundary face missing");
                row[idx / 64] |= 1 << (idx % 64);
            }
            row
        })
        .collect();
    gf2_rank(rows)
}

/// Reduced Betti numbers over Z/2 in dimensions `-1 ..= dim`, index-shifted
/// by one (entry 0 is dimension -1).
pub(crate) fn reduced_betti_shifted(cx: &Complex) -> Vec<usize> {
    let counts = cx.face_counts();
    let top = counts.len(); // dim + 2 entries -> boundary maps 0..=top
    let ranks: Vec<usize> = (0..=top).map(|c| boundary_rank(cx, c)).collect();
    (0..counts.len())
        .map(|c| {
            let next = if c < top { ranks[c + 1] } else { 0 };
            counts[c] - ranks[c] - next
        })
        .collect()
}

/// Reduced Betti numbers over Z/2 in dimensions `0 ..= dim`.
///
/// The reduced (augmented) chain complex is used, so a connected complex has
/// Betti number 0 in dimension 0. For the empty complex the list is empty.
pub fn betti_z2(cx: &Complex) -> Vec<usize> {
    let shifted = reduced_betti_shifted(cx);
    shifted[1..].to_vec()
}

/// Does `lk` have the reduced homology of a sphere of dimension `e`?
fn is_sphere_like(lk: &Complex, e: isize) -> bool {
    if lk.dim() != e {
        return false;
    }
    let betti = reduced_betti_shifted(lk);
    betti
        .iter()
        .enumerate()
        .all(|(i, b)| *b == usize::from(i as isize - 1 == e))
}

/// True when every face link (including the link of the empty face, the
/// complex itself) has the Z/2 homology of a sphere of the right dimension.
pub fn is_homology_sphere(cx: &Complex) -> Result<bool> {
    if !cx.is_pure() {
        return Err(Error::NotPure);
    }
    let d = cx.dim() + 1;
    for card in 0..=(cx.dim() + 1).max(0) as usize {
        for face in cx.faces_of_card(card).to_vec() {
            let lk = cx.link(&face)?;
            if !is_sphere_like(&lk, d - 1 - card as isize) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when the complex has the Z/2 homology of a point.
pub fn is_z2_acyclic(cx: &Complex) -> bool {
    reduced_betti_shifted(cx).iter().all(|b| *b == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_betti_numbers() {
        let s2 = Complex::simplex_boundary(3, "v").unwrap();
        assert_eq!(betti_z2(&s2), vec![0, 0, 1]);
        let oct = Complex::construct_k(1, 3).unwrap();
        assert_eq!(betti_z2(&oct), vec![0, 0, 1]);
        let circle = Complex::cycle(4, "c").unwrap();
        assert_eq!(betti_z2(&circle), vec![0, 1]);
    }

    #[test]
    fn ball_and_disconnected_betti() {
        let ball = Complex::simplex(3, "v").unwrap();
        assert_eq!(betti_z2(&ball), vec![0, 0, 0, 0]);
        let two_points = Complex::from_facet_strs(&["a", "b"], &[&["a"], &["b"]]).unwrap();
        assert_eq!(betti_z2(&two_points), vec![1]);
    }

    #[test]
    fn join_of_spheres_is_sphere() {
        let oct = Complex::construct_k(1, 3).unwrap();
        let circle = Complex::cycle(4, "x").unwrap();
        let join = oct.join(&circle).unwrap();
        assert_eq!(betti_z2(&join), vec![0, 0, 0, 0, 1]);
    }

    #[test]
    fn homology_sphere_validator() {
        assert!(is_homology_sphere(&Complex::construct_k(2, 6).unwrap()).unwrap());
        assert!(is_homology_sphere(&Complex::construct_k(1, 4).unwrap()).unwrap());
        assert!(!is_homology_sphere(&Complex::simplex(4, "v").unwrap()).unwrap());
        let contracted = Complex::construct_k(1, 3)
            .unwrap()
            .contract_edge("a1", "b1")
            .unwrap();
        assert!(is_homology_sphere(&contracted).unwrap());
    }

    #[test]
    fn validator_rejects_impure_input() {
        let cx = Complex::from_facet_strs(&["a", "b", "c"], &[&["a", "b"], &["c"]]).unwrap();
        assert!(matches!(is_homology_sphere(&cx), Err(Error::NotPure)));
    }

    #[test]
    fn relabeling_does_not_change_homology() {
        let a = Complex::from_facet_strs(
            &["a", "b", "c", "d"],
            &[&["a", "b"], &["b", "c"], &["c", "d"], &["d", "a"]],
        )
        .unwrap();
        let b = Complex::from_facet_strs(
            &["x", "m", "q", "t"],
            &[&["x", "m"], &["m", "q"], &["q", "t"], &["t", "x"]],
        )
        .unwrap();
        assert_eq!(betti_z2(&a), betti_z2(&b));
        assert_eq!(
            is_homology_sphere(&a).unwrap(),
            is_homology_sphere(&b).unwrap()
        );
    }

    #[test]
    fn empty_complex_is_minus_one_sphere() {
        let e = Complex::empty();
        assert_eq!(reduced_betti_shifted(&e), vec![1]);
        assert!(is_homology_sphere(&e).unwrap());
    }
}
