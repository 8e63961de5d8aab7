//! Enumerative invariants: f-, h-, g- and m-vectors and the identities
//! between them.
//!
//! All arithmetic is in arbitrary-precision integers; binomial coefficients
//! overflow fixed-width types quickly even at desk scale.

use num_traits::{One, Zero};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg::Z;

/// `C(n, k)` as a big integer; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> Z {
    if k > n {
        return Z::zero();
    }
    let k = k.min(n - k);
    let mut acc = Z::one();
    for i in 0..k {
        acc = acc * Z::from(n - i) / Z::from(i + 1);
    }
    acc
}

/// The four standard vectors of a pure `(d-1)`-dimensional complex.
///
/// Index conventions: `f[i]` is `f_{i-1}` (so `f[0] = f_{-1} = 1`),
/// `h[j]` is `h_j` for `0 <= j <= d`, `g[j]` is `g_j` for
/// `0 <= j <= ceil(d/2)`, and `m[i]` is `m_i` for `1 <= i <= d` with
/// `m[0]` fixed to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantVectors {
    pub d: usize,
    pub f: Vec<Z>,
    pub h: Vec<Z>,
    pub g: Vec<Z>,
    pub m: Vec<Z>,
}

impl InvariantVectors {
    pub fn g_at(&self, j: usize) -> &Z {
        &self.g[j]
    }

    /// `h_j - h_{j-1}` for any `j <= d`, not just the reported range.
    pub fn g_extended(&self, j: usize) -> Z {
        if j == 0 {
            Z::one()
        } else {
            &self.h[j] - &self.h[j - 1]
        }
    }
}

/// Compute all four vectors of a pure complex.
pub fn compute_vectors(cx: &Complex) -> Result<InvariantVectors> {
    if !cx.is_pure() {
        return Err(Error::NotPure);
    }
    let d = (cx.dim() + 1) as usize;
    let counts = cx.face_counts();
    let f: Vec<Z> = (0..=d)
        .map(|i| Z::from(*counts.get(i).unwrap_or(&0)))
        .collect();
    let h: Vec<Z> = (0..=d)
        .map(|j| {
            let mut acc = Z::zero();
            for (i, f_i) in f.iter().enumerate().take(j + 1) {
                let term = binomial(d - i, d - j) * f_i;
                if (j - i) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        })
        .collect();
    let g: Vec<Z> = (0..=d.div_ceil(2))
        .map(|j| {
            if j == 0 {
                Z::one()
            } else {
                &h[j] - &h[j - 1]
            }
        })
        .collect();
    let mut m = vec![Z::zero(); d + 1];
    for mf in cx.missing_faces() {
        let dim = mf.card() - 1;
        if dim <= d {
            m[dim] += 1;
        }
    }
    Ok(InvariantVectors { d, f, h, g, m })
}

/// Invert the `f -> h` transform: `f_{i-1} = sum_j C(d-j, d-i) h_j`.
pub fn f_from_h(d: usize, h: &[Z]) -> Vec<Z> {
    (0..=d)
        .map(|i| {
            let mut acc = Z::zero();
            for (j, hj) in h.iter().enumerate() {
                acc += binomial(d - j, d - i) * hj;
            }
            acc
        })
        .collect()
}

/// Left side minus right side of the vertex-link summation identity
/// `sum_v g_k(lk(v)) = (k+1) g_{k+1} + (d+1-k) g_k`; zero for every pure
/// complex and every `0 <= k <= floor((d-1)/2)`.
pub fn mcmullen_residual(cx: &Complex, k: usize) -> Result<Z> {
    if !cx.is_pure() {
        return Err(Error::NotPure);
    }
    let d = (cx.dim() + 1) as usize;
    if d == 0 || k > (d - 1) / 2 {
        return Err(Error::KOutOfRange {
            k: k as isize,
            max: if d == 0 { -1 } else { ((d - 1) / 2) as isize },
        });
    }
    let mut lhs = Z::zero();
    for v in 0..cx.vertex_count() {
        let link = cx.link(&crate::bitset::VertexSet::singleton(v))?;
        let lv = compute_vectors(&link)?;
        lhs += lv.g_extended(k);
    }
    let vectors = compute_vectors(cx)?;
    let rhs = Z::from(k + 1) * vectors.g_extended(k + 1)
        + Z::from(d + 1 - k) * vectors.g_extended(k);
    Ok(lhs - rhs)
}

/// Smallest `i` such that every missing face has dimension at most `i`;
/// zero for a complex without missing faces.
pub fn s_class(cx: &Complex) -> usize {
    cx.max_missing_dim()
}

#[derive(Clone, Debug)]
pub struct GlbtClause {
    pub name: &'static str,
    pub applicable: bool,
    pub passed: bool,
    pub details: String,
}

#[derive(Clone, Debug)]
pub struct GlbtReport {
    pub clauses: Vec<GlbtClause>,
    pub all_passed: bool,
}

/// Evaluate, on the computed vectors of a homology sphere, the inequalities
/// relating g- and m-numbers: nonnegativity of `g`, `g_k >= m_{d-k}`, the
/// consequence of Macaulay growth for `g_k <= 1`, and the equivalence
/// `m_{d-k} = 1 <=> g_{k+1} = 0` when `g_k = 1`.
pub fn glbt_report(cx: &Complex) -> Result<GlbtReport> {
    let vectors = compute_vectors(cx)?;
    let d = vectors.d;
    let half_floor = d / 2;
    let mut clauses = Vec::new();

    {
        let bad: Vec<String> = (0..=half_floor)
            .filter(|&k| vectors.g_extended(k) < Z::zero())
            .map(|k| format!("g_{k} = {}", vectors.g_extended(k)))
            .collect();
        clauses.push(GlbtClause {
            name: "g-nonnegative",
            applicable: true,
            passed: bad.is_empty(),
            details: if bad.is_empty() {
                format!("g = {:?} has no negative entry", vectors.g)
            } else {
                bad.join(", ")
            },
        });
    }

    {
        let applicable = d >= 4;
        let mut bad = Vec::new();
        if applicable {
            for k in 1..=d.div_ceil(2) - 1 {
                if vectors.g_extended(k) < vectors.m[d - k] {
                    bad.push(format!(
                        "g_{k} = {} < m_{} = {}",
                        vectors.g_extended(k),
                        d - k,
                        vectors.m[d - k]
                    ));
                }
            }
        }
        clauses.push(GlbtClause {
            name: "nagel",
            applicable,
            passed: bad.is_empty(),
            details: bad.join(", "),
        });
    }

    {
        let mut bad = Vec::new();
        for k in 1..half_floor {
            let gk = vectors.g_extended(k);
            if gk.is_one() {
                for j in k + 1..=half_floor {
                    if vectors.g_extended(j) > Z::one() {
                        bad.push(format!("g_{k} = 1 but g_{j} = {}", vectors.g_extended(j)));
                    }
                }
            } else if gk.is_zero() {
                for j in k + 1..=half_floor {
                    if !vectors.g_extended(j).is_zero() {
                        bad.push(format!("g_{k} = 0 but g_{j} = {}", vectors.g_extended(j)));
                    }
                }
            }
        }
        clauses.push(GlbtClause {
            name: "macaulay-consequence",
            applicable: true,
            passed: bad.is_empty(),
            details: bad.join(", "),
        });
    }

    {
        let applicable = d >= 4;
        let mut bad = Vec::new();
        if applicable {
            for k in 1..half_floor {
                if !vectors.g_extended(k).is_one() {
                    continue;
                }
                let m_dk = &vectors.m[d - k];
                if m_dk > &Z::one() {
                    bad.push(format!("g_{k} = 1 but m_{} = {m_dk}", d - k));
                }
                let g_next_zero = vectors.g_extended(k + 1).is_zero();
                if m_dk.is_one() != g_next_zero {
                    bad.push(format!(
                        "m_{} = {m_dk} inconsistent with g_{} = {}",
                        d - k,
                        k + 1,
                        vectors.g_extended(k + 1)
                    ));
                }
            }
        }
        clauses.push(GlbtClause {
            name: "m-corollary",
            applicable,
            passed: bad.is_empty(),
            details: bad.join(", "),
        });
    }

    let all_passed = clauses.iter().all(|c| !c.applicable || c.passed);
    Ok(GlbtReport { clauses, all_passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_vec(values: &[i64]) -> Vec<Z> {
        values.iter().map(|&v| Z::from(v)).collect()
    }

    /// Convolution oracle for h-vectors of joins.
    fn convolve(a: &[Z], b: &[Z]) -> Vec<Z> {
        let mut out = vec![Z::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn simplex_boundary_vectors() {
        let cx = Complex::simplex_boundary(3, "v").unwrap();
        let v = compute_vectors(&cx).unwrap();
        assert_eq!(v.f, z_vec(&[1, 4, 6, 4]));
        assert_eq!(v.h, z_vec(&[1, 1, 1, 1]));
        for j in 1..=8 {
            let v = compute_vectors(&Complex::simplex_boundary(j, "v").unwrap()).unwrap();
            assert!(v.h.iter().all(|h| h.is_one()));
        }
    }

    #[test]
    fn octahedron_vectors() {
        let oct = Complex::construct_k(1, 3).unwrap();
        let v = compute_vectors(&oct).unwrap();
        assert_eq!(v.f, z_vec(&[1, 6, 12, 8]));
        assert_eq!(v.h, z_vec(&[1, 3, 3, 1]));
        assert_eq!(v.g, z_vec(&[1, 2, 0]));
        assert_eq!(v.m, z_vec(&[0, 3, 0, 0]));
    }

    #[test]
    fn k25_vectors() {
        let cx = Complex::construct_k(2, 6).unwrap();
        let v = compute_vectors(&cx).unwrap();
        assert_eq!(v.h, z_vec(&[1, 3, 6, 7, 6, 3, 1]));
        assert_eq!(v.g, z_vec(&[1, 2, 3, 1]));
        assert_eq!(v.m, z_vec(&[0, 0, 3, 0, 0, 0, 0]));
    }

    #[test]
    fn not_pure_is_rejected() {
        let cx = Complex::from_facet_strs(&["a", "b", "c"], &[&["a", "b"], &["c"]]).unwrap();
        assert!(matches!(compute_vectors(&cx), Err(Error::NotPure)));
    }

    #[test]
    fn f_h_round_trip() {
        for cx in [
            Complex::construct_k(1, 3).unwrap(),
            Complex::construct_k(2, 6).unwrap(),
            Complex::connected_sum_stacked(4, 8).unwrap(),
            Complex::simplex(4, "v").unwrap(),
        ] {
            let v = compute_vectors(&cx).unwrap();
            assert_eq!(f_from_h(v.d, &v.h), v.f);
        }
    }

    #[test]
    fn dehn_sommerville_on_spheres_not_on_balls() {
        for cx in [
            Complex::simplex_boundary(5, "v").unwrap(),
            Complex::construct_k(1, 4).unwrap(),
            Complex::construct_k(2, 6).unwrap(),
            Complex::connected_sum_stacked(4, 9).unwrap(),
        ] {
            let v = compute_vectors(&cx).unwrap();
            for i in 0..=v.d {
                assert_eq!(v.h[i], v.h[v.d - i], "h not symmetric for {cx:?}");
            }
            if v.d % 2 == 1 {
                assert!(v.g[v.d.div_ceil(2)].is_zero());
            }
        }
        let ball = Complex::simplex(3, "v").unwrap();
        let v = compute_vectors(&ball).unwrap();
        assert_ne!(v.h[0], v.h[v.d]);
    }

    #[test]
    fn h_of_join_is_convolution() {
        let a = Complex::simplex_boundary(2, "a").unwrap();
        let b = Complex::cycle(5, "c").unwrap();
        let join = a.join(&b).unwrap();
        let ha = compute_vectors(&a).unwrap().h;
        let hb = compute_vectors(&b).unwrap().h;
        let hj = compute_vectors(&join).unwrap().h;
        assert_eq!(hj, convolve(&ha, &hb));
    }

    #[test]
    fn mcmullen_residual_zero() {
        for d in 2..=5 {
            let cx = Complex::simplex_boundary(d, "v").unwrap();
            assert!(mcmullen_residual(&cx, 0).unwrap().is_zero());
        }
        let oct = Complex::construct_k(1, 3).unwrap();
        assert!(mcmullen_residual(&oct, 1).unwrap().is_zero());
        let k25 = Complex::construct_k(2, 6).unwrap();
        for k in 0..=2 {
            assert!(mcmullen_residual(&k25, k).unwrap().is_zero());
        }
    }

    #[test]
    fn mcmullen_rejects_out_of_range_k() {
        let oct = Complex::construct_k(1, 3).unwrap();
        assert!(matches!(
            mcmullen_residual(&oct, 2),
            Err(Error::KOutOfRange { .. })
        ));
    }

    #[test]
    fn s_class_examples() {
        assert_eq!(s_class(&Complex::construct_k(1, 3).unwrap()), 1);
        assert_eq!(s_class(&Complex::construct_k(2, 6).unwrap()), 2);
        for d in 2..=5 {
            assert_eq!(s_class(&Complex::simplex_boundary(d, "v").unwrap()), d);
        }
        assert_eq!(s_class(&Complex::simplex(3, "v").unwrap()), 0);
    }

    #[test]
    fn glbt_report_k25_passes() {
        let report = glbt_report(&Complex::construct_k(2, 6).unwrap()).unwrap();
        assert!(report.all_passed, "{:?}", report.clauses);
    }

    #[test]
    fn glbt_report_cross_polytope() {
        let cx = Complex::construct_k(1, 4).unwrap();
        let v = compute_vectors(&cx).unwrap();
        assert_eq!(v.g_extended(2), Z::from(2));
        assert!(glbt_report(&cx).unwrap().all_passed);
    }

    #[test]
    fn glbt_m_corollary_on_simplex_times_cycle() {
        // d = 6 sphere with g_2 = 1, m_4 = 1 and g_3 = 0.
        let cx = Complex::simplex_boundary(4, "s")
            .unwrap()
            .join(&Complex::cycle(5, "c").unwrap())
            .unwrap();
        let v = compute_vectors(&cx).unwrap();
        assert_eq!(v.h, z_vec(&[1, 4, 5, 5, 5, 4, 1]));
        assert_eq!(v.g_extended(2), Z::one());
        assert_eq!(v.m[4], Z::one());
        assert!(v.g_extended(3).is_zero());
        assert!(glbt_report(&cx).unwrap().all_passed);
    }
}
