//! Stress transport between a complex and cones over it.
//!
//! Three pieces work together here:
//!
//! 1. [`star_chart`]: a change of coordinates attached to a vertex `u` of an
//!    embedded complex. It turns the ambient embedding into one where `u`
//!    sits at `(0, ..., 0, -1)` and every neighbor `s` has the cone shape
//!    `((1 + a_s) p'(s), a_s)` over an induced embedding `p'` of `lk(u)`.
//!    Row operations on the coordinate matrix do not change stress spaces,
//!    so stresses are unaffected by the switch.
//! 2. [`lift`]: the degree-preserving map taking a linear stress on the base
//!    of a cone to a linear stress on the cone. Its support is the
//!    `(i-1)`-skeleton of the cone over the input support, and it commutes
//!    with the all-ones derivative on both sides.
//! 3. [`edge_stress`]: for an even-dimensional homology sphere whose missing
//!    faces are small, produces a nonzero affine stress living on the union
//!    of two adjacent vertex stars, with a witness face leaving one of them.
//!    It picks a stress on `st(v, lk(u))` whose preimage under the all-ones
//!    derivative escapes that star, lifts both to `st(u)`, inverts the
//!    derivative on `st(v)` by exact solving, and subtracts.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::homology::is_homology_sphere;
use crate::invariants::s_class;
use crate::linalg::{Q, RationalMatrix, Z};
use crate::rng::SplitMix64;
use crate::stress::{
    generic_embedding, linear_stress_defect, monomial_basis, stress_basis, Embedding, Stress,
    StressKind,
};

/// The vertex-centered coordinate data produced by [`star_chart`].
pub struct StarChart {
    pub link: Complex,
    pub star: Complex,
    /// Embedding of the link in one dimension less.
    pub link_embedding: Embedding,
    /// The cone parameter `a_s` for every link vertex.
    pub cone_values: BTreeMap<String, Q>,
    /// Embedding of the star with the center at `(0, ..., 0, -1)`.
    pub star_embedding: Embedding,
}

/// Change coordinates around `u`: returns the induced link embedding, the
/// cone parameters, and the star embedding they reassemble into.
///
/// With ambient coordinates `a_{s,j}`, the link embedding is
/// `p'(s)_j = (a_{s,j}/a_{u,j} - a_{s,d}/a_{u,d}) / (1 - a_{s,d}/a_{u,d})`
/// and the cone parameter is `a_s = -a_{s,d}/a_{u,d}`.
pub fn star_chart(cx: &Complex, emb: &Embedding, u: &str) -> Result<StarChart> {
    let d = emb.dim();
    if d < 2 {
        return Err(Error::BadParameters("star chart needs dimension >= 2".into()));
    }
    if !emb.covers(cx) {
        return Err(Error::EmbeddingMismatch(
            "embedding does not cover the complex".into(),
        ));
    }
    let ui = cx.index_of(u)?;
    let u_set = crate::bitset::VertexSet::singleton(ui);
    let au = emb.coord(u).unwrap();
    if au.iter().any(|x| x.is_zero()) {
        return Err(Error::DegenerateCoordinates(format!(
            "vertex `{u}` has a zero coordinate"
        )));
    }
    let link = cx.link(&u_set)?;
    let star = cx.star(&u_set)?;
    let mut coords: BTreeMap<String, Vec<Q>> = BTreeMap::new();
    let mut cone_values: BTreeMap<String, Q> = BTreeMap::new();
    for s in link.labels() {
        let a_s_coords = emb
            .coord(s)
            .ok_or_else(|| Error::EmbeddingMismatch(format!("no coordinates for `{s}`")))?;
        let ratio_last = &a_s_coords[d - 1] / &au[d - 1];
        let denom = Q::one() - &ratio_last;
        if denom.is_zero() {
            return Err(Error::DegenerateCoordinates(format!(
                "vertex `{s}` projects onto the center"
            )));
        }
        let tuple: Vec<Q> = (0..d - 1)
            .map(|j| (&a_s_coords[j] / &au[j] - &ratio_last) / &denom)
            .collect();
        coords.insert(s.clone(), tuple);
        cone_values.insert(s.clone(), -ratio_last);
    }
    let link_embedding = Embedding::new(d - 1, coords)?;
    let star_embedding = cone_embedding(&link_embedding, &cone_values, u)?;
    Ok(StarChart {
        link,
        star,
        link_embedding,
        cone_values,
        star_embedding,
    })
}

/// Convenience wrapper returning only the induced link embedding.
pub fn link_embedding(cx: &Complex, emb: &Embedding, u: &str) -> Result<Embedding> {
    star_chart(cx, emb, u).map(|chart| chart.link_embedding)
}

/// Embed the cone `apex * base`: the apex goes to `(0, ..., 0, -1)` and a
/// base vertex `s` at `p'(s)` goes to `((1 + a_s) p'(s), a_s)`.
pub fn cone_embedding(
    base: &Embedding,
    cone_values: &BTreeMap<String, Q>,
    apex: &str,
) -> Result<Embedding> {
    let d = base.dim() + 1;
    if base.coord(apex).is_some() {
        return Err(Error::LabelCollision(apex.to_string()));
    }
    let mut coords: BTreeMap<String, Vec<Q>> = BTreeMap::new();
    let mut apex_tuple = vec![Q::zero(); d];
    apex_tuple[d - 1] = -Q::one();
    coords.insert(apex.to_string(), apex_tuple);
    for (s, tuple) in base.vertices() {
        let a_s = cone_values
            .get(s)
            .ok_or_else(|| Error::BadParameters(format!("no cone value for vertex `{s}`")))?;
        if (a_s + Q::one()).is_zero() {
            return Err(Error::BadAValue(s.clone()));
        }
        let scale = Q::one() + a_s;
        let mut lifted: Vec<Q> = tuple.iter().map(|x| x * &scale).collect();
        lifted.push(a_s.clone());
        coords.insert(s.clone(), lifted);
    }
    Embedding::new(d, coords)
}

/// Fresh integer cone parameters drawn from a seeded stream (never -1).
pub fn fresh_cone_values(base: &Complex, seed: u64) -> BTreeMap<String, Q> {
    let mut rng = SplitMix64::new(seed);
    base.labels()
        .iter()
        .map(|l| {
            let value = loop {
                let x = rng.coordinate();
                if x != -1 {
                    break x;
                }
            };
            (l.clone(), Q::from_integer(Z::from(value)))
        })
        .collect()
}

/// Lift a linear stress on `(base, base_emb)` to a linear stress on the cone
/// `apex * base` with embedding [`cone_embedding`].
///
/// Writing `w_0` for the input with each variable `x_s` replaced by
/// `x_s / (1 + a_s)`, the layers `w_{j+1} = (sum_s a_s d/dx_s w_j) / (j+1)`
/// assemble into `sum_j apex^j * w_j`.
pub fn lift(
    stress: &Stress,
    base: &Complex,
    base_emb: &Embedding,
    cone_values: &BTreeMap<String, Q>,
    apex: &str,
) -> Result<Stress> {
    if let Some(defect) = linear_stress_defect(stress, base, base_emb) {
        return Err(Error::NotAStress(defect));
    }
    let degree = stress.degree();
    if stress.is_zero() {
        return Ok(Stress::zero(degree));
    }
    for l in base.labels() {
        if !cone_values.contains_key(l) {
            return Err(Error::BadParameters(format!("no cone value for vertex `{l}`")));
        }
        if (&cone_values[l] + Q::one()).is_zero() {
            return Err(Error::BadAValue(l.clone()));
        }
    }
    // w_0: substitute x_s -> x_s / (1 + a_s).
    let mut terms: BTreeMap<crate::stress::Monomial, Q> = BTreeMap::new();
    for (m, c) in stress.terms() {
        let mut scaled = c.clone();
        for (label, e) in m.vars() {
            let factor = Q::one() + &cone_values[label];
            for _ in 0..*e {
                scaled /= &factor;
            }
        }
        terms.insert(m.clone(), scaled);
    }
    let mut layer = Stress::from_terms(degree, terms);
    let mut result = layer.clone();
    for j in 0..degree {
        // w_{j+1} = (sum_s a_s d/dx_s w_j) / (j + 1)
        let mut next = Stress::zero(layer.degree().saturating_sub(1));
        for (label, a_s) in cone_values {
            let part = layer.partial(label);
            if !part.is_zero() {
                next = next.add(&part.scale(a_s));
            }
        }
        layer = next.scale(&Q::new(Z::one(), Z::from(j + 1)));
        if layer.is_zero() {
            break;
        }
        let mut shifted: BTreeMap<crate::stress::Monomial, Q> = BTreeMap::new();
        for (m, c) in layer.terms() {
            shifted.insert(m.mul_var(apex, j + 1), c.clone());
        }
        result = result.add(&Stress::from_terms(degree, shifted));
    }
    Ok(result)
}

/// Everything produced by [`edge_stress`], including the data needed to
/// verify it independently.
pub struct EdgeStressOutcome {
    /// Normalized affine stress of degree `d/2` on the input complex.
    pub stress: Stress,
    /// The seeded embedding the stress is affine with respect to.
    pub embedding: Embedding,
    /// A support face containing `u` that is not a face of `st(v)`.
    pub witness: Vec<String>,
    /// Number of seeds tried before success.
    pub attempts: u32,
}

const EDGE_STRESS_ATTEMPTS: u32 = 8;

/// Construct a nonzero affine `d/2`-stress supported on `st(u) ∪ st(v)`
/// with a face through `u` escaping `st(v)`.
///
/// Requires an even-dimensional homology sphere (`d = 2k`) whose missing
/// faces all have dimension at most `k - 1`, and an edge `uv`.
pub fn edge_stress(cx: &Complex, u: &str, v: &str, seed: u64) -> Result<EdgeStressOutcome> {
    let d = (cx.dim() + 1) as usize;
    if d == 0 || !d.is_multiple_of(2) {
        return Err(Error::HypothesisViolated(format!(
            "needs an even d, got d = {d}"
        )));
    }
    let k = (d / 2) as u32;
    let ui = cx.index_of(u)?;
    let vi = cx.index_of(v)?;
    let edge = crate::bitset::VertexSet::from_indices([ui, vi]);
    if edge.card() != 2 || !cx.is_face(&edge) {
        return Err(Error::NotAnEdge(u.to_string(), v.to_string()));
    }
    if s_class(cx) > (k - 1) as usize {
        return Err(Error::HypothesisViolated(format!(
            "missing faces up to dimension {} exceed k - 1 = {}",
            s_class(cx),
            k - 1
        )));
    }
    if !is_homology_sphere(cx)? {
        return Err(Error::HypothesisViolated(
            "input is not a homology sphere".into(),
        ));
    }
    let mut seeder = SplitMix64::new(seed);
    let mut last_failure = String::from("no attempt made");
    for attempt in 1..=EDGE_STRESS_ATTEMPTS {
        let trial_seed = seeder.next_u64();
        match edge_stress_attempt(cx, u, v, k, d, trial_seed) {
            Ok(mut outcome) => {
                outcome.attempts = attempt;
                return Ok(outcome);
            }
            Err(Error::DegenerateCoordinates(msg)) | Err(Error::GenericityFailure(msg)) => {
                last_failure = msg;
            }
            Err(other) => return Err(other),
        }
    }
    Err(Error::GenericityFailure(format!(
        "exhausted {EDGE_STRESS_ATTEMPTS} seeds; last failure: {last_failure}"
    )))
}

fn edge_stress_attempt(
    cx: &Complex,
    u: &str,
    v: &str,
    k: u32,
    d: usize,
    trial_seed: u64,
) -> Result<EdgeStressOutcome> {
    let embedding = generic_embedding(cx, d, trial_seed);
    let chart = star_chart(cx, &embedding, u)?;
    let link_u = &chart.link;
    let p_link = &chart.link_embedding;

    // The star of v inside lk(u); stresses on it are stresses on lk(u).
    let v_in_link = crate::bitset::VertexSet::singleton(link_u.index_of(v)?);
    let star_v_link = link_u.star(&v_in_link)?;
    let star_candidates = stress_basis(&star_v_link, p_link, k - 1, StressKind::Linear)?;
    let link_upper = stress_basis(link_u, p_link, k, StressKind::Linear)?;

    // Matrix of the all-ones derivative from the degree-k stresses of lk(u)
    // down to degree k - 1, in monomial coordinates.
    let lower_monos = monomial_basis(link_u, k - 1);
    let columns: Vec<Vec<Q>> = link_upper
        .iter()
        .map(|s| s.dc().to_vector(&lower_monos))
        .collect::<Result<_>>()?;
    let mut derivative = RationalMatrix::zeros(lower_monos.len(), link_upper.len());
    for (c, col) in columns.iter().enumerate() {
        for (r, x) in col.iter().enumerate() {
            if !x.is_zero() {
                derivative.set(r, c, x.clone());
            }
        }
    }

    let mut chosen: Option<(Stress, Stress)> = None;
    for omega_prime in candidate_stresses(&star_candidates) {
        if omega_prime.is_zero() {
            continue;
        }
        let rhs = omega_prime.to_vector(&lower_monos)?;
        let Some(solution) = derivative.solve(&rhs) else {
            return Err(Error::GenericityFailure(
                "derivative on the link failed to invert".into(),
            ));
        };
        let mut preimage = Stress::zero(k);
        for (coeff, basis_stress) in solution.iter().zip(&link_upper) {
            if !coeff.is_zero() {
                preimage = preimage.add(&basis_stress.scale(coeff));
            }
        }
        let escapes = preimage
            .top_squarefree_faces()
            .iter()
            .any(|face| !contains_face(&star_v_link, face));
        if escapes {
            chosen = Some((omega_prime, preimage));
            break;
        }
    }
    let Some((omega_prime, lambda_prime)) = chosen else {
        return Err(Error::GenericityFailure(
            "no candidate stress escaped the star of v in lk(u)".into(),
        ));
    };

    // Lift both to st(u) and check the lifted pair is still a derivative pair.
    let omega = lift(&omega_prime, link_u, p_link, &chart.cone_values, u)?;
    let lambda_u = lift(&lambda_prime, link_u, p_link, &chart.cone_values, u)?;
    if lambda_u.dc() != omega {
        return Err(Error::GenericityFailure(
            "lifting did not commute with the all-ones derivative".into(),
        ));
    }

    // Invert the all-ones derivative on st(v) for the same omega.
    let star_v = cx.star(&crate::bitset::VertexSet::singleton(cx.index_of(v)?))?;
    let star_v_upper = stress_basis(&star_v, &embedding, k, StressKind::Linear)?;
    let star_v_lower_monos = monomial_basis(&star_v, k - 1);
    let mut derivative_v = RationalMatrix::zeros(star_v_lower_monos.len(), star_v_upper.len());
    for (c, s) in star_v_upper.iter().enumerate() {
        for (r, x) in s.dc().to_vector(&star_v_lower_monos)?.iter().enumerate() {
            if !x.is_zero() {
                derivative_v.set(r, c, x.clone());
            }
        }
    }
    let rhs_v = omega.to_vector(&star_v_lower_monos)?;
    let Some(solution_v) = derivative_v.solve(&rhs_v) else {
        return Err(Error::GenericityFailure(
            "derivative on st(v) failed to invert".into(),
        ));
    };
    let mut lambda_v = Stress::zero(k);
    for (coeff, basis_stress) in solution_v.iter().zip(&star_v_upper) {
        if !coeff.is_zero() {
            lambda_v = lambda_v.add(&basis_stress.scale(coeff));
        }
    }

    let bar_omega = lambda_u.sub(&lambda_v);
    if bar_omega.is_zero() {
        return Err(Error::GenericityFailure("difference stress vanished".into()));
    }
    if let Some(defect) = crate::stress::affine_stress_defect(&bar_omega, cx, &embedding) {
        return Err(Error::GenericityFailure(format!(
            "difference is not an affine stress: {defect}"
        )));
    }
    let star_u = &chart.star;
    let mut witness: Option<Vec<String>> = None;
    for face in bar_omega.top_squarefree_faces() {
        let in_u = contains_face(star_u, &face);
        let in_v = contains_face(&star_v, &face);
        if !in_u && !in_v {
            return Err(Error::GenericityFailure(format!(
                "support face {face:?} leaves both stars"
            )));
        }
        if face.iter().any(|l| l == u) && !in_v {
            witness = Some(face);
        }
    }
    let Some(witness) = witness else {
        return Err(Error::GenericityFailure(
            "no support face through u escapes st(v)".into(),
        ));
    };
    Ok(EdgeStressOutcome {
        stress: bar_omega.normalized(),
        embedding,
        witness,
        attempts: 0,
    })
}

/// Basis vectors first, then pairwise sums, in a deterministic order.
fn candidate_stresses(basis: &[Stress]) -> Vec<Stress> {
    let mut out: Vec<Stress> = basis.to_vec();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            out.push(basis[i].add(&basis[j]));
        }
    }
    out
}

/// Is the label set a face of the complex? (False for foreign labels.)
fn contains_face(cx: &Complex, face: &[String]) -> bool {
    let labels: Vec<&str> = face.iter().map(|s| s.as_str()).collect();
    match cx.vset(&labels) {
        Ok(set) => cx.is_face(&set),
        Err(_) => false,
    }
}
