//! Generic embeddings and linear/affine stress spaces.
//!
//! A degree-`k` stress of an embedded complex is a homogeneous polynomial,
//! every term of which is supported on a face, annihilated by the `d`
//! differential operators attached to the coordinate rows of the embedding;
//! affine stresses are additionally annihilated by the all-ones operator.
//! Stress spaces are computed as exact kernels of the corresponding linear
//! system over the face-supported monomial basis. For a homology sphere with
//! a generic embedding the dimensions recover `h_k` (linear) and `g_k`
//! (affine).
//!
//! True genericity (algebraically independent coordinates) is not finitely
//! representable; seeded random integer coordinates stand in for it. A
//! degenerate sample can only enlarge a kernel, so taking the minimum over
//! independent trials upper-bounds the generic dimension and in practice
//! equals it.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg::{Q, RationalMatrix, Z};
use crate::rng::SplitMix64;

/// A monomial in vertex variables, kept sorted by label.
///
/// The derived `Ord` (label, then exponent, position by position) is the
/// canonical monomial order of the crate: bases are listed in it and stresses
/// are normalized against it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    vars: Vec<(String, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { vars: Vec::new() }
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, u32)>>(pairs: I) -> Self {
        let mut vars: Vec<(String, u32)> = pairs.into_iter().filter(|(_, e)| *e > 0).collect();
        vars.sort();
        debug_assert!(vars.windows(2).all(|w| w[0].0 != w[1].0));
        Monomial { vars }
    }

    pub fn degree(&self) -> u32 {
        self.vars.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, label: &str) -> u32 {
        self.vars
            .iter()
            .find(|(l, _)| l == label)
            .map_or(0, |(_, e)| *e)
    }

    pub fn vars(&self) -> &[(String, u32)] {
        &self.vars
    }

    pub fn support_labels(&self) -> Vec<&str> {
        self.vars.iter().map(|(l, _)| l.as_str()).collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.vars.iter().all(|(_, e)| *e == 1)
    }

    /// Divide by one power of `label`; `None` when the variable is absent.
    pub fn div_var(&self, label: &str) -> Option<Monomial> {
        let pos = self.vars.iter().position(|(l, _)| l == label)?;
        let mut vars = self.vars.clone();
        if vars[pos].1 == 1 {
            vars.remove(pos);
        } else {
            vars[pos].1 -= 1;
        }
        Some(Monomial { vars })
    }

    /// Multiply by `label^power`.
    pub fn mul_var(&self, label: &str, power: u32) -> Monomial {
        if power == 0 {
            return self.clone();
        }
        let mut vars = self.vars.clone();
        match vars.iter().position(|(l, _)| l == label) {
            Some(pos) => vars[pos].1 += power,
            None => {
                vars.push((label.to_string(), power));
                vars.sort();
            }
        }
        Monomial { vars }
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.vars.is_empty() {
            return write!(f, "1");
        }
        for (i, (l, e)) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{e}")?;
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

/// A map from vertex labels to exact rational coordinate tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    dim: usize,
    coords: BTreeMap<String, Vec<Q>>,
    seed: Option<u64>,
}

impl Embedding {
    pub fn new(dim: usize, coords: BTreeMap<String, Vec<Q>>) -> Result<Embedding> {
        if dim == 0 {
            return Err(Error::BadParameters("embedding dimension must be >= 1".into()));
        }
        for (label, tuple) in &coords {
            if tuple.len() != dim {
                return Err(Error::EmbeddingMismatch(format!(
                    "vertex `{label}` has {} coordinates, expected {dim}",
                    tuple.len()
                )));
            }
        }
        Ok(Embedding {
            dim,
            coords,
            seed: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn coord(&self, label: &str) -> Option<&[Q]> {
        self.coords.get(label).map(|v| v.as_slice())
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&String, &Vec<Q>)> {
        self.coords.iter()
    }

    pub fn covers(&self, cx: &Complex) -> bool {
        cx.labels().iter().all(|l| self.coords.contains_key(l))
    }

    /// The `|V| x dim` coordinate matrix, rows in label order.
    pub fn coordinate_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_rows(self.coords.values().cloned().collect())
    }
}

/// Seeded pseudo-generic embedding: independent uniform integers in
/// `[-2^30, 2^30]`, one per vertex per coordinate, in label order.
pub fn generic_embedding(cx: &Complex, d: usize, seed: u64) -> Embedding {
    let mut rng = SplitMix64::new(seed);
    let coords = cx
        .labels()
        .iter()
        .map(|l| {
            let tuple: Vec<Q> = (0..d)
                .map(|_| Q::from_integer(Z::from(rng.coordinate())))
                .collect();
            (l.clone(), tuple)
        })
        .collect();
    Embedding {
        dim: d,
        coords,
        seed: Some(seed),
    }
}

/// A homogeneous face-supported polynomial with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stress {
    degree: u32,
    terms: BTreeMap<Monomial, Q>,
}

impl Stress {
    pub fn zero(degree: u32) -> Stress {
        Stress {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(degree: u32, terms: BTreeMap<Monomial, Q>) -> Stress {
        debug_assert!(terms.keys().all(|m| m.degree() == degree));
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Stress { degree, terms }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    fn add_term(terms: &mut BTreeMap<Monomial, Q>, m: Monomial, c: Q) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Stress) -> Stress {
        assert_eq!(self.degree, other.degree);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::add_term(&mut terms, m.clone(), c.clone());
        }
        Stress {
            degree: self.degree,
            terms,
        }
    }

    pub fn sub(&self, other: &Stress) -> Stress {
        assert_eq!(self.degree, other.degree);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::add_term(&mut terms, m.clone(), -c.clone());
        }
        Stress {
            degree: self.degree,
            terms,
        }
    }

    pub fn scale(&self, factor: &Q) -> Stress {
        if factor.is_zero() {
            return Stress::zero(self.degree);
        }
        Stress {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    /// Scale so the coefficient of the smallest monomial present is 1.
    pub fn normalized(&self) -> Stress {
        match self.terms.first_key_value() {
            None => self.clone(),
            Some((_, first)) => {
                let inv = Q::one() / first.clone();
                self.scale(&inv)
            }
        }
    }

    /// Formal partial derivative with respect to one vertex variable.
    pub fn partial(&self, label: &str) -> Stress {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(label);
            if e > 0 {
                let dm = m.div_var(label).unwrap();
                Self::add_term(&mut terms, dm, c * Q::from_integer(Z::from(e)));
            }
        }
        Stress {
            degree: self.degree.saturating_sub(1),
            terms,
        }
    }

    /// Derivative along the all-ones linear form (sum of all partials).
    pub fn dc(&self) -> Stress {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            for (label, e) in m.vars() {
                let dm = m.div_var(label).unwrap();
                Self::add_term(&mut terms, dm, c * Q::from_integer(Z::from(*e)));
            }
        }
        Stress {
            degree: self.degree.saturating_sub(1),
            terms,
        }
    }

    /// Derivative along coordinate row `j` of the embedding.
    pub fn theta(&self, emb: &Embedding, j: usize) -> Result<Stress> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            for (label, e) in m.vars() {
                let a = emb
                    .coord(label)
                    .ok_or_else(|| Error::EmbeddingMismatch(format!("no coordinates for `{label}`")))?;
                let dm = m.div_var(label).unwrap();
                Self::add_term(&mut terms, dm, c * &a[j] * Q::from_integer(Z::from(*e)));
            }
        }
        Ok(Stress {
            degree: self.degree.saturating_sub(1),
            terms,
        })
    }

    /// The squarefree top-degree faces with nonzero coefficient, as labels.
    pub fn top_squarefree_faces(&self) -> Vec<Vec<String>> {
        self.terms
            .keys()
            .filter(|m| m.degree() == self.degree && m.is_squarefree())
            .map(|m| m.support_labels().iter().map(|s| s.to_string()).collect())
            .collect()
    }

    /// Coefficient vector over an ordered monomial basis. Fails if a term
    /// falls outside the basis.
    pub fn to_vector(&self, basis: &[Monomial]) -> Result<Vec<Q>> {
        let index: BTreeMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut v = vec![Q::zero(); basis.len()];
        for (m, c) in &self.terms {
            let i = index.get(m).ok_or_else(|| {
                Error::VerificationFailed(format!("monomial {m} outside the given basis"))
            })?;
            v[*i] = c.clone();
        }
        Ok(v)
    }

    /// Monomial-to-coefficient map in display form.
    pub fn to_string_map(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(m, c)| (m.to_string(), c.to_string()))
            .collect()
    }
}

/// All degree-`k` monomials supported on a face, in canonical order.
pub fn monomial_basis(cx: &Complex, k: u32) -> Vec<Monomial> {
    if k == 0 {
        return vec![Monomial::one()];
    }
    let mut out: Vec<Monomial> = Vec::new();
    let max_card = (cx.dim() + 1).max(0) as usize;
    for card in 1..=max_card.min(k as usize) {
        for face in cx.faces_of_card(card) {
            let labels: Vec<&str> = face.iter().map(|v| cx.label(v)).collect();
            for split in compositions(k, card as u32) {
                out.push(Monomial::from_pairs(
                    labels
                        .iter()
                        .zip(&split)
                        .map(|(l, e)| (l.to_string(), *e)),
                ));
            }
        }
    }
    out.sort();
    out
}

/// All ways to write `total` as an ordered sum of `parts` positive integers.
fn compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 1..=total - parts + 1 {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StressKind {
    Linear,
    Affine,
}

/// Basis of the degree-`k` stress space of `(cx, emb)`, each element
/// normalized so its first coefficient in monomial order is 1.
pub fn stress_basis(
    cx: &Complex,
    emb: &Embedding,
    k: u32,
    kind: StressKind,
) -> Result<Vec<Stress>> {
    if !emb.covers(cx) {
        return Err(Error::EmbeddingMismatch(
            "embedding does not assign coordinates to every vertex".into(),
        ));
    }
    let d = emb.dim();
    let basis = monomial_basis(cx, k);
    let lower = if k == 0 {
        Vec::new()
    } else {
        monomial_basis(cx, k - 1)
    };
    let lower_index: BTreeMap<&Monomial, usize> =
        lower.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let block = lower.len();
    let affine = matches!(kind, StressKind::Affine);
    let rows = d * block + if affine { block } else { 0 };
    let mut matrix = RationalMatrix::zeros(rows, basis.len());
    for (col, m) in basis.iter().enumerate() {
        for (label, e) in m.vars() {
            let dm = m.div_var(label).unwrap();
            let row_of = lower_index[&dm];
            let coeffs = emb.coord(label).unwrap();
            let e_q = Q::from_integer(Z::from(*e));
            for (j, a) in coeffs.iter().enumerate() {
                if !a.is_zero() {
                    let cell = matrix.get(j * block + row_of, col) + a * &e_q;
                    matrix.set(j * block + row_of, col, cell);
                }
            }
            if affine {
                let cell = matrix.get(d * block + row_of, col) + &e_q;
                matrix.set(d * block + row_of, col, cell);
            }
        }
    }
    let kernel = matrix.kernel_basis();
    Ok(kernel
        .into_iter()
        .map(|v| {
            Stress::from_terms(
                k,
                basis
                    .iter()
                    .cloned()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .collect(),
            )
        })
        .collect())
}

/// `None` when the polynomial is a valid linear stress on `(cx, emb)`,
/// otherwise a description of the first violated condition.
pub fn linear_stress_defect(stress: &Stress, cx: &Complex, emb: &Embedding) -> Option<String> {
    for (m, _) in stress.terms() {
        match cx.vset(&m.support_labels()) {
            Ok(set) => {
                if !cx.is_face(&set) {
                    return Some(format!("term {m} is not supported on a face"));
                }
            }
            Err(_) => return Some(format!("term {m} uses a label outside the complex")),
        }
        if m.degree() != stress.degree() {
            return Some(format!("term {m} has the wrong degree"));
        }
    }
    for j in 0..emb.dim() {
        match stress.theta(emb, j) {
            Ok(t) => {
                if !t.is_zero() {
                    return Some(format!("coordinate operator {j} does not annihilate it"));
                }
            }
            Err(e) => return Some(e.to_string()),
        }
    }
    None
}

/// Like [`linear_stress_defect`], with the all-ones condition added.
pub fn affine_stress_defect(stress: &Stress, cx: &Complex, emb: &Embedding) -> Option<String> {
    if let Some(defect) = linear_stress_defect(stress, cx, emb) {
        return Some(defect);
    }
    if !stress.dc().is_zero() {
        return Some("the all-ones operator does not annihilate it".into());
    }
    None
}

/// The subcomplex generated by the squarefree top-degree faces of a stress.
pub fn support(stress: &Stress, cx: &Complex) -> Result<Complex> {
    if stress.is_zero() {
        return Err(Error::ZeroStress);
    }
    let faces = stress.top_squarefree_faces();
    if faces.is_empty() {
        return Err(Error::ZeroStress);
    }
    let mut labels: Vec<String> = faces.iter().flatten().cloned().collect();
    labels.sort();
    labels.dedup();
    for l in &labels {
        cx.index_of(l)?;
    }
    Complex::from_facets(labels, faces)
}

/// Result of the minimum-over-trials dimension protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StressDims {
    pub linear: usize,
    pub affine: usize,
    /// Whether every trial produced the same pair.
    pub unanimous: bool,
}

/// Dimensions of the degree-`k` linear and affine stress spaces, minimized
/// over `trials` independently seeded embeddings in dimension `dim + 1`.
pub fn stress_dims(cx: &Complex, k: u32, trials: usize, seed: u64) -> Result<StressDims> {
    if trials == 0 {
        return Err(Error::BadParameters("trials must be >= 1".into()));
    }
    let d = (cx.dim() + 1).max(1) as usize;
    let mut seeder = SplitMix64::new(seed);
    let mut best: Option<(usize, usize)> = None;
    let mut unanimous = true;
    for _ in 0..trials {
        let emb = generic_embedding(cx, d, seeder.next_u64());
        let lin = stress_basis(cx, &emb, k, StressKind::Linear)?.len();
        let aff = stress_basis(cx, &emb, k, StressKind::Affine)?.len();
        match &mut best {
            None => best = Some((lin, aff)),
            Some((bl, ba)) => {
                if (lin, aff) != (*bl, *ba) {
                    unanimous = false;
                }
                *bl = (*bl).min(lin);
                *ba = (*ba).min(aff);
            }
        }
    }
    let (linear, affine) = best.unwrap();
    Ok(StressDims {
        linear,
        affine,
        unanimous,
    })
}
