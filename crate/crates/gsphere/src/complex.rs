//! Simplicial complexes over an indexed vertex set.
//!
//! A [`Complex`] stores its facets as bitsets over at most 128 vertex slots;
//! lower-dimensional faces are materialized on demand and cached. All
//! face-level operations (links, stars, joins, skeleta, missing faces, edge
//! contraction) live here, together with the standard generators used by the
//! rest of the crate: simplex boundaries, cycles, joins of simplex boundaries
//! `K(i, d-1)`, and stacked spheres.
//!
//! Complexes are immutable after construction, so everything here is a pure
//! function and safe to call concurrently. Vertex labels are kept sorted and
//! vertex indices always refer to positions in the sorted label list.

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use crate::bitset::{VertexSet, MAX_VERTICES};
use crate::error::{Error, Result};

/// Lazily materialized face data, grouped by cardinality.
#[derive(Debug)]
struct FaceTable {
    /// `by_card[c]` lists every face with `c` vertices, sorted by mask.
    by_card: Vec<Vec<VertexSet>>,
    all: HashSet<VertexSet>,
}

/// An abstract simplicial complex: a family of vertex sets closed under
/// inclusion, containing the empty set and every singleton.
#[derive(Debug)]
pub struct Complex {
    labels: Vec<String>,
    facets: Vec<VertexSet>,
    dim: isize,
    pure: bool,
    faces: OnceLock<FaceTable>,
    missing: OnceLock<Vec<VertexSet>>,
}

impl Clone for Complex {
    fn clone(&self) -> Self {
        // Caches are cheap to rebuild; don't drag them along.
        Complex {
            labels: self.labels.clone(),
            facets: self.facets.clone(),
            dim: self.dim,
            pure: self.pure,
            faces: OnceLock::new(),
            missing: OnceLock::new(),
        }
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.facets == other.facets
    }
}

impl Eq for Complex {}

/// Drop every set that is contained in another one; dedupe; sort by mask.
fn maximalize(mut sets: Vec<VertexSet>) -> Vec<VertexSet> {
    sets.sort_unstable();
    sets.dedup();
    let keep: Vec<VertexSet> = sets
        .iter()
        .filter(|s| !sets.iter().any(|t| *s != t && s.is_subset(t)))
        .copied()
        .collect();
    keep
}

impl Complex {
    /// The complex `{∅}` on an empty vertex set.
    pub fn empty() -> Complex {
        Complex::new_unchecked(Vec::new(), vec![VertexSet::EMPTY])
    }

    /// Internal constructor: `labels` sorted and distinct, `facets` pairwise
    /// incomparable and sorted by mask, every label covered.
    fn new_unchecked(labels: Vec<String>, facets: Vec<VertexSet>) -> Complex {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(!facets.is_empty());
        let dim = facets.iter().map(|f| f.card() as isize - 1).max().unwrap();
        let min_dim = facets.iter().map(|f| f.card() as isize - 1).min().unwrap();
        Complex {
            labels,
            facets,
            dim,
            pure: dim == min_dim,
            faces: OnceLock::new(),
            missing: OnceLock::new(),
        }
    }

    /// Build the closure of a facet family.
    ///
    /// Labels not covered by any facet become isolated vertices (singleton
    /// facets). Exact duplicate facets are merged silently; a facet strictly
    /// contained in another is rejected.
    pub fn from_facets(labels: Vec<String>, facets: Vec<Vec<String>>) -> Result<Complex> {
        if labels.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(labels.len()));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateLabel(w[0].clone()));
            }
        }
        let index_of = |l: &str| -> Result<usize> {
            sorted
                .binary_search_by(|probe| probe.as_str().cmp(l))
                .map_err(|_| Error::UnknownLabel(l.to_string()))
        };
        let mut sets: Vec<VertexSet> = Vec::with_capacity(facets.len());
        for facet in &facets {
            let mut s = VertexSet::EMPTY;
            for l in facet {
                let i = index_of(l)?;
                if s.contains(i) {
                    return Err(Error::DuplicateLabel(l.clone()));
                }
                s.insert(i);
            }
            sets.push(s);
        }
        sets.sort_unstable();
        sets.dedup();
        for a in &sets {
            if sets.iter().any(|b| a != b && a.is_subset(b)) {
                let names: Vec<&str> = a.iter().map(|i| sorted[i].as_str()).collect();
                return Err(Error::NonMaximalFacet(names.join(" ")));
            }
        }
        // Isolated vertices are their own facets.
        let covered: VertexSet = sets.iter().fold(VertexSet::EMPTY, |acc, s| acc.union(s));
        for i in 0..sorted.len() {
            if !covered.contains(i) {
                sets.push(VertexSet::singleton(i));
            }
        }
        sets.sort_unstable();
        if sets.is_empty() {
            return Ok(Complex::empty());
        }
        Ok(Complex::new_unchecked(sorted, sets))
    }

    /// Convenience constructor for tests and internal callers.
    pub fn from_facet_strs(labels: &[&str], facets: &[&[&str]]) -> Result<Complex> {
        Complex::from_facets(
            labels.iter().map(|s| s.to_string()).collect(),
            facets
                .iter()
                .map(|f| f.iter().map(|s| s.to_string()).collect())
                .collect(),
        )
    }

    /// Rebuild a complex inside the ambient label space of `parent` from a
    /// family of face sets (not necessarily maximal). Unused labels drop out.
    fn subcomplex(parent: &Complex, sets: Vec<VertexSet>) -> Complex {
        let facets = maximalize(sets);
        if facets.is_empty() || facets == vec![VertexSet::EMPTY] {
            return Complex::empty();
        }
        let used: VertexSet = facets.iter().fold(VertexSet::EMPTY, |acc, s| acc.union(s));
        let old_indices = used.indices();
        let labels: Vec<String> = old_indices
            .iter()
            .map(|&i| parent.labels[i].clone())
            .collect();
        let remap = |s: &VertexSet| -> VertexSet {
            s.iter()
                .map(|v| old_indices.binary_search(&v).unwrap())
                .collect()
        };
        let mut remapped: Vec<VertexSet> = facets.iter().map(remap).collect();
        remapped.sort_unstable();
        Complex::new_unchecked(labels, remapped)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn facets(&self) -> &[VertexSet] {
        &self.facets
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .binary_search_by(|probe| probe.as_str().cmp(label))
            .map_err(|_| Error::UnknownLabel(label.to_string()))
    }

    /// Resolve a list of labels to a vertex set.
    pub fn vset(&self, labels: &[&str]) -> Result<VertexSet> {
        let mut s = VertexSet::EMPTY;
        for l in labels {
            s.insert(self.index_of(l)?);
        }
        Ok(s)
    }

    /// The labels of a vertex set, in label order.
    pub fn set_labels(&self, s: &VertexSet) -> Vec<String> {
        s.iter().map(|v| self.labels[v].clone()).collect()
    }

    fn face_table(&self) -> &FaceTable {
        self.faces.get_or_init(|| {
            let mut by_card: Vec<BTreeSet<VertexSet>> =
                vec![BTreeSet::new(); (self.dim + 2) as usize];
            for facet in &self.facets {
                for sub in facet.subsets() {
                    by_card[sub.card()].insert(sub);
                }
            }
            let by_card: Vec<Vec<VertexSet>> =
                by_card.into_iter().map(|s| s.into_iter().collect()).collect();
            let all = by_card.iter().flatten().copied().collect();
            FaceTable { by_card, all }
        })
    }

    pub fn is_face(&self, s: &VertexSet) -> bool {
        self.face_table().all.contains(s)
    }

    /// All faces with exactly `card` vertices, sorted by mask.
    pub fn faces_of_card(&self, card: usize) -> &[VertexSet] {
        let ft = self.face_table();
        if card < ft.by_card.len() {
            &ft.by_card[card]
        } else {
            &[]
        }
    }

    /// Number of faces of each cardinality `0 ..= dim+1`.
    pub fn face_counts(&self) -> Vec<usize> {
        self.face_table().by_card.iter().map(|v| v.len()).collect()
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &VertexSet> {
        self.face_table().by_card.iter().flatten()
    }

    /// Missing faces: minimal non-faces, sorted by cardinality then mask.
    ///
    /// Enumerated by increasing cardinality; a candidate is a face plus one
    /// vertex whose proper subsets are all faces. Cardinality is capped at
    /// `dim + 2`, the largest a minimal non-face can have.
    pub fn missing_faces(&self) -> &[VertexSet] {
        self.missing.get_or_init(|| {
            let n = self.labels.len();
            let mut out: Vec<VertexSet> = Vec::new();
            let mut seen: HashSet<VertexSet> = HashSet::new();
            for c in 2..=(self.dim + 2) as usize {
                if c > n {
                    break;
                }
                for base in self.faces_of_card(c - 1) {
                    for w in 0..n {
                        if base.contains(w) {
                            continue;
                        }
                        let cand = base.with(w);
                        if self.is_face(&cand) || seen.contains(&cand) {
                            continue;
                        }
                        seen.insert(cand);
                        if cand.proper_cofacets().all(|sub| self.is_face(&sub)) {
                            out.push(cand);
                        }
                    }
                }
            }
            out.sort_unstable_by_key(|s| (s.card(), *s));
            out
        })
    }

    /// Largest dimension of a missing face; 0 when there are none.
    pub fn max_missing_dim(&self) -> usize {
        self.missing_faces()
            .last()
            .map(|s| s.card() - 1)
            .unwrap_or(0)
    }

    /// The maximal complex on `labels` avoiding the given minimal non-faces.
    ///
    /// Inverse of [`Complex::missing_faces`]: a vertex set is a face exactly
    /// when it contains no listed non-face.
    pub fn from_non_faces(labels: Vec<String>, non_faces: Vec<Vec<String>>) -> Result<Complex> {
        if labels.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(labels.len()));
        }
        let mut sorted = labels;
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateLabel(w[0].clone()));
            }
        }
        let mut forbidden: HashSet<VertexSet> = HashSet::new();
        for nf in &non_faces {
            let mut s = VertexSet::EMPTY;
            for l in nf {
                let i = sorted
                    .binary_search_by(|probe| probe.as_str().cmp(l.as_str()))
                    .map_err(|_| Error::UnknownLabel(l.clone()))?;
                s.insert(i);
            }
            if s.card() < 2 {
                return Err(Error::BadParameters(
                    "a minimal non-face needs at least two vertices".into(),
                ));
            }
            forbidden.insert(s);
        }
        let n = sorted.len();
        // Grow faces level by level: every subset of a face one level down
        // must already be a face, and the set itself must not be forbidden.
        let mut levels: Vec<Vec<VertexSet>> = vec![vec![VertexSet::EMPTY]];
        let mut level_set: HashSet<VertexSet> = levels[0].iter().copied().collect();
        let mut all: Vec<VertexSet> = vec![VertexSet::EMPTY];
        for c in 1..=n {
            let mut next: BTreeSet<VertexSet> = BTreeSet::new();
            for base in &levels[c - 1] {
                let start = base.max_index().map_or(0, |m| m + 1);
                for w in start..n {
                    let cand = base.with(w);
                    if forbidden.contains(&cand) {
                        continue;
                    }
                    if cand.proper_cofacets().all(|sub| level_set.contains(&sub)) {
                        next.insert(cand);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            let next: Vec<VertexSet> = next.into_iter().collect();
            level_set = next.iter().copied().collect();
            all.extend(next.iter().copied());
            levels.push(next);
        }
        let facets = maximalize(all);
        if facets == vec![VertexSet::EMPTY] && sorted.is_empty() {
            return Ok(Complex::empty());
        }
        Ok(Complex::new_unchecked(sorted, facets))
    }

    /// `lk(τ) = {σ : σ ∩ τ = ∅, σ ∪ τ ∈ Δ}` as a complex on its own vertices.
    pub fn link(&self, tau: &VertexSet) -> Result<Complex> {
        if !self.is_face(tau) {
            return Err(Error::NotAFace(self.set_labels(tau).join(" ")));
        }
        let sets: Vec<VertexSet> = self
            .facets
            .iter()
            .filter(|f| tau.is_subset(f))
            .map(|f| f.difference(tau))
            .collect();
        Ok(Complex::subcomplex(self, sets))
    }

    /// `st(τ) = {σ : σ ∪ τ ∈ Δ}`; its facets are the facets containing `τ`.
    pub fn star(&self, tau: &VertexSet) -> Result<Complex> {
        if !self.is_face(tau) {
            return Err(Error::NotAFace(self.set_labels(tau).join(" ")));
        }
        let sets: Vec<VertexSet> = self
            .facets
            .iter()
            .filter(|f| tau.is_subset(f))
            .copied()
            .collect();
        Ok(Complex::subcomplex(self, sets))
    }

    /// Antistar `Δ \ v`: all faces avoiding the vertex `v`.
    pub fn antistar(&self, v: &VertexSet) -> Result<Complex> {
        if v.card() != 1 {
            return Err(Error::BadParameters(
                "antistar expects a single vertex".into(),
            ));
        }
        if !self.is_face(v) {
            return Err(Error::NotAFace(self.set_labels(v).join(" ")));
        }
        let w = v.max_index().unwrap();
        let sets: Vec<VertexSet> = self.facets.iter().map(|f| f.without(w)).collect();
        Ok(Complex::subcomplex(self, sets))
    }

    /// Induced subcomplex on the vertex set `w`.
    pub fn induced(&self, w: &VertexSet) -> Complex {
        let sets: Vec<VertexSet> = self.facets.iter().map(|f| f.intersection(w)).collect();
        Complex::subcomplex(self, sets)
    }

    /// Join of two complexes on disjoint label sets.
    pub fn join(&self, other: &Complex) -> Result<Complex> {
        for l in &other.labels {
            if self.labels.binary_search(l).is_ok() {
                return Err(Error::LabelCollision(l.clone()));
            }
        }
        let mut labels: Vec<String> = self
            .labels
            .iter()
            .chain(other.labels.iter())
            .cloned()
            .collect();
        labels.sort();
        if labels.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(labels.len()));
        }
        let remap = |cx: &Complex, s: &VertexSet| -> VertexSet {
            s.iter()
                .map(|v| labels.binary_search(&cx.labels[v]).unwrap())
                .collect()
        };
        let mut facets: Vec<VertexSet> = Vec::with_capacity(self.facets.len() * other.facets.len());
        for f in &self.facets {
            let fm = remap(self, f);
            for g in &other.facets {
                facets.push(fm.union(&remap(other, g)));
            }
        }
        facets.sort_unstable();
        facets.dedup();
        Ok(Complex::new_unchecked(labels, facets))
    }

    /// The `k`-skeleton: all faces of dimension at most `k`.
    pub fn skeleton(&self, k: isize) -> Result<Complex> {
        if k < -1 {
            return Err(Error::BadParameters("skeleton dimension below -1".into()));
        }
        if k >= self.dim {
            return Ok(self.clone());
        }
        if k == -1 {
            return Ok(Complex::empty());
        }
        let card = (k + 1) as usize;
        let mut sets: Vec<VertexSet> = self.faces_of_card(card).to_vec();
        sets.extend(self.facets.iter().filter(|f| f.card() < card).copied());
        Ok(Complex::subcomplex(self, sets))
    }

    /// Boundary of a pure complex: the closure of the ridges lying in exactly
    /// one facet. Returns `{∅}` when there is no boundary.
    pub fn boundary(&self) -> Result<Complex> {
        if !self.pure {
            return Err(Error::NotPure);
        }
        if self.dim < 0 {
            return Ok(Complex::empty());
        }
        let ridge_card = self.dim as usize;
        let mut boundary_ridges: Vec<VertexSet> = Vec::new();
        for ridge in self.faces_of_card(ridge_card) {
            let count = self.facets.iter().filter(|f| ridge.is_subset(f)).count();
            if count == 1 {
                boundary_ridges.push(*ridge);
            }
        }
        if boundary_ridges.is_empty() {
            return Ok(Complex::empty());
        }
        Ok(Complex::subcomplex(self, boundary_ridges))
    }

    /// Contract the edge `uv` into the vertex keeping `u`'s label.
    ///
    /// Only allowed when `uv` lies in no missing face; every face meeting
    /// `{u, v}` is replaced by its image under `u, v ↦ u`.
    pub fn contract_edge(&self, u: &str, v: &str) -> Result<Complex> {
        let ui = self.index_of(u)?;
        let vi = self.index_of(v)?;
        let edge = VertexSet::from_indices([ui, vi]);
        if edge.card() != 2 || !self.is_face(&edge) {
            return Err(Error::NotAnEdge(u.to_string(), v.to_string()));
        }
        if self.missing_faces().iter().any(|m| edge.is_subset(m)) {
            return Err(Error::NotContractible(u.to_string(), v.to_string()));
        }
        let sets: Vec<VertexSet> = self
            .facets
            .iter()
            .map(|f| {
                if f.contains(ui) || f.contains(vi) {
                    f.without(vi).with(ui)
                } else {
                    *f
                }
            })
            .collect();
        Ok(Complex::subcomplex(self, sets))
    }

    /// Boundary of the `j`-simplex on fresh labels `prefix1 ... prefix{j+1}`.
    pub fn simplex_boundary(j: usize, prefix: &str) -> Result<Complex> {
        if j == 0 {
            return Err(Error::BadParameters(
                "simplex boundary needs dimension at least 1".into(),
            ));
        }
        let labels: Vec<String> = (1..=j + 1).map(|i| format!("{prefix}{i}")).collect();
        let facets: Vec<Vec<String>> = (0..=j)
            .map(|omit| {
                labels
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != omit)
                    .map(|(_, l)| l.clone())
                    .collect()
            })
            .collect();
        Complex::from_facets(labels, facets)
    }

    /// The full `j`-simplex on fresh labels.
    pub fn simplex(j: usize, prefix: &str) -> Result<Complex> {
        let labels: Vec<String> = (1..=j + 1).map(|i| format!("{prefix}{i}")).collect();
        Complex::from_facets(labels.clone(), vec![labels])
    }

    /// The `m`-cycle `prefix1 - prefix2 - ... - prefixm - prefix1`.
    pub fn cycle(m: usize, prefix: &str) -> Result<Complex> {
        if m < 3 {
            return Err(Error::BadParameters("a cycle needs at least 3 vertices".into()));
        }
        let labels: Vec<String> = (1..=m).map(|i| format!("{prefix}{i}")).collect();
        let facets: Vec<Vec<String>> = (0..m)
            .map(|i| vec![labels[i].clone(), labels[(i + 1) % m].clone()])
            .collect();
        Complex::from_facets(labels, facets)
    }

    /// The sphere `K(i, d-1)`: with `d = q·i + r`, `1 ≤ r ≤ i`, the join of
    /// `q` copies of `∂σ^i` and one `∂σ^r`, each on fresh labels.
    pub fn construct_k(i: usize, d: usize) -> Result<Complex> {
        if i < 1 || d < 1 {
            return Err(Error::BadParameters(format!(
                "construct_k needs i >= 1 and d >= 1, got i={i}, d={d}"
            )));
        }
        let r = (d - 1) % i + 1;
        let q = (d - r) / i;
        let mut dims: Vec<usize> = vec![i; q];
        dims.push(r);
        let mut result: Option<Complex> = None;
        for (t, &dim) in dims.iter().enumerate() {
            let factor = Complex::simplex_boundary(dim, &factor_prefix(t))?;
            result = Some(match result {
                None => factor,
                Some(acc) => acc.join(&factor)?,
            });
        }
        Ok(result.unwrap())
    }

    /// A stacked `(d-1)`-sphere with `n` vertices: repeatedly subdivide the
    /// lexicographically first facet of `∂σ^d` with a fresh vertex.
    pub fn connected_sum_stacked(d: usize, n: usize) -> Result<Complex> {
        if d < 1 || n < d + 1 {
            return Err(Error::BadParameters(format!(
                "stacked sphere needs n >= d+1, got d={d}, n={n}"
            )));
        }
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let mut cx = Complex::simplex_boundary(d, "v")?;
        for next in d + 2..=n {
            let facet_labels: Vec<Vec<String>> = {
                let mut fl: Vec<Vec<String>> = cx
                    .facets
                    .iter()
                    .map(|f| cx.set_labels(f))
                    .collect();
                fl.sort();
                fl
            };
            let target = facet_labels[0].clone();
            let fresh = format!("v{next}");
            let mut new_facets: Vec<Vec<String>> = facet_labels[1..].to_vec();
            for omit in 0..target.len() {
                let mut g: Vec<String> = target
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != omit)
                    .map(|(_, l)| l.clone())
                    .collect();
                g.push(fresh.clone());
                new_facets.push(g);
            }
            let mut labels: Vec<String> = cx.labels.clone();
            labels.push(fresh);
            cx = Complex::from_facets(labels, new_facets)?;
        }
        Ok(cx)
    }
}

/// Deterministic per-factor label prefixes: a, b, ..., z, aa, ab, ...
fn factor_prefix(t: usize) -> String {
    let mut t = t;
    let mut out = String::new();
    loop {
        out.insert(0, (b'a' + (t % 26) as u8) as char);
        if t < 26 {
            break;
        }
        t = t / 26 - 1;
    }
    out
}
