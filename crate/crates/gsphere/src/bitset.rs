//! Fixed-width vertex sets.
//!
//! A face of a complex on at most 128 vertices fits in a `u128`, which makes
//! subset tests, unions and intersections single machine operations. All face
//! bookkeeping in this crate goes through [`VertexSet`].

/// Maximum number of vertex slots a complex may use.
pub const MAX_VERTICES: usize = 128;

/// A set of vertex indices, stored as a 128-bit mask.
///
/// The natural `Ord` on the mask is used as the internal canonical order for
/// face lists; it is deterministic but unrelated to label order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1u128 << v)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < MAX_VERTICES);
        self.0 |= 1u128 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u128 << v);
    }

    pub fn contains(&self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Number of vertices in the set.
    pub fn card(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn with(&self, v: usize) -> VertexSet {
        let mut s = *self;
        s.insert(v);
        s
    }

    pub fn without(&self, v: usize) -> VertexSet {
        let mut s = *self;
        s.remove(v);
        s
    }

    pub fn max_index(&self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(127 - self.0.leading_zeros() as usize)
        }
    }

    /// Iterate vertex indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets obtained by deleting exactly one vertex.
    pub fn proper_cofacets(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.iter().map(move |v| self.without(v))
    }

    /// All subsets of the set (including itself and the empty set), via the
    /// standard descending submask walk.
    pub fn subsets(&self) -> impl Iterator<Item = VertexSet> {
        let full = self.0;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 {
                None
            } else {
                Some(cur.wrapping_sub(1) & full)
            };
            Some(VertexSet(cur))
        })
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_indices(iter)
    }
}
