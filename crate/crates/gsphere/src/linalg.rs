//! Exact linear algebra over the rationals.
//!
//! Everything is computed with big integers: rows are cleared of denominators
//! up front, elimination uses fraction-free two-term updates, and every
//! updated row is divided by the gcd of its entries to keep growth in check.
//! Pivots are chosen among candidate rows by smallest bit length, which keeps
//! intermediate entries small; any choice would give the same (exact) answers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;
/// Exact integer scalar.
pub type Z = BigInt;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

/// A dense matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Q>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn from_rows(data: Vec<Vec<Q>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        assert!(data.iter().all(|r| r.len() == cols));
        RationalMatrix { rows, cols, data }
    }

    /// Small integer literals, for tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q_int(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Q::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Q) {
        self.data[r][c] = value;
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Q::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    /// Rank via integer echelon form.
    pub fn rank(&self) -> usize {
        let int = self.to_integer_rows();
        reduce(int, self.cols, false).pivots.len()
    }

    /// Basis of the right kernel, each vector scaled so its first nonzero
    /// entry is 1. The basis has `cols - rank` elements.
    ///
    /// Kernel vectors are found by modular elimination and rational
    /// reconstruction, then certified exactly: every candidate is verified
    /// against the full matrix over the integers, and a modular rank can
    /// only underestimate the true rank, so `cols - rank_p` verified
    /// independent vectors are guaranteed to span the kernel. Any failure
    /// falls back to [`RationalMatrix::kernel_basis_exact`].
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        if let Some(basis) = self.kernel_basis_modular() {
            return basis;
        }
        self.kernel_basis_exact()
    }

    /// Pure fraction-free elimination path; the oracle for the modular
    /// fast path and its fallback.
    pub fn kernel_basis_exact(&self) -> Vec<Vec<Q>> {
        let int = self.to_integer_rows();
        let red = reduce(int, self.cols, true);
        let mut is_pivot = vec![false; self.cols];
        for &c in &red.pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (r, &p) in red.pivots.iter().enumerate() {
                if p >= free {
                    break;
                }
                if let Some(e) = entry_at(&red.rows[r], free) {
                    let pivot = entry_at(&red.rows[r], p).unwrap();
                    v[p] = -Q::new(e.clone(), pivot.clone());
                }
            }
            normalize_first_nonzero(&mut v);
            debug_assert!(self.mul_vec(&v).iter().all(|x| x.is_zero()));
            basis.push(v);
        }
        basis
    }

    /// Any solution of `M x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut augmented = self.clone();
        augmented.cols += 1;
        for (row, rhs) in augmented.data.iter_mut().zip(b) {
            row.push(rhs.clone());
        }
        let int = augmented.to_integer_rows();
        let red = reduce(int, augmented.cols, true);
        if red.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &p) in red.pivots.iter().enumerate() {
            let pivot = entry_at(&red.rows[r], p).unwrap();
            if let Some(rhs) = entry_at(&red.rows[r], self.cols) {
                x[p] = Q::new(rhs.clone(), pivot.clone());
            }
        }
        debug_assert_eq!(&self.mul_vec(&x), b);
        Some(x)
    }

    /// Modular kernel computation with exact certification; `None` when the
    /// attempt fails and the caller should use the exact path.
    fn kernel_basis_modular(&self) -> Option<Vec<Vec<Q>>> {
        if self.cols == 0 {
            return Some(Vec::new());
        }
        let int = self.to_integer_rows();
        let mut primes = PrimeStream::new();
        let first = primes.next().unwrap();
        let lead = ModKernel::compute(&int, self.cols, first)?;
        // Accumulated CRT residues per kernel vector entry, plus modulus.
        let mut residues: Vec<Vec<Z>> = lead
            .vectors
            .iter()
            .map(|v| v.iter().map(|&x| Z::from(x)).collect())
            .collect();
        let mut modulus = Z::from(first);
        let mut batch = 4usize;
        let mut mismatches = 0usize;
        let mut prev_modulus = Z::one();
        loop {
            if let Some(basis) =
                reconstruct_and_verify(&int, &residues, &modulus, &prev_modulus)
            {
                return Some(basis);
            }
            for _ in 0..batch {
                let p = primes.next()?;
                let Some(kern) = ModKernel::compute(&int, self.cols, p) else {
                    continue;
                };
                if kern.pivots != lead.pivots {
                    mismatches += 1;
                    if mismatches > 4 {
                        return None;
                    }
                    continue;
                }
                let p_big = Z::from(p);
                let inv = mod_inverse(&modulus, p);
                for (acc, fresh) in residues.iter_mut().zip(&kern.vectors) {
                    for (r, &x) in acc.iter_mut().zip(fresh) {
                        // CRT lift: r + modulus * ((x - r) * modulus^-1 mod p)
                        let r_mod_p = mod_reduce(r, p);
                        let delta = mul_mod(x + p - r_mod_p, inv, p);
                        *r += &modulus * Z::from(delta);
                    }
                }
                prev_modulus = modulus.clone();
                modulus *= p_big;
            }
            batch = (batch * 2).min(24);
            if modulus.bits() > 40_000 {
                return None;
            }
        }
    }

    /// Clear denominators row by row and strip common integer factors.
    fn to_integer_rows(&self) -> Vec<SparseRow> {
        self.data
            .iter()
            .map(|row| {
                let lcm = row
                    .iter()
                    .filter(|x| !x.is_zero())
                    .fold(Z::one(), |acc, x| acc.lcm(x.denom()));
                let mut int_row: SparseRow = row
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(c, x)| (c, x.numer() * (&lcm / x.denom())))
                    .collect();
                strip_gcd(&mut int_row);
                int_row
            })
            .collect()
    }
}

/// A row stored as sorted `(column, nonzero entry)` pairs.
type SparseRow = Vec<(usize, Z)>;

struct Reduced {
    /// Pivot rows in echelon order, sparse.
    rows: Vec<SparseRow>,
    pivots: Vec<usize>,
}

fn entry_at(row: &SparseRow, col: usize) -> Option<&Z> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

/// An active row together with the pivot value of the step that last
/// updated it, the expected exact divisor of the next two-term update.
struct ActiveRow {
    row: SparseRow,
    divisor: Z,
}

/// Sparse integer echelon form; with `back` also eliminates above pivots.
///
/// Rows are processed column by column. Because earlier columns are already
/// eliminated, the candidates for a pivot at column `c` are exactly the
/// active rows whose leading entry sits at `c`; the one with the smallest
/// leading bit length (ties: fewest entries) becomes the pivot.
fn reduce(rows: Vec<SparseRow>, cols: usize, back: bool) -> Reduced {
    let mut active: Vec<ActiveRow> = rows
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|row| ActiveRow {
            row,
            divisor: Z::one(),
        })
        .collect();
    let mut pivot_rows: Vec<SparseRow> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..cols {
        if active.is_empty() {
            break;
        }
        let candidate = active
            .iter()
            .enumerate()
            .filter(|(_, r)| r.row[0].0 == col)
            .min_by_key(|(_, r)| (r.row[0].1.magnitude().bits(), r.row.len()))
            .map(|(i, _)| i);
        let Some(idx) = candidate else { continue };
        let pivot_row = active.swap_remove(idx).row;
        let pivot_value = pivot_row[0].1.clone();
        for row in active.iter_mut() {
            if row.row[0].0 == col {
                row.row = combine(&row.row, &pivot_row, col, &row.divisor);
                row.divisor = pivot_value.clone();
            }
        }
        active.retain(|r| !r.row.is_empty());
        pivot_rows.push(pivot_row);
        pivots.push(col);
    }
    if back {
        let mut divisors: Vec<Z> = vec![Z::one(); pivots.len()];
        for r in (0..pivots.len()).rev() {
            let col = pivots[r];
            let source = pivot_rows[r].clone();
            let pivot_value = entry_at(&source, col).unwrap().clone();
            for above in 0..r {
                if entry_at(&pivot_rows[above], col).is_some() {
                    pivot_rows[above] =
                        combine(&pivot_rows[above], &source, col, &divisors[above]);
                    divisors[above] = pivot_value.clone();
                }
            }
        }
    }
    Reduced {
        rows: pivot_rows,
        pivots,
    }
}

/// `pivot * target - target[col] * source`, then divided down: by the
/// tracked `divisor` when that division is exact (the fraction-free case),
/// and by the gcd of the remaining entries either way.
fn combine(target: &SparseRow, source: &SparseRow, col: usize, divisor: &Z) -> SparseRow {
    let factor = entry_at(target, col).expect("target lacks elimination column");
    let pivot = entry_at(source, col).expect("source lacks pivot entry");
    let mut out: SparseRow = Vec::with_capacity(target.len() + source.len());
    let mut i = 0;
    let mut j = 0;
    while i < target.len() || j < source.len() {
        let next_t = target.get(i).map(|(c, _)| *c);
        let next_s = source.get(j).map(|(c, _)| *c);
        let (c, value) = match (next_t, next_s) {
            (Some(ct), Some(cs)) if ct == cs => {
                let v = &target[i].1 * pivot - &source[j].1 * factor;
                i += 1;
                j += 1;
                (ct, v)
            }
            (Some(ct), Some(cs)) if ct < cs => {
                let v = &target[i].1 * pivot;
                i += 1;
                (ct, v)
            }
            (Some(ct), None) => {
                let v = &target[i].1 * pivot;
                i += 1;
                (ct, v)
            }
            (_, Some(cs)) => {
                let v = -(&source[j].1 * factor);
                j += 1;
                (cs, v)
            }
            (None, None) => unreachable!(),
        };
        if !value.is_zero() {
            out.push((c, value));
        }
    }
    if !divisor.is_one() && out.iter().all(|(_, x)| x.is_multiple_of(divisor)) {
        for (_, x) in out.iter_mut() {
            *x = &*x / divisor;
        }
    }
    strip_gcd(&mut out);
    out
}

fn strip_gcd(row: &mut SparseRow) {
    let mut g = Z::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, x) in row.iter_mut() {
        *x = &*x / &g;
    }
}

/// Scale a vector so that its first nonzero entry equals 1.
pub fn normalize_first_nonzero(v: &mut [Q]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x / &first;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Modular fast path for kernel computation.
// ---------------------------------------------------------------------------

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == small {
            return true;
        }
        if n.is_multiple_of(small) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending stream of primes just below 2^62.
struct PrimeStream {
    next_candidate: u64,
}

impl PrimeStream {
    fn new() -> Self {
        PrimeStream {
            next_candidate: (1 << 62) - 1,
        }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.next_candidate > (1 << 61) {
            let c = self.next_candidate;
            self.next_candidate -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    }
}

fn mod_reduce(x: &Z, p: u64) -> u64 {
    use num_integer::Integer as _;
    let r = x.mod_floor(&Z::from(p));
    let (_, digits) = r.to_u64_digits();
    *digits.first().unwrap_or(&0)
}

/// Montgomery arithmetic modulo an odd prime below 2^63.
struct Mont {
    p: u64,
    neg_p_inv: u64,
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Mont {
        debug_assert!(p % 2 == 1 && p < 1 << 63);
        // Newton iteration for p^-1 mod 2^64.
        let mut inv = p;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r_mod_p = (u64::MAX % p) + 1;
        let r2 = ((r_mod_p as u128 * r_mod_p as u128) % p as u128) as u64;
        Mont {
            p,
            neg_p_inv: inv.wrapping_neg(),
            r2,
        }
    }

    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_p_inv);
        let reduced = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if reduced >= self.p {
            reduced - self.p
        } else {
            reduced
        }
    }

    fn to_mont(&self, x: u64) -> u64 {
        self.redc(x as u128 * self.r2 as u128)
    }

    fn demont(&self, x: u64) -> u64 {
        self.redc(x as u128)
    }

    /// Product of two values in Montgomery form.
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }
}

/// RREF kernel of the integer matrix modulo `p`: pivot columns plus one
/// kernel vector per free column (unit at that column). `None` on the rare
/// degenerate prime (a pivot normalization hits zero).
struct ModKernel {
    pivots: Vec<usize>,
    vectors: Vec<Vec<u64>>,
}

impl ModKernel {
    fn compute(int_rows: &[SparseRow], cols: usize, p: u64) -> Option<ModKernel> {
        let mont = Mont::new(p);
        let mut rows: Vec<Vec<u64>> = int_rows
            .iter()
            .map(|r| {
                let mut dense = vec![0u64; cols];
                for (c, x) in r {
                    dense[*c] = mont.to_mont(mod_reduce(x, p));
                }
                dense
            })
            .collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut next = 0usize;
        for col in 0..cols {
            let Some(found) = (next..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(next, found);
            let inv = mont.to_mont(inv_mod(mont.demont(rows[next][col]), p));
            for cell in rows[next][col..].iter_mut() {
                *cell = mont.mul(*cell, inv);
            }
            let (before, rest) = rows.split_at_mut(next);
            let (pivot_slice, after) = rest.split_first_mut().unwrap();
            for row in before.iter_mut().chain(after.iter_mut()) {
                if row[col] != 0 {
                    let factor = row[col];
                    for (cell, pivot_cell) in row[col..].iter_mut().zip(&pivot_slice[col..]) {
                        let sub = mont.mul(factor, *pivot_cell);
                        let x = *cell + p - sub;
                        *cell = if x >= p { x - p } else { x };
                    }
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        let mut vectors = Vec::new();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for free in 0..cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                if pc < free {
                    v[pc] = (p - mont.demont(rows[r][free])) % p;
                }
            }
            vectors.push(v);
        }
        Some(ModKernel { pivots, vectors })
    }
}

fn mod_inverse(modulus: &Z, p: u64) -> u64 {
    inv_mod(mod_reduce(modulus, p), p)
}

fn isqrt(n: &Z) -> Z {
    num_integer::Roots::sqrt(n)
}

/// Rational reconstruction of `r mod m`: the unique `a/b` with
/// `|a|, b <= sqrt(m/2)`, when it exists.
fn rational_reconstruct(r: &Z, m: &Z) -> Option<Q> {
    let bound = isqrt(&(m / Z::from(2)));
    let mut r0 = m.clone();
    let mut r1 = r.clone();
    let mut t0 = Z::zero();
    let mut t1 = Z::one();
    while r1.magnitude() > bound.magnitude() {
        if r1.is_zero() {
            return None;
        }
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.magnitude() > bound.magnitude() {
        return None;
    }
    let (num, den) = if t1 < Z::zero() { (-r1, -t1) } else { (r1, t1) };
    if den.is_zero() {
        return None;
    }
    Some(Q::new(num, den))
}

/// Try to turn CRT residues into exact kernel vectors; verify each candidate
/// against the full matrix. `None` means "not enough primes yet".
///
/// Each entry must reconstruct to the same rational under the current and
/// the previous modulus (a cheap stability test that rejects premature
/// reconstructions at the first entry), and every surviving vector is then
/// certified exactly over the integers.
fn reconstruct_and_verify(
    int_rows: &[SparseRow],
    residues: &[Vec<Z>],
    modulus: &Z,
    prev_modulus: &Z,
) -> Option<Vec<Vec<Q>>> {
    use num_integer::Integer as _;
    if prev_modulus.is_one() {
        return None;
    }
    let mut basis = Vec::with_capacity(residues.len());
    for entry_row in residues {
        let mut v = Vec::with_capacity(entry_row.len());
        for r in entry_row {
            let full = rational_reconstruct(r, modulus)?;
            let prev = rational_reconstruct(&r.mod_floor(prev_modulus), prev_modulus)?;
            if full != prev {
                return None;
            }
            v.push(full);
        }
        if !verify_integer_kernel(int_rows, &v) {
            return None;
        }
        normalize_first_nonzero(&mut v);
        basis.push(v);
    }
    Some(basis)
}

/// Exact certificate: clear denominators and check every row dot product
/// vanishes over the integers.
fn verify_integer_kernel(int_rows: &[SparseRow], v: &[Q]) -> bool {
    let lcm = v
        .iter()
        .filter(|x| !x.is_zero())
        .fold(Z::one(), |acc, x| acc.lcm(x.denom()));
    let cleared: Vec<Z> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    int_rows.iter().all(|row| {
        let mut acc = Z::zero();
        for (c, coeff) in row {
            if !cleared[*c].is_zero() {
                acc += coeff * &cleared[*c];
            }
        }
        acc.is_zero()
    })
}
