//! Dense GF(2) vectors and the span/solve machinery shared by the chain
//! complexes, the stabilizer engine and the decoders.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

/// Fixed-length bit vector packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; word_count(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec { len, words: vec![!0; word_count(len)] };
        v.mask_tail();
        v
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, idx: I) -> Self {
        let mut v = BitVec::zeros(len);
        for i in idx {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters; whitespace is ignored.
    pub fn from_str01(s: &str) -> Option<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.map(|b| BitVec::from_bools(&b))
    }

    fn mask_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i & 63);
        if b {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Iterator over the indices of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl BitXorAssign<&BitVec> for BitVec {
    fn bitxor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.len, rhs.len, "bit vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitVec> for &BitVec {
    type Output = BitVec;
    fn bitxor(self, rhs: &BitVec) -> BitVec {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Incrementally built echelon basis of a span of vectors, remembering how
/// each basis row is composed from the inserted generators.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    dim: usize,
    generators: usize,
    track: bool,
    rows: Vec<BasisRow>,
}

#[derive(Clone, Debug)]
struct BasisRow {
    pivot: usize,
    vec: BitVec,
    combo: BitVec,
}

impl SpanBasis {
    /// Empty basis in GF(2)^dim. With `track` set, solves report which
    /// generators combine to the target.
    pub fn new(dim: usize, track: bool) -> Self {
        SpanBasis { dim, generators: 0, track, rows: Vec::new() }
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a BitVec>>(dim: usize, vecs: I, track: bool) -> Self {
        let vecs: Vec<&BitVec> = vecs.into_iter().collect();
        let mut b = SpanBasis::new(dim, track);
        b.generators = vecs.len();
        for (g, v) in vecs.into_iter().enumerate() {
            b.insert_with_index(v, g);
        }
        b
    }

    fn insert_with_index(&mut self, v: &BitVec, g: usize) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut vec = v.clone();
        let mut combo = if self.track { BitVec::from_indices(self.generators, [g]) } else { BitVec::zeros(0) };
        for row in &self.rows {
            if vec.get(row.pivot) {
                vec ^= &row.vec;
                if self.track {
                    combo ^= &row.combo;
                }
            }
        }
        match vec.first_one() {
            Some(pivot) => {
                self.rows.push(BasisRow { pivot, vec, combo });
                true
            }
            None => false,
        }
    }

    /// Adds a vector; returns whether it was independent of the current span.
    /// Only valid for untracked bases.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert!(!self.track, "tracked bases are built with from_vectors");
        self.insert_with_index(v, 0)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the basis, returning the remainder and, when
    /// tracking, the generator combination that was subtracted.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut rem = v.clone();
        let mut combo = BitVec::zeros(if self.track { self.generators } else { 0 });
        for row in &self.rows {
            if rem.get(row.pivot) {
                rem ^= &row.vec;
                if self.track {
                    combo ^= &row.combo;
                }
            }
        }
        (rem, combo)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Finds a generator combination summing to `v`, if one exists.
    pub fn solve(&self, v: &BitVec) -> Option<BitVec> {
        assert!(self.track, "solve requires a tracked basis");
        let (rem, combo) = self.reduce(v);
        rem.is_zero().then_some(combo)
    }

    /// The reduced basis vectors.
    pub fn basis(&self) -> impl Iterator<Item = &BitVec> {
        self.rows.iter().map(|r| &r.vec)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.pivot)
    }
}

/// Row-major GF(2) matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        BitMatrix { cols, rows }
    }

    /// Builds a matrix from strings of `0`/`1`.
    pub fn from_strs(rows: &[&str]) -> Option<Self> {
        let rows: Option<Vec<BitVec>> = rows.iter().map(|s| BitVec::from_str01(s)).collect();
        let rows = rows?;
        let cols = rows.first().map_or(0, BitVec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(BitMatrix { cols, rows })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.rows[r].set(c, b)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// Matrix-vector product `M v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        BitVec::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.num_rows(), "inner dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(other.cols);
                for k in r.iter_ones() {
                    acc ^= &other.rows[k];
                }
                acc
            })
            .collect();
        BitMatrix { cols: other.cols, rows }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        SpanBasis::from_vectors(self.cols, &self.rows, false).rank()
    }

    /// Basis of the null space {v : M v = 0}.
    pub fn kernel(&self) -> Vec<BitVec> {
        let mut rows: Vec<BitVec> = self.rows.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else { continue };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    *row ^= &pivot_row;
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::zeros(self.cols);
                v.set(f, true);
                for (i, &c) in pivots.iter().enumerate() {
                    if rows[i].get(f) {
                        v.set(c, true);
                    }
                }
                v
            })
            .collect()
    }
}

/// Finds `x` with `rows[i]·x = rhs[i]` for every `i`, free variables set to 0.
pub fn solve_linear(rows: &[BitVec], rhs: &BitVec) -> Option<BitVec> {
    assert_eq!(rows.len(), rhs.len(), "right-hand side length mismatch");
    let cols = rows.first().map_or(0, BitVec::len);
    let mut a: Vec<(BitVec, bool)> = rows.iter().cloned().zip(rhs.to_bools()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i].0.get(c)) else { continue };
        a.swap(r, p);
        let (pv, pb) = a[r].clone();
        for (i, (row, b)) in a.iter_mut().enumerate() {
            if i != r && row.get(c) {
                *row ^= &pv;
                *b ^= pb;
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    if a[r..].iter().any(|(_, b)| *b) {
        return None;
    }
    let mut x = BitVec::zeros(cols);
    for (i, &c) in pivots.iter().enumerate() {
        if a[i].1 {
            x.set(c, true);
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_and_dot() {
        let a = BitVec::from_indices(70, [0, 5, 64, 69]);
        let b = BitVec::from_indices(70, [5, 69]);
        assert!(!a.dot(&b));
        let c = &a ^ &b;
        assert_eq!(c.iter_ones().collect::<Vec<_>>(), vec![0, 64]);
        assert_eq!(BitVec::ones(70).count_ones(), 70);
    }

    #[test]
    fn span_solve_roundtrip() {
        let gens = vec![
            BitVec::from_str01("1100").unwrap(),
            BitVec::from_str01("0110").unwrap(),
            BitVec::from_str01("1010").unwrap(),
        ];
        let basis = SpanBasis::from_vectors(4, &gens, true);
        assert_eq!(basis.rank(), 2);
        let target = BitVec::from_str01("1010").unwrap();
        let combo = basis.solve(&target).unwrap();
        let mut acc = BitVec::zeros(4);
        for g in combo.iter_ones() {
            acc ^= &gens[g];
        }
        assert_eq!(acc, target);
        assert!(basis.solve(&BitVec::from_str01("1000").unwrap()).is_none());
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = BitMatrix::from_strs(&["1010101", "0110011", "0001111"]).unwrap();
        let ker = m.kernel();
        assert_eq!(ker.len(), 4);
        for v in &ker {
            assert!(m.mul_vec(v).is_zero());
        }
        assert_eq!(SpanBasis::from_vectors(7, &ker, false).rank(), 4);
    }

    #[test]
    fn linear_solve() {
        let rows = vec![BitVec::from_str01("110").unwrap(), BitVec::from_str01("011").unwrap()];
        let rhs = BitVec::from_str01("10").unwrap();
        let x = solve_linear(&rows, &rhs).unwrap();
        assert!(rows[0].dot(&x));
        assert!(!rows[1].dot(&x));
        let dup = vec![rows[0].clone(), rows[0].clone()];
        assert!(solve_linear(&dup, &BitVec::from_str01("10").unwrap()).is_none());
    }
}
