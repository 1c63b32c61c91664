//! Bit-packed linear algebra over F2.

use std::fmt;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Fixed-length vector over F2, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in idx {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `mask`, bit i of the mask becoming entry i.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            let keep = if len == WORD { !0 } else { (1u64 << len) - 1 };
            v.words[0] = mask & keep;
        }
        v
    }

    /// Inverse of [`BitVec::from_mask`]; panics on vectors longer than 64.
    pub fn to_mask(&self) -> u64 {
        assert!(self.len <= WORD);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        let mut v = self.clone();
        v.and_assign(other);
        v
    }

    pub fn or(&self, other: &BitVec) -> BitVec {
        let mut v = self.clone();
        v.or_assign(other);
        v
    }

    /// Entries of `self` not in `other`.
    pub fn and_not(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len);
        let mut v = self.clone();
        for (a, b) in v.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        v
    }

    /// Inner product over F2.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Entries at the given positions, in order.
    pub fn select(&self, idx: &[usize]) -> BitVec {
        let mut v = BitVec::zeros(idx.len());
        for (k, &i) in idx.iter().enumerate() {
            if self.get(i) {
                v.set(k, true);
            }
        }
        v
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}

/// Dense matrix over F2 stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged rows");
        }
        BitMatrix { cols, rows }
    }

    /// Build from nested 0/1 slices; handy in tests.
    pub fn from_u8(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                BitVec::from_bools(&r.iter().map(|&b| b != 0).collect::<Vec<_>>())
            })
            .collect();
        BitMatrix { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.rows[r].set(c, b)
    }

    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        self.rows[r].toggle(c)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut BitVec {
        &mut self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// m · v
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.nrows());
        let mut out = BitMatrix::zeros(self.nrows(), other.ncols());
        for (r, row) in self.rows.iter().enumerate() {
            let acc = out.row_mut(r);
            for k in row.iter_ones() {
                acc.xor_assign(other.row(k));
            }
        }
        out
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.nrows(), other.nrows());
        assert_eq!(self.cols, other.cols);
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.xor(b))
            .collect();
        BitMatrix {
            cols: self.cols,
            rows,
        }
    }

    /// Submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        BitMatrix {
            cols: cols.len(),
            rows: rows.iter().map(|&r| self.rows[r].select(cols)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    /// `rows[dst] ^= rows[src]`
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let (s, d) = if src < dst {
            let (lo, hi) = self.rows.split_at_mut(dst);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = self.rows.split_at_mut(src);
            (&hi[0], &mut lo[dst])
        };
        d.xor_assign(s);
    }

    /// Reduced row echelon form in place; returns the pivot column of each
    /// of the leading rows.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.nrows() {
                break;
            }
            let Some(p) = (r..self.nrows()).find(|&i| self.rows[i].get(c)) else {
                continue;
            };
            self.rows.swap(r, p);
            for i in 0..self.nrows() {
                if i != r && self.rows[i].get(c) {
                    self.add_row(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for r in &self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}", r.get(c) as u8)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Dimension of the row space.
pub fn rank(m: &BitMatrix) -> usize {
    let mut w = m.clone();
    w.rref_in_place().len()
}

/// Basis of { v : m·v = 0 }.
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVec> {
    let mut w = m.clone();
    let pivots = w.rref_in_place();
    let mut is_pivot = vec![false; m.ncols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..m.ncols()).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(m.ncols());
        v.set(f, true);
        for (r, &p) in pivots.iter().enumerate() {
            if w.get(r, f) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    basis
}

/// Some x with m·x = y, if one exists.
pub fn solve(m: &BitMatrix, y: &BitVec) -> Option<BitVec> {
    assert_eq!(y.len(), m.nrows(), "right-hand side length must equal row count");
    let c = m.ncols();
    // Augment with y as the last column.
    let rows = m
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = BitVec::zeros(c + 1);
            for j in r.iter_ones() {
                a.set(j, true);
            }
            a.set(c, y.get(i));
            a
        })
        .collect();
    let mut aug = BitMatrix::from_rows(c + 1, rows);
    let pivots = aug.rref_in_place();
    if pivots.last() == Some(&c) {
        return None;
    }
    let mut x = BitVec::zeros(c);
    for (r, &p) in pivots.iter().enumerate() {
        if aug.get(r, c) {
            x.set(p, true);
        }
    }
    Some(x)
}

/// Affine solution set of m·x = y as (particular solution, kernel basis).
pub fn solution_space(m: &BitMatrix, y: &BitVec) -> (Option<BitVec>, Vec<BitVec>) {
    (solve(m, y), kernel_basis(m))
}

/// All 2^k elements of the span of `basis`, in Gray-code order starting at 0.
pub fn span(basis: &[BitVec], len: usize) -> Vec<BitVec> {
    let k = basis.len();
    assert!(k < 32, "span too large to enumerate");
    let mut out = Vec::with_capacity(1 << k);
    let mut cur = BitVec::zeros(len);
    out.push(cur.clone());
    for i in 1u32..(1u32 << k) {
        let bit = i.trailing_zeros() as usize;
        cur.xor_assign(&basis[bit]);
        out.push(cur.clone());
    }
    out
}

/// Rank of a matrix given as row bitmasks (at most 64 columns).
pub fn rank_masks(rows: &mut [u64]) -> usize {
    let mut r = 0;
    for i in 0..rows.len() {
        let mut best = i;
        while best < rows.len() && rows[best] == 0 {
            best += 1;
        }
        if best == rows.len() {
            break;
        }
        rows.swap(i, best);
        let piv = rows[i];
        let low = piv & piv.wrapping_neg();
        for j in (i + 1)..rows.len() {
            if rows[j] & low != 0 {
                rows[j] ^= piv;
            }
        }
        r += 1;
    }
    r
}
