//! Dense linear algebra over the two-element field.
//!
//! Vectors and matrices are stored as packed `u64` words, one bit per entry.
//! Matrices are row-major; every row occupies `stride` words and the bits past
//! `cols` in the last word of a row are always zero. Addition is XOR.
//!
//! Elimination always pivots on the first row (from the top) that has a set
//! bit in the current column, so echelon forms, kernels and basis changes are
//! reproducible bit-for-bit.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec({s})")
    }
}

/// A dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self { rows, cols, stride, words: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries. Any nonzero entry counts as 1.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, &b) in row.iter().enumerate() {
                if b != 0 {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    /// Parses rows written as strings of `0` and `1`.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let mut parsed = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let bits = row
                .as_ref()
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(Error::Parse(format!("row {i}: unexpected character {other:?} in bit row"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            parsed.push(bits);
        }
        Self::from_rows(&parsed)
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of range {}x{}", self.rows, self.cols);
        (self.words[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of range {}x{}", self.rows, self.cols);
        let mask = 1u64 << (j % WORD);
        let w = &mut self.words[i * self.stride + j / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub(crate) fn toggle(&mut self, i: usize, j: usize) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of range {}x{}", self.rows, self.cols);
        self.words[i * self.stride + j / WORD] ^= 1u64 << (j % WORD);
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    /// `row[dst] ^= row[src]`
    fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.words.split_at_mut(dst * s);
            (&lo[src * s..src * s + s], &mut hi[..s])
        } else {
            let (lo, hi) = self.words.split_at_mut(src * s);
            (&hi[..s] as &[u64], &mut lo[dst * s..dst * s + s])
        };
        for (d, w) in b.iter_mut().zip(a) {
            *d ^= w;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.words.swap(a * s + k, b * s + k);
        }
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec { len: self.cols, words: self.row_words(i).to_vec() }
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<BitVec> {
        self.transpose().rows_vec()
    }

    fn rows_vec(&self) -> Vec<BitVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions of all nonzero entries in row-major order.
    pub fn ones(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            let row = BitVec { len: self.cols, words: self.row_words(i).to_vec() };
            out.extend(row.ones().map(|j| (i, j)));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, j) in self.ones() {
            t.set(j, i, true);
        }
        t
    }

    /// Matrix sum (entrywise XOR). Panics on shape mismatch.
    pub fn add(&self, other: &BitMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        out
    }

    /// Matrix product `self * other`. Panics on inner-dimension mismatch.
    pub fn mul(&self, other: &BitMatrix) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "inner dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        let s = out.stride;
        for i in 0..self.rows {
            let lhs = BitVec { len: self.cols, words: self.row_words(i).to_vec() };
            for k in lhs.ones() {
                let src = other.row_words(k);
                let dst = &mut out.words[i * s..(i + 1) * s];
                for (d, w) in dst.iter_mut().zip(src) {
                    *d ^= w;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            let parity = self.row_words(i).iter().zip(&v.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
            if parity % 2 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        assert!(row0 + rows <= self.rows && col0 + cols <= self.cols, "submatrix out of range");
        Self::from_fn(rows, cols, |i, j| self.get(row0 + i, col0 + j))
    }

    /// Rows and columns picked by index lists, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn hstack(&self, other: &BitMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    pub fn vstack(&self, other: &BitMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut out = Self::zeros(self.rows + other.rows, self.cols);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        out.words[self.words.len()..].copy_from_slice(&other.words);
        out
    }

    /// Returns a copy with the `(i, j)` entry flipped.
    pub fn with_toggled(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.toggle(i, j);
        out
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let el = Elimination::new(self);
        (el.rank() == self.rows).then_some(el.transform)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        write!(f, "{self}")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// GF(2) row rank.
pub fn rank(m: &BitMatrix) -> usize {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| a.get(i, c)) else {
            continue;
        };
        a.swap_rows(r, p);
        for i in r + 1..a.rows {
            if a.get(i, c) {
                a.xor_row_into(r, i);
            }
        }
        r += 1;
    }
    r
}

/// Reduced row echelon form together with the row operations that produced it:
/// `transform * matrix == reduced`.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub reduced: BitMatrix,
    pub transform: BitMatrix,
    pub pivots: Vec<usize>,
}

impl Elimination {
    pub fn new(m: &BitMatrix) -> Self {
        let mut a = m.clone();
        let mut t = BitMatrix::identity(m.rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| a.get(i, c)) else {
                continue;
            };
            a.swap_rows(r, p);
            t.swap_rows(r, p);
            for i in 0..a.rows {
                if i != r && a.get(i, c) {
                    a.xor_row_into(r, i);
                    t.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Self { reduced: a, transform: t, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Some `x` with `matrix * x == v`, or `None` when `v` is outside the column space.
    pub fn solve(&self, v: &BitVec) -> Option<BitVec> {
        let tv = self.transform.mul_vec(v);
        if tv.ones().any(|i| i >= self.rank()) {
            return None;
        }
        let mut x = BitVec::zeros(self.reduced.cols());
        for (i, &pc) in self.pivots.iter().enumerate() {
            if tv.get(i) {
                x.set(pc, true);
            }
        }
        Some(x)
    }
}

/// Basis of `{v : m·v = 0}`, one vector per column of the result.
pub fn kernel_basis(m: &BitMatrix) -> BitMatrix {
    let el = Elimination::new(m);
    let cols = m.cols();
    let is_pivot = {
        let mut v = vec![false; cols];
        for &p in &el.pivots {
            v[p] = true;
        }
        v
    };
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut k = BitMatrix::zeros(cols, free.len());
    for (j, &f) in free.iter().enumerate() {
        k.set(f, j, true);
        for (i, &pc) in el.pivots.iter().enumerate() {
            if el.reduced.get(i, f) {
                k.set(pc, j, true);
            }
        }
    }
    k
}

/// Greedily extends independent vectors of length `dim` to a basis of the whole
/// space by appending unit vectors in index order.
pub fn extend_to_basis(dim: usize, vectors: &[BitVec]) -> BitMatrix {
    let mut cols: Vec<BitVec> = vectors.to_vec();
    let mut current = rank(&BitMatrix::from_columns(dim, &cols));
    assert_eq!(current, cols.len(), "vectors to extend are dependent");
    for i in 0..dim {
        if current == dim {
            break;
        }
        cols.push(BitVec::unit(dim, i));
        let r = rank(&BitMatrix::from_columns(dim, &cols));
        if r > current {
            current = r;
        } else {
            cols.pop();
        }
    }
    BitMatrix::from_columns(dim, &cols)
}

/// Invertible row and column operations; `left · m · right` is the transformed matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    pub left: BitMatrix,
    pub right: BitMatrix,
}

impl BasisChange {
    pub fn apply(&self, m: &BitMatrix) -> BitMatrix {
        self.left.mul(m).mul(&self.right)
    }
}

/// `[[I_r, 0], [0, 0]]` of the given shape.
pub fn projection_form(rows: usize, cols: usize, r: usize) -> BitMatrix {
    BitMatrix::from_fn(rows, cols, |i, j| i == j && i < r)
}

/// Finds invertible `left`, `right` with `left · f · right = [[I_r, 0], [0, 0]]`.
pub fn normalize_projection(f: &BitMatrix) -> (BasisChange, usize) {
    let el = Elimination::new(f);
    let r = el.rank();
    let mut right_cols: Vec<BitVec> = el.pivots.iter().map(|&p| BitVec::unit(f.cols(), p)).collect();
    right_cols.extend(kernel_basis(f).columns());
    let right = BitMatrix::from_columns(f.cols(), &right_cols);

    let images: Vec<BitVec> = el.pivots.iter().map(|&p| f.column(p)).collect();
    let target_basis = extend_to_basis(f.rows(), &images);
    let left = target_basis.inverse().expect("extended basis is invertible");
    (BasisChange { left, right }, r)
}

/// Dimensions of the row and column bands of a block matrix.
#[derive(Clone, Debug, Default)]
pub struct BlockLayout {
    pub row_dims: Vec<usize>,
    pub col_dims: Vec<usize>,
    pub blocks: Vec<(usize, usize, BitMatrix)>,
}

impl BlockLayout {
    pub fn new(row_dims: Vec<usize>, col_dims: Vec<usize>) -> Self {
        Self { row_dims, col_dims, blocks: Vec::new() }
    }

    pub fn place(&mut self, row_band: usize, col_band: usize, block: BitMatrix) -> &mut Self {
        self.blocks.push((row_band, col_band, block));
        self
    }
}

/// Places every block at its band position; absent blocks are zero and blocks
/// sharing a position are added.
pub fn assemble_blocks(layout: &BlockLayout) -> Result<BitMatrix> {
    let offsets = |dims: &[usize]| {
        let mut acc = 0;
        dims.iter()
            .map(|&d| {
                let o = acc;
                acc += d;
                o
            })
            .collect::<Vec<_>>()
    };
    let row_off = offsets(&layout.row_dims);
    let col_off = offsets(&layout.col_dims);
    let mut out = BitMatrix::zeros(layout.row_dims.iter().sum(), layout.col_dims.iter().sum());
    for (rb, cb, block) in &layout.blocks {
        let (Some(&rd), Some(&cd)) = (layout.row_dims.get(*rb), layout.col_dims.get(*cb)) else {
            return Err(Error::DimensionMismatch(format!(
                "block at band ({rb},{cb}) outside a {}x{} band grid",
                layout.row_dims.len(),
                layout.col_dims.len()
            )));
        };
        if block.rows() != rd || block.cols() != cd {
            return Err(Error::DimensionMismatch(format!(
                "block at band ({rb},{cb}) is {}x{}, band expects {rd}x{cd}",
                block.rows(),
                block.cols()
            )));
        }
        for (i, j) in block.ones() {
            out.toggle(row_off[*rb] + i, col_off[*cb] + j);
        }
    }
    Ok(out)
}
