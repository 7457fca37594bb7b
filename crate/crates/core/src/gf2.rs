//! Dense linear algebra over GF(2).
//!
//! Rows are packed into `u64` words, least significant bit first. Padding
//! bits past the last column are kept at zero so that whole-word comparisons
//! and popcounts are exact.

use std::fmt;

use crate::error::{mismatch, Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from 0/1 entries; any nonzero entry is a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
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
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for b in self.iter() {
            write!(f, "{}", u8::from(b))?;
        }
        write!(f, "]")
    }
}

/// A dense, row-major matrix over GF(2).
///
/// Zero-row and zero-column matrices are valid values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries; `cols` is taken from the
    /// first row (or zero when there are no rows).
    ///
    /// # Panics
    ///
    /// Panics if the rows have different lengths.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`BitMatrix::from_rows`] but with an explicit width, so that an
    /// empty row list still yields a `0 x cols` matrix.
    pub fn from_rows_with_cols<R: AsRef<[u8]>>(rows: &[R], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "row {i} has length {} != {cols}", r.len());
            for (j, &b) in r.iter().enumerate() {
                if b != 0 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Stacks vectors of equal length as rows.
    pub fn from_row_vecs(rows: &[BitVec], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of {}x{}",
            self.rows,
            self.cols
        );
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of {}x{}",
            self.rows,
            self.cols
        );
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub(crate) fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(i).to_vec())
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

    pub fn set_column(&mut self, j: usize, v: &BitVec) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self.set(i, j, v.get(i));
        }
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row_words(i).iter().all(|&w| w == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i).to_bits()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// row[dst] ^= row[src]
    fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        for w in 0..self.stride {
            let v = self.data[src * self.stride + w];
            self.data[dst * self.stride + w] ^= v;
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Rows at the given indices, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> BitMatrix {
        let mut m = BitMatrix::zeros(idx.len(), self.cols);
        for (dst, &src) in idx.iter().enumerate() {
            m.row_words_mut(dst).copy_from_slice(self.row_words(src));
        }
        m
    }

    /// Columns at the given indices, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (dst, &src) in idx.iter().enumerate() {
                if self.get(i, src) {
                    m.set(i, dst, true);
                }
            }
        }
        m
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(mismatch("vstack", format!("{} vs {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(mismatch("hstack", format!("{} vs {} rows", self.rows, other.rows)));
        }
        let mut m = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    m.set(i, j, true);
                }
            }
            for j in 0..other.cols {
                if other.get(i, j) {
                    m.set(i, self.cols + j, true);
                }
            }
        }
        Ok(m)
    }

    /// Matrix product over GF(2).
    pub fn matmul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(mismatch(
                "matmul",
                format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols),
            ));
        }
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let (src, dst) = (k * rhs.stride, i * out.stride);
                    for w in 0..rhs.stride {
                        out.data[dst + w] ^= rhs.data[src + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Elementwise XOR.
    pub fn add(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.shape() != rhs.shape() {
            return Err(mismatch(
                "add",
                format!("{}x{} vs {}x{}", self.rows, self.cols, rhs.rows, rhs.cols),
            ));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a ^ b).collect();
        Ok(BitMatrix { data, ..self.clone() })
    }

    /// `self · v` as a column vector of length `rows`.
    pub fn matvec(&self, v: &BitVec) -> Result<BitVec> {
        if self.cols != v.len() {
            return Err(mismatch(
                "matvec",
                format!("{} columns vs vector of {}", self.cols, v.len()),
            ));
        }
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            let parity = self
                .row_words(i)
                .iter()
                .zip(v.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            if parity == 1 {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce(self.cols)
    }

    /// In-place forward elimination over the first `ncols` columns, pivoting
    /// on the first row (from the current rank down) with a set bit.
    /// Returns the rank found.
    fn row_reduce(&mut self, ncols: usize) -> usize {
        let mut rank = 0;
        for c in 0..ncols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(rank, p);
            for r in rank + 1..self.rows {
                if self.get(r, c) {
                    self.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Pivot columns of the reduced echelon form over the first `ncols`
    /// columns; the matrix is reduced in place.
    fn reduce_with_pivots(&mut self, ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        for c in 0..ncols {
            let rank = pivots.len();
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(rank, p);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_row_into(rank, r);
                }
            }
            pivots.push(c);
        }
        pivots
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

pub fn matmul(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    a.matmul(b)
}

pub fn add(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    a.add(b)
}

pub fn rank(a: &BitMatrix) -> usize {
    a.rank()
}

/// Solves `A·X = B` for the unique `X` when `A` has full column rank.
///
/// Rows of `A` beyond its rank must be consistent with the solution; if they
/// are not, the right-hand side is outside the column space and
/// [`Error::Inconsistent`] is returned.
pub fn solve_unique(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    if a.rows() != b.rows() {
        return Err(mismatch(
            "solve_unique",
            format!("A has {} rows, B has {}", a.rows(), b.rows()),
        ));
    }
    let n = a.cols();
    if a.rows() < n {
        return Err(Error::RankDeficient {
            rank: a.rank(),
            required: n,
        });
    }
    let mut aug = a.hstack(b)?;
    let pivots = aug.reduce_with_pivots(n);
    if pivots.len() < n {
        return Err(Error::RankDeficient {
            rank: pivots.len(),
            required: n,
        });
    }
    // Full column rank: the top n rows of the left block are I_n.
    let mut x = BitMatrix::zeros(n, b.cols());
    for i in 0..aug.rows() {
        for j in 0..b.cols() {
            if aug.get(i, n + j) {
                if i < n {
                    x.set(i, j, true);
                } else {
                    return Err(Error::Inconsistent);
                }
            }
        }
    }
    Ok(x)
}

/// True iff `A·w = s`. Vacuously true for a matrix with no rows.
pub fn matvec_check(a: &BitMatrix, w: &BitVec, s: &BitVec) -> Result<bool> {
    if a.rows() != s.len() {
        return Err(mismatch(
            "matvec_check",
            format!("{} rows vs target of {}", a.rows(), s.len()),
        ));
    }
    Ok(a.matvec(w)? == *s)
}

/// Result of column-reducing a generator to `[I_K; P]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    /// The `(N-K) x K` block below the identity.
    pub parity: BitMatrix,
    /// Invertible `K x K` matrix `T` with `G·T = [I_K; P]`. Identity when
    /// `G` was already systematic.
    pub transform: BitMatrix,
}

/// Column-wise Gaussian elimination of an `N x K` generator into standard
/// form.
pub fn to_standard_form(g: &BitMatrix) -> Result<StandardForm> {
    let (n, k) = g.shape();
    if n < k {
        return Err(Error::RankDeficient {
            rank: g.rank(),
            required: k,
        });
    }
    let r = g.rank();
    if r < k {
        return Err(Error::RankDeficient { rank: r, required: k });
    }
    // Column ops on G are row ops on G^T; carry an identity to record them.
    let mut aug = g.transpose().hstack(&BitMatrix::identity(k))?;
    let pivots = aug.reduce_with_pivots(k);
    if pivots.len() < k {
        return Err(Error::SingularLeadingBlock(k));
    }
    let parity_cols: Vec<usize> = (k..n).collect();
    let record_cols: Vec<usize> = (n..n + k).collect();
    Ok(StandardForm {
        parity: aug.select_cols(&parity_cols).transpose(),
        transform: aug.select_cols(&record_cols).transpose(),
    })
}
