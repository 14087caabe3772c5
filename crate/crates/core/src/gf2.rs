//! Dense linear algebra over GF(2).
//!
//! [`BitMatrix`] stores each row as a run of `u64` words (bit `j` of a row
//! lives in word `j / 64`, position `j % 64`). All public contracts are
//! entry-wise, so nothing outside this module depends on the packing.
//!
//! Bit vectors at the API boundary are `&[u8]` slices holding 0/1 values.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Dense binary matrix with row-major packed storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// All-zero `rows × cols` matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols).max(1);
        BitMatrix {
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

    /// Builds a matrix from rows of 0/1 values. Every row must have the same
    /// length and contain only 0 or 1.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.as_ref().len()).unwrap_or(0);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != c {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    c
                )));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    _ => {
                        return Err(Error::ParamOutOfRange(format!(
                            "entry ({i},{j}) = {b} is not a bit"
                        )))
                    }
                }
            }
        }
        Ok(m)
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

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i * self.stride + j / WORD] ^= 1u64 << (j % WORD);
    }

    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    /// Row `i` as a 0/1 vector.
    pub fn row(&self, i: usize) -> Vec<u8> {
        (0..self.cols).map(|j| self.get(i, j) as u8).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// `dst ^= src` on whole rows.
    #[inline]
    fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for w in 0..s {
            self.data.swap(a * s + w, b * s + w);
        }
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let s = out.stride;
        for i in 0..self.rows {
            for t in 0..self.cols {
                if self.get(i, t) {
                    let src = other.row_words(t);
                    let dst = &mut out.data[i * s..(i + 1) * s];
                    for (d, w) in dst.iter_mut().zip(src) {
                        *d ^= *w;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Entry-wise sum (XOR).
    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (d, w) in out.data.iter_mut().zip(&other.data) {
            *d ^= *w;
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn kron(&self, other: &BitMatrix) -> BitMatrix {
        BitMatrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols) && other.get(i % other.rows, j % other.cols)
        })
    }

    /// Row vector times matrix: `v · self`.
    pub fn vec_mul(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.rows {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut acc = vec![0u64; self.stride];
        for (i, &b) in v.iter().enumerate() {
            if b & 1 == 1 {
                for (a, w) in acc.iter_mut().zip(self.row_words(i)) {
                    *a ^= *w;
                }
            }
        }
        Ok((0..self.cols)
            .map(|j| ((acc[j / WORD] >> (j % WORD)) & 1) as u8)
            .collect())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Lower-triangular with ones on the diagonal.
    pub fn is_unit_lower_triangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| self.get(i, i) && (i + 1..self.cols).all(|j| !self.get(i, j)))
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            if let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) {
                m.swap_rows(rank, p);
                for r in rank + 1..m.rows {
                    if m.get(r, c) {
                        m.xor_rows(r, rank);
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    /// Columns `start..end` as a new matrix.
    pub fn columns(&self, start: usize, end: usize) -> BitMatrix {
        BitMatrix::from_fn(self.rows, end - start, |i, j| self.get(i, start + j))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", self.get(i, j) as u8)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| (self.get(i, j) as u8).to_string())
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Output of [`rref`]: `elimination · input = reduced`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrefResult {
    /// Invertible `k × k` matrix `E`.
    pub elimination: BitMatrix,
    /// Reduced row echelon form of the input.
    pub reduced: BitMatrix,
    /// Pivot column of each row, strictly increasing.
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan reduction of a full-row-rank matrix.
pub fn rref(m: &BitMatrix) -> Result<RrefResult> {
    let k = m.rows();
    let mut reduced = m.clone();
    let mut elim = BitMatrix::identity(k);
    let mut pivots = Vec::with_capacity(k);
    let mut r = 0;
    for c in 0..m.cols() {
        if r == k {
            break;
        }
        let Some(p) = (r..k).find(|&i| reduced.get(i, c)) else {
            continue;
        };
        reduced.swap_rows(r, p);
        elim.swap_rows(r, p);
        for i in 0..k {
            if i != r && reduced.get(i, c) {
                reduced.xor_rows(i, r);
                elim.xor_rows(i, r);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if r < k {
        return Err(Error::RankDeficient { rank: r, rows: k });
    }
    debug_assert_eq!(elim.mul(m).ok().as_ref(), Some(&reduced));
    Ok(RrefResult {
        elimination: elim,
        reduced,
        pivots,
    })
}

/// Inverse of a square nonsingular matrix.
pub fn invert(m: &BitMatrix) -> Result<BitMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "cannot invert non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    match rref(m) {
        Ok(r) => Ok(r.elimination),
        Err(Error::RankDeficient { .. }) => Err(Error::Singular),
        Err(e) => Err(e),
    }
}

/// Checks the reduced-row-echelon invariants and returns the pivot columns.
pub fn echelon_pivots(m: &BitMatrix) -> Result<Vec<usize>> {
    let mut pivots = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let Some(p) = (0..m.cols()).find(|&j| m.get(i, j)) else {
            return Err(Error::NotEchelon(format!("row {i} is zero")));
        };
        if let Some(&prev) = pivots.last() {
            if p <= prev {
                return Err(Error::NotEchelon(format!(
                    "pivot of row {i} at column {p} does not exceed previous pivot {prev}"
                )));
            }
        }
        pivots.push(p);
    }
    for (t, &p) in pivots.iter().enumerate() {
        if (0..m.rows()).any(|i| i != t && m.get(i, p)) {
            return Err(Error::NotEchelon(format!(
                "pivot column {p} is not a unit vector"
            )));
        }
    }
    Ok(pivots)
}

/// A permutation of `{0..n}` in one-line notation: element `i` moves to
/// position `p[i]`.
///
/// Stored 0-indexed; [`Permutation::from_one_line`] and
/// [`Permutation::to_one_line`] convert to the 1-indexed external form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    p: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            p: (0..n).collect(),
        }
    }

    /// From 0-indexed images.
    pub fn new(p: Vec<usize>) -> Result<Self> {
        let n = p.len();
        let mut seen = vec![false; n];
        for (i, &v) in p.iter().enumerate() {
            if v >= n {
                return Err(Error::NotABijection(format!(
                    "entry {i} maps to {v}, outside 0..{n}"
                )));
            }
            if seen[v] {
                return Err(Error::NotABijection(format!("value {v} appears twice")));
            }
            seen[v] = true;
        }
        Ok(Permutation { p })
    }

    /// From 1-indexed one-line notation.
    pub fn from_one_line(p: &[usize]) -> Result<Self> {
        if let Some(i) = p.iter().position(|&v| v == 0) {
            return Err(Error::NotABijection(format!(
                "entry {} is 0 in 1-indexed notation",
                i + 1
            )));
        }
        Self::new(p.iter().map(|&v| v - 1).collect())
    }

    pub fn to_one_line(&self) -> Vec<usize> {
        self.p.iter().map(|&v| v + 1).collect()
    }

    /// Reads a permutation matrix: row `i` has its single 1 in column `p[i]`.
    pub fn from_matrix(m: &BitMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotABijection("matrix is not square".into()));
        }
        let mut p = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            let ones: Vec<usize> = (0..m.cols()).filter(|&j| m.get(i, j)).collect();
            if ones.len() != 1 {
                return Err(Error::NotABijection(format!(
                    "row {i} has {} ones",
                    ones.len()
                )));
            }
            p.push(ones[0]);
        }
        Self::new(p)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.p.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// 0-indexed image of `i`.
    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.p[i]
    }

    #[inline]
    pub fn as_slice(&self) -> &[usize] {
        &self.p
    }

    pub fn inverse(&self) -> Permutation {
        let mut q = vec![0; self.p.len()];
        for (i, &v) in self.p.iter().enumerate() {
            q[v] = i;
        }
        Permutation { p: q }
    }

    /// `self` followed by `next`: the composite sends `i` to `next[self[i]]`.
    pub fn then(&self, next: &Permutation) -> Result<Permutation> {
        if self.len() != next.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: next.len(),
            });
        }
        Ok(Permutation {
            p: self.p.iter().map(|&v| next.p[v]).collect(),
        })
    }

    /// `v · P`: the entry at position `i` moves to position `p[i]`.
    pub fn apply<T: Copy + Default>(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.p.len() {
            return Err(Error::LengthMismatch {
                expected: self.p.len(),
                found: v.len(),
            });
        }
        let mut out = vec![T::default(); v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.p[i]] = x;
        }
        Ok(out)
    }

    /// `P[i][p[i]] = 1`.
    pub fn matrix_view(&self) -> BitMatrix {
        let n = self.p.len();
        let mut m = BitMatrix::zeros(n, n);
        for (i, &v) in self.p.iter().enumerate() {
            m.set(i, v, true);
        }
        m
    }

    pub fn swap(&mut self, i: usize, j: usize) {
        self.p.swap(i, j);
    }

    /// Advances to the next permutation in lexicographic order; returns
    /// `false` (leaving `self` sorted ascending) after the last one.
    pub fn next_lexicographic(&mut self) -> bool {
        let p = &mut self.p;
        let n = p.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            p.reverse();
            return false;
        }
        let mut j = n - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2() -> BitMatrix {
        BitMatrix::from_rows(&[[1u8, 0], [1, 1]]).unwrap()
    }

    fn naive_mul(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        BitMatrix::from_fn(a.rows(), b.cols(), |i, j| {
            (0..a.cols()).fold(false, |acc, t| acc ^ (a.get(i, t) & b.get(t, j)))
        })
    }

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> BitMatrix {
        BitMatrix::from_fn(r, c, |_, _| rng.random())
    }

    #[test]
    fn rref_identity() {
        let i5 = BitMatrix::identity(5);
        let r = rref(&i5).unwrap();
        assert_eq!(r.elimination, i5);
        assert_eq!(r.reduced, i5);
        assert_eq!(r.pivots, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn rref_challenging_case_is_already_reduced() {
        let g = crate::codes::challenging_8_3();
        let r = rref(&g).unwrap();
        assert_eq!(r.elimination, BitMatrix::identity(3));
        assert_eq!(r.reduced, g);
        assert_eq!(r.pivots, vec![0, 3, 6]);
    }

    #[test]
    fn rref_dynamic_frozen_example_pivots() {
        let m = BitMatrix::from_rows(&[
            [0u8, 1, 0, 1, 0, 0, 0, 0],
            [0, 0, 1, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0, 0, 0],
        ])
        .unwrap();
        let r = rref(&m).unwrap();
        assert_eq!(r.pivots, vec![1, 2, 4]);
    }

    #[test]
    fn rref_rejects_rank_deficient() {
        let m = BitMatrix::from_rows(&[[1u8, 1, 0], [0, 1, 1], [1, 0, 1]]).unwrap();
        assert_eq!(rref(&m), Err(Error::RankDeficient { rank: 2, rows: 3 }));
    }

    #[test]
    fn invert_small_cases() {
        assert_eq!(invert(&f2()).unwrap(), f2());
        assert_eq!(invert(&BitMatrix::identity(7)).unwrap(), BitMatrix::identity(7));
        let f4 = f2().kron(&f2());
        assert_eq!(f4.mul(&f4).unwrap(), BitMatrix::identity(4));
        assert_eq!(invert(&f4).unwrap(), f4);
        assert_eq!(invert(&BitMatrix::zeros(3, 3)), Err(Error::Singular));
    }

    #[test]
    fn matmul_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 3, 8);
            let b = random_matrix(&mut rng, 8, 8);
            assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
            assert_eq!(a.mul(&BitMatrix::identity(8)).unwrap(), a);
        }
        // Multi-word rows.
        let a = random_matrix(&mut rng, 5, 130);
        let b = random_matrix(&mut rng, 130, 70);
        assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
        assert_eq!(f2().mul(&f2()).unwrap(), BitMatrix::identity(2));
        assert!(matches!(a.mul(&a), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn add_is_self_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 6, 70);
        assert_eq!(a.add(&a).unwrap(), BitMatrix::zeros(6, 70));
    }

    #[test]
    fn permutation_example_matrix() {
        let p = Permutation::from_one_line(&[1, 5, 3, 7, 2, 6, 4, 8]).unwrap();
        let expected = BitMatrix::from_rows(&[
            [1u8, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0, 0, 0],
            [0, 0, 1, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 1, 0],
            [0, 1, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 1],
        ])
        .unwrap();
        assert_eq!(p.matrix_view(), expected);
        assert_eq!(Permutation::from_matrix(&expected).unwrap(), p);
    }

    #[test]
    fn identity_permutation() {
        let p = Permutation::identity(6);
        assert_eq!(p.inverse(), p);
        assert_eq!(p.matrix_view(), BitMatrix::identity(6));
    }

    #[test]
    fn permutation_rejects_non_bijections() {
        assert!(matches!(
            Permutation::from_one_line(&[1, 1, 3]),
            Err(Error::NotABijection(_))
        ));
        assert!(matches!(
            Permutation::from_one_line(&[1, 4, 3]),
            Err(Error::NotABijection(_))
        ));
        assert!(matches!(
            Permutation::from_one_line(&[0, 1, 2]),
            Err(Error::NotABijection(_))
        ));
    }

    #[test]
    fn lexicographic_enumeration_counts() {
        let mut p = Permutation::identity(5);
        let mut count = 1;
        let mut prev = p.clone();
        while p.next_lexicographic() {
            assert!(p.as_slice() > prev.as_slice());
            prev = p.clone();
            count += 1;
        }
        assert_eq!(count, 120);
        assert_eq!(p, Permutation::identity(5));
    }

    #[test]
    fn echelon_check() {
        let good = BitMatrix::from_rows(&[[1u8, 1, 0, 0], [0, 0, 1, 1]]).unwrap();
        assert_eq!(echelon_pivots(&good).unwrap(), vec![0, 2]);
        let bad = BitMatrix::from_rows(&[[1u8, 0, 1, 0], [0, 0, 1, 1]]).unwrap();
        assert!(matches!(echelon_pivots(&bad), Err(Error::NotEchelon(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
            Just((0..n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Permutation::new(v).unwrap())
        }

        fn matrix_strategy(r: usize, c: usize) -> impl Strategy<Value = BitMatrix> {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
        }

        proptest! {
            #[test]
            fn apply_inverse_roundtrip(p in perm_strategy(16), v in proptest::collection::vec(0u8..2, 16)) {
                let w = p.apply(&v).unwrap();
                prop_assert_eq!(p.inverse().apply(&w).unwrap(), v.clone());
                // apply agrees with v · P
                let pm = p.matrix_view();
                prop_assert_eq!(pm.vec_mul(&v).unwrap(), w);
                prop_assert_eq!(p.inverse().matrix_view(), pm.transpose());
                prop_assert_eq!(pm.mul(&p.inverse().matrix_view()).unwrap(), BitMatrix::identity(16));
            }

            #[test]
            fn rref_reconstructs(m in matrix_strategy(5, 70)) {
                if m.rank() == 5 {
                    let r = rref(&m).unwrap();
                    prop_assert_eq!(r.elimination.mul(&m).unwrap(), r.reduced.clone());
                    prop_assert_eq!(echelon_pivots(&r.reduced).unwrap(), r.pivots.clone());
                    let again = rref(&r.reduced).unwrap();
                    prop_assert_eq!(again.reduced, r.reduced);
                } else {
                    prop_assert!(rref(&m).is_err());
                }
            }

            #[test]
            fn invert_involution(m in matrix_strategy(9, 9)) {
                match invert(&m) {
                    Ok(inv) => {
                        prop_assert_eq!(m.mul(&inv).unwrap(), BitMatrix::identity(9));
                        prop_assert_eq!(inv.mul(&m).unwrap(), BitMatrix::identity(9));
                        prop_assert_eq!(invert(&inv).unwrap(), m);
                    }
                    Err(e) => {
                        prop_assert_eq!(e, Error::Singular);
                        prop_assert!(m.rank() < 9);
                    }
                }
            }
        }
    }
}
