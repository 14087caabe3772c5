//! Pruned polar graphs.
//!
//! The graph has `N = 2^m` wires and `m` butterfly stages in natural
//! (non-bit-reversed) order. Stage `s` (0-based) pairs wires whose indices
//! differ only in bit `s`; stage 0 sits next to the `u` side and pairs
//! adjacent wires, the last stage pairs `i` with `i + N/2` and sits next to
//! the channel. A kept butterfly on wires `(lo, hi)` computes
//! `lo ← lo ⊕ hi`; a pruned one passes both wires through.
//!
//! With every butterfly kept the generator is `F₂^{⊗m}`; with every
//! butterfly pruned it is the identity.

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Which butterflies are kept (`true`) and which are pruned to `I₂`.
///
/// Conceptually an `N/2 × m` binary matrix: row `r` is the `r`-th butterfly
/// of a stage in ascending order of its lower wire, column `s` is the stage.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PruningMatrix {
    n_big: usize,
    stages: usize,
    // stage-major: flags[stage * n_big/2 + row]
    flags: Vec<bool>,
}

impl PruningMatrix {
    fn with_value(n_big: usize, kept: bool) -> Result<Self> {
        let stages = log2_exact(n_big)?;
        Ok(PruningMatrix {
            n_big,
            stages,
            flags: vec![kept; n_big / 2 * stages],
        })
    }

    /// Every butterfly kept: the plain `F₂^{⊗m}` graph.
    pub fn all_kept(n_big: usize) -> Result<Self> {
        Self::with_value(n_big, true)
    }

    /// Every butterfly pruned: the identity graph.
    pub fn all_pruned(n_big: usize) -> Result<Self> {
        Self::with_value(n_big, false)
    }

    /// From `N/2` rows of `m` entries (`1` = kept, `0` = pruned).
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n_big = rows.len() * 2;
        let mut r = Self::all_pruned(n_big)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != r.stages {
                return Err(Error::DimensionMismatch(format!(
                    "pruning row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    r.stages
                )));
            }
            for (s, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => r.set(s, i, true),
                    _ => {
                        return Err(Error::ParamOutOfRange(format!(
                            "pruning entry ({i},{s}) = {b} is not a bit"
                        )))
                    }
                }
            }
        }
        Ok(r)
    }

    /// Builds a pruning matrix whose flags are the bits of `code`, flag
    /// `stage * N/2 + row` taken from bit `stage * N/2 + row`.
    pub fn from_index(n_big: usize, code: u64) -> Result<Self> {
        let mut r = Self::all_pruned(n_big)?;
        if r.flags.len() > 64 {
            return Err(Error::ParamOutOfRange(
                "pruning index only covers up to 64 flags".into(),
            ));
        }
        for (i, f) in r.flags.iter_mut().enumerate() {
            *f = (code >> i) & 1 == 1;
        }
        Ok(r)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.half())
            .map(|r| (0..self.stages).map(|s| self.is_kept(s, r) as u8).collect())
            .collect()
    }

    #[inline]
    pub fn n_big(&self) -> usize {
        self.n_big
    }

    #[inline]
    pub fn stages(&self) -> usize {
        self.stages
    }

    #[inline]
    pub fn half(&self) -> usize {
        self.n_big / 2
    }

    /// Total number of butterflies, `N/2 · m`.
    #[inline]
    pub fn len(&self) -> usize {
        self.flags.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    #[inline]
    pub fn is_kept(&self, stage: usize, row: usize) -> bool {
        self.flags[stage * self.half() + row]
    }

    #[inline]
    pub fn set(&mut self, stage: usize, row: usize, kept: bool) {
        let h = self.half();
        self.flags[stage * h + row] = kept;
    }

    /// Flips flag number `index` in stage-major order.
    #[inline]
    pub fn flip_flat(&mut self, index: usize) {
        self.flags[index] = !self.flags[index];
    }

    #[inline]
    pub fn flat(&self) -> &[bool] {
        &self.flags
    }

    pub fn count_kept(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }
}

fn log2_exact(n_big: usize) -> Result<usize> {
    if n_big < 2 || !n_big.is_power_of_two() {
        return Err(Error::ParamOutOfRange(format!(
            "block length {n_big} is not a power of two >= 2"
        )));
    }
    Ok(n_big.trailing_zeros() as usize)
}

/// Wires `(lo, hi)` of butterfly `row` in `stage` (all 0-based).
///
/// The span is `2^stage`; rows enumerate butterflies by ascending `lo`.
pub fn butterfly_map(n_big: usize, stage: usize, row: usize) -> Result<(usize, usize)> {
    let m = log2_exact(n_big)?;
    if stage >= m || row >= n_big / 2 {
        return Err(Error::IndexOutOfRange(format!(
            "butterfly (stage {stage}, row {row}) outside N = {n_big}"
        )));
    }
    Ok(wires(stage, row))
}

#[inline]
pub(crate) fn wires(stage: usize, row: usize) -> (usize, usize) {
    let span = 1usize << stage;
    let lo = ((row >> stage) << (stage + 1)) | (row & (span - 1));
    (lo, lo + span)
}

/// Pushes `u` through the pruned graph, `u` side to channel side.
pub fn encode_graph(u: &[u8], r: &PruningMatrix) -> Result<Vec<u8>> {
    if u.len() != r.n_big() {
        return Err(Error::LengthMismatch {
            expected: r.n_big(),
            found: u.len(),
        });
    }
    let mut x = u.to_vec();
    for s in 0..r.stages() {
        apply_stage(&mut x, r, s);
    }
    Ok(x)
}

/// Inverse of [`encode_graph`]: every stage is an involution, so the
/// stages are replayed in reverse.
pub fn decode_graph(x: &[u8], r: &PruningMatrix) -> Result<Vec<u8>> {
    if x.len() != r.n_big() {
        return Err(Error::LengthMismatch {
            expected: r.n_big(),
            found: x.len(),
        });
    }
    let mut u = x.to_vec();
    for s in (0..r.stages()).rev() {
        apply_stage(&mut u, r, s);
    }
    Ok(u)
}

#[inline]
fn apply_stage(v: &mut [u8], r: &PruningMatrix, s: usize) {
    for row in 0..r.half() {
        if r.is_kept(s, row) {
            let (lo, hi) = wires(s, row);
            v[lo] ^= v[hi];
        }
    }
}

/// `G̃ = f(R, G_N)`: row `i` is the graph image of the unit vector `e_i`.
pub fn build_generator(r: &PruningMatrix) -> BitMatrix {
    let n = r.n_big();
    let mut g = BitMatrix::zeros(n, n);
    let mut e = vec![0u8; n];
    for i in 0..n {
        e[i] = 1;
        let x = encode_graph(&e, r).expect("length matches");
        for (j, &b) in x.iter().enumerate() {
            if b == 1 {
                g.set(i, j, true);
            }
        }
        e[i] = 0;
    }
    g
}
