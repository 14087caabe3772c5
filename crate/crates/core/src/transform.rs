//! Mapping an `(n, k)` code onto a shortened, pruned polar-like code.
//!
//! Given `G` (`k × n`), a block length `N = 2^m ≥ n`, a permutation `P`, a
//! pruning matrix `R` and a shortening pattern `S`, the pre-transformation
//! matrix is
//!
//! ```text
//! M_DF = E · G · S† · P⁻¹ · G̃⁻¹,     G̃ = f(R, G_N)
//! ```
//!
//! with `E` the elimination matrix that brings `M_DF` to reduced row echelon
//! form. Every codeword of the original code is then `c = m_p · M_DF · G̃ · P · S`
//! with `m_p = m · E⁻¹`.
//!
//! `S†` is an index scatter (zeros padded back at the dropped positions),
//! `P⁻¹` an index gather and `G̃⁻¹` the graph run backwards; none of them is
//! ever materialised as a matrix here.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{echelon_pivots, invert, rref, BitMatrix, Permutation};
use crate::polar::{decode_graph, encode_graph, PruningMatrix};

/// Which of the `N` positions of `c_p · P` are transmitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShortenSpec {
    n_big: usize,
    kept: Vec<usize>,
    dropped: Vec<usize>,
}

impl ShortenSpec {
    /// The default convention: keep positions `0..n`, drop `n..N`.
    pub fn tail(n_big: usize, n: usize) -> Result<Self> {
        if n == 0 || n > n_big {
            return Err(Error::DimensionMismatch(format!(
                "cannot shorten length {n_big} to {n}"
            )));
        }
        Ok(ShortenSpec {
            n_big,
            kept: (0..n).collect(),
            dropped: (n..n_big).collect(),
        })
    }

    /// Arbitrary dropped set (0-based positions).
    pub fn from_dropped(n_big: usize, dropped: &[usize]) -> Result<Self> {
        let mut is_dropped = vec![false; n_big];
        for &d in dropped {
            if d >= n_big {
                return Err(Error::IndexOutOfRange(format!(
                    "dropped position {d} outside 0..{n_big}"
                )));
            }
            if is_dropped[d] {
                return Err(Error::DimensionMismatch(format!(
                    "dropped position {d} listed twice"
                )));
            }
            is_dropped[d] = true;
        }
        let kept: Vec<usize> = (0..n_big).filter(|&i| !is_dropped[i]).collect();
        if kept.is_empty() {
            return Err(Error::DimensionMismatch("every position dropped".into()));
        }
        let dropped = (0..n_big).filter(|&i| is_dropped[i]).collect();
        Ok(ShortenSpec {
            n_big,
            kept,
            dropped,
        })
    }

    #[inline]
    pub fn n_big(&self) -> usize {
        self.n_big
    }

    /// Transmitted length `n`.
    #[inline]
    pub fn n(&self) -> usize {
        self.kept.len()
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn dropped(&self) -> &[usize] {
        &self.dropped
    }

    /// `S†`: places `c` at the kept positions, zeros elsewhere.
    pub fn expand<T: Copy>(&self, c: &[T], fill: T) -> Vec<T> {
        let mut out = vec![fill; self.n_big];
        for (&pos, &v) in self.kept.iter().zip(c) {
            out[pos] = v;
        }
        out
    }

    /// `S`: keeps only the transmitted positions.
    pub fn restrict<T: Copy>(&self, full: &[T]) -> Vec<T> {
        self.kept.iter().map(|&p| full[p]).collect()
    }

    /// The `N × n` column-selection matrix.
    pub fn matrix(&self) -> BitMatrix {
        let mut s = BitMatrix::zeros(self.n_big, self.n());
        for (j, &p) in self.kept.iter().enumerate() {
            s.set(p, j, true);
        }
        s
    }
}

/// Role of one `u` position in the polar-like code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UBit {
    /// Carries bit `row` of `m_p`.
    Info(usize),
    /// Equal to the XOR of the listed earlier positions; empty means the
    /// bit is frozen to zero.
    Frozen(Vec<usize>),
}

/// Per-position information / frozen assignment derived from `M_DF`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrozenSpec {
    bits: Vec<UBit>,
    info: Vec<usize>,
}

impl FrozenSpec {
    pub fn bits(&self) -> &[UBit] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> &UBit {
        &self.bits[i]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Information positions in increasing order.
    pub fn info_set(&self) -> &[usize] {
        &self.info
    }

    /// Expands `m_p` into the full `u` vector by walking the positions in
    /// order and evaluating each frozen expression.
    pub fn expand(&self, m_p: &[u8]) -> Vec<u8> {
        let mut u = vec![0u8; self.bits.len()];
        for (i, b) in self.bits.iter().enumerate() {
            u[i] = match b {
                UBit::Info(t) => m_p[*t] & 1,
                UBit::Frozen(refs) => refs.iter().fold(0, |acc, &j| acc ^ u[j]),
            };
        }
        u
    }

    /// True when `u` satisfies every frozen equation.
    pub fn is_consistent(&self, u: &[u8]) -> bool {
        self.bits.iter().enumerate().all(|(i, b)| match b {
            UBit::Info(_) => true,
            UBit::Frozen(refs) => refs.iter().fold(0, |acc, &j| acc ^ u[j]) == u[i],
        })
    }
}

/// Reads the information set and frozen expressions off a reduced row
/// echelon `M_DF`.
pub fn extract_frozen(m_df: &BitMatrix) -> Result<FrozenSpec> {
    let pivots = echelon_pivots(m_df)?;
    let mut pivot_row = vec![None; m_df.cols()];
    for (t, &p) in pivots.iter().enumerate() {
        pivot_row[p] = Some(t);
    }
    let bits = (0..m_df.cols())
        .map(|c| match pivot_row[c] {
            Some(t) => UBit::Info(t),
            None => UBit::Frozen(
                pivots
                    .iter()
                    .enumerate()
                    .filter(|&(t, &p)| p < c && m_df.get(t, c))
                    .map(|(_, &p)| p)
                    .collect(),
            ),
        })
        .collect();
    Ok(FrozenSpec { bits, info: pivots })
}

/// A complete code-to-polar-like mapping.
#[derive(Clone, Debug, PartialEq)]
pub struct Transformation {
    pub(crate) g: BitMatrix,
    pub(crate) perm: Permutation,
    pub(crate) pruning: PruningMatrix,
    pub(crate) shorten: ShortenSpec,
    pub(crate) m_df: BitMatrix,
    pub(crate) elim: BitMatrix,
    pub(crate) elim_inv: BitMatrix,
    pub(crate) frozen: FrozenSpec,
}

/// `G · S† · P⁻¹ · G̃⁻¹`, computed row by row.
pub(crate) fn raw_mdf(
    g: &BitMatrix,
    perm: &Permutation,
    pruning: &PruningMatrix,
    shorten: &ShortenSpec,
) -> BitMatrix {
    let n_big = pruning.n_big();
    let mut out = BitMatrix::zeros(g.rows(), n_big);
    for i in 0..g.rows() {
        let full = shorten.expand(&g.row(i), 0u8);
        let cp: Vec<u8> = (0..n_big).map(|j| full[perm.image(j)]).collect();
        let u = decode_graph(&cp, pruning).expect("length checked");
        for (j, &b) in u.iter().enumerate() {
            if b == 1 {
                out.set(i, j, true);
            }
        }
    }
    out
}

pub fn build_transformation(
    g: &BitMatrix,
    n_big: usize,
    perm: Permutation,
    pruning: PruningMatrix,
    shorten: ShortenSpec,
) -> Result<Transformation> {
    if pruning.n_big() != n_big || perm.len() != n_big || shorten.n_big() != n_big {
        return Err(Error::DimensionMismatch(format!(
            "N = {n_big} but permutation has length {}, pruning covers {}, shortening covers {}",
            perm.len(),
            pruning.n_big(),
            shorten.n_big()
        )));
    }
    if shorten.n() != g.cols() {
        return Err(Error::DimensionMismatch(format!(
            "code length {} but shortening keeps {} positions",
            g.cols(),
            shorten.n()
        )));
    }
    let k = g.rows();
    if k == 0 {
        return Err(Error::DimensionMismatch("generator has no rows".into()));
    }
    let reduced = rref(&raw_mdf(g, &perm, &pruning, &shorten))?;
    let elim_inv = invert(&reduced.elimination)?;
    let frozen = extract_frozen(&reduced.reduced)?;
    let t = Transformation {
        g: g.clone(),
        perm,
        pruning,
        shorten,
        m_df: reduced.reduced,
        elim: reduced.elimination,
        elim_inv,
        frozen,
    };
    // Basis messages m_p = e_t must land on zero at every dropped position
    // and reproduce row t of E·G on the kept ones.
    let eg = t.elim.mul(g)?;
    for row in 0..k {
        let full = t.full_codeword_from_u(&t.m_df.row(row));
        if let Some(&pos) = t.shorten.dropped().iter().find(|&&p| full[p] != 0) {
            return Err(Error::ShortenViolation { row, position: pos });
        }
        if t.shorten.restrict(&full) != eg.row(row) {
            return Err(Error::Integrity(format!(
                "basis row {row} does not reproduce the original code"
            )));
        }
    }
    Ok(t)
}

impl Transformation {
    /// Rate-1 mapping: `G = F₂^{⊗m}`-style inputs with identity permutation,
    /// all kernels kept and no shortening.
    pub fn plain(g: &BitMatrix) -> Result<Self> {
        let n_big = g.cols();
        build_transformation(
            g,
            n_big,
            Permutation::identity(n_big),
            PruningMatrix::all_kept(n_big)?,
            ShortenSpec::tail(n_big, n_big)?,
        )
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    pub fn n_big(&self) -> usize {
        self.pruning.n_big()
    }

    pub fn n(&self) -> usize {
        self.g.cols()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn pruning(&self) -> &PruningMatrix {
        &self.pruning
    }

    pub fn shorten(&self) -> &ShortenSpec {
        &self.shorten
    }

    pub fn m_df(&self) -> &BitMatrix {
        &self.m_df
    }

    /// Elimination matrix `E`; decoded `m_p` maps back via `m = m_p · E`.
    pub fn elim(&self) -> &BitMatrix {
        &self.elim
    }

    pub fn frozen(&self) -> &FrozenSpec {
        &self.frozen
    }

    pub fn info_set(&self) -> &[usize] {
        self.frozen.info_set()
    }

    /// `u · G̃ · P`, length `N`.
    pub(crate) fn full_codeword_from_u(&self, u: &[u8]) -> Vec<u8> {
        let x = encode_graph(u, &self.pruning).expect("length N");
        self.perm.apply(&x).expect("length N")
    }

    /// `m_p = m · E⁻¹`.
    pub fn message_to_mp(&self, m: &[u8]) -> Result<Vec<u8>> {
        self.elim_inv.vec_mul(m)
    }

    /// `m = m_p · E`.
    pub fn mp_to_message(&self, m_p: &[u8]) -> Result<Vec<u8>> {
        self.elim.vec_mul(m_p)
    }

    /// `c = (m · E⁻¹) · M_DF · G̃ · P · S`.
    pub fn encode(&self, m: &[u8]) -> Result<Vec<u8>> {
        Ok(self.shorten.restrict(&self.encode_full(m)?))
    }

    /// `c_p · P` before shortening, length `N`.
    pub fn encode_full(&self, m: &[u8]) -> Result<Vec<u8>> {
        if m.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                found: m.len(),
            });
        }
        let m_p = self.message_to_mp(m)?;
        let u = self.m_df.vec_mul(&m_p)?;
        Ok(self.full_codeword_from_u(&u))
    }

    /// Codeword of the original code from `u` (used by the decoders).
    pub fn codeword_from_u(&self, u: &[u8]) -> Vec<u8> {
        self.shorten.restrict(&self.full_codeword_from_u(u))
    }

    pub fn verify_roundtrip<R: Rng>(&self, trials: usize, rng: &mut R) -> RoundtripReport {
        let mut report = RoundtripReport {
            trials,
            failures: 0,
            first_failure: None,
        };
        for _ in 0..trials {
            let m: Vec<u8> = (0..self.k()).map(|_| rng.random_range(0..2)).collect();
            let expected = self.g.vec_mul(&m).expect("length k");
            let full = self.encode_full(&m).expect("length k");
            let got = self.shorten.restrict(&full);
            let dropped_nonzero = self.shorten.dropped().iter().any(|&p| full[p] != 0);
            if got != expected || dropped_nonzero {
                report.failures += 1;
                if report.first_failure.is_none() {
                    report.first_failure = Some(RoundtripFailure {
                        message: m,
                        expected,
                        got,
                        dropped_nonzero,
                    });
                }
            }
        }
        report
    }
}

/// `encode_via_transform`: the transformed encoder, equal to `m · G`.
pub fn encode_via_transform(m: &[u8], t: &Transformation) -> Result<Vec<u8>> {
    t.encode(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripFailure {
    pub message: Vec<u8>,
    pub expected: Vec<u8>,
    pub got: Vec<u8>,
    pub dropped_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<RoundtripFailure>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}
