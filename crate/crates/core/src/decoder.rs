//! LLR-domain SC / SCL decoding over the pruned graph, and exhaustive MLD.
//!
//! LLRs are `ln P(y|0) / P(y|1)`. The kernels are exact: the check-node
//! update is the true box-plus and the path metric accumulates
//! `ln(1 + e^{−(1−2û)λ})` at every position, so a list large enough to
//! hold every path returns the maximum-likelihood codeword.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::transform::{Transformation, UBit};

/// LLR assigned to shortened (known-zero) positions.
pub const LLR_SHORTENED: f64 = 300.0;
/// Magnitude used for noiseless test inputs.
pub const LLR_MAX: f64 = LLR_SHORTENED;
/// Largest dimension accepted by [`mld`].
pub const MLD_MAX_K: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    /// Message of the original code, `m = m_p · E`.
    pub message: Vec<u8>,
    /// `message · G`.
    pub codeword: Vec<u8>,
    /// Accumulated path metric (lower is better). For [`mld`] this is the
    /// negated correlation `−Σ (1−2c_i)·llr_i`.
    pub path_metric: f64,
    /// Position of this path in the final sorted list (0 = best).
    pub list_rank: usize,
}

/// Correlation `Σ (1−2c_i)·llr_i`; larger is more likely.
pub fn correlation(llr: &[f64], codeword: &[u8]) -> f64 {
    llr.iter()
        .zip(codeword)
        .map(|(&l, &c)| if c == 0 { l } else { -l })
        .sum()
}

/// Exact box-plus `2·atanh(tanh(a/2)·tanh(b/2))` in a form that stays finite
/// for large magnitudes.
#[inline]
pub fn boxplus(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Variable-node update given the partial sum `u` of the lower branch.
#[inline]
pub fn g_update(a: f64, b: f64, u: u8) -> f64 {
    if u == 0 {
        b + a
    } else {
        b - a
    }
}

/// `ln(1 + e^x)`.
#[inline]
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Path-metric increment for deciding `bit` on an LLR of `llr`.
#[inline]
pub fn metric_increment(llr: f64, bit: u8) -> f64 {
    softplus(if bit == 0 { -llr } else { llr })
}

/// Clamps to `±LLR_MAX` so that the kernels never see infinities.
fn sanitize(chan_llr: &[f64]) -> Result<Vec<f64>> {
    chan_llr
        .iter()
        .map(|&l| {
            if l.is_nan() {
                Err(Error::ParamOutOfRange("NaN LLR".into()))
            } else {
                Ok(l.clamp(-LLR_MAX, LLR_MAX))
            }
        })
        .collect()
}

/// Maps channel LLRs (length `n`) into `c_p` order (length `N`): `S†` puts
/// the known-zero sentinel at dropped positions, then `P⁻¹` gathers.
/// Magnitudes are clamped to [`LLR_MAX`]; NaN is rejected.
pub fn prepare_llr(chan_llr: &[f64], t: &Transformation) -> Result<Vec<f64>> {
    if chan_llr.len() != t.n() {
        return Err(Error::LengthMismatch {
            expected: t.n(),
            found: chan_llr.len(),
        });
    }
    let full = t.shorten().expand(&sanitize(chan_llr)?, LLR_SHORTENED);
    Ok((0..t.n_big()).map(|i| full[t.perm().image(i)]).collect())
}

#[inline]
fn level(s: usize) -> std::ops::Range<usize> {
    (1 << s)..(2 << s)
}

fn finish(t: &Transformation, u: &[u8], path_metric: f64, list_rank: usize) -> DecodeResult {
    let m_p: Vec<u8> = t.info_set().iter().map(|&i| u[i]).collect();
    let message = t.mp_to_message(&m_p).expect("length k");
    let codeword = t.generator().vec_mul(&message).expect("length k");
    debug_assert_eq!(codeword, t.codeword_from_u(u));
    DecodeResult {
        message,
        codeword,
        path_metric,
        list_rank,
    }
}

#[inline]
fn frozen_value(refs: &[usize], u: &[u8]) -> u8 {
    refs.iter().fold(0, |acc, &j| acc ^ u[j])
}

/// Successive-cancellation decoder with reusable scratch buffers.
///
/// One instance per thread; the [`Transformation`] is shared read-only.
#[derive(Clone, Debug, Default)]
pub struct ScDecoder {
    alpha: Vec<f64>,
    beta: Vec<u8>,
    left: Vec<u8>,
    u: Vec<u8>,
    pm: f64,
}

impl ScDecoder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Decodes LLRs already in `c_p` order (see [`prepare_llr`]).
    pub fn decode(&mut self, llr: &[f64], t: &Transformation) -> Result<DecodeResult> {
        let n_big = t.n_big();
        if llr.len() != n_big {
            return Err(Error::LengthMismatch {
                expected: n_big,
                found: llr.len(),
            });
        }
        let m = t.pruning().stages();
        self.alpha.clear();
        self.alpha.resize(2 * n_big, 0.0);
        self.beta.clear();
        self.beta.resize(2 * n_big, 0);
        self.left.clear();
        self.left.resize(2 * n_big, 0);
        self.u.clear();
        self.u.resize(n_big, 0);
        self.pm = 0.0;
        self.alpha[level(m)].copy_from_slice(llr);
        self.node(t, m, 0);
        Ok(finish(t, &self.u, self.pm, 0))
    }

    fn node(&mut self, t: &Transformation, s: usize, base: usize) {
        if s == 0 {
            let lam = self.alpha[1];
            let bit = match t.frozen().get(base) {
                UBit::Info(_) => (lam < 0.0) as u8,
                UBit::Frozen(refs) => frozen_value(refs, &self.u),
            };
            self.pm += metric_increment(lam, bit);
            self.u[base] = bit;
            self.beta[1] = bit;
            return;
        }
        let h = 1usize << (s - 1);
        let flags = &t.pruning().flat()[(s - 1) * t.pruning().half()..];
        let row0 = (base >> s) * h;
        let (up, down) = (1usize << s, h);
        for j in 0..h {
            let (a, b) = (self.alpha[up + j], self.alpha[up + h + j]);
            self.alpha[down + j] = if flags[row0 + j] { boxplus(a, b) } else { a };
        }
        self.node(t, s - 1, base);
        for j in 0..h {
            let bl = self.beta[down + j];
            self.left[down + j] = bl;
            let (a, b) = (self.alpha[up + j], self.alpha[up + h + j]);
            self.alpha[down + j] = if flags[row0 + j] { g_update(a, b, bl) } else { b };
        }
        self.node(t, s - 1, base + h);
        for j in 0..h {
            let (bl, br) = (self.left[down + j], self.beta[down + j]);
            self.beta[up + j] = if flags[row0 + j] { bl ^ br } else { bl };
            self.beta[up + h + j] = br;
        }
    }
}

/// SC decoding of LLRs in `c_p` order.
pub fn sc_decode(llr: &[f64], t: &Transformation) -> Result<DecodeResult> {
    ScDecoder::new().decode(llr, t)
}

#[derive(Clone, Debug)]
struct Path {
    alpha: Vec<f64>,
    beta: Vec<u8>,
    left: Vec<u8>,
    u: Vec<u8>,
    pm: f64,
}

/// Orders paths by metric, then by decision history (0 before 1).
fn path_order(pm_a: f64, hist_a: &[u8], pm_b: f64, hist_b: &[u8]) -> Ordering {
    pm_a.partial_cmp(&pm_b)
        .unwrap_or(Ordering::Equal)
        .then_with(|| hist_a.cmp(hist_b))
}

/// Successive-cancellation list decoder.
#[derive(Clone, Debug)]
pub struct SclDecoder {
    list_size: usize,
}

impl SclDecoder {
    pub fn new(list_size: usize) -> Result<Self> {
        if list_size == 0 {
            return Err(Error::ParamOutOfRange("list size must be at least 1".into()));
        }
        Ok(SclDecoder { list_size })
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    /// Best path only.
    pub fn decode(&self, llr: &[f64], t: &Transformation) -> Result<DecodeResult> {
        Ok(self.decode_list(llr, t)?.swap_remove(0))
    }

    /// Every surviving path, best first.
    pub fn decode_list(&self, llr: &[f64], t: &Transformation) -> Result<Vec<DecodeResult>> {
        let n_big = t.n_big();
        if llr.len() != n_big {
            return Err(Error::LengthMismatch {
                expected: n_big,
                found: llr.len(),
            });
        }
        let m = t.pruning().stages();
        let mut root = Path {
            alpha: vec![0.0; 2 * n_big],
            beta: vec![0; 2 * n_big],
            left: vec![0; 2 * n_big],
            u: vec![0; n_big],
            pm: 0.0,
        };
        root.alpha[level(m)].copy_from_slice(llr);
        let mut paths = vec![root];
        self.node(t, m, 0, &mut paths);
        paths.sort_by(|a, b| path_order(a.pm, &a.u, b.pm, &b.u));
        Ok(paths
            .iter()
            .enumerate()
            .map(|(rank, p)| finish(t, &p.u, p.pm, rank))
            .collect())
    }

    fn node(&self, t: &Transformation, s: usize, base: usize, paths: &mut Vec<Path>) {
        if s == 0 {
            self.leaf(t, base, paths);
            return;
        }
        let h = 1usize << (s - 1);
        let flags = &t.pruning().flat()[(s - 1) * t.pruning().half()..];
        let row0 = (base >> s) * h;
        let (up, down) = (1usize << s, h);
        for p in paths.iter_mut() {
            for j in 0..h {
                let (a, b) = (p.alpha[up + j], p.alpha[up + h + j]);
                p.alpha[down + j] = if flags[row0 + j] { boxplus(a, b) } else { a };
            }
        }
        self.node(t, s - 1, base, paths);
        for p in paths.iter_mut() {
            for j in 0..h {
                let bl = p.beta[down + j];
                p.left[down + j] = bl;
                let (a, b) = (p.alpha[up + j], p.alpha[up + h + j]);
                p.alpha[down + j] = if flags[row0 + j] { g_update(a, b, bl) } else { b };
            }
        }
        self.node(t, s - 1, base + h, paths);
        for p in paths.iter_mut() {
            for j in 0..h {
                let (bl, br) = (p.left[down + j], p.beta[down + j]);
                p.beta[up + j] = if flags[row0 + j] { bl ^ br } else { bl };
                p.beta[up + h + j] = br;
            }
        }
    }

    fn leaf(&self, t: &Transformation, i: usize, paths: &mut Vec<Path>) {
        match t.frozen().get(i) {
            UBit::Frozen(refs) => {
                for p in paths.iter_mut() {
                    let bit = frozen_value(refs, &p.u);
                    p.pm += metric_increment(p.alpha[1], bit);
                    p.u[i] = bit;
                    p.beta[1] = bit;
                }
            }
            UBit::Info(_) => {
                // (path index, bit, new metric)
                let mut cands: Vec<(usize, u8, f64)> = Vec::with_capacity(2 * paths.len());
                for (idx, p) in paths.iter().enumerate() {
                    for bit in 0..2u8 {
                        cands.push((idx, bit, p.pm + metric_increment(p.alpha[1], bit)));
                    }
                }
                cands.sort_by(|a, b| {
                    path_order(a.2, &paths[a.0].u[..i], b.2, &paths[b.0].u[..i])
                        .then(a.1.cmp(&b.1))
                });
                cands.truncate(self.list_size);
                let mut uses = vec![0usize; paths.len()];
                for c in &cands {
                    uses[c.0] += 1;
                }
                let mut old: Vec<Option<Path>> = paths.drain(..).map(Some).collect();
                for (idx, bit, pm) in cands {
                    uses[idx] -= 1;
                    let mut p = if uses[idx] > 0 {
                        old[idx].as_ref().expect("still owned").clone()
                    } else {
                        old[idx].take().expect("taken once")
                    };
                    p.pm = pm;
                    p.u[i] = bit;
                    p.beta[1] = bit;
                    paths.push(p);
                }
            }
        }
    }
}

/// SCL decoding of LLRs in `c_p` order.
pub fn scl_decode(llr: &[f64], t: &Transformation, list_size: usize) -> Result<DecodeResult> {
    SclDecoder::new(list_size)?.decode(llr, t)
}

/// Bitwise lexicographic comparison of messages stored as integers with
/// bit `b` holding `m_b`.
#[inline]
fn message_lex_less(a: u32, b: u32) -> bool {
    let d = a ^ b;
    d != 0 && (a >> d.trailing_zeros()) & 1 == 0
}

/// Maximum-likelihood decoding by enumerating all `2^k` codewords.
///
/// Maximises the correlation `Σ (1−2c_i)·llr_i`; ties go to the
/// lexicographically smallest message.
pub fn mld(chan_llr: &[f64], g: &BitMatrix) -> Result<DecodeResult> {
    let (k, n) = (g.rows(), g.cols());
    if k > MLD_MAX_K {
        return Err(Error::DimensionTooLarge { k, max: MLD_MAX_K });
    }
    if chan_llr.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: chan_llr.len(),
        });
    }
    let chan_llr = &sanitize(chan_llr)?[..];
    let supports: Vec<Vec<usize>> = (0..k)
        .map(|i| (0..n).filter(|&j| g.get(i, j)).collect())
        .collect();
    let scale: f64 = chan_llr.iter().map(|l| l.abs()).sum();
    let eps = 1e-9 * (1.0 + scale);
    let mut c = vec![0u8; n];
    let mut obj = scale_sum(chan_llr);
    let mut msg = 0u32;
    let mut best_msg = 0u32;
    let mut best_exact = obj;
    let mut best_cw = c.clone();
    for step in 1u32..(1u32 << k) {
        let bit = step.trailing_zeros() as usize;
        msg ^= 1 << bit;
        for &j in &supports[bit] {
            obj -= 2.0 * if c[j] == 0 { chan_llr[j] } else { -chan_llr[j] };
            c[j] ^= 1;
        }
        if obj >= best_exact - eps {
            let exact = correlation(chan_llr, &c);
            if exact > best_exact || (exact == best_exact && message_lex_less(msg, best_msg)) {
                best_exact = exact;
                best_msg = msg;
                best_cw.copy_from_slice(&c);
            }
            obj = exact;
        }
    }
    Ok(DecodeResult {
        message: (0..k).map(|b| ((best_msg >> b) & 1) as u8).collect(),
        codeword: best_cw,
        path_metric: -best_exact,
        list_rank: 0,
    })
}

fn scale_sum(llr: &[f64]) -> f64 {
    llr.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;
    use crate::gf2::Permutation;
    use crate::polar::PruningMatrix;
    use crate::transform::{build_transformation, ShortenSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_transformation(rng: &mut ChaCha8Rng, g: &BitMatrix, n_big: usize) -> Transformation {
        let mut p = Permutation::identity(n_big);
        for i in (1..n_big).rev() {
            p.swap(i, rng.random_range(0..=i));
        }
        let mut r = PruningMatrix::all_kept(n_big).unwrap();
        for i in 0..r.len() {
            if rng.random::<bool>() {
                r.flip_flat(i);
            }
        }
        build_transformation(g, n_big, p, r, ShortenSpec::tail(n_big, g.cols()).unwrap()).unwrap()
    }

    fn noisy_llr(rng: &mut ChaCha8Rng, c: &[u8], sigma: f64) -> Vec<f64> {
        c.iter()
            .map(|&b| {
                let x = 1.0 - 2.0 * b as f64;
                let n: f64 = rng.sample(StandardNormal);
                2.0 * (x + sigma * n) / (sigma * sigma)
            })
            .collect()
    }

    fn noiseless(c: &[u8]) -> Vec<f64> {
        c.iter().map(|&b| if b == 0 { LLR_MAX } else { -LLR_MAX }).collect()
    }

    #[test]
    fn boxplus_matches_atanh_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let a: f64 = rng.random_range(-20.0..20.0);
            let b: f64 = rng.random_range(-20.0..20.0);
            let direct = 2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh();
            assert!((boxplus(a, b) - direct).abs() < 1e-9 * (1.0 + direct.abs()));
        }
        assert!(boxplus(300.0, 300.0).is_finite());
        assert!((boxplus(300.0, -5.0) + 5.0).abs() < 1e-12);
    }

    #[test]
    fn prepare_llr_places_sentinels() {
        let g = codes::egolay_24_12();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_transformation(&mut rng, &g, 32);
        let chan: Vec<f64> = (0..24).map(|i| i as f64 + 1.0).collect();
        let r = prepare_llr(&chan, &t).unwrap();
        let inv = t.perm().inverse();
        for pos in 24..32 {
            assert_eq!(r[inv.image(pos)], LLR_SHORTENED);
        }
        for pos in 0..24 {
            assert_eq!(r[inv.image(pos)], chan[pos]);
        }
        assert!(prepare_llr(&chan[..3], &t).is_err());
        let mut odd = chan.clone();
        odd[0] = f64::INFINITY;
        odd[1] = f64::NEG_INFINITY;
        let r = prepare_llr(&odd, &t).unwrap();
        assert_eq!(r[inv.image(0)], LLR_MAX);
        assert_eq!(r[inv.image(1)], -LLR_MAX);
        odd[2] = f64::NAN;
        assert!(prepare_llr(&odd, &t).is_err());
        let plain = Transformation::plain(&BitMatrix::identity(4)).unwrap();
        assert_eq!(prepare_llr(&[1.0, -2.0, 3.0, 4.0], &plain).unwrap(), vec![1.0, -2.0, 3.0, 4.0]);
    }

    #[test]
    fn noiseless_recovery() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (g, n_big) in [
            (codes::challenging_8_3(), 8),
            (codes::egolay_24_12(), 32),
            (codes::random_16_8(), 16),
        ] {
            for _ in 0..5 {
                let t = random_transformation(&mut rng, &g, n_big);
                for _ in 0..20 {
                    let m: Vec<u8> = (0..g.rows()).map(|_| rng.random_range(0..2)).collect();
                    let c = g.vec_mul(&m).unwrap();
                    let llr = prepare_llr(&noiseless(&c), &t).unwrap();
                    let sc = sc_decode(&llr, &t).unwrap();
                    assert_eq!(sc.message, m);
                    assert_eq!(sc.codeword, c);
                    let scl = scl_decode(&llr, &t, 4).unwrap();
                    assert_eq!(scl.message, m);
                    assert_eq!(mld(&noiseless(&c), &g).unwrap().codeword, c);
                }
            }
        }
    }

    #[test]
    fn scl_with_one_path_equals_sc() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = codes::egolay_24_12();
        let t = random_transformation(&mut rng, &g, 32);
        let mut sc = ScDecoder::new();
        let scl = SclDecoder::new(1).unwrap();
        for _ in 0..500 {
            let m: Vec<u8> = (0..12).map(|_| rng.random_range(0..2)).collect();
            let llr = noisy_llr(&mut rng, &g.vec_mul(&m).unwrap(), 0.9);
            let r = prepare_llr(&llr, &t).unwrap();
            let a = sc.decode(&r, &t).unwrap();
            let b = scl.decode(&r, &t).unwrap();
            assert_eq!(a.message, b.message);
            assert!((a.path_metric - b.path_metric).abs() < 1e-12);
        }
    }

    #[test]
    fn full_list_reaches_ml_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = codes::random_16_8();
        for _ in 0..3 {
            let t = random_transformation(&mut rng, &g, 16);
            let dec = SclDecoder::new(256).unwrap();
            for _ in 0..100 {
                let m: Vec<u8> = (0..8).map(|_| rng.random_range(0..2)).collect();
                let llr = noisy_llr(&mut rng, &g.vec_mul(&m).unwrap(), 1.0);
                let ml = mld(&llr, &g).unwrap();
                let res = dec.decode(&prepare_llr(&llr, &t).unwrap(), &t).unwrap();
                assert!((correlation(&llr, &res.codeword) - correlation(&llr, &ml.codeword)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn decoded_u_satisfies_frozen_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = codes::egolay_24_12();
        let t = random_transformation(&mut rng, &g, 32);
        for _ in 0..100 {
            let m: Vec<u8> = (0..12).map(|_| rng.random_range(0..2)).collect();
            let llr = noisy_llr(&mut rng, &g.vec_mul(&m).unwrap(), 1.2);
            let list = SclDecoder::new(8).unwrap().decode_list(&prepare_llr(&llr, &t).unwrap(), &t).unwrap();
            for (rank, r) in list.iter().enumerate() {
                assert_eq!(r.list_rank, rank);
                assert_eq!(g.vec_mul(&r.message).unwrap(), r.codeword);
            }
            for w in list.windows(2) {
                assert!(w[0].path_metric <= w[1].path_metric);
            }
        }
    }

    #[test]
    fn fully_pruned_graph_is_bitwise_hard_decision() {
        let g = BitMatrix::identity(16);
        let r = PruningMatrix::all_pruned(16).unwrap();
        let t = build_transformation(&g, 16, Permutation::identity(16), r, ShortenSpec::tail(16, 16).unwrap())
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let llr: Vec<f64> = (0..16).map(|_| rng.random_range(-4.0..4.0)).collect();
            let want: Vec<u8> = llr.iter().map(|&l| (l < 0.0) as u8).collect();
            assert_eq!(sc_decode(&llr, &t).unwrap().message, want);
        }
    }

    #[test]
    fn pruned_butterfly_ignores_partner_llr() {
        // Pruning the channel-side butterfly on wires (0, 8) makes u_0's
        // left-branch input depend on wire 0 alone.
        let g = codes::random_16_8();
        let mut r = PruningMatrix::all_kept(16).unwrap();
        r.set(3, 0, false);
        let t = build_transformation(&g, 16, Permutation::identity(16), r, ShortenSpec::tail(16, 16).unwrap())
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut dec = ScDecoder::new();
        let llr: Vec<f64> = (0..16).map(|_| rng.random_range(-4.0..4.0)).collect();
        dec.decode(&llr, &t).unwrap();
        // Top split: f-input of branch position 0 is the raw wire-0 LLR, and
        // the re-encoded wire 0 is the left branch's bit alone.
        assert_eq!(dec.beta[16], dec.left[8]);
        assert_eq!(dec.beta[16 + 1], dec.left[9] ^ dec.beta[9]);
        let mut alt = llr.clone();
        alt[8] = -3.0 * alt[8];
        let a = sc_decode(&llr, &t).unwrap();
        let b = sc_decode(&alt, &t).unwrap();
        assert_eq!(g.vec_mul(&a.message).unwrap(), a.codeword);
        assert_eq!(g.vec_mul(&b.message).unwrap(), b.codeword);
    }

    #[test]
    fn mld_edge_cases() {
        let g = codes::challenging_8_3();
        assert!(mld(&[1.0; 7], &g).is_err());
        let big = BitMatrix::identity(25);
        assert!(matches!(mld(&[1.0; 25], &big), Err(Error::DimensionTooLarge { .. })));
        // All-zero LLRs: every codeword ties, smallest message wins.
        let r = mld(&[0.0; 8], &g).unwrap();
        assert_eq!(r.message, vec![0, 0, 0]);
    }

    #[test]
    fn mld_equals_min_euclidean_distance() {
        let g = codes::challenging_8_3();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let sigma = 0.8;
        for _ in 0..10_000 {
            let m: Vec<u8> = (0..3).map(|_| rng.random_range(0..2)).collect();
            let c = g.vec_mul(&m).unwrap();
            let y: Vec<f64> = c
                .iter()
                .map(|&b| 1.0 - 2.0 * b as f64 + sigma * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let llr: Vec<f64> = y.iter().map(|v| 2.0 * v / (sigma * sigma)).collect();
            let best = (0..8u32)
                .map(|mi| {
                    let mm: Vec<u8> = (0..3).map(|b| ((mi >> b) & 1) as u8).collect();
                    let cw = g.vec_mul(&mm).unwrap();
                    let d: f64 = cw
                        .iter()
                        .zip(&y)
                        .map(|(&b, &v)| (v - (1.0 - 2.0 * b as f64)).powi(2))
                        .sum();
                    (d, cw)
                })
                .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
                .unwrap();
            assert_eq!(mld(&llr, &g).unwrap().codeword, best.1);
        }
    }
}
