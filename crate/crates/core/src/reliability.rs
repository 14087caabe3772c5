//! Bhattacharyya-parameter propagation and the search cost.
//!
//! Reliabilities flow from the channel side (last stage) to the `u` side
//! (stage 0). A kept butterfly with inputs `(z_lo, z_hi)` produces
//! `z_lo + z_hi − z_lo·z_hi` on the lower wire (decoded first) and
//! `z_lo·z_hi` on the upper wire. A pruned butterfly passes both through.
//! The update is exact for erasure channels and an upper bound otherwise.

use crate::error::{Error, Result};
use crate::gf2::{rref, BitMatrix, Permutation};
use crate::polar::{wires, PruningMatrix};
use crate::transform::{ShortenSpec, Transformation};

/// Binary-input memoryless channel used to seed the reliabilities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelParam {
    Bsc { crossover: f64 },
    Bec { erasure: f64 },
    BiAwgn { ebno_db: f64, rate: f64 },
}

impl ChannelParam {
    /// BSC seen by a hard-decision BPSK receiver on BI-AWGN at `ebno_db`:
    /// crossover `Q(√(2·rate·Eb/N0))`.
    pub fn awgn_hard_decision(ebno_db: f64, rate: f64) -> Result<Self> {
        ChannelParam::BiAwgn { ebno_db, rate }.validate()?;
        let snr = 2.0 * rate * 10f64.powf(ebno_db / 10.0);
        Ok(ChannelParam::Bsc {
            crossover: 0.5 * libm::erfc(snr.sqrt() / std::f64::consts::SQRT_2),
        })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelParam::Bsc { crossover } if !(0.0..=0.5).contains(&crossover) => Err(
                Error::ParamOutOfRange(format!("BSC crossover {crossover} outside [0, 0.5]")),
            ),
            ChannelParam::Bec { erasure } if !(0.0..=1.0).contains(&erasure) => Err(
                Error::ParamOutOfRange(format!("BEC erasure {erasure} outside [0, 1]")),
            ),
            ChannelParam::BiAwgn { ebno_db, rate } if !ebno_db.is_finite() || !(rate > 0.0 && rate <= 1.0) => {
                Err(Error::ParamOutOfRange(format!(
                    "AWGN Eb/N0 {ebno_db} dB with rate {rate}"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// `Z(W)` of the underlying channel.
pub fn channel_z(c: ChannelParam) -> Result<f64> {
    c.validate()?;
    Ok(match c {
        ChannelParam::Bsc { crossover } => 2.0 * (crossover * (1.0 - crossover)).sqrt(),
        ChannelParam::Bec { erasure } => erasure,
        ChannelParam::BiAwgn { ebno_db, rate } => (-rate * 10f64.powf(ebno_db / 10.0)).exp(),
    })
}

/// Per-position Bhattacharyya parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityVector(Vec<f64>);

impl ReliabilityVector {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if let Some(v) = z.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::ParamOutOfRange(format!(
                "reliability {v} outside [0, 1]"
            )));
        }
        Ok(ReliabilityVector(z))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Channel reliabilities in `c_p` order. Position `i` of `c_p` is sent to
/// position `perm[i]`; dropped positions are known and get `Z = 0`.
pub fn initial_z(c: ChannelParam, t: &Transformation) -> Result<ReliabilityVector> {
    let z = channel_z(c)?;
    let mut dropped = vec![false; t.n_big()];
    for &d in t.shorten().dropped() {
        dropped[d] = true;
    }
    Ok(ReliabilityVector(
        (0..t.n_big())
            .map(|i| if dropped[t.perm().image(i)] { 0.0 } else { z })
            .collect(),
    ))
}

#[inline]
fn propagate_in_place(z: &mut [f64], pruning: &PruningMatrix) {
    for s in (0..pruning.stages()).rev() {
        for row in 0..pruning.half() {
            if pruning.is_kept(s, row) {
                let (lo, hi) = wires(s, row);
                let (a, b) = (z[lo], z[hi]);
                z[lo] = (a + b - a * b).clamp(0.0, 1.0);
                z[hi] = (a * b).clamp(0.0, 1.0);
            }
        }
    }
}

/// Synthesised-channel reliabilities on the `u` side.
pub fn propagate_z(zin: &ReliabilityVector, pruning: &PruningMatrix) -> Result<ReliabilityVector> {
    if zin.len() != pruning.n_big() {
        return Err(Error::LengthMismatch {
            expected: pruning.n_big(),
            found: zin.len(),
        });
    }
    let mut z = zin.0.clone();
    propagate_in_place(&mut z, pruning);
    Ok(ReliabilityVector(z))
}

/// Sum of `Z` over the information set.
pub fn cost(c: ChannelParam, t: &Transformation) -> Result<f64> {
    let z = propagate_z(&initial_z(c, t)?, t.pruning())?;
    Ok(t.info_set().iter().map(|&i| z.0[i]).sum())
}

/// Per-information-position breakdown of [`cost`].
pub fn cost_breakdown(c: ChannelParam, t: &Transformation) -> Result<Vec<(usize, f64)>> {
    let z = propagate_z(&initial_z(c, t)?, t.pruning())?;
    Ok(t.info_set().iter().map(|&i| (i, z.0[i])).collect())
}

/// Evaluates the search cost of `(R, p)` without building a full
/// [`Transformation`].
///
/// `M = G · S† · P⁻¹ · G̃⁻¹` is held column-wise (one packed `k`-bit column
/// per `u` position), so `G̃⁻¹` reduces to column XORs and the information
/// set is the set of columns independent of all earlier ones, which is
/// exactly the pivot set of the reduced row echelon form.
#[derive(Clone, Debug)]
pub struct CostEvaluator {
    n_big: usize,
    k: usize,
    words: usize,
    z_channel: f64,
    // (G S†) columns, packed, indexed by position in c.
    g_cols: Vec<u64>,
    dropped: Vec<bool>,
    // scratch
    cols: Vec<u64>,
    z: Vec<f64>,
    basis: Vec<u64>,
    basis_used: Vec<bool>,
    // Without shortening the propagated z depends on R alone, so `z` stays
    // valid while R is unchanged.
    z_cached_for: Option<Vec<bool>>,
}

impl CostEvaluator {
    pub fn new(g: &BitMatrix, shorten: &ShortenSpec, chan: ChannelParam) -> Result<Self> {
        let z_channel = channel_z(chan)?;
        if shorten.n() != g.cols() {
            return Err(Error::DimensionMismatch(format!(
                "code length {} but shortening keeps {} positions",
                g.cols(),
                shorten.n()
            )));
        }
        rref(g)?;
        let k = g.rows();
        let n_big = shorten.n_big();
        let words = k.div_ceil(64);
        let mut g_cols = vec![0u64; n_big * words];
        for (j, &pos) in shorten.kept().iter().enumerate() {
            for i in 0..k {
                if g.get(i, j) {
                    g_cols[pos * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        let mut dropped = vec![false; n_big];
        for &d in shorten.dropped() {
            dropped[d] = true;
        }
        Ok(CostEvaluator {
            n_big,
            k,
            words,
            z_channel,
            g_cols,
            dropped,
            cols: vec![0; n_big * words],
            z: vec![0.0; n_big],
            basis: vec![0; k * words],
            basis_used: vec![false; k],
            z_cached_for: None,
        })
    }

    pub fn n_big(&self) -> usize {
        self.n_big
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Cost of `(pruning, perm)`.
    pub fn cost(&mut self, pruning: &PruningMatrix, perm: &Permutation) -> f64 {
        self.load(pruning, perm);
        let mut total = 0.0;
        self.scan_pivots(|j, z| total += z[j]);
        total
    }

    /// Information set and per-position reliabilities of `(pruning, perm)`.
    pub fn info_set(&mut self, pruning: &PruningMatrix, perm: &Permutation) -> (Vec<usize>, Vec<f64>) {
        self.load(pruning, perm);
        let mut info = Vec::with_capacity(self.k);
        self.scan_pivots(|j, _| info.push(j));
        (info, self.z.clone())
    }

    fn load(&mut self, pruning: &PruningMatrix, perm: &Permutation) {
        debug_assert_eq!(pruning.n_big(), self.n_big);
        debug_assert_eq!(perm.len(), self.n_big);
        let w = self.words;
        let shortened = self.dropped.iter().any(|&d| d);
        let z_fresh = shortened || self.z_cached_for.as_deref() != Some(pruning.flat());
        for i in 0..self.n_big {
            let src = perm.image(i);
            self.cols[i * w..(i + 1) * w].copy_from_slice(&self.g_cols[src * w..(src + 1) * w]);
            if z_fresh {
                self.z[i] = if self.dropped[src] { 0.0 } else { self.z_channel };
            }
        }
        let half = pruning.half();
        let flags = pruning.flat();
        for s in (0..pruning.stages()).rev() {
            let stage_flags = &flags[s * half..(s + 1) * half];
            for (row, &kept) in stage_flags.iter().enumerate() {
                if kept {
                    let (lo, hi) = wires(s, row);
                    if w == 1 {
                        self.cols[lo] ^= self.cols[hi];
                    } else {
                        for t in 0..w {
                            self.cols[lo * w + t] ^= self.cols[hi * w + t];
                        }
                    }
                    if z_fresh {
                        let (a, b) = (self.z[lo], self.z[hi]);
                        self.z[lo] = (a + b - a * b).clamp(0.0, 1.0);
                        self.z[hi] = (a * b).clamp(0.0, 1.0);
                    }
                }
            }
        }
        if !shortened && z_fresh {
            match &mut self.z_cached_for {
                Some(f) => f.copy_from_slice(flags),
                None => self.z_cached_for = Some(flags.to_vec()),
            }
        }
    }

    /// Greedy column basis: calls `f(j, z)` for every column `j` that is
    /// independent of columns `0..j`.
    fn scan_pivots(&mut self, mut f: impl FnMut(usize, &[f64])) {
        let w = self.words;
        self.basis_used.iter_mut().for_each(|b| *b = false);
        let mut rank = 0;
        if w == 1 {
            for j in 0..self.n_big {
                if rank == self.k {
                    break;
                }
                let mut v = self.cols[j];
                while v != 0 {
                    let lead = 63 - v.leading_zeros() as usize;
                    if self.basis_used[lead] {
                        v ^= self.basis[lead];
                    } else {
                        self.basis[lead] = v;
                        self.basis_used[lead] = true;
                        rank += 1;
                        f(j, &self.z);
                        break;
                    }
                }
            }
            return;
        }
        let mut v = vec![0u64; w];
        for j in 0..self.n_big {
            if rank == self.k {
                break;
            }
            v.copy_from_slice(&self.cols[j * w..(j + 1) * w]);
            loop {
                let Some(top) = (0..w).rev().find(|&t| v[t] != 0) else {
                    break;
                };
                let lead = top * 64 + 63 - v[top].leading_zeros() as usize;
                if self.basis_used[lead] {
                    for t in 0..w {
                        v[t] ^= self.basis[lead * w + t];
                    }
                } else {
                    self.basis[lead * w..(lead + 1) * w].copy_from_slice(&v);
                    self.basis_used[lead] = true;
                    rank += 1;
                    f(j, &self.z);
                    break;
                }
            }
        }
    }
}
