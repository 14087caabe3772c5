//! BI-AWGN Monte Carlo frame-error simulation.
//!
//! Frames are generated in fixed chunks of [`CHUNK_FRAMES`]; chunk `c` of
//! SNR point `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream
//! `(i << 40) | c`. Chunks run in parallel batches and the stop rule is
//! checked between batches, so results depend only on `(seed, config)` and
//! not on the worker count.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::decoder::{mld, prepare_llr, ScDecoder, SclDecoder, MLD_MAX_K};
use crate::error::{Error, Result};
use crate::transform::Transformation;

pub const CHUNK_FRAMES: u64 = 256;
const BATCH_CHUNKS: u64 = 16;

/// Noise variance per real dimension for unit-energy BPSK.
pub fn noise_variance(ebno_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::ParamOutOfRange(format!("rate {rate} outside (0, 1]")));
    }
    if !ebno_db.is_finite() {
        return Err(Error::ParamOutOfRange(format!("Eb/N0 {ebno_db} dB is not finite")));
    }
    Ok(1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0)))
}

/// BPSK (0 → +1) over AWGN; returns channel LLRs `2y/σ²`.
pub fn awgn_llr(codeword: &[u8], ebno_db: f64, rate: f64, rng: &mut impl Rng) -> Result<Vec<f64>> {
    let var = noise_variance(ebno_db, rate)?;
    let sigma = var.sqrt();
    Ok(codeword
        .iter()
        .map(|&c| {
            let x = if c == 0 { 1.0 } else { -1.0 };
            let n: f64 = rng.sample(StandardNormal);
            2.0 * (x + sigma * n) / var
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    Sc,
    Scl(usize),
    Mld,
}

impl DecoderKind {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderKind::Sc => "sc",
            DecoderKind::Scl(_) => "scl",
            DecoderKind::Mld => "mld",
        }
    }

    /// List size column of the results file (0 for MLD).
    pub fn list_size(&self) -> usize {
        match self {
            DecoderKind::Sc => 1,
            DecoderKind::Scl(l) => *l,
            DecoderKind::Mld => 0,
        }
    }

    /// Candidate sequences examined per frame.
    pub fn candidates(&self, k: usize) -> u64 {
        match self {
            DecoderKind::Sc => 1,
            DecoderKind::Scl(l) => *l as u64,
            DecoderKind::Mld => 1u64.checked_shl(k as u32).unwrap_or(u64::MAX),
        }
    }
}

impl std::str::FromStr for DecoderKind {
    type Err = Error;

    /// `sc`, `mld`, `scl8`, `scl:8`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sc" => return Ok(DecoderKind::Sc),
            "mld" => return Ok(DecoderKind::Mld),
            _ => {}
        }
        let l = s
            .strip_prefix("scl")
            .map(|r| r.trim_start_matches(':'))
            .and_then(|r| r.parse::<usize>().ok())
            .filter(|&l| l >= 1)
            .ok_or_else(|| Error::ParamOutOfRange(format!("unknown decoder '{s}'")))?;
        Ok(DecoderKind::Scl(l))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StopRule {
    pub max_frames: u64,
    pub target_frame_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            max_frames: 1_000_000,
            target_frame_errors: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub ebno_db: Vec<f64>,
    /// Decoders run on the same frames.
    pub decoders: Vec<DecoderKind>,
    pub stop: StopRule,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self, k: usize) -> Result<()> {
        if self.ebno_db.is_empty() {
            return Err(Error::ParamOutOfRange("empty Eb/N0 list".into()));
        }
        if self.decoders.is_empty() {
            return Err(Error::ParamOutOfRange("no decoder selected".into()));
        }
        if self.stop.max_frames == 0 || self.stop.target_frame_errors == 0 {
            return Err(Error::ParamOutOfRange(
                "max_frames and target_frame_errors must be at least 1".into(),
            ));
        }
        if self.decoders.contains(&DecoderKind::Mld) && k > MLD_MAX_K {
            return Err(Error::DimensionTooLarge { k, max: MLD_MAX_K });
        }
        if self.decoders.iter().any(|d| matches!(d, DecoderKind::Scl(0))) {
            return Err(Error::ParamOutOfRange("list size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    pub ebno_db: f64,
    pub decoder: DecoderKind,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub candidates: u64,
    pub wall_seconds: f64,
    pub seed: u64,
    k: usize,
}

impl PointResult {
    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.frames as f64
    }

    /// Message bit error rate.
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / (self.frames as f64 * self.k as f64)
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Tally {
    frames: u64,
    frame_errors: u64,
    bit_errors: u64,
}

struct Workers {
    sc: ScDecoder,
    scl: Vec<Option<SclDecoder>>,
}

fn run_chunk(
    t: &Transformation,
    decoders: &[DecoderKind],
    rng: &mut ChaCha8Rng,
    frames: u64,
    ebno_db: f64,
    workers: &mut Workers,
) -> Result<Vec<Tally>> {
    let (k, n) = (t.k(), t.n());
    let rate = k as f64 / n as f64;
    let g = t.generator();
    let mut tally = vec![Tally::default(); decoders.len()];
    for _ in 0..frames {
        let m: Vec<u8> = (0..k).map(|_| rng.random_range(0..2u8)).collect();
        let c = g.vec_mul(&m)?;
        let llr = awgn_llr(&c, ebno_db, rate, rng)?;
        let prepared = prepare_llr(&llr, t)?;
        for (d, kind) in decoders.iter().enumerate() {
            let got = match kind {
                DecoderKind::Sc => workers.sc.decode(&prepared, t)?.message,
                DecoderKind::Scl(_) => workers.scl[d].as_ref().expect("built").decode(&prepared, t)?.message,
                DecoderKind::Mld => mld(&llr, g)?.message,
            };
            let errs = got.iter().zip(&m).filter(|(a, b)| a != b).count() as u64;
            let e = &mut tally[d];
            e.frames += 1;
            e.bit_errors += errs;
            e.frame_errors += (errs > 0) as u64;
        }
    }
    Ok(tally)
}

/// Simulates every decoder of `cfg` on the same frames at each SNR point.
/// A point stops once every decoder has `target_frame_errors` errors, or at
/// `max_frames`.
pub fn simulate_fer(t: &Transformation, cfg: &SimConfig) -> Result<Vec<PointResult>> {
    cfg.validate(t.k())?;
    let mut out = Vec::new();
    for (pi, &ebno) in cfg.ebno_db.iter().enumerate() {
        noise_variance(ebno, t.k() as f64 / t.n() as f64)?;
        let start = Instant::now();
        let mut total = vec![Tally::default(); cfg.decoders.len()];
        let n_chunks = cfg.stop.max_frames.div_ceil(CHUNK_FRAMES);
        let mut next_chunk = 0u64;
        while next_chunk < n_chunks {
            let batch_end = (next_chunk + BATCH_CHUNKS).min(n_chunks);
            let results: Vec<Result<Vec<Tally>>> = (next_chunk..batch_end)
                .into_par_iter()
                .map_init(
                    || Workers {
                        sc: ScDecoder::new(),
                        scl: cfg
                            .decoders
                            .iter()
                            .map(|d| match d {
                                DecoderKind::Scl(l) => SclDecoder::new(*l).ok(),
                                _ => None,
                            })
                            .collect(),
                    },
                    |w, chunk| {
                        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                        rng.set_stream(((pi as u64) << 40) | chunk);
                        let frames = CHUNK_FRAMES.min(cfg.stop.max_frames - chunk * CHUNK_FRAMES);
                        run_chunk(t, &cfg.decoders, &mut rng, frames, ebno, w)
                    },
                )
                .collect();
            for r in results {
                for (acc, c) in total.iter_mut().zip(r?) {
                    acc.frames += c.frames;
                    acc.frame_errors += c.frame_errors;
                    acc.bit_errors += c.bit_errors;
                }
            }
            next_chunk = batch_end;
            if total.iter().all(|c| c.frame_errors >= cfg.stop.target_frame_errors) {
                break;
            }
        }
        let wall = start.elapsed().as_secs_f64();
        for (d, c) in cfg.decoders.iter().zip(total) {
            out.push(PointResult {
                ebno_db: ebno,
                decoder: *d,
                frames: c.frames,
                frame_errors: c.frame_errors,
                bit_errors: c.bit_errors,
                candidates: d.candidates(t.k()),
                wall_seconds: wall,
                seed: cfg.seed,
                k: t.k(),
            });
        }
    }
    Ok(out)
}

/// SNR where the FER curve crosses `target`, interpolating linearly in
/// `(Eb/N0, log10 FER)` between the first bracketing pair of points.
/// `points` must be sorted by SNR; zero-FER points are skipped.
pub fn snr_at_fer(points: &[(f64, f64)], target: f64) -> Option<f64> {
    let usable: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.1 > 0.0).collect();
    for w in usable.windows(2) {
        let ((x0, f0), (x1, f1)) = (w[0], w[1]);
        if f0 >= target && target >= f1 && f0 > f1 {
            let (l0, l1, lt) = (f0.log10(), f1.log10(), target.log10());
            return Some(x0 + (lt - l0) * (x1 - x0) / (l1 - l0));
        }
        if f0 == target {
            return Some(x0);
        }
    }
    None
}
