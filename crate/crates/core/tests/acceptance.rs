//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and fails the test binary if any criterion fails.

use std::time::Instant;

use epd_core::decoder::{correlation, mld, prepare_llr, SclDecoder};
use epd_core::gf2::{BitMatrix, Permutation};
use epd_core::io::{self, TransformationFile};
use epd_core::polar::{build_generator, PruningMatrix};
use epd_core::reliability::{
    channel_z, cost, cost_breakdown, propagate_z, ChannelParam, ReliabilityVector,
};
use epd_core::search::{anneal, anneal_from, exhaustive, AnnealConfig, AnnealOutcome, MovePolicy, SearchScope};
use epd_core::sim::{awgn_llr, simulate_fer, snr_at_fer, DecoderKind, PointResult, SimConfig, StopRule};
use epd_core::transform::{build_transformation, ShortenSpec, Transformation};
use epd_core::codes;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BSC: ChannelParam = ChannelParam::Bsc { crossover: 0.01 };

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run(results: &mut Vec<bool>, id: u32, name: &str, f: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let o = f();
    println!(
        "[{}] {id:>2} {name}: {} ({:.1} s)",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        start.elapsed().as_secs_f64()
    );
    results.push(o.pass);
}

fn best_of(seeds: std::ops::Range<u64>, mut f: impl FnMut(u64) -> AnnealOutcome) -> AnnealOutcome {
    seeds
        .map(&mut f)
        .reduce(|a, b| if b.best_cost < a.best_cost { b } else { a })
        .expect("non-empty seed range")
}

fn curve(res: &[PointResult], d: DecoderKind) -> Vec<(f64, f64)> {
    res.iter().filter(|r| r.decoder == d).map(|r| (r.ebno_db, r.fer())).collect()
}

fn random_full_rank(rng: &mut ChaCha8Rng, k: usize, n: usize) -> BitMatrix {
    loop {
        let g = BitMatrix::from_fn(k, n, |_, _| rng.random::<bool>());
        if g.rank() == k {
            return g;
        }
    }
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut p = Permutation::identity(n);
    for i in (1..n).rev() {
        p.swap(i, rng.random_range(0..=i));
    }
    p
}

fn random_pruning(rng: &mut ChaCha8Rng, n_big: usize, keep: f64) -> PruningMatrix {
    let mut r = PruningMatrix::all_pruned(n_big).unwrap();
    for i in 0..r.len() {
        if rng.random::<f64>() < keep {
            r.flip_flat(i);
        }
    }
    r
}

/// Genie-aided SC erasure probability of every `u_i` on a BEC, by
/// enumerating all erasure patterns: `u_i` is lost iff `e_i` is outside the
/// span of the unerased columns of `G̃` and `e_0..e_{i−1}`.
fn brute_force_erasure(r: &PruningMatrix, eps: f64) -> Vec<f64> {
    let n = r.n_big();
    let gt = build_generator(r);
    let cols: Vec<u64> = (0..n)
        .map(|j| (0..n).filter(|&i| gt.get(i, j)).fold(0u64, |acc, i| acc | 1 << i))
        .collect();
    let mut p = vec![0.0; n];
    for pattern in 0u32..1 << n {
        let erased = pattern.count_ones() as i32;
        let weight = eps.powi(erased) * (1.0 - eps).powi(n as i32 - erased);
        let mut basis = vec![0u64; n];
        let insert = |basis: &mut [u64], mut v: u64| {
            while v != 0 {
                let lead = 63 - v.leading_zeros() as usize;
                if basis[lead] == 0 {
                    basis[lead] = v;
                    return;
                }
                v ^= basis[lead];
            }
        };
        for j in 0..n {
            if pattern >> j & 1 == 0 {
                insert(&mut basis, cols[j]);
            }
        }
        for (i, pi) in p.iter_mut().enumerate() {
            let mut v = 1u64 << i;
            while v != 0 {
                let lead = 63 - v.leading_zeros() as usize;
                if basis[lead] == 0 {
                    break;
                }
                v ^= basis[lead];
            }
            if v != 0 {
                *pi += weight;
            }
            insert(&mut basis, 1u64 << i);
        }
    }
    p
}

/// `1 − (1 − Q(√(2·Eb/N0)))^k`.
fn uncoded_fer(ebno_db: f64, k: usize) -> f64 {
    let ber = 0.5 * libm::erfc((10f64.powf(ebno_db / 10.0)).sqrt());
    1.0 - (1.0 - ber).powi(k as i32)
}

fn main() {
    let mut results = Vec::new();
    let g83 = codes::challenging_8_3();

    run(&mut results, 1, "Bhattacharyya baseline", || {
        let z = channel_z(BSC).unwrap();
        let t = build_transformation(
            &g83,
            8,
            Permutation::identity(8),
            PruningMatrix::all_pruned(8).unwrap(),
            ShortenSpec::tail(8, 8).unwrap(),
        )
        .unwrap();
        let c = cost(BSC, &t).unwrap();
        outcome(
            (z - 0.198997).abs() <= 1e-6 && (c - 0.596991).abs() <= 1e-5,
            format!("Z = {z:.6}, identity/all-pruned cost = {c:.6}"),
        )
    });

    run(&mut results, 2, "permutation-only exhaustive", || {
        let start = Instant::now();
        let out = exhaustive(&g83, 8, BSC, SearchScope::PermOnly).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let mut parts: Vec<f64> = cost_breakdown(BSC, &out.transformation).unwrap().iter().map(|p| p.1).collect();
        parts.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let want = [0.830539, 0.149237, 0.000002];
        let parts_ok = parts.len() == 3 && parts.iter().zip(want).all(|(a, b)| (a - b).abs() <= 1e-5);
        outcome(
            out.candidates == 40320 && (out.min_cost - 0.979778).abs() <= 1e-5 && parts_ok && secs < 5.0,
            format!(
                "{} candidates, min = {:.6}, components = [{}] in {secs:.2} s",
                out.candidates,
                out.min_cost,
                parts.iter().map(|p| format!("{p:.6}")).collect::<Vec<_>>().join(", ")
            ),
        )
    });

    let mut optimum: Option<Transformation> = None;
    run(&mut results, 3, "full exhaustive", || {
        let out = exhaustive(&g83, 8, BSC, SearchScope::Full).unwrap();
        let pass = out.candidates == 4096 * 40320 && (out.min_cost - 0.05536).abs() <= 1e-4;
        let detail = format!("{} candidates, min = {:.6}", out.candidates, out.min_cost);
        optimum = Some(out.transformation);
        outcome(pass, detail)
    });
    let optimum = optimum.expect("criterion 3 ran");

    run(&mut results, 4, "annealing effectiveness", || {
        let mut hits = 0;
        let mut visited = 0u64;
        let mut to_best = 0u64;
        for seed in 0..100 {
            let cfg = AnnealConfig { t_init: 1.0, gamma: 0.99999, t_max: 1_000_000, seed, trace_stride: 0, ..Default::default() };
            let o = anneal(&g83, 8, BSC, &cfg).unwrap();
            hits += (o.best_cost <= 0.05536 + 1e-4) as u32;
            visited += o.candidates;
            to_best += o.best_iteration;
        }
        let mean_visited = visited as f64 / 100.0;
        outcome(
            hits >= 90 && mean_visited <= 1.6e7,
            format!(
                "{hits}/100 seeds reach the optimum; mean candidates visited {mean_visited:.0}, mean iterations to best {:.0}",
                to_best as f64 / 100.0
            ),
        )
    });

    run(&mut results, 5, "SCL L=8 attains the ML objective", || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dec = SclDecoder::new(8).unwrap();
        let (mut mismatches, mut differing_ties) = (0, 0);
        for _ in 0..10_000 {
            let m: Vec<u8> = (0..3).map(|_| rng.random_range(0..2)).collect();
            let llr = awgn_llr(&g83.vec_mul(&m).unwrap(), 3.0, 3.0 / 8.0, &mut rng).unwrap();
            let scl = dec.decode(&prepare_llr(&llr, &optimum).unwrap(), &optimum).unwrap();
            let ml = mld(&llr, &g83).unwrap();
            let (a, b) = (correlation(&llr, &scl.codeword), correlation(&llr, &ml.codeword));
            if (a - b).abs() > 1e-9 * (1.0 + b.abs()) {
                mismatches += 1;
            } else if scl.codeword != ml.codeword {
                differing_ties += 1;
            }
        }
        outcome(
            mismatches == 0,
            format!("10000 frames at 3 dB: {mismatches} objective mismatches, {differing_ties} equal-objective ties"),
        )
    });

    run(&mut results, 6, "SC matches MLD on the (8,3) code", || {
        let cfg = SimConfig {
            ebno_db: vec![4.0],
            decoders: vec![DecoderKind::Sc, DecoderKind::Mld],
            stop: StopRule { max_frames: 100_000, target_frame_errors: u64::MAX },
            seed: 6,
        };
        let res = simulate_fer(&optimum, &cfg).unwrap();
        let ratio = res[0].fer() / res[1].fer();
        outcome(
            res[0].frames == 100_000 && (0.9..=1.1).contains(&ratio),
            format!("FER SC {:.5} / MLD {:.5} = {ratio:.4} over {} frames", res[0].fer(), res[1].fer(), res[0].frames),
        )
    });

    run(&mut results, 7, "transformed encoding round trip", || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (mut failures, mut shortened, mut messages) = (0, 0, 0);
        for i in 0..50 {
            let n_big = [4, 8, 16, 32][i % 4];
            let n = rng.random_range(n_big / 2 + 1..=n_big);
            let k = rng.random_range(1..=n);
            let g = random_full_rank(&mut rng, k, n);
            let keep = if i % 2 == 0 { 0.2 } else { 0.6 };
            let t = build_transformation(
                &g,
                n_big,
                random_perm(&mut rng, n_big),
                random_pruning(&mut rng, n_big, keep),
                ShortenSpec::tail(n_big, n).unwrap(),
            )
            .unwrap();
            shortened += (n < n_big) as u32;
            let report = t.verify_roundtrip(1000, &mut rng);
            failures += report.failures;
            messages += report.trials;
        }
        outcome(
            failures == 0,
            format!("{messages} messages over 50 transformations ({shortened} shortened): {failures} failures"),
        )
    });

    run(&mut results, 8, "BEC exactness of reliability propagation", || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let r = random_pruning(&mut rng, 8, 0.5);
            let z = propagate_z(&ReliabilityVector::new(vec![0.4; 8]).unwrap(), &r).unwrap();
            for (a, b) in z.as_slice().iter().zip(brute_force_erasure(&r, 0.4)) {
                worst = worst.max((a - b).abs());
            }
        }
        outcome(worst <= 1e-12, format!("max deviation {worst:.2e} over 20 pruning matrices"))
    });

    run(&mut results, 9, "extended Golay near-ML", || {
        let g = codes::egolay_24_12();
                let best = best_of(0..10, |seed| {
            let cfg = AnnealConfig { seed, t_max: 1_000_000, trace_stride: 0, ..Default::default() };
            anneal(&g, 32, BSC, &cfg).unwrap()
        });
        let lists = [1, 2, 4, 8, 32];
        let mut decoders: Vec<DecoderKind> = lists.iter().map(|&l| DecoderKind::Scl(l)).collect();
        decoders.push(DecoderKind::Mld);
        let cfg = SimConfig {
            ebno_db: vec![4.0, 4.5, 5.0, 5.5],
            decoders,
            stop: StopRule { max_frames: 400_000, target_frame_errors: 400 },
            seed: 9,
        };
        let res = simulate_fer(&best.transformation, &cfg).unwrap();
        let at = |d| snr_at_fer(&curve(&res, d), 1e-3);
        let (scl8, ml) = (at(DecoderKind::Scl(8)), at(DecoderKind::Mld));
        let gap = scl8.zip(ml).map(|(a, b)| a - b);
        let monotone = cfg.ebno_db.iter().all(|&snr| {
            let errs: Vec<u64> = lists
                .iter()
                .map(|&l| res.iter().find(|r| r.ebno_db == snr && r.decoder == DecoderKind::Scl(l)).unwrap().frame_errors)
                .collect();
            errs.windows(2).all(|w| w[1] <= w[0])
        });
        outcome(
            gap.is_some_and(|g| g <= 0.5) && monotone,
            format!(
                "cost {:.4}; FER=1e-3 at SCL8 {:.3} dB vs MLD {:.3} dB (gap {:.3} dB); FER non-increasing in L: {monotone}",
                best.best_cost,
                scl8.unwrap_or(f64::NAN),
                ml.unwrap_or(f64::NAN),
                gap.unwrap_or(f64::NAN)
            ),
        )
    });

    run(&mut results, 10, "random (16,8) code with the published permutation", || {
        let g = codes::random_16_8();
                let best = best_of(0..10, |seed| {
            let cfg = AnnealConfig { seed, move_policy: MovePolicy::PruningOnly, trace_stride: 0, ..Default::default() };
            anneal_from(&g, 16, BSC, &cfg, PruningMatrix::all_kept(16).unwrap(), codes::random_16_8_permutation())
                .unwrap()
        });
        let t = &best.transformation;
        let fixed = t.perm() == &codes::random_16_8_permutation() && t.shorten().dropped().is_empty();
        let cfg = SimConfig {
            ebno_db: vec![5.0, 5.5, 6.0, 6.5, 7.0],
            decoders: vec![DecoderKind::Scl(8), DecoderKind::Mld],
            stop: StopRule { max_frames: 400_000, target_frame_errors: 400 },
            seed: 10,
        };
        let res = simulate_fer(t, &cfg).unwrap();
        let (scl8, ml) = (snr_at_fer(&curve(&res, DecoderKind::Scl(8)), 1e-3), snr_at_fer(&curve(&res, DecoderKind::Mld), 1e-3));
        let gap = scl8.zip(ml).map(|(a, b)| a - b);
        outcome(
            fixed && gap.is_some_and(|g| g <= 0.25),
            format!(
                "cost {:.4}; FER=1e-3 at SCL8 {:.3} dB vs MLD {:.3} dB (gap {:.3} dB)",
                best.best_cost,
                scl8.unwrap_or(f64::NAN),
                ml.unwrap_or(f64::NAN),
                gap.unwrap_or(f64::NAN)
            ),
        )
    });

    run(&mut results, 11, "eBCH(128,57) full pipeline", || {
        let g = codes::ebch(7, 11).unwrap();
                let cfg = AnnealConfig { seed: 11, t_max: 100_000, trace_stride: 0, ..Default::default() };
        let o = anneal(&g, 128, BSC, &cfg).unwrap();
        let dir = std::env::temp_dir().join(format!("epd-acceptance-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let (gpath, tpath) = (dir.join("ebch.txt"), dir.join("ebch.transform"));
        std::fs::write(&gpath, io::write_generator(&g)).unwrap();
        std::fs::write(&tpath, io::write_transformation(&o.transformation)).unwrap();
        let g2 = io::parse_generator(&std::fs::read_to_string(&gpath).unwrap()).unwrap();
        let text = std::fs::read_to_string(&tpath).unwrap();
        let t = io::parse_transformation(&text, &g2).unwrap();
        let file_ok = t == o.transformation && TransformationFile::parse(&text).unwrap().mdf.is_some();
        std::fs::remove_dir_all(&dir).ok();
        let sim = SimConfig {
            ebno_db: vec![4.0],
            decoders: vec![DecoderKind::Scl(32)],
            stop: StopRule { max_frames: 20_000, target_frame_errors: 200 },
            seed: 11,
        };
        let res = simulate_fer(&t, &sim).unwrap();
        let uncoded = uncoded_fer(4.0, 57);
        outcome(
            file_ok && res[0].fer() < uncoded,
            format!(
                "cost {:.4}; SCL32 FER at 4 dB {:.5} ({} / {} frames) vs uncoded {uncoded:.5}",
                o.best_cost,
                res[0].fer(),
                res[0].frame_errors,
                res[0].frames
            ),
        )
    });

    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
