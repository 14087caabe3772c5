use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use epd_core::decoder::{self, correlation, SclDecoder};
use epd_core::gf2::{echelon_pivots, invert, BitMatrix, Permutation};
use epd_core::io::{self, ResultRow, TransformationFile};
use epd_core::polar::{build_generator, PruningMatrix};
use epd_core::reliability::{cost_breakdown, ChannelParam};
use epd_core::search::{self, AnnealConfig, AnnealOutcome, MovePolicy, SearchScope};
use epd_core::sim::{self, DecoderKind, SimConfig, StopRule};
use epd_core::transform::{ShortenSpec, Transformation};
use epd_core::{build_transformation, codes};

#[derive(Parser)]
#[command(name = "epd", version, about = "Polar-like transformations and SC/SCL decoding of binary linear codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulated-annealing search for (R, p).
    Search(SearchArgs),
    /// Exhaustive search (tiny codes only).
    Exhaustive(ExhaustiveArgs),
    /// Per-information-position Z values and their sum.
    Cost(CostArgs),
    /// Encode a message through the transformation.
    Encode(EncodeArgs),
    /// Decode an LLR vector.
    Decode(DecodeArgs),
    /// Monte Carlo FER/BER over BI-AWGN.
    Simulate(SimulateArgs),
    /// Round-trip and invariant checks on a transformation file.
    Verify(VerifyArgs),
    /// Print a built-in generator matrix.
    Codes(CodesArgs),
}

#[derive(Args)]
struct CodeArgs {
    /// Generator matrix file ("k n" header, then k rows of n digits).
    #[arg(short, long)]
    generator: PathBuf,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Transformation file.
    #[arg(short, long)]
    transformation: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Polar length N (power of two, at least n).
    #[arg(short = 'N', long = "n-big")]
    n_big: usize,
    /// bsc:<p>, bec:<e>, awgn:<Eb/N0 dB>, or hd-awgn:<Eb/N0 dB> (BSC at the
    /// raw hard-decision error rate).
    #[arg(short, long, default_value = "bsc:0.01")]
    channel: String,
    #[arg(long, default_value_t = 1_000_000)]
    t_max: u64,
    #[arg(long, default_value_t = 0.99999)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    t_init: f64,
    /// First seed; chain i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    chains: u64,
    /// alternate, uniform-random, pruning-only or permutation-only.
    #[arg(long, default_value = "alternate")]
    policy: String,
    /// Starting permutation in 1-based one-line notation (default identity).
    #[arg(long, value_delimiter = ',')]
    start_perm: Option<Vec<usize>>,
    /// Output transformation file.
    #[arg(short, long)]
    out: PathBuf,
    /// Cost trace CSV of the winning chain.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Record every n-th iteration in the trace.
    #[arg(long, default_value_t = 1)]
    trace_stride: u64,
}

#[derive(Args)]
struct ExhaustiveArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(short = 'N', long = "n-big")]
    n_big: usize,
    #[arg(short, long, default_value = "bsc:0.01")]
    channel: String,
    /// perm-only or full.
    #[arg(long, default_value = "full")]
    scope: String,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CostArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Transformation file; without it the identity permutation, all-kept R
    /// and tail shortening at the smallest N ≥ n are used.
    #[arg(short, long)]
    transformation: Option<PathBuf>,
    /// Prune every butterfly of the default transformation instead.
    #[arg(long, conflicts_with = "transformation")]
    all_pruned: bool,
    #[arg(short, long, default_value = "bsc:0.01")]
    channel: String,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    t: TransformArgs,
    /// Message bits, e.g. 101 or "1 0 1".
    #[arg(short, long)]
    message: String,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    t: TransformArgs,
    /// LLR file, one value per line.
    #[arg(short, long)]
    llr: PathBuf,
    /// sc, scl<L> or mld.
    #[arg(short, long, default_value = "sc")]
    decoder: String,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    t: TransformArgs,
    /// Comma-separated Eb/N0 points in dB.
    #[arg(short, long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    ebno: Vec<f64>,
    /// Decoders run on the same frames: sc, scl<L>, mld.
    #[arg(short, long, value_delimiter = ',', default_value = "sc")]
    decoder: Vec<String>,
    #[arg(long, default_value_t = 1_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = 100)]
    target_errors: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Results CSV (stdout when omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    t: TransformArgs,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CodesArgs {
    /// challenging-8-3, egolay-24-12, random-16-8, or ebch:<m>:<t>.
    name: String,
}

fn read_generator(p: &Path) -> Result<BitMatrix> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    io::parse_generator(&text).with_context(|| format!("parsing {}", p.display()))
}

fn read_transformation(a: &TransformArgs) -> Result<Transformation> {
    let g = read_generator(&a.code.generator)?;
    let p = &a.transformation;
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    io::parse_transformation(&text, &g).with_context(|| format!("loading {}", p.display()))
}

fn parse_channel(s: &str, rate: f64) -> Result<ChannelParam> {
    let (kind, value) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("channel must look like bsc:0.01, bec:0.4, awgn:3 or hd-awgn:4.5"))?;
    let v: f64 = value.parse().with_context(|| format!("channel parameter '{value}'"))?;
    let c = match kind {
        "bsc" => ChannelParam::Bsc { crossover: v },
        "bec" => ChannelParam::Bec { erasure: v },
        "awgn" => ChannelParam::BiAwgn { ebno_db: v, rate },
        "hd-awgn" => ChannelParam::awgn_hard_decision(v, rate)?,
        _ => bail!("unknown channel '{kind}'"),
    };
    c.validate()?;
    Ok(c)
}

fn rate(g: &BitMatrix) -> f64 {
    g.rows() as f64 / g.cols() as f64
}

fn bits(v: &[u8]) -> String {
    v.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_search(a: SearchArgs) -> Result<()> {
    let g = read_generator(&a.code.generator)?;
    let chan = parse_channel(&a.channel, rate(&g))?;
    let policy: MovePolicy = a.policy.parse()?;
    let start_perm = match &a.start_perm {
        Some(p) => Permutation::from_one_line(p)?,
        None => Permutation::identity(a.n_big),
    };
    if a.chains == 0 {
        bail!("need at least one chain");
    }
    let outcomes: Vec<epd_core::Result<AnnealOutcome>> = (0..a.chains)
        .into_par_iter()
        .map(|i| {
            let cfg = AnnealConfig {
                t_init: a.t_init,
                gamma: a.gamma,
                t_max: a.t_max,
                seed: a.seed + i,
                move_policy: policy,
                trace_stride: if a.trace.is_some() { a.trace_stride } else { 0 },
            };
            search::anneal_from(&g, a.n_big, chan, &cfg, PruningMatrix::all_kept(a.n_big)?, start_perm.clone())
        })
        .collect();
    let mut best: Option<(u64, AnnealOutcome)> = None;
    for (i, o) in outcomes.into_iter().enumerate() {
        let o = o?;
        println!("chain seed={} best_cost={:.6} found_at={}", a.seed + i as u64, o.best_cost, o.best_iteration);
        if best.as_ref().is_none_or(|(_, b)| o.best_cost < b.best_cost) {
            best = Some((a.seed + i as u64, o));
        }
    }
    let (seed, best) = best.expect("at least one chain");
    write_out(&a.out, &io::write_transformation(&best.transformation))?;
    if let Some(p) = &a.trace {
        let f = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
        io::write_trace(&best.trace, f)?;
    }
    println!("best seed={seed} cost={:.6} -> {}", best.best_cost, a.out.display());
    Ok(())
}

fn cmd_exhaustive(a: ExhaustiveArgs) -> Result<()> {
    let g = read_generator(&a.code.generator)?;
    let chan = parse_channel(&a.channel, rate(&g))?;
    let scope = match a.scope.as_str() {
        "perm-only" => SearchScope::PermOnly,
        "full" => SearchScope::Full,
        s => bail!("unknown scope '{s}'"),
    };
    let out = search::exhaustive(&g, a.n_big, chan, scope)?;
    println!("candidates={} min_cost={:.6}", out.candidates, out.min_cost);
    print_breakdown(&out.transformation, chan)?;
    if let Some(p) = &a.out {
        write_out(p, &io::write_transformation(&out.transformation))?;
    }
    Ok(())
}

fn print_breakdown(t: &Transformation, chan: ChannelParam) -> Result<()> {
    let parts = cost_breakdown(chan, t)?;
    for (pos, z) in &parts {
        println!("u{} {:.6}", pos + 1, z);
    }
    println!("sum {:.6}", parts.iter().map(|p| p.1).sum::<f64>());
    Ok(())
}

fn cmd_cost(a: CostArgs) -> Result<()> {
    let g = read_generator(&a.code.generator)?;
    let chan = parse_channel(&a.channel, rate(&g))?;
    let t = match &a.transformation {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            io::parse_transformation(&text, &g)?
        }
        None => {
            let n_big = g.cols().next_power_of_two().max(2);
            build_transformation(
                &g,
                n_big,
                Permutation::identity(n_big),
                if a.all_pruned {
                    PruningMatrix::all_pruned(n_big)?
                } else {
                    PruningMatrix::all_kept(n_big)?
                },
                ShortenSpec::tail(n_big, g.cols())?,
            )?
        }
    };
    print_breakdown(&t, chan)
}

fn parse_message(s: &str, k: usize) -> Result<Vec<u8>> {
    let m: Vec<u8> = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(anyhow!("message digit '{c}' is not 0 or 1")),
        })
        .collect::<Result<_>>()?;
    if m.len() != k {
        bail!("message has {} bits, code dimension is {k}", m.len());
    }
    Ok(m)
}

fn cmd_encode(a: EncodeArgs) -> Result<()> {
    let t = read_transformation(&a.t)?;
    let m = parse_message(&a.message, t.k())?;
    let c = t.encode(&m)?;
    if c != t.generator().vec_mul(&m)? {
        bail!("transformed encoder disagrees with m·G");
    }
    println!("{}", bits(&c));
    Ok(())
}

fn cmd_decode(a: DecodeArgs) -> Result<()> {
    let t = read_transformation(&a.t)?;
    let text = fs::read_to_string(&a.llr).with_context(|| format!("reading {}", a.llr.display()))?;
    let llr = io::parse_llr(&text)?;
    let kind: DecoderKind = a.decoder.parse()?;
    let res = match kind {
        DecoderKind::Mld => decoder::mld(&llr, t.generator())?,
        DecoderKind::Sc => decoder::sc_decode(&decoder::prepare_llr(&llr, &t)?, &t)?,
        DecoderKind::Scl(l) => SclDecoder::new(l)?.decode(&decoder::prepare_llr(&llr, &t)?, &t)?,
    };
    println!("message {}", bits(&res.message));
    println!("codeword {}", bits(&res.codeword));
    println!("path_metric {:.6}", res.path_metric);
    println!("correlation {:.6}", correlation(&llr, &res.codeword));
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let t = read_transformation(&a.t)?;
    let decoders = a
        .decoder
        .iter()
        .map(|d| d.parse::<DecoderKind>())
        .collect::<epd_core::Result<Vec<_>>>()?;
    let cfg = SimConfig {
        ebno_db: a.ebno.clone(),
        decoders,
        stop: StopRule {
            max_frames: a.max_frames,
            target_frame_errors: a.target_errors,
        },
        seed: a.seed,
    };
    let rows: Vec<ResultRow> = sim::simulate_fer(&t, &cfg)?.iter().map(ResultRow::from).collect();
    match &a.out {
        Some(p) => io::write_results(&rows, fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)?,
        None => io::write_results(&rows, std::io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let t = read_transformation(&a.t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut ok = true;
    let mut check = |name: &str, pass: bool| {
        println!("{} {name}", if pass { "ok  " } else { "FAIL" });
        ok &= pass;
    };
    let report = t.verify_roundtrip(a.trials, &mut rng);
    check(&format!("round trip over {} messages", report.trials), report.passed());
    check("mdf is in reduced row echelon form", echelon_pivots(t.m_df()).is_ok());
    check("information set has k positions", t.info_set().len() == t.k());
    let e_inv = invert(t.elim());
    check("E is invertible", e_inv.is_ok());
    check("G̃ is unit lower triangular", build_generator(t.pruning()).is_unit_lower_triangular());
    let mut frozen_ok = true;
    for _ in 0..a.trials.min(1000) {
        let m_p: Vec<u8> = (0..t.k()).map(|_| rng.random_range(0..2)).collect();
        let u = t.m_df().vec_mul(&m_p)?;
        frozen_ok &= t.frozen().expand(&m_p) == u && t.frozen().is_consistent(&u);
    }
    check("frozen equations reproduce m_p·mdf", frozen_ok);
    let stored = TransformationFile::from_transformation(&t, true);
    check("serialization round trip", TransformationFile::parse(&stored.to_text()).ok().as_ref() == Some(&stored));
    Ok(ok)
}

fn cmd_codes(a: CodesArgs) -> Result<()> {
    let g = match a.name.as_str() {
        "challenging-8-3" => codes::challenging_8_3(),
        "egolay-24-12" => codes::egolay_24_12(),
        "random-16-8" => codes::random_16_8(),
        s => match s.strip_prefix("ebch:").and_then(|r| r.split_once(':')) {
            Some((m, t)) => codes::ebch(m.parse()?, t.parse()?)?,
            None => bail!("unknown code '{s}'"),
        },
    };
    print!("{}", io::write_generator(&g));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Search(a) => cmd_search(a),
        Cmd::Exhaustive(a) => cmd_exhaustive(a),
        Cmd::Cost(a) => cmd_cost(a),
        Cmd::Encode(a) => cmd_encode(a),
        Cmd::Decode(a) => cmd_decode(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Verify(a) => match cmd_verify(a) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::FAILURE,
            Err(e) => Err(e),
        },
        Cmd::Codes(a) => cmd_codes(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
