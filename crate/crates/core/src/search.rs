//! Simulated annealing and exhaustive search over `(R, p)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, Permutation};
use crate::polar::PruningMatrix;
use crate::reliability::{ChannelParam, CostEvaluator};
use crate::transform::{build_transformation, ShortenSpec, Transformation};

/// Largest search space [`exhaustive`] accepts.
pub const EXHAUSTIVE_LIMIT: f64 = 2e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MovePolicy {
    /// R on odd iterations, p on even ones.
    #[default]
    Alternate,
    /// Fair coin per iteration.
    UniformRandom,
    /// Only R moves; p stays at its initial value.
    PruningOnly,
    /// Only p moves; R stays at its initial value.
    PermutationOnly,
}

impl std::str::FromStr for MovePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alternate" => Ok(MovePolicy::Alternate),
            "uniform-random" | "uniform" => Ok(MovePolicy::UniformRandom),
            "pruning-only" => Ok(MovePolicy::PruningOnly),
            "permutation-only" => Ok(MovePolicy::PermutationOnly),
            _ => Err(Error::ParamOutOfRange(format!("unknown move policy '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Pruning,
    Permutation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnealConfig {
    pub t_init: f64,
    pub gamma: f64,
    pub t_max: u64,
    pub seed: u64,
    pub move_policy: MovePolicy,
    /// Record every `trace_stride`-th iteration (0 disables the trace).
    pub trace_stride: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            t_init: 1.0,
            gamma: 0.99999,
            t_max: 1_000_000,
            seed: 0,
            move_policy: MovePolicy::Alternate,
            trace_stride: 1,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_init > 0.0 && self.t_init.is_finite()) {
            return Err(Error::ParamOutOfRange(format!("t_init = {} must be positive", self.t_init)));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::ParamOutOfRange(format!("gamma = {} must lie in (0, 1)", self.gamma)));
        }
        Ok(())
    }
}

/// Temperature at iteration `t` (1-based): `γ^{t−1} · T_init`.
pub fn temperature(cfg: &AnnealConfig, t: u64) -> f64 {
    cfg.t_init * cfg.gamma.powf(t.saturating_sub(1) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchState {
    pub pruning: PruningMatrix,
    pub perm: Permutation,
    pub current_cost: f64,
    pub best_pruning: PruningMatrix,
    pub best_perm: Permutation,
    pub best_cost: f64,
}

impl SearchState {
    pub fn new(pruning: PruningMatrix, perm: Permutation, cost: f64) -> Self {
        SearchState {
            best_pruning: pruning.clone(),
            best_perm: perm.clone(),
            pruning,
            perm,
            current_cost: cost,
            best_cost: cost,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub iteration: u64,
    pub temperature: f64,
    pub current_cost: f64,
    pub best_cost: f64,
}

#[derive(Clone, Debug)]
pub struct AnnealOutcome {
    pub transformation: Transformation,
    pub best_cost: f64,
    pub trace: Vec<TracePoint>,
    /// Iteration at which the returned solution was first seen (0 = initial).
    pub best_iteration: u64,
    /// Number of candidate cost evaluations, the initial state included.
    pub candidates: u64,
}

/// Move type for iteration `t` (1-based).
pub fn move_kind(policy: MovePolicy, t: u64, rng: &mut impl Rng) -> MoveKind {
    match policy {
        MovePolicy::Alternate if t % 2 == 1 => MoveKind::Pruning,
        MovePolicy::Alternate => MoveKind::Permutation,
        MovePolicy::UniformRandom if rng.random::<bool>() => MoveKind::Pruning,
        MovePolicy::UniformRandom => MoveKind::Permutation,
        MovePolicy::PruningOnly => MoveKind::Pruning,
        MovePolicy::PermutationOnly => MoveKind::Permutation,
    }
}

#[derive(Clone, Copy, Debug)]
enum Move {
    Flip(usize),
    Swap(usize, usize),
}

fn draw_move(kind: MoveKind, n_big: usize, flags: usize, rng: &mut impl Rng) -> Move {
    match kind {
        MoveKind::Pruning => Move::Flip(rng.random_range(0..flags)),
        MoveKind::Permutation => {
            let a = rng.random_range(0..n_big);
            let mut b = rng.random_range(0..n_big - 1);
            if b >= a {
                b += 1;
            }
            Move::Swap(a, b)
        }
    }
}

// Flips and swaps are involutions, so applying a move twice undoes it.
fn apply_move(mv: Move, r: &mut PruningMatrix, p: &mut Permutation) {
    match mv {
        Move::Flip(i) => r.flip_flat(i),
        Move::Swap(a, b) => p.swap(a, b),
    }
}

/// One neighbour of the current state: a single flag flip or a swap of two
/// distinct permutation entries.
pub fn neighbor(
    s: &SearchState,
    kind: MoveKind,
    rng: &mut impl Rng,
) -> (PruningMatrix, Permutation) {
    let (mut r, mut p) = (s.pruning.clone(), s.perm.clone());
    let mv = draw_move(kind, p.len(), r.len(), rng);
    apply_move(mv, &mut r, &mut p);
    (r, p)
}

/// Anneals from `R` all-ones and the identity permutation.
pub fn anneal(g: &BitMatrix, n_big: usize, chan: ChannelParam, cfg: &AnnealConfig) -> Result<AnnealOutcome> {
    let r = PruningMatrix::all_kept(n_big)?;
    anneal_from(g, n_big, chan, cfg, r, Permutation::identity(n_big))
}

/// Anneals from a given starting point. The last `N − n` positions are
/// shortened.
pub fn anneal_from(
    g: &BitMatrix,
    n_big: usize,
    chan: ChannelParam,
    cfg: &AnnealConfig,
    pruning: PruningMatrix,
    perm: Permutation,
) -> Result<AnnealOutcome> {
    cfg.validate()?;
    let shorten = ShortenSpec::tail(n_big, g.cols())?;
    check_start(n_big, &pruning, &perm)?;
    let mut eval = CostEvaluator::new(g, &shorten, chan)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = eval.cost(&pruning, &perm);
    let mut state = SearchState::new(pruning, perm, start);
    let mut trace = Vec::new();
    let mut best_iteration = 0;
    let flags = state.pruning.len();
    for t in 1..=cfg.t_max {
        let temp = temperature(cfg, t);
        let kind = move_kind(cfg.move_policy, t, &mut rng);
        let mv = draw_move(kind, n_big, flags, &mut rng);
        apply_move(mv, &mut state.pruning, &mut state.perm);
        let next = eval.cost(&state.pruning, &state.perm);
        let accept = next < state.current_cost
            || rng.random::<f64>() < (-(next - state.current_cost) / temp).exp();
        if accept {
            state.current_cost = next;
            if next < state.best_cost {
                state.best_cost = next;
                state.best_pruning.clone_from(&state.pruning);
                state.best_perm.clone_from(&state.perm);
                best_iteration = t;
            }
        } else {
            apply_move(mv, &mut state.pruning, &mut state.perm);
        }
        if cfg.trace_stride > 0 && t % cfg.trace_stride == 0 {
            trace.push(TracePoint {
                iteration: t,
                temperature: temp,
                current_cost: state.current_cost,
                best_cost: state.best_cost,
            });
        }
    }
    let transformation =
        build_transformation(g, n_big, state.best_perm, state.best_pruning, shorten)?;
    Ok(AnnealOutcome {
        transformation,
        best_cost: state.best_cost,
        trace,
        best_iteration,
        candidates: cfg.t_max + 1,
    })
}

fn check_start(n_big: usize, r: &PruningMatrix, p: &Permutation) -> Result<()> {
    if r.n_big() != n_big || p.len() != n_big {
        return Err(Error::DimensionMismatch(format!(
            "start state has R for N = {} and p of length {}, expected N = {n_big}",
            r.n_big(),
            p.len()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchScope {
    /// R fixed at all-ones.
    PermOnly,
    Full,
}

#[derive(Clone, Debug)]
pub struct ExhaustiveOutcome {
    pub transformation: Transformation,
    pub min_cost: f64,
    pub candidates: u64,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Enumerates every candidate of `scope`. R runs in binary counting order
/// of its flags (outer loop), permutations in lexicographic order (inner);
/// the first strict minimum wins.
pub fn exhaustive(g: &BitMatrix, n_big: usize, chan: ChannelParam, scope: SearchScope) -> Result<ExhaustiveOutcome> {
    let shorten = ShortenSpec::tail(n_big, g.cols())?;
    let flags = PruningMatrix::all_kept(n_big)?.len();
    let r_count = match scope {
        SearchScope::PermOnly => 1.0,
        SearchScope::Full => 2f64.powi(flags as i32),
    };
    let size = r_count * factorial(n_big);
    if size > EXHAUSTIVE_LIMIT {
        return Err(Error::SpaceTooLarge {
            size,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let eval = CostEvaluator::new(g, &shorten, chan)?;
    let codes: Vec<u64> = match scope {
        SearchScope::PermOnly => vec![(1u64 << flags) - 1],
        SearchScope::Full => (0..1u64 << flags).collect(),
    };
    let best = codes
        .par_iter()
        .map_init(
            || eval.clone(),
            |ev, &code| {
                let r = PruningMatrix::from_index(n_big, code).expect("flag count checked");
                let mut p = Permutation::identity(n_big);
                let mut best = (ev.cost(&r, &p), p.clone());
                while p.next_lexicographic() {
                    let c = ev.cost(&r, &p);
                    if c < best.0 {
                        best = (c, p.clone());
                    }
                }
                (best.0, code, best.1)
            },
        )
        .reduce_with(|a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("at least one R");
    let (min_cost, code, perm) = best;
    let r = PruningMatrix::from_index(n_big, code)?;
    Ok(ExhaustiveOutcome {
        transformation: build_transformation(g, n_big, perm, r, shorten)?,
        min_cost,
        candidates: size as u64,
    })
}
