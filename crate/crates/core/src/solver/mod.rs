//! Solves the quantitative masking game: per-state minimal fault budgets and
//! step depths, the game value 1/w, memoryless strategies, witness traces and
//! play payoffs.

use std::collections::BinaryHeap;
use std::time::Instant;

use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

use crate::game::{build_strong, build_weak, GameBuildError, GameEdge, GameGraph, GameState};
use crate::semantics::{augment_mask, CompileError, Label, Lts};

pub const INFINITE: u32 = u32::MAX;

/// Per game-state solution of the layered fixpoint: `budget` is the minimal
/// fault budget with which the refuter forces the error state, `depth` the
/// minimal number of steps at that budget. `INFINITE` means the verifier wins
/// from the state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerTable {
    pub budget: Vec<u32>,
    pub depth: Vec<u32>,
}

/// Layered backward fixpoint. Layer i computes the refuter attractor of the
/// error state plus the fault-pending verifier states whose masking successor
/// was already won with budget ≤ i−1; fault-pending states never enter a
/// layer through attractor propagation, only as seeds. Budget and depth are
/// recorded at a state's first layer.
pub fn solve_layers(game: &GameGraph) -> LayerTable {
    let n = game.states.len();
    let mut budget = vec![INFINITE; n];
    let mut depth = vec![INFINITE; n];
    let err = match game.err {
        Some(e) => e,
        None => return LayerTable { budget, depth },
    };

    // reverse adjacency and successor counts
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut out_deg = vec![0usize; n];
    for (src, adj) in game.edges.iter().enumerate() {
        out_deg[src] = adj.len();
        for e in adj {
            preds[e.target].push(src);
        }
    }

    let fault_pending: Vec<bool> = (0..n).map(|i| game.is_fault_pending(i)).collect();

    // prev_in / prev_depth: the (cumulative) result of the previous layer
    let mut prev_in = vec![false; n];
    let mut prev_depth = vec![INFINITE; n];

    for layer in 1..=(n as u32 + 1) {
        // seeds of this layer with their depths
        let mut seeds: Vec<(usize, u32)> = vec![(err, 1)];
        for v in 0..n {
            if !fault_pending[v] {
                continue;
            }
            // all successors must be won at the previous layer; the depth is
            // one past the slowest of them
            let mut worst = 0u32;
            let mut all_in = true;
            for e in &game.edges[v] {
                if prev_in[e.target] {
                    worst = worst.max(prev_depth[e.target]);
                } else {
                    all_in = false;
                    break;
                }
            }
            if all_in && !game.edges[v].is_empty() {
                seeds.push((v, worst + 1));
            }
        }

        // attractor with exact depths, processed in increasing depth order
        let mut cur_in = vec![false; n];
        let mut cur_depth = vec![INFINITE; n];
        let mut remaining = out_deg.clone();
        let mut heap: BinaryHeap<(std::cmp::Reverse<u32>, usize)> = BinaryHeap::new();
        for &(s, d) in &seeds {
            if !cur_in[s] || d < cur_depth[s] {
                cur_in[s] = true;
                cur_depth[s] = d;
                heap.push((std::cmp::Reverse(d), s));
            }
        }
        while let Some((std::cmp::Reverse(d), v)) = heap.pop() {
            if d > cur_depth[v] {
                continue; // stale entry
            }
            for &p in &preds[v] {
                if cur_in[p] || fault_pending[p] {
                    continue;
                }
                match &game.states[p] {
                    GameState::Err => {}
                    GameState::Refuter { .. } => {
                        // some successor suffices
                        cur_in[p] = true;
                        cur_depth[p] = d + 1;
                        heap.push((std::cmp::Reverse(d + 1), p));
                    }
                    GameState::Verifier { .. } => {
                        // preds holds one entry per edge, so multi-edges to v
                        // each consume one successor slot here
                        remaining[p] -= 1;
                        if remaining[p] == 0 {
                            // all successors are in; the last one popped (this
                            // one) has the maximal depth
                            cur_in[p] = true;
                            cur_depth[p] = d + 1;
                            heap.push((std::cmp::Reverse(d + 1), p));
                        }
                    }
                }
            }
        }

        // record first-entry budget/depth
        let mut grew = false;
        for v in 0..n {
            if cur_in[v] && budget[v] == INFINITE {
                budget[v] = layer;
                depth[v] = cur_depth[v];
            }
            if cur_in[v] && !prev_in[v] {
                grew = true;
            }
        }
        if !grew {
            break;
        }
        prev_in = cur_in;
        prev_depth = cur_depth;
    }

    LayerTable { budget, depth }
}

/// Returns 1/w where w is the initial state's budget, or 0 when the verifier
/// wins the whole game.
pub fn value(game: &GameGraph) -> Rational64 {
    let layers = solve_layers(game);
    value_from(game, &layers)
}

pub fn value_from(game: &GameGraph, layers: &LayerTable) -> Rational64 {
    match layers.budget[game.initial] {
        INFINITE => Rational64::zero(),
        w => Rational64::new(1, w as i64),
    }
}

/// Memoryless strategy: a chosen outgoing edge per own state inside the
/// owner's winning region.
pub type StrategyMap = std::collections::HashMap<usize, GameEdge>;

/// Extracts the winning strategies: the refuter descends to an equal-budget
/// successor of minimal depth; the verifier stays inside the states of
/// infinite budget. Ties break toward the lowest target index.
pub fn extract_strategies(game: &GameGraph, layers: &LayerTable) -> (StrategyMap, StrategyMap) {
    let mut refuter = StrategyMap::new();
    let mut verifier = StrategyMap::new();
    for (i, state) in game.states.iter().enumerate() {
        match state {
            GameState::Err => {}
            GameState::Refuter { .. } => {
                if layers.budget[i] == INFINITE {
                    continue;
                }
                let choice = game.edges[i]
                    .iter()
                    .filter(|e| layers.budget[e.target] == layers.budget[i])
                    .min_by_key(|e| (layers.depth[e.target], e.target));
                if let Some(e) = choice {
                    refuter.insert(i, e.clone());
                }
            }
            GameState::Verifier { .. } => {
                if layers.budget[i] != INFINITE {
                    // a fault-pending state in the refuter's region still has
                    // a forced move; it is not part of the verifier strategy
                    continue;
                }
                let choice = game.edges[i]
                    .iter()
                    .filter(|e| layers.budget[e.target] == INFINITE)
                    .min_by_key(|e| e.target);
                if let Some(e) = choice {
                    verifier.insert(i, e.clone());
                }
            }
        }
    }
    (refuter, verifier)
}

/// How a recorded play ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlayEnd {
    /// The play reached the error state.
    Err,
    /// A cycle was detected without reaching the error state; the entry gives
    /// the position in `steps` where the cycle starts.
    Lasso { cycle_start: usize },
}

/// A finite record of a play: the visited states with the edges taken.
#[derive(Debug, Clone)]
pub struct Play {
    pub steps: Vec<(usize, GameEdge)>,
    pub end: PlayEnd,
}

impl Play {
    pub fn fault_count(&self) -> usize {
        self.steps.iter().filter(|(_, e)| e.fault).count()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlayError {
    #[error("play neither reaches the error state nor closes a cycle")]
    MalformedPlay,
}

/// The masking payoff of a play: 1/(1 + #faults) when the error state is
/// reached, 0 for plays that cycle forever.
pub fn payoff(play: &Play) -> Result<Rational64, PlayError> {
    match play.end {
        PlayEnd::Err => {
            let last_err = play.steps.last().map(|(_, e)| e.err).unwrap_or(false);
            if !last_err {
                return Err(PlayError::MalformedPlay);
            }
            Ok(Rational64::new(1, 1 + play.fault_count() as i64))
        }
        PlayEnd::Lasso { .. } => Ok(Rational64::zero()),
    }
}

/// The witness play: the refuter's winning strategy against the verifier's
/// budget-maximizing replies (preferring infinite budget, then maximal depth,
/// then the lowest index). Absent when the verifier wins the game.
pub fn witness_trace(game: &GameGraph, layers: &LayerTable) -> Option<Play> {
    if layers.budget[game.initial] == INFINITE {
        return None;
    }
    let (refuter, _) = extract_strategies(game, layers);
    let mut steps = Vec::new();
    let mut current = game.initial;
    // the refuter wins, so the play reaches err; the bound is defensive
    let bound = game.states.len() * (layers.budget[game.initial] as usize + 1) + 2;
    for _ in 0..bound {
        let edge = match &game.states[current] {
            GameState::Err => break,
            GameState::Refuter { .. } => refuter.get(&current).cloned()?,
            GameState::Verifier { .. } => game.edges[current]
                .iter()
                .max_by_key(|e| {
                    let b = layers.budget[e.target];
                    let d = layers.depth[e.target];
                    // infinite budget is the best possible reply
                    (b, if b == INFINITE { 0 } else { d }, std::cmp::Reverse(e.target))
                })
                .cloned()?,
        };
        let target = edge.target;
        steps.push((current, edge));
        current = target;
    }
    debug_assert!(matches!(game.states[current], GameState::Err));
    Some(Play {
        steps,
        end: PlayEnd::Err,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strong,
    Weak,
}

#[derive(Debug, Clone)]
pub struct GameStats {
    pub spec_states: usize,
    pub impl_states: usize,
    pub game_states: usize,
    pub game_edges: usize,
    pub solve_ms: u128,
}

/// A solved distance query.
#[derive(Debug, Clone)]
pub struct DistanceReport {
    pub value: Rational64,
    /// w: minimal fault budget of the refuter, absent when the verifier wins.
    pub fault_budget: Option<u32>,
    /// Model-level rendering of the witness play, absent when value = 0.
    pub witness: Option<Vec<WitnessStep>>,
    pub stats: GameStats,
}

/// One step of the witness rendered with model-level labels and states.
#[derive(Debug, Clone)]
pub struct WitnessStep {
    pub game_state: String,
    pub label: Label,
    pub fault: bool,
    pub to_err: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistanceError {
    #[error(transparent)]
    Build(#[from] GameBuildError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// Computes the masking distance between a nominal system and an
/// implementation: augments the nominal side with masking self-loops, builds
/// the strong or weak game, solves it, and packages value, budget and
/// witness.
pub fn distance(spec: &Lts, impl_: &Lts, mode: Mode) -> Result<DistanceReport, DistanceError> {
    let spec_m = augment_mask(spec);
    let start = Instant::now();
    let game = match mode {
        Mode::Strong => build_strong(&spec_m, impl_)?,
        Mode::Weak => build_weak(&spec_m, impl_)?,
    };
    let layers = solve_layers(&game);
    let val = value_from(&game, &layers);
    let witness = witness_trace(&game, &layers).map(|play| {
        play.steps
            .iter()
            .map(|(src, e)| WitnessStep {
                game_state: game.states[*src].to_string(),
                label: e.label.clone(),
                fault: e.fault,
                to_err: e.err,
            })
            .collect()
    });
    let solve_ms = start.elapsed().as_millis();
    Ok(DistanceReport {
        value: val,
        fault_budget: match layers.budget[game.initial] {
            INFINITE => None,
            w => Some(w),
        },
        witness,
        stats: GameStats {
            spec_states: spec.states.len(),
            impl_states: impl_.states.len(),
            game_states: game.states.len(),
            game_edges: game.num_edges(),
            solve_ms,
        },
    })
}
