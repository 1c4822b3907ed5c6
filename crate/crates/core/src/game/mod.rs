//! Construction of the two-player masking game graph. The refuter proposes
//! moves of either system; the verifier must match them, answering fault
//! moves with the masking self-loops of the augmented nominal system.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::semantics::{saturate, Label, Lts};

/// The symbol the verifier currently has to answer, if any.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pending {
    /// `#`: the refuter moves next.
    Hash,
    /// The refuter advanced the nominal system; the implementation must match.
    SpecMove(Label),
    /// The refuter advanced the implementation; the nominal system must match
    /// (fault symbols are matched by a masking move).
    ImplMove(Label),
}

impl fmt::Display for Pending {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pending::Hash => write!(f, "#"),
            Pending::SpecMove(l) => write!(f, "{}^1", l.dump_str()),
            Pending::ImplMove(l) => write!(f, "{}^2", l.dump_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GameState {
    Err,
    Refuter { spec: usize, impl_state: usize },
    Verifier { spec: usize, impl_state: usize, pending: Pending },
}

impl GameState {
    pub fn is_err(&self) -> bool {
        matches!(self, GameState::Err)
    }

    pub fn is_refuter(&self) -> bool {
        matches!(self, GameState::Refuter { .. })
    }

    pub fn is_verifier(&self) -> bool {
        matches!(self, GameState::Verifier { .. })
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameState::Err => write!(f, "err"),
            GameState::Refuter { spec, impl_state } => {
                write!(f, "({spec},#,{impl_state},R)")
            }
            GameState::Verifier {
                spec,
                impl_state,
                pending,
            } => write!(f, "({spec},{pending},{impl_state},V)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameEdge {
    pub label: Label,
    pub target: usize,
    /// χ_F: the edge plays a maskable fault of the implementation.
    pub fault: bool,
    /// χ_err: the edge enters the error state.
    pub err: bool,
}

#[derive(Debug, Clone)]
pub struct GameGraph {
    pub states: Vec<GameState>,
    /// Outgoing adjacency, parallel to `states`.
    pub edges: Vec<Vec<GameEdge>>,
    /// Index of the initial refuter state ⟨s0, #, s0', R⟩.
    pub initial: usize,
    /// Index of the error state, present iff some state was stuck.
    pub err: Option<usize>,
    /// Fault labels of the implementation that the verifier masks (faults
    /// that the nominal side also carries are ordinary symbols instead).
    pub maskable: BTreeSet<Label>,
}

impl GameGraph {
    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Verifier state whose pending symbol is a maskable fault.
    pub fn is_fault_pending(&self, idx: usize) -> bool {
        matches!(
            &self.states[idx],
            GameState::Verifier { pending: Pending::ImplMove(l), .. } if self.maskable.contains(l)
        )
    }

    /// One line per edge `srcIdx label dstIdx wF wE`, preceded by a legend
    /// mapping state indices to (spec, pending, impl, turn) tuples.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.states.iter().enumerate() {
            out.push_str(&format!("# {i} = {s}\n"));
        }
        for (src, adj) in self.edges.iter().enumerate() {
            for e in adj {
                out.push_str(&format!(
                    "{src} {} {} {} {}\n",
                    e.label.dump_str(),
                    e.target,
                    e.fault as u8,
                    e.err as u8
                ));
            }
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameBuildError {
    #[error("nominal system lacks the masking augmentation (no M label)")]
    SpecNotAugmented,
}

/// Builds the strong masking game over `spec_m` (already M-augmented) and
/// `impl_`. Only the part reachable from the initial state is constructed.
pub fn build_strong(spec_m: &Lts, impl_: &Lts) -> Result<GameGraph, GameBuildError> {
    if !spec_m.alphabet.contains(&Label::Mask) {
        return Err(GameBuildError::SpecNotAugmented);
    }
    build(
        spec_m.edges.clone(),
        spec_m.states.len(),
        impl_.edges.clone(),
        impl_.states.len(),
        game_alphabet(spec_m, impl_),
        maskable_faults(spec_m, impl_),
    )
}

/// Builds the weak masking game: both systems contribute their τ-saturated
/// transition relations (masking and fault edges stay strong under
/// saturation), and τ itself is a playable symbol.
pub fn build_weak(spec_m: &Lts, impl_: &Lts) -> Result<GameGraph, GameBuildError> {
    if !spec_m.alphabet.contains(&Label::Mask) {
        return Err(GameBuildError::SpecNotAugmented);
    }
    let spec_weak = saturate(spec_m);
    let impl_weak = saturate(impl_);
    let mut sigma = game_alphabet(spec_m, impl_);
    sigma.insert(Label::Tau);
    build(
        spec_weak.edges,
        spec_m.states.len(),
        impl_weak.edges,
        impl_.states.len(),
        sigma,
        maskable_faults(spec_m, impl_),
    )
}

/// Fault labels the verifier answers with a masking move: implementation
/// faults that are not also symbols of the nominal side. (A fault label shared
/// with the nominal system is an ordinary symbol of the game.)
fn maskable_faults(spec_m: &Lts, impl_: &Lts) -> BTreeSet<Label> {
    impl_
        .fault_set
        .iter()
        .filter(|l| !spec_m.alphabet.contains(l))
        .cloned()
        .collect()
}

/// Σ of the game: every label of either system except masking and maskable
/// faults.
fn game_alphabet(spec_m: &Lts, impl_: &Lts) -> BTreeSet<Label> {
    let maskable = maskable_faults(spec_m, impl_);
    spec_m
        .alphabet
        .union(&impl_.alphabet)
        .filter(|l| **l != Label::Mask && !maskable.contains(l))
        .cloned()
        .collect()
}

fn build(
    mut spec_edges: Vec<(usize, Label, usize)>,
    _spec_states: usize,
    mut impl_edges: Vec<(usize, Label, usize)>,
    _impl_states: usize,
    sigma: BTreeSet<Label>,
    maskable: BTreeSet<Label>,
) -> Result<GameGraph, GameBuildError> {
    spec_edges.sort();
    impl_edges.sort();
    let spec_out = |s: usize| -> &[(usize, Label, usize)] {
        let lo = spec_edges.partition_point(|&(x, _, _)| x < s);
        let hi = spec_edges.partition_point(|&(x, _, _)| x <= s);
        &spec_edges[lo..hi]
    };
    let impl_out = |s: usize| -> &[(usize, Label, usize)] {
        let lo = impl_edges.partition_point(|&(x, _, _)| x < s);
        let hi = impl_edges.partition_point(|&(x, _, _)| x <= s);
        &impl_edges[lo..hi]
    };

    let mut states: Vec<GameState> = Vec::new();
    let mut index: HashMap<GameState, usize> = HashMap::new();
    let mut edges: Vec<Vec<GameEdge>> = Vec::new();

    let init = GameState::Refuter {
        spec: 0,
        impl_state: 0,
    };
    index.insert(init.clone(), 0);
    states.push(init);
    edges.push(Vec::new());

    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        let state = states[idx].clone();
        let mut out: Vec<GameEdge> = Vec::new();
        let mut push = |states: &mut Vec<GameState>,
                        edges: &mut Vec<Vec<GameEdge>>,
                        queue: &mut VecDeque<usize>,
                        target: GameState,
                        label: Label,
                        fault: bool| {
            let tgt = match index.get(&target) {
                Some(&i) => i,
                None => {
                    let i = states.len();
                    index.insert(target.clone(), i);
                    states.push(target);
                    edges.push(Vec::new());
                    queue.push_back(i);
                    i
                }
            };
            out.push(GameEdge {
                label,
                target: tgt,
                fault,
                err: false,
            });
        };

        match state {
            GameState::Err => unreachable!("error state created after exploration"),
            GameState::Refuter { spec, impl_state } => {
                // refuter advances the nominal system (masking loop excluded)
                for (_, l, t) in spec_out(spec) {
                    if *l == Label::Mask {
                        continue;
                    }
                    push(
                        &mut states,
                        &mut edges,
                        &mut queue,
                        GameState::Verifier {
                            spec: *t,
                            impl_state,
                            pending: Pending::SpecMove(l.clone()),
                        },
                        l.clone(),
                        false,
                    );
                }
                // refuter advances the implementation
                for (_, l, t) in impl_out(impl_state) {
                    push(
                        &mut states,
                        &mut edges,
                        &mut queue,
                        GameState::Verifier {
                            spec,
                            impl_state: *t,
                            pending: Pending::ImplMove(l.clone()),
                        },
                        l.clone(),
                        maskable.contains(l),
                    );
                }
            }
            GameState::Verifier {
                spec,
                impl_state,
                pending,
            } => match pending {
                Pending::Hash => unreachable!("verifier states always carry a symbol"),
                Pending::SpecMove(l) => {
                    for (_, il, t) in impl_out(impl_state) {
                        if *il != l {
                            continue;
                        }
                        push(
                            &mut states,
                            &mut edges,
                            &mut queue,
                            GameState::Refuter {
                                spec,
                                impl_state: *t,
                            },
                            l.clone(),
                            false,
                        );
                    }
                }
                Pending::ImplMove(l) if maskable.contains(&l) => {
                    // fault: answered by a masking move of the nominal side
                    for (_, sl, t) in spec_out(spec) {
                        if *sl != Label::Mask {
                            continue;
                        }
                        push(
                            &mut states,
                            &mut edges,
                            &mut queue,
                            GameState::Refuter {
                                spec: *t,
                                impl_state,
                            },
                            Label::Mask,
                            false,
                        );
                    }
                }
                Pending::ImplMove(l) => {
                    for (_, sl, t) in spec_out(spec) {
                        if *sl != l {
                            continue;
                        }
                        push(
                            &mut states,
                            &mut edges,
                            &mut queue,
                            GameState::Refuter {
                                spec: *t,
                                impl_state,
                            },
                            l.clone(),
                            false,
                        );
                    }
                }
            },
        }
        edges[idx] = out;
    }

    // error-completion: stuck states lose for the stuck player's opponent
    let stuck: Vec<usize> = (0..states.len()).filter(|&i| edges[i].is_empty()).collect();
    let mut err = None;
    if !stuck.is_empty() {
        let completion: Vec<Label> = if sigma.is_empty() {
            vec![Label::Tau]
        } else {
            sigma.iter().cloned().collect()
        };
        let err_idx = states.len();
        states.push(GameState::Err);
        edges.push(
            completion
                .iter()
                .map(|l| GameEdge {
                    label: l.clone(),
                    target: err_idx,
                    fault: false,
                    err: true,
                })
                .collect(),
        );
        for s in stuck {
            edges[s] = completion
                .iter()
                .map(|l| GameEdge {
                    label: l.clone(),
                    target: err_idx,
                    fault: false,
                    err: true,
                })
                .collect();
        }
        err = Some(err_idx);
    }

    Ok(GameGraph {
        states,
        edges,
        initial: 0,
        err,
        maskable,
    })
}
