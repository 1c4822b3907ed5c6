//! Helpers for the acceptance suite: corpus loading, random system and game
//! generators, and the naive winning-set transcription used as the solver
//! oracle.

use std::path::{Path, PathBuf};

use rand::Rng;

use maskdist_core::game::{GameEdge, GameGraph, GameState, Pending};
use maskdist_core::semantics::{compile, Label, Lts};
use maskdist_core::solver::{LayerTable, INFINITE};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load_model(path: &Path) -> Lts {
    let source = std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let program =
        maskdist_core::gcl::parse(&source).unwrap_or_else(|e| panic!("{}:{e}", path.display()));
    compile(&program).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Fixture rows `model;params;mode;num/den`, comments and blanks skipped.
pub fn fixture_rows(file: &Path) -> Vec<(String, String, bool, i64, i64)> {
    let text = std::fs::read_to_string(file).unwrap();
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let f: Vec<&str> = line.split(';').collect();
            let (num, den) = f[3].split_once('/').unwrap();
            (
                f[0].to_string(),
                f[1].to_string(),
                f[2] == "weak",
                num.parse().unwrap(),
                den.parse().unwrap(),
            )
        })
        .collect()
}

pub fn resolve_pair(model: &str, params: &str) -> (PathBuf, PathBuf) {
    let dir = corpus_dir();
    let impl_path = dir.join(format!("{model}_{params}.gcl"));
    let sized = dir.join(format!("{model}_{params}_nominal.gcl"));
    let spec_path = if sized.exists() {
        sized
    } else {
        dir.join(format!("{model}_nominal.gcl"))
    };
    (spec_path, impl_path)
}

/// Deadlock-free random system over the given label stock.
pub fn random_lts(
    rng: &mut impl Rng,
    max_states: usize,
    obs: &[&str],
    faults: &[&str],
    with_tau: bool,
) -> Lts {
    let n = rng.gen_range(1..=max_states);
    let mut labels: Vec<Label> = obs.iter().map(|o| Label::obs(o)).collect();
    for f in faults {
        labels.push(Label::fault(f));
    }
    if with_tau {
        labels.push(Label::Tau);
    }
    let mut edges = Vec::new();
    for s in 0..n {
        for _ in 0..rng.gen_range(1..=3) {
            let l = labels[rng.gen_range(0..labels.len())].clone();
            edges.push((s, l, rng.gen_range(0..n)));
        }
    }
    Lts::from_edges(n, edges)
}

/// Random game graph for exercising the solver directly.
pub fn random_game(rng: &mut impl Rng, max_states: usize) -> GameGraph {
    let fault = Label::fault("f");
    let obs = Label::obs("a");
    let n = rng.gen_range(3..=max_states);
    let err = n - 1;
    let mut states = Vec::with_capacity(n);
    states.push(GameState::Refuter {
        spec: 0,
        impl_state: 0,
    });
    for i in 1..err {
        states.push(match rng.gen_range(0..4) {
            0 | 1 => GameState::Refuter {
                spec: i,
                impl_state: i,
            },
            2 => GameState::Verifier {
                spec: i,
                impl_state: i,
                pending: Pending::SpecMove(obs.clone()),
            },
            _ => GameState::Verifier {
                spec: i,
                impl_state: i,
                pending: Pending::ImplMove(fault.clone()),
            },
        });
    }
    states.push(GameState::Err);

    let mut edges: Vec<Vec<GameEdge>> = Vec::with_capacity(n);
    for s in states.iter() {
        if s.is_err() {
            edges.push(vec![GameEdge {
                label: obs.clone(),
                target: err,
                fault: false,
                err: true,
            }]);
            continue;
        }
        let k = rng.gen_range(1..=4);
        let mut adj = Vec::with_capacity(k);
        for _ in 0..k {
            let t = rng.gen_range(0..n);
            adj.push(GameEdge {
                label: obs.clone(),
                target: t,
                fault: matches!(s, GameState::Verifier { pending: Pending::ImplMove(l), .. } if *l == fault),
                err: t == err,
            });
        }
        edges.push(adj);
    }

    GameGraph {
        states,
        edges,
        initial: 0,
        err: Some(err),
        maskable: [fault].into_iter().collect(),
    }
}

/// Literal winning-set transcription: cumulative sets D[b][d] grown one
/// budget and one depth at a time. Mirrors the oracle used by the solver's
/// own test suite.
pub fn naive_layers(game: &GameGraph) -> LayerTable {
    let n = game.states.len();
    let mut budget = vec![INFINITE; n];
    let mut depth = vec![INFINITE; n];
    let err = match game.err {
        Some(e) => e,
        None => return LayerTable { budget, depth },
    };
    let fault_pending: Vec<bool> = (0..n).map(|i| game.is_fault_pending(i)).collect();

    let mut prev: Vec<Vec<bool>> = vec![vec![false; n]];
    for b in 1..=(n + 1) {
        let mut cur: Vec<Vec<bool>> = vec![vec![false; n]];
        loop {
            let d = cur.len();
            let last = &cur[d - 1];
            let prev_last = &prev[(d - 1).min(prev.len() - 1)];
            let mut next = last.clone();
            let prev_d = &prev[d.min(prev.len() - 1)];
            for v in 0..n {
                if prev_d[v] {
                    next[v] = true;
                }
            }
            next[err] = true;
            for v in 0..n {
                if next[v] || game.edges[v].is_empty() {
                    continue;
                }
                let post = &game.edges[v];
                let entered = match &game.states[v] {
                    GameState::Err => true,
                    GameState::Refuter { .. } => post.iter().any(|e| last[e.target]),
                    GameState::Verifier { .. } => {
                        if fault_pending[v] {
                            post.iter().all(|e| prev_last[e.target])
                        } else {
                            post.iter().all(|e| last[e.target])
                        }
                    }
                };
                if entered {
                    next[v] = true;
                }
            }
            let fixed = next == *last && d >= prev.len() - 1;
            cur.push(next);
            if fixed {
                break;
            }
        }
        for v in 0..n {
            if budget[v] == INFINITE {
                if let Some(d) = cur.iter().position(|set| set[v]) {
                    budget[v] = b as u32;
                    depth[v] = d as u32;
                }
            }
        }
        if cur.last() == prev.last() {
            break;
        }
        prev = cur;
    }
    LayerTable { budget, depth }
}
