//! Shared generators for the randomized suites.

// each test target pulls this module in but uses only some of the helpers
#![allow(dead_code)]

use rand::Rng;

use maskdist_core::game::{GameEdge, GameGraph, GameState, Pending};
use maskdist_core::semantics::{Label, Lts};

/// A random system over up to `max_states` states. Labels are drawn from
/// `obs` observable names, `faults` fault names, plus τ when `with_tau`.
/// Every state gets at least one outgoing edge, so the system is
/// deadlock-free; unreachable states are harmless for the properties tested.
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
        let k = rng.gen_range(1..=3);
        for _ in 0..k {
            let l = labels[rng.gen_range(0..labels.len())].clone();
            let t = rng.gen_range(0..n);
            edges.push((s, l, t));
        }
    }
    Lts::from_edges(n, edges)
}

/// A random game graph exercising the solver directly: state 0 is a refuter
/// state, the last state is the error state with self-loops, and the rest is
/// a random mix of refuter, verifier and fault-pending verifier states.
/// Every state has at least one outgoing edge.
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
        let roll = rng.gen_range(0..4);
        states.push(match roll {
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
            // duplicate targets allowed on purpose
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
