//! Direct relational definitions of masking simulation and bisimulation by
//! greatest-fixpoint refinement of a pair table. These are independent of the
//! game construction and serve as oracles for it.

use std::collections::{BTreeSet, VecDeque};

use crate::semantics::{saturate, Label, Lts};
use crate::solver::Mode;

/// A relation between the states of two systems, as a boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRelation {
    pub spec_states: usize,
    pub impl_states: usize,
    bits: Vec<bool>,
}

impl PairRelation {
    fn full(spec_states: usize, impl_states: usize) -> Self {
        PairRelation {
            spec_states,
            impl_states,
            bits: vec![true; spec_states * impl_states],
        }
    }

    fn empty(spec_states: usize, impl_states: usize) -> Self {
        PairRelation {
            spec_states,
            impl_states,
            bits: vec![false; spec_states * impl_states],
        }
    }

    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.bits[s * self.impl_states + t]
    }

    fn set(&mut self, s: usize, t: usize, v: bool) {
        self.bits[s * self.impl_states + t] = v;
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in 0..self.spec_states {
            for t in 0..self.impl_states {
                if self.contains(s, t) {
                    out.push((s, t));
                }
            }
        }
        out
    }

    /// Lines `specState ~ implState` with model-level state descriptions.
    pub fn dump(&self, spec: &Lts, impl_: &Lts) -> String {
        let mut out = String::new();
        for (s, t) in self.pairs() {
            out.push_str(&format!(
                "{} ~ {}\n",
                spec.describe_state(s),
                impl_.describe_state(t)
            ));
        }
        out
    }
}

fn edges_for(lts: &Lts, mode: Mode) -> Vec<(usize, Label, usize)> {
    match mode {
        Mode::Strong => lts.edges.clone(),
        Mode::Weak => saturate(lts).edges,
    }
}

fn outgoing(edges: &[(usize, Label, usize)], s: usize) -> &[(usize, Label, usize)] {
    let lo = edges.partition_point(|&(x, _, _)| x < s);
    let hi = edges.partition_point(|&(x, _, _)| x <= s);
    &edges[lo..hi]
}

/// Decides masking simulation between a nominal system and an implementation
/// with faults. Starts from the full relation and deletes pairs violating the
/// matching conditions until a fixpoint; returns the surviving relation,
/// restricted to the pairs reachable from the initial pair, if the initial
/// pair survives.
///
/// Matching conditions for a related pair (s, t):
/// - every nominal move s →σ s₂ is matched by some t →σ t₂ with (s₂,t₂) related;
/// - every non-fault implementation move t →σ t₂ is matched by some s →σ s₂
///   with (s₂,t₂) related;
/// - every fault move t →F t₂ is masked: (s, t₂) related (the nominal side
///   answers with its masking self-loop, staying in place).
///
/// In weak mode both systems are first τ-saturated; fault edges stay strong.
pub fn masking_sim(spec: &Lts, impl_: &Lts, mode: Mode) -> Option<PairRelation> {
    // faults also present as nominal symbols are ordinary symbols
    let maskable: BTreeSet<Label> = impl_
        .fault_set
        .iter()
        .filter(|l| !spec.alphabet.contains(l))
        .cloned()
        .collect();
    let spec_edges = edges_for(spec, mode);
    let impl_edges = edges_for(impl_, mode);
    // in weak mode a τ move is matched by the (always present) reflexive weak
    // τ edge; in strong mode τ is an ordinary symbol. Both are covered by
    // plain label matching over the chosen edge sets.

    let ns = spec.states.len();
    let ni = impl_.states.len();
    let mut rel = PairRelation::full(ns, ni);

    let ok = |rel: &PairRelation, s: usize, t: usize| -> bool {
        for (_, l, s2) in outgoing(&spec_edges, s) {
            let matched = outgoing(&impl_edges, t)
                .iter()
                .any(|(_, il, t2)| il == l && rel.contains(*s2, *t2));
            if !matched {
                return false;
            }
        }
        for (_, l, t2) in outgoing(&impl_edges, t) {
            if maskable.contains(l) {
                if !rel.contains(s, *t2) {
                    return false;
                }
            } else {
                let matched = outgoing(&spec_edges, s)
                    .iter()
                    .any(|(_, sl, s2)| sl == l && rel.contains(*s2, *t2));
                if !matched {
                    return false;
                }
            }
        }
        true
    };

    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..ns {
            for t in 0..ni {
                if rel.contains(s, t) && !ok(&rel, s, t) {
                    rel.set(s, t, false);
                    changed = true;
                }
            }
        }
    }

    if !rel.contains(0, 0) {
        return None;
    }

    // restrict to pairs reachable from the initial pair through matched moves
    let mut reachable = PairRelation::empty(ns, ni);
    reachable.set(0, 0, true);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((s, t)) = queue.pop_front() {
        let mut visit = |s2: usize, t2: usize, reachable: &mut PairRelation| {
            if rel.contains(s2, t2) && !reachable.contains(s2, t2) {
                reachable.set(s2, t2, true);
                queue.push_back((s2, t2));
            }
        };
        for (_, l, s2) in outgoing(&spec_edges, s) {
            for (_, il, t2) in outgoing(&impl_edges, t) {
                if il == l {
                    visit(*s2, *t2, &mut reachable);
                }
            }
        }
        for (_, l, t2) in outgoing(&impl_edges, t) {
            if maskable.contains(l) {
                visit(s, *t2, &mut reachable);
            }
        }
    }
    Some(reachable)
}

/// Standard (weak) bisimulation between two fault-free systems, by pair-table
/// refinement over the (saturated) edges.
pub fn bisimilar(a: &Lts, b: &Lts, mode: Mode) -> bool {
    let ea = edges_for(a, mode);
    let eb = edges_for(b, mode);
    let na = a.states.len();
    let nb = b.states.len();
    let mut rel = PairRelation::full(na, nb);

    let ok = |rel: &PairRelation, s: usize, t: usize| -> bool {
        for (_, l, s2) in outgoing(&ea, s) {
            if !outgoing(&eb, t)
                .iter()
                .any(|(_, bl, t2)| bl == l && rel.contains(*s2, *t2))
            {
                return false;
            }
        }
        for (_, l, t2) in outgoing(&eb, t) {
            if !outgoing(&ea, s)
                .iter()
                .any(|(_, al, s2)| al == l && rel.contains(*s2, *t2))
            {
                return false;
            }
        }
        true
    };

    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..na {
            for t in 0..nb {
                if rel.contains(s, t) && !ok(&rel, s, t) {
                    rel.set(s, t, false);
                    changed = true;
                }
            }
        }
    }
    rel.contains(0, 0)
}
