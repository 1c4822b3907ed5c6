//! Explicit-state semantics: compilation of programs to labelled transition
//! systems, Milner restriction, masking augmentation (`A^M`) and τ-saturation
//! of the weak transition relation.

mod compile;

pub use compile::{compile, compile_with_cap, CompileError, DEFAULT_STATE_CAP};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

/// Transition label. Fault labels are structurally distinct from observable
/// ones, so a name may appear in both roles without ambiguity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Obs(Arc<str>),
    Tau,
    Fault(Arc<str>),
    Mask,
}

impl Label {
    pub fn obs(name: &str) -> Label {
        Label::Obs(Arc::from(name))
    }

    pub fn fault(name: &str) -> Label {
        Label::Fault(Arc::from(name))
    }

    pub fn is_fault(&self) -> bool {
        matches!(self, Label::Fault(_))
    }

    /// Prefixed form used in the line-oriented dump formats.
    pub fn dump_str(&self) -> String {
        match self {
            Label::Obs(n) => format!("obs:{n}"),
            Label::Tau => "tau".into(),
            Label::Fault(n) => format!("fault:{n}"),
            Label::Mask => "mask".into(),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Obs(n) => write!(f, "{n}"),
            Label::Tau => write!(f, "tau"),
            Label::Fault(n) => write!(f, "{n}"),
            Label::Mask => write!(f, "M"),
        }
    }
}

/// Packed state: one bit per declared boolean variable, globals first, then
/// per-instance locals in declaration order. Capacity 128 variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Valuation(pub u128);

impl Valuation {
    pub fn get(&self, idx: usize) -> bool {
        self.0 >> idx & 1 == 1
    }

    pub fn set(&mut self, idx: usize, value: bool) {
        if value {
            self.0 |= 1 << idx;
        } else {
            self.0 &= !(1 << idx);
        }
    }
}

/// Explicit labelled transition system. State 0 is the initial state and all
/// states are reachable from it. Edges are sorted by (source, label, target).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lts {
    pub states: Vec<Valuation>,
    pub alphabet: BTreeSet<Label>,
    pub edges: Vec<(usize, Label, usize)>,
    pub fault_set: BTreeSet<Label>,
    pub deadlocks: Vec<usize>,
    /// Variable names matching `Valuation` bit positions; empty for LTSs
    /// built directly rather than compiled from a program.
    pub var_names: Vec<String>,
}

impl Lts {
    /// Build from raw parts: sorts and deduplicates edges, recomputes the
    /// alphabet, fault set and deadlock list. States must all be reachable.
    pub fn from_edges(num_states: usize, edges: Vec<(usize, Label, usize)>) -> Lts {
        let mut lts = Lts {
            states: (0..num_states).map(|i| Valuation(i as u128)).collect(),
            alphabet: BTreeSet::new(),
            edges,
            fault_set: BTreeSet::new(),
            deadlocks: Vec::new(),
            var_names: Vec::new(),
        };
        lts.normalize();
        lts
    }

    fn normalize(&mut self) {
        self.edges.sort();
        self.edges.dedup();
        self.alphabet = self.edges.iter().map(|(_, l, _)| l.clone()).collect();
        self.fault_set = self
            .alphabet
            .iter()
            .filter(|l| l.is_fault())
            .cloned()
            .collect();
        let mut has_out = vec![false; self.states.len()];
        for &(src, _, _) in &self.edges {
            has_out[src] = true;
        }
        self.deadlocks = (0..self.states.len()).filter(|&s| !has_out[s]).collect();
    }

    /// Outgoing edges of `state`, in (label, target) sorted order.
    pub fn outgoing(&self, state: usize) -> &[(usize, Label, usize)] {
        let lo = self.edges.partition_point(|&(s, _, _)| s < state);
        let hi = self.edges.partition_point(|&(s, _, _)| s <= state);
        &self.edges[lo..hi]
    }

    /// Human-readable description of a state as a variable assignment, or the
    /// bare index when no variable names are attached.
    pub fn describe_state(&self, state: usize) -> String {
        if self.var_names.is_empty() {
            return format!("s{state}");
        }
        let v = self.states[state];
        let parts: Vec<String> = self
            .var_names
            .iter()
            .enumerate()
            .map(|(i, n)| format!("{n}={}", if v.get(i) { 1 } else { 0 }))
            .collect();
        format!("s{state}({})", parts.join(","))
    }

    /// Line-oriented dump: `STATES n`, `INIT 0`, then sorted edge triples.
    pub fn dump(&self) -> String {
        let mut out = format!("STATES {}\nINIT 0\n", self.states.len());
        for (src, label, dst) in &self.edges {
            out.push_str(&format!("{src} {} {dst}\n", label.dump_str()));
        }
        out
    }
}

/// Removes all edges carrying a forbidden label, drops states that become
/// unreachable from the initial state, and removes the forbidden labels from
/// the alphabet (Milner restriction `I \ F`).
pub fn restrict(lts: &Lts, forbidden: &BTreeSet<Label>) -> Lts {
    let kept: Vec<&(usize, Label, usize)> = lts
        .edges
        .iter()
        .filter(|(_, l, _)| !forbidden.contains(l))
        .collect();

    // reachability over the kept edges
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); lts.states.len()];
    for &&(s, _, t) in &kept {
        succ[s].push(t);
    }
    let mut reach = vec![false; lts.states.len()];
    let mut queue = VecDeque::from([0usize]);
    reach[0] = true;
    while let Some(s) = queue.pop_front() {
        for &t in &succ[s] {
            if !reach[t] {
                reach[t] = true;
                queue.push_back(t);
            }
        }
    }

    let mut remap = vec![usize::MAX; lts.states.len()];
    let mut states = Vec::new();
    for (i, &r) in reach.iter().enumerate() {
        if r {
            remap[i] = states.len();
            states.push(lts.states[i]);
        }
    }
    let edges = kept
        .into_iter()
        .filter(|(s, _, t)| reach[*s] && reach[*t])
        .map(|(s, l, t)| (remap[*s], l.clone(), remap[*t]))
        .collect();

    let mut out = Lts {
        states,
        alphabet: BTreeSet::new(),
        edges,
        fault_set: BTreeSet::new(),
        deadlocks: Vec::new(),
        var_names: lts.var_names.clone(),
    };
    out.normalize();
    out
}

/// Returns `A^M`: the same system with a masking self-loop at every state.
pub fn augment_mask(lts: &Lts) -> Lts {
    debug_assert!(!lts.alphabet.contains(&Label::Mask));
    let mut out = lts.clone();
    for s in 0..out.states.len() {
        out.edges.push((s, Label::Mask, s));
    }
    out.normalize();
    out
}

/// The weak transition relation ⇒ of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakEdges {
    /// Sorted by (source, label, target). Contains (s, τ, s) for every state.
    pub edges: Vec<(usize, Label, usize)>,
}

impl WeakEdges {
    pub fn outgoing(&self, state: usize) -> &[(usize, Label, usize)] {
        let lo = self.edges.partition_point(|&(s, _, _)| s < state);
        let hi = self.edges.partition_point(|&(s, _, _)| s <= state);
        &self.edges[lo..hi]
    }
}

/// Computes ⇒ from the strong edges: for observable `e`, τ-padding on both
/// sides ((→τ)* ∘ →e ∘ (→τ)*); for τ, the reflexive-transitive closure of
/// →τ; for masking and fault labels, strong edges only.
pub fn saturate(lts: &Lts) -> WeakEdges {
    let n = lts.states.len();

    // τ*-closure as per-state reachable sets
    let mut tau_succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, l, t) in &lts.edges {
        if *l == Label::Tau {
            tau_succ[*s].push(*t);
        }
    }
    let mut closure: Vec<Vec<usize>> = Vec::with_capacity(n);
    for s in 0..n {
        let mut reach = vec![false; n];
        reach[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &tau_succ[u] {
                if !reach[v] {
                    reach[v] = true;
                    queue.push_back(v);
                }
            }
        }
        closure.push((0..n).filter(|&v| reach[v]).collect());
    }

    let mut weak: BTreeSet<(usize, Label, usize)> = BTreeSet::new();
    for s in 0..n {
        for &t in &closure[s] {
            weak.insert((s, Label::Tau, t));
        }
    }
    for (u, l, v) in &lts.edges {
        match l {
            Label::Tau => {}
            Label::Fault(_) | Label::Mask => {
                weak.insert((*u, l.clone(), *v));
            }
            Label::Obs(_) => {
                // every s with s τ*→ u, every t with v τ*→ t
                for s in 0..n {
                    if !closure[s].contains(u) {
                        continue;
                    }
                    for &t in &closure[*v] {
                        weak.insert((s, l.clone(), t));
                    }
                }
            }
        }
    }
    WeakEdges {
        edges: weak.into_iter().collect(),
    }
}
