//! Compilation of a resolved program to an explicit LTS by breadth-first
//! exploration of the reachable valuations under interleaved action firing.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::gcl::ast::{ActionKind, Expr, Program};

use super::{Label, Lts, Valuation};

pub const DEFAULT_STATE_CAP: usize = 1 << 24;

/// Unconstrained variables tolerated while checking initial-state uniqueness;
/// 2^20 candidate valuations are enumerated at most.
const MAX_FREE_INITIAL_VARS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("initial condition does not determine a unique state: {detail}")]
    InitialNotUnique { detail: String },
    #[error("reachable state count exceeds the cap of {cap} states")]
    StateExplosion { cap: usize },
    #[error("model declares {count} boolean variables; at most 128 are supported")]
    TooManyVariables { count: usize },
}

/// Boolean expression over variable slots; `Paren` nodes are dropped.
enum BExpr {
    Const(bool),
    Var(usize),
    Not(Box<BExpr>),
    And(Box<BExpr>, Box<BExpr>),
    Or(Box<BExpr>, Box<BExpr>),
    Eq(Box<BExpr>, Box<BExpr>),
}

impl BExpr {
    fn eval(&self, v: Valuation) -> bool {
        match self {
            BExpr::Const(b) => *b,
            BExpr::Var(i) => v.get(*i),
            BExpr::Not(e) => !e.eval(v),
            BExpr::And(a, b) => a.eval(v) && b.eval(v),
            BExpr::Or(a, b) => a.eval(v) || b.eval(v),
            BExpr::Eq(a, b) => a.eval(v) == b.eval(v),
        }
    }
}

struct CompiledAction {
    label: Label,
    guard: BExpr,
    assignments: Vec<(usize, BExpr)>,
}

fn lower(expr: &Expr, env: &HashMap<&str, usize>) -> BExpr {
    match expr {
        Expr::Bool(b, _) => BExpr::Const(*b),
        Expr::Var(n, _) => BExpr::Var(env[n.as_str()]),
        Expr::Not(e, _) => BExpr::Not(Box::new(lower(e, env))),
        Expr::And(a, b, _) => BExpr::And(Box::new(lower(a, env)), Box::new(lower(b, env))),
        Expr::Or(a, b, _) => BExpr::Or(Box::new(lower(a, env)), Box::new(lower(b, env))),
        Expr::Eq(a, b, _) => BExpr::Eq(Box::new(lower(a, env)), Box::new(lower(b, env))),
        Expr::Paren(e, _) => lower(e, env),
    }
}

/// Literals forced by the top-level conjunctive structure of `expr`.
/// Returns false on a direct contradiction (`x && !x`).
fn forced_literals(expr: &Expr, env: &HashMap<&str, usize>, out: &mut HashMap<usize, bool>) -> bool {
    match expr {
        Expr::And(a, b, _) => forced_literals(a, env, out) && forced_literals(b, env, out),
        Expr::Paren(e, _) => forced_literals(e, env, out),
        Expr::Var(n, _) => insert_literal(out, env[n.as_str()], true),
        Expr::Not(inner, _) => match strip_parens(inner) {
            Expr::Var(n, _) => insert_literal(out, env[n.as_str()], false),
            _ => true,
        },
        _ => true,
    }
}

fn strip_parens(e: &Expr) -> &Expr {
    match e {
        Expr::Paren(inner, _) => strip_parens(inner),
        other => other,
    }
}

fn insert_literal(out: &mut HashMap<usize, bool>, var: usize, value: bool) -> bool {
    match out.insert(var, value) {
        Some(prev) => prev == value,
        None => true,
    }
}

pub fn compile(program: &Program) -> Result<Lts, CompileError> {
    compile_with_cap(program, DEFAULT_STATE_CAP)
}

pub fn compile_with_cap(program: &Program, cap: usize) -> Result<Lts, CompileError> {
    let procs: HashMap<&str, usize> = program
        .processes
        .iter()
        .enumerate()
        .map(|(i, p)| (p.name.as_str(), i))
        .collect();
    let instance_procs: HashMap<&str, &str> = program
        .main
        .instances
        .iter()
        .map(|i| (i.name.as_str(), i.process.as_str()))
        .collect();

    // variable layout: globals first, then per-run-instance locals
    let mut var_names: Vec<String> = Vec::new();
    let mut global_slot: HashMap<&str, usize> = HashMap::new();
    for g in &program.globals {
        global_slot.insert(g.name.as_str(), var_names.len());
        var_names.push(g.name.clone());
    }

    let mut actions: Vec<CompiledAction> = Vec::new();
    let mut initial_exprs: Vec<(BExpr, &Expr, HashMap<&str, usize>)> = Vec::new();
    for run in &program.main.runs {
        let proc_ = &program.processes[procs[instance_procs[run.instance.as_str()]]];
        // formals alias the bound globals; locals get fresh slots
        let mut env: HashMap<&str, usize> = global_slot.clone();
        for (formal, actual) in proc_.formals.iter().zip(&run.actuals) {
            env.insert(formal.name.as_str(), global_slot[actual.as_str()]);
        }
        for local in &proc_.locals {
            env.insert(local.name.as_str(), var_names.len());
            var_names.push(format!("{}.{}", run.instance, local.name));
        }
        initial_exprs.push((lower(&proc_.initial, &env), &proc_.initial, env.clone()));
        for a in &proc_.actions {
            let label = match a.kind {
                ActionKind::Normal => Label::obs(&a.label),
                ActionKind::Faulty => Label::fault(&a.label),
                ActionKind::Internal => Label::Tau,
            };
            actions.push(CompiledAction {
                label,
                guard: lower(&a.guard, &env),
                assignments: a
                    .assignments
                    .iter()
                    .map(|asg| (env[asg.target.as_str()], lower(&asg.value, &env)))
                    .collect(),
            });
        }
    }

    let num_vars = var_names.len();
    if num_vars > 128 {
        return Err(CompileError::TooManyVariables { count: num_vars });
    }

    let initial = unique_initial(&initial_exprs, num_vars)?;

    // breadth-first exploration
    let mut index: HashMap<Valuation, usize> = HashMap::new();
    let mut states: Vec<Valuation> = vec![initial];
    index.insert(initial, 0);
    let mut edges: Vec<(usize, Label, usize)> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let v = states[s];
        for a in &actions {
            if !a.guard.eval(v) {
                continue;
            }
            // simultaneous assignment: all right-hand sides read the pre-state
            let mut next = v;
            for (slot, rhs) in &a.assignments {
                next.set(*slot, rhs.eval(v));
            }
            let t = match index.get(&next) {
                Some(&t) => t,
                None => {
                    if states.len() >= cap {
                        return Err(CompileError::StateExplosion { cap });
                    }
                    let t = states.len();
                    states.push(next);
                    index.insert(next, t);
                    queue.push_back(t);
                    t
                }
            };
            edges.push((s, a.label.clone(), t));
        }
    }

    let mut lts = Lts {
        states,
        alphabet: BTreeSet::new(),
        edges,
        fault_set: BTreeSet::new(),
        deadlocks: Vec::new(),
        var_names,
    };
    lts.normalize();
    Ok(lts)
}

fn unique_initial(
    initial_exprs: &[(BExpr, &Expr, HashMap<&str, usize>)],
    num_vars: usize,
) -> Result<Valuation, CompileError> {
    let mut forced: HashMap<usize, bool> = HashMap::new();
    for (_, raw, env) in initial_exprs {
        if !forced_literals(raw, env, &mut forced) {
            return Err(CompileError::InitialNotUnique {
                detail: "contradictory Initial literals; no state satisfies them".into(),
            });
        }
    }
    let free: Vec<usize> = (0..num_vars).filter(|i| !forced.contains_key(i)).collect();
    if free.len() > MAX_FREE_INITIAL_VARS {
        return Err(CompileError::InitialNotUnique {
            detail: format!(
                "{} variables are not pinned down by Initial literals; \
                 too many to enumerate",
                free.len()
            ),
        });
    }

    let mut base = Valuation::default();
    for (&slot, &val) in &forced {
        base.set(slot, val);
    }
    let satisfies =
        |v: Valuation| -> bool { initial_exprs.iter().all(|(compiled, _, _)| compiled.eval(v)) };

    let mut found: Option<Valuation> = None;
    for bits in 0u64..(1u64 << free.len()) {
        let mut v = base;
        for (k, &slot) in free.iter().enumerate() {
            v.set(slot, bits >> k & 1 == 1);
        }
        if satisfies(v) {
            if let Some(first) = found {
                return Err(CompileError::InitialNotUnique {
                    detail: format!(
                        "at least two states satisfy Initial, e.g. {:#x} and {:#x}",
                        first.0, v.0
                    ),
                });
            }
            found = Some(v);
        }
    }
    found.ok_or_else(|| CompileError::InitialNotUnique {
        detail: "no state satisfies the Initial conjunction".into(),
    })
}
