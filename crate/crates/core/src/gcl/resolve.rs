//! Static checks: scoping, arity, duplicate declarations, reserved labels.

use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::ResolveError;

pub fn resolve(program: &Program) -> Result<(), ResolveError> {
    let mut globals = HashSet::new();
    for g in &program.globals {
        if !globals.insert(g.name.as_str()) {
            return Err(ResolveError::DuplicateDeclaration {
                name: g.name.clone(),
                span: g.span,
            });
        }
    }

    let mut procs: HashMap<&str, &ProcessDecl> = HashMap::new();
    for p in &program.processes {
        if procs.insert(p.name.as_str(), p).is_some() {
            return Err(ResolveError::DuplicateDeclaration {
                name: p.name.clone(),
                span: p.span,
            });
        }
        check_process(p, &globals)?;
    }

    let mut instances: HashMap<&str, &InstanceDecl> = HashMap::new();
    for inst in &program.main.instances {
        if instances.insert(inst.name.as_str(), inst).is_some() {
            return Err(ResolveError::DuplicateDeclaration {
                name: inst.name.clone(),
                span: inst.span,
            });
        }
        if !procs.contains_key(inst.process.as_str()) {
            return Err(ResolveError::UnknownIdentifier {
                name: inst.process.clone(),
                span: inst.span,
            });
        }
    }

    let mut run_seen = HashSet::new();
    for run in &program.main.runs {
        let inst = instances.get(run.instance.as_str()).copied().ok_or_else(|| {
            ResolveError::UnknownIdentifier {
                name: run.instance.clone(),
                span: run.span,
            }
        })?;
        if !run_seen.insert(run.instance.as_str()) {
            return Err(ResolveError::DuplicateDeclaration {
                name: run.instance.clone(),
                span: run.span,
            });
        }
        let proc_ = procs[inst.process.as_str()];
        if run.actuals.len() != proc_.formals.len() {
            return Err(ResolveError::ArityMismatch {
                instance: run.instance.clone(),
                process: proc_.name.clone(),
                want: proc_.formals.len(),
                got: run.actuals.len(),
                span: run.span,
            });
        }
        for a in &run.actuals {
            if !globals.contains(a.as_str()) {
                return Err(ResolveError::NonGlobalActual {
                    name: a.clone(),
                    span: run.span,
                });
            }
        }
    }
    for inst in &program.main.instances {
        if !run_seen.contains(inst.name.as_str()) {
            return Err(ResolveError::UnusedInstance {
                instance: inst.name.clone(),
                span: inst.span,
            });
        }
    }
    Ok(())
}

fn check_process(p: &ProcessDecl, globals: &HashSet<&str>) -> Result<(), ResolveError> {
    let mut scope: HashSet<&str> = globals.clone();
    for v in p.formals.iter().chain(&p.locals) {
        if !scope.insert(v.name.as_str()) {
            return Err(ResolveError::DuplicateDeclaration {
                name: v.name.clone(),
                span: v.span,
            });
        }
    }

    let check_expr = |e: &Expr| -> Result<(), ResolveError> {
        let mut err = None;
        e.visit_vars(&mut |name, span| {
            if err.is_none() && !scope.contains(name) {
                err = Some(ResolveError::UnknownIdentifier {
                    name: name.to_string(),
                    span,
                });
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    };

    check_expr(&p.initial)?;
    check_expr(&p.normative)?;
    for a in &p.actions {
        if a.label == "M" || a.label == "tau" {
            return Err(ResolveError::ReservedLabel {
                label: a.label.clone(),
                span: a.span,
            });
        }
        check_expr(&a.guard)?;
        let mut targets = HashSet::new();
        for asg in &a.assignments {
            if !scope.contains(asg.target.as_str()) {
                return Err(ResolveError::UnknownIdentifier {
                    name: asg.target.clone(),
                    span: asg.span,
                });
            }
            if !targets.insert(asg.target.as_str()) {
                return Err(ResolveError::DuplicateAssignment {
                    name: asg.target.clone(),
                    span: asg.span,
                });
            }
            check_expr(&asg.value)?;
        }
    }
    Ok(())
}
