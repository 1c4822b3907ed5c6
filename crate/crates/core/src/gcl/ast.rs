//! Abstract syntax tree for the guarded-command modeling language.

use std::fmt;

/// Source position, 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A whole resolved model: global variables, process declarations and the
/// `Main` block that instantiates them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub globals: Vec<VarDecl>,
    pub processes: Vec<ProcessDecl>,
    pub main: MainBlock,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessDecl {
    pub name: String,
    pub formals: Vec<VarDecl>,
    pub locals: Vec<VarDecl>,
    pub initial: Expr,
    pub normative: Expr,
    pub actions: Vec<Action>,
    pub span: Span,
}

/// Whether an action is part of the normal behavior, a fault, or internal
/// (silent) activity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionKind {
    Normal,
    Faulty,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub label: String,
    pub kind: ActionKind,
    pub guard: Expr,
    pub assignments: Vec<Assignment>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub target: String,
    pub value: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainBlock {
    pub instances: Vec<InstanceDecl>,
    pub runs: Vec<RunStmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDecl {
    pub name: String,
    pub process: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunStmt {
    pub instance: String,
    pub actuals: Vec<String>,
    pub span: Span,
}

/// Boolean expression tree. All operands are boolean; evaluation is total
/// over any full valuation of the referenced variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Bool(bool, Span),
    Var(String, Span),
    Not(Box<Expr>, Span),
    And(Box<Expr>, Box<Expr>, Span),
    Or(Box<Expr>, Box<Expr>, Span),
    Eq(Box<Expr>, Box<Expr>, Span),
    Paren(Box<Expr>, Span),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Bool(_, s)
            | Expr::Var(_, s)
            | Expr::Not(_, s)
            | Expr::And(_, _, s)
            | Expr::Or(_, _, s)
            | Expr::Eq(_, _, s)
            | Expr::Paren(_, s) => *s,
        }
    }

    /// Structural copy with all spans reset and grouping nodes dropped.
    fn normalized(&self) -> Expr {
        let z = Span::default();
        match self {
            Expr::Bool(b, _) => Expr::Bool(*b, z),
            Expr::Var(n, _) => Expr::Var(n.clone(), z),
            Expr::Not(e, _) => Expr::Not(Box::new(e.normalized()), z),
            Expr::And(a, b, _) => Expr::And(Box::new(a.normalized()), Box::new(b.normalized()), z),
            Expr::Or(a, b, _) => Expr::Or(Box::new(a.normalized()), Box::new(b.normalized()), z),
            Expr::Eq(a, b, _) => Expr::Eq(Box::new(a.normalized()), Box::new(b.normalized()), z),
            Expr::Paren(e, _) => e.normalized(),
        }
    }

    /// Visit every variable reference.
    pub fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a str, Span)) {
        match self {
            Expr::Bool(..) => {}
            Expr::Var(n, s) => f(n, *s),
            Expr::Not(e, _) | Expr::Paren(e, _) => e.visit_vars(f),
            Expr::And(a, b, _) | Expr::Or(a, b, _) | Expr::Eq(a, b, _) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }
}

impl Program {
    /// Structural equality: spans and redundant grouping are ignored.
    pub fn structurally_eq(&self, other: &Program) -> bool {
        self.normalized() == other.normalized()
    }

    fn normalized(&self) -> Program {
        let z = Span::default();
        let var = |v: &VarDecl| VarDecl {
            name: v.name.clone(),
            span: z,
        };
        Program {
            globals: self.globals.iter().map(var).collect(),
            processes: self
                .processes
                .iter()
                .map(|p| ProcessDecl {
                    name: p.name.clone(),
                    formals: p.formals.iter().map(var).collect(),
                    locals: p.locals.iter().map(var).collect(),
                    initial: p.initial.normalized(),
                    normative: p.normative.normalized(),
                    actions: p
                        .actions
                        .iter()
                        .map(|a| Action {
                            label: a.label.clone(),
                            kind: a.kind,
                            guard: a.guard.normalized(),
                            assignments: a
                                .assignments
                                .iter()
                                .map(|asg| Assignment {
                                    target: asg.target.clone(),
                                    value: asg.value.normalized(),
                                    span: z,
                                })
                                .collect(),
                            span: z,
                        })
                        .collect(),
                    span: z,
                })
                .collect(),
            main: MainBlock {
                instances: self
                    .main
                    .instances
                    .iter()
                    .map(|i| InstanceDecl {
                        name: i.name.clone(),
                        process: i.process.clone(),
                        span: z,
                    })
                    .collect(),
                runs: self
                    .main
                    .runs
                    .iter()
                    .map(|r| RunStmt {
                        instance: r.instance.clone(),
                        actuals: r.actuals.clone(),
                        span: z,
                    })
                    .collect(),
                span: z,
            },
        }
    }
}
