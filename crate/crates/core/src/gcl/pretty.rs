//! Canonical source printer. `parse(pretty_print(p))` is structurally equal
//! to `p`.

use std::fmt::Write;

use super::ast::*;

pub fn pretty_print(program: &Program) -> String {
    let mut out = String::new();
    if !program.globals.is_empty() {
        let names: Vec<&str> = program.globals.iter().map(|g| g.name.as_str()).collect();
        let _ = writeln!(out, "Global {} : BOOL;", names.join(", "));
        out.push('\n');
    }
    for p in &program.processes {
        print_process(&mut out, p);
        out.push('\n');
    }
    let _ = writeln!(out, "Main () {{");
    for i in &program.main.instances {
        let _ = writeln!(out, "  {} : {};", i.name, i.process);
    }
    for r in &program.main.runs {
        let _ = writeln!(out, "  run {}({});", r.instance, r.actuals.join(", "));
    }
    let _ = writeln!(out, "}}");
    out
}

fn print_process(out: &mut String, p: &ProcessDecl) {
    let _ = write!(out, "Process {}", p.name);
    if !p.formals.is_empty() {
        let names: Vec<&str> = p.formals.iter().map(|f| f.name.as_str()).collect();
        let _ = write!(out, "({} : BOOL)", names.join(", "));
    }
    let _ = writeln!(out, " {{");
    if !p.locals.is_empty() {
        let names: Vec<&str> = p.locals.iter().map(|l| l.name.as_str()).collect();
        let _ = writeln!(out, "  {} : BOOL;", names.join(", "));
    }
    let _ = writeln!(out, "  Initial: {};", expr_str(&p.initial));
    if !matches!(p.normative, Expr::Bool(true, _)) {
        let _ = writeln!(out, "  Normative: {};", expr_str(&p.normative));
    }
    for a in &p.actions {
        let modifier = match a.kind {
            ActionKind::Normal => "",
            ActionKind::Faulty => "faulty ",
            ActionKind::Internal => "internal ",
        };
        let assigns: Vec<String> = a
            .assignments
            .iter()
            .map(|asg| format!("{} = {}", asg.target, expr_str(&asg.value)))
            .collect();
        let _ = writeln!(
            out,
            "  [{}] {}{} -> {};",
            a.label,
            modifier,
            expr_str(&a.guard),
            assigns.join(", ")
        );
    }
    let _ = writeln!(out, "}}");
}

// Precedence levels, loosest to tightest: || (1), && (2), == (3), ! / atoms (4).
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Or(..) => 1,
        Expr::And(..) => 2,
        Expr::Eq(..) => 3,
        Expr::Not(..) | Expr::Bool(..) | Expr::Var(..) | Expr::Paren(..) => 4,
    }
}

fn expr_str(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    let my = prec(e);
    let need_parens = my < min_prec;
    if need_parens {
        out.push('(');
    }
    match e {
        Expr::Bool(true, _) => out.push_str("true"),
        Expr::Bool(false, _) => out.push_str("false"),
        Expr::Var(name, _) => out.push_str(name),
        Expr::Not(inner, _) => {
            out.push('!');
            write_expr(out, inner, 4);
        }
        // Left-associative binaries: the right operand needs strictly higher
        // precedence to avoid re-association on re-parse.
        Expr::And(a, b, _) => {
            write_expr(out, a, 2);
            out.push_str(" && ");
            write_expr(out, b, 3);
        }
        Expr::Or(a, b, _) => {
            write_expr(out, a, 1);
            out.push_str(" || ");
            write_expr(out, b, 2);
        }
        Expr::Eq(a, b, _) => {
            write_expr(out, a, 3);
            out.push_str(" == ");
            write_expr(out, b, 4);
        }
        Expr::Paren(inner, _) => write_expr(out, inner, min_prec),
    }
    if need_parens {
        out.push(')');
    }
}
