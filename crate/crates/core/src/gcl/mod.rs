//! Frontend for the guarded-command modeling language: lexing, parsing,
//! static resolution and pretty-printing.

pub mod ast;
mod lexer;
mod parser;
mod pretty;
mod resolve;

pub use ast::{Action, ActionKind, Expr, Program, Span};
pub use pretty::pretty_print;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{span}: unexpected character `{ch}`")]
    UnexpectedChar { ch: char, span: Span },
    #[error("{span}: expected {}, found {found}", expected.join(" or "))]
    UnexpectedToken {
        expected: Vec<String>,
        found: String,
        span: Span,
    },
    #[error("{span}: process `{process}` declares no actions")]
    EmptyProcess { process: String, span: Span },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolveError {
    #[error("{span}: unknown identifier `{name}`")]
    UnknownIdentifier { name: String, span: Span },
    #[error("{span}: `{instance}` runs process `{process}` with {got} argument(s), expected {want}")]
    ArityMismatch {
        instance: String,
        process: String,
        want: usize,
        got: usize,
        span: Span,
    },
    #[error("{span}: actual parameter `{name}` is not a global variable")]
    NonGlobalActual { name: String, span: Span },
    #[error("{span}: duplicate declaration of `{name}`")]
    DuplicateDeclaration { name: String, span: Span },
    #[error("{span}: action label `{label}` is reserved")]
    ReservedLabel { label: String, span: Span },
    #[error("{span}: variable `{name}` assigned twice in one action")]
    DuplicateAssignment { name: String, span: Span },
    #[error("{span}: instance `{instance}` is never run")]
    UnusedInstance { instance: String, span: Span },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GclError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
}

/// Parse and statically resolve a model source.
pub fn parse(source: &str) -> Result<Program, GclError> {
    let program = parser::Parser::new(source)?.parse_program()?;
    resolve::resolve(&program)?;
    Ok(program)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CELL: &str = "\
Process Cell {
  x : BOOL;
  Initial: !x;
  Normative: true;
  [flip] true -> x = !x;
  [zap] faulty x -> x = false;
  [spin] internal true -> x = x;
}
Main () {
  c : Cell;
  run c();
}
";

    #[test]
    fn parses_minimal_process() {
        let p = parse(CELL).unwrap();
        assert_eq!(p.processes.len(), 1);
        let proc_ = &p.processes[0];
        assert_eq!(proc_.actions.len(), 3);
        assert_eq!(proc_.actions[0].kind, ActionKind::Normal);
        assert_eq!(proc_.actions[1].kind, ActionKind::Faulty);
        assert_eq!(proc_.actions[2].kind, ActionKind::Internal);
    }

    #[test]
    fn empty_input_errors_at_origin() {
        match parse("") {
            Err(GclError::Parse(ParseError::UnexpectedToken { span, .. })) => {
                assert_eq!(span, Span::new(1, 1));
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn reserved_labels_rejected() {
        let bad = CELL.replace("[flip]", "[M]");
        assert!(matches!(
            parse(&bad),
            Err(GclError::Resolve(ResolveError::ReservedLabel { .. }))
        ));
        let bad = CELL.replace("[flip]", "[tau]");
        assert!(matches!(
            parse(&bad),
            Err(GclError::Resolve(ResolveError::ReservedLabel { .. }))
        ));
    }

    #[test]
    fn unknown_identifier_rejected() {
        let bad = CELL.replace("x = !x", "x = !y");
        assert!(matches!(
            parse(&bad),
            Err(GclError::Resolve(ResolveError::UnknownIdentifier { .. }))
        ));
    }

    #[test]
    fn round_trip_is_structural_identity() {
        let p = parse(CELL).unwrap();
        let printed = pretty_print(&p);
        let q = parse(&printed).unwrap();
        assert!(p.structurally_eq(&q), "round-trip changed the program:\n{printed}");
    }

    #[test]
    fn comments_and_precedence() {
        let src = "\
// a cell with a composite guard
Global g : BOOL;
Process P(inp : BOOL) {
  a, b : BOOL;
  Initial: !a && !b && !inp;
  Normative: true;
  [go] a || b && !inp == a -> a = (a || b) && inp;
}
Main () {
  p : P;
  run p(g);
}
";
        let p = parse(src).unwrap();
        let q = parse(&pretty_print(&p)).unwrap();
        assert!(p.structurally_eq(&q));
        // `a || b && c` parses as a || (b && c)
        let g = &p.processes[0].actions[0].guard;
        assert!(matches!(g, Expr::Or(..)));
    }
}
