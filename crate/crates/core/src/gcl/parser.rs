//! Recursive-descent parser producing an unresolved AST.

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(source: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: tokenize(source)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err_expected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::UnexpectedToken {
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.kind.describe(),
            span: t.span,
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.advance())
        } else {
            Err(self.err_expected(&[what]))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), ParseError> {
        match &self.peek().kind {
            TokenKind::Ident(name) => {
                let name = name.clone();
                let span = self.advance().span;
                Ok((name, span))
            }
            _ => Err(self.err_expected(&[what])),
        }
    }

    pub fn parse_program(&mut self) -> Result<Program, ParseError> {
        let mut globals = Vec::new();
        let mut processes = Vec::new();
        let main;
        loop {
            match &self.peek().kind {
                TokenKind::KwGlobal => {
                    self.advance();
                    globals.extend(self.var_decl_names()?);
                }
                TokenKind::KwProcess => processes.push(self.process_decl()?),
                TokenKind::KwMain => {
                    main = self.main_block()?;
                    break;
                }
                TokenKind::Eof => {
                    return Err(self.err_expected(&["`Global`", "`Process`", "`Main`"]));
                }
                _ => return Err(self.err_expected(&["`Global`", "`Process`", "`Main`"])),
            }
        }
        self.expect(TokenKind::Eof, "end of input")?;
        Ok(Program {
            globals,
            processes,
            main,
        })
    }

    /// `a, b, c : BOOL ;` — shared by globals, locals and formal lists
    /// (formals use `name: BOOL` per entry instead, see `formal_list`).
    fn var_decl_names(&mut self) -> Result<Vec<VarDecl>, ParseError> {
        let mut decls = Vec::new();
        loop {
            let (name, span) = self.ident("variable name")?;
            decls.push(VarDecl { name, span });
            match self.peek().kind {
                TokenKind::Comma => {
                    self.advance();
                }
                _ => break,
            }
        }
        self.expect(TokenKind::Colon, "`:`")?;
        self.expect(TokenKind::KwBool, "`BOOL`")?;
        self.expect(TokenKind::Semi, "`;`")?;
        Ok(decls)
    }

    fn formal_list(&mut self) -> Result<Vec<VarDecl>, ParseError> {
        let mut formals = Vec::new();
        if self.peek().kind == TokenKind::RParen {
            return Ok(formals);
        }
        loop {
            let mut group = Vec::new();
            loop {
                let (name, span) = self.ident("parameter name")?;
                group.push(VarDecl { name, span });
                if self.peek().kind == TokenKind::Comma {
                    // lookahead: `a, b: BOOL` groups share one type annotation
                    self.advance();
                } else {
                    break;
                }
                if self.peek().kind == TokenKind::Colon {
                    break;
                }
            }
            self.expect(TokenKind::Colon, "`:`")?;
            self.expect(TokenKind::KwBool, "`BOOL`")?;
            formals.extend(group);
            match self.peek().kind {
                TokenKind::Comma => {
                    self.advance();
                }
                _ => break,
            }
        }
        Ok(formals)
    }

    fn process_decl(&mut self) -> Result<ProcessDecl, ParseError> {
        let kw = self.expect(TokenKind::KwProcess, "`Process`")?;
        let (name, _) = self.ident("process name")?;
        let formals = if self.peek().kind == TokenKind::LParen {
            self.advance();
            let f = self.formal_list()?;
            self.expect(TokenKind::RParen, "`)`")?;
            f
        } else {
            Vec::new()
        };
        self.expect(TokenKind::LBrace, "`{`")?;
        let mut locals = Vec::new();
        while matches!(self.peek().kind, TokenKind::Ident(_)) {
            locals.extend(self.var_decl_names()?);
        }
        self.expect(TokenKind::KwInitial, "`Initial`")?;
        self.expect(TokenKind::Colon, "`:`")?;
        let initial = self.expr()?;
        self.expect(TokenKind::Semi, "`;`")?;
        // the normative-states clause is optional and defaults to `true`
        let normative = if self.peek().kind == TokenKind::KwNormative {
            self.advance();
            self.expect(TokenKind::Colon, "`:`")?;
            let e = self.expr()?;
            self.expect(TokenKind::Semi, "`;`")?;
            e
        } else {
            Expr::Bool(true, Span::default())
        };
        let mut actions = Vec::new();
        while self.peek().kind == TokenKind::LBracket {
            actions.push(self.action()?);
        }
        self.expect(TokenKind::RBrace, "`}`")?;
        if actions.is_empty() {
            return Err(ParseError::EmptyProcess {
                process: name,
                span: kw.span,
            });
        }
        Ok(ProcessDecl {
            name,
            formals,
            locals,
            initial,
            normative,
            actions,
            span: kw.span,
        })
    }

    fn action(&mut self) -> Result<Action, ParseError> {
        let open = self.expect(TokenKind::LBracket, "`[`")?;
        let (label, _) = self.ident("action label")?;
        self.expect(TokenKind::RBracket, "`]`")?;
        let kind = match self.peek().kind {
            TokenKind::KwFaulty => {
                self.advance();
                ActionKind::Faulty
            }
            TokenKind::KwInternal => {
                self.advance();
                ActionKind::Internal
            }
            _ => ActionKind::Normal,
        };
        let guard = self.expr()?;
        self.expect(TokenKind::Arrow, "`->`")?;
        let mut assignments = Vec::new();
        loop {
            let (target, span) = self.ident("assignment target")?;
            self.expect(TokenKind::Assign, "`=`")?;
            let value = self.expr()?;
            assignments.push(Assignment {
                target,
                value,
                span,
            });
            match self.peek().kind {
                TokenKind::Comma => {
                    self.advance();
                }
                _ => break,
            }
        }
        self.expect(TokenKind::Semi, "`;`")?;
        Ok(Action {
            label,
            kind,
            guard,
            assignments,
            span: open.span,
        })
    }

    fn main_block(&mut self) -> Result<MainBlock, ParseError> {
        let kw = self.expect(TokenKind::KwMain, "`Main`")?;
        self.expect(TokenKind::LParen, "`(`")?;
        self.expect(TokenKind::RParen, "`)`")?;
        self.expect(TokenKind::LBrace, "`{`")?;
        let mut instances = Vec::new();
        let mut runs = Vec::new();
        loop {
            match &self.peek().kind {
                TokenKind::Ident(_) => {
                    let (name, span) = self.ident("instance name")?;
                    self.expect(TokenKind::Colon, "`:`")?;
                    let (process, _) = self.ident("process name")?;
                    self.expect(TokenKind::Semi, "`;`")?;
                    instances.push(InstanceDecl {
                        name,
                        process,
                        span,
                    });
                }
                TokenKind::KwRun => {
                    let span = self.advance().span;
                    let (instance, _) = self.ident("instance name")?;
                    self.expect(TokenKind::LParen, "`(`")?;
                    let mut actuals = Vec::new();
                    if self.peek().kind != TokenKind::RParen {
                        loop {
                            let (a, _) = self.ident("actual parameter")?;
                            actuals.push(a);
                            match self.peek().kind {
                                TokenKind::Comma => {
                                    self.advance();
                                }
                                _ => break,
                            }
                        }
                    }
                    self.expect(TokenKind::RParen, "`)`")?;
                    self.expect(TokenKind::Semi, "`;`")?;
                    runs.push(RunStmt {
                        instance,
                        actuals,
                        span,
                    });
                }
                TokenKind::RBrace => {
                    self.advance();
                    break;
                }
                _ => return Err(self.err_expected(&["instance declaration", "`run`", "`}`"])),
            }
        }
        Ok(MainBlock {
            instances,
            runs,
            span: kw.span,
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and_expr()?;
        while self.peek().kind == TokenKind::OrOr {
            let span = self.advance().span;
            let rhs = self.and_expr()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.eq_expr()?;
        while self.peek().kind == TokenKind::AndAnd {
            let span = self.advance().span;
            let rhs = self.eq_expr()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn eq_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary_expr()?;
        while self.peek().kind == TokenKind::EqEq {
            let span = self.advance().span;
            let rhs = self.unary_expr()?;
            lhs = Expr::Eq(Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn unary_expr(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == TokenKind::Not {
            let span = self.advance().span;
            let inner = self.unary_expr()?;
            return Ok(Expr::Not(Box::new(inner), span));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match &self.peek().kind {
            TokenKind::KwTrue => {
                let span = self.advance().span;
                Ok(Expr::Bool(true, span))
            }
            TokenKind::KwFalse => {
                let span = self.advance().span;
                Ok(Expr::Bool(false, span))
            }
            TokenKind::Ident(name) => {
                let name = name.clone();
                let span = self.advance().span;
                Ok(Expr::Var(name, span))
            }
            TokenKind::LParen => {
                let span = self.advance().span;
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(Expr::Paren(Box::new(inner), span))
            }
            _ => Err(self.err_expected(&["`true`", "`false`", "identifier", "`(`", "`!`"])),
        }
    }
}
