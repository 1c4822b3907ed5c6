//! Hand-rolled lexer for the guarded-command language.

use super::ast::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    KwGlobal,
    KwProcess,
    KwMain,
    KwInitial,
    KwNormative,
    KwRun,
    KwFaulty,
    KwInternal,
    KwBool,
    KwTrue,
    KwFalse,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Semi,
    Comma,
    Arrow,
    Assign,
    Not,
    AndAnd,
    OrOr,
    EqEq,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::KwGlobal => "`Global`".into(),
            TokenKind::KwProcess => "`Process`".into(),
            TokenKind::KwMain => "`Main`".into(),
            TokenKind::KwInitial => "`Initial`".into(),
            TokenKind::KwNormative => "`Normative`".into(),
            TokenKind::KwRun => "`run`".into(),
            TokenKind::KwFaulty => "`faulty`".into(),
            TokenKind::KwInternal => "`internal`".into(),
            TokenKind::KwBool => "`BOOL`".into(),
            TokenKind::KwTrue => "`true`".into(),
            TokenKind::KwFalse => "`false`".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Semi => "`;`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::Assign => "`=`".into(),
            TokenKind::Not => "`!`".into(),
            TokenKind::AndAnd => "`&&`".into(),
            TokenKind::OrOr => "`||`".into(),
            TokenKind::EqEq => "`==`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = source.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(c) = c {
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    loop {
        let span = Span::new(line, col);
        let c = match chars.peek().copied() {
            Some(c) => c,
            None => {
                tokens.push(Token {
                    kind: TokenKind::Eof,
                    span,
                });
                return Ok(tokens);
            }
        };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' {
            bump!();
            match chars.peek() {
                Some('/') => {
                    while let Some(&c) = chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        bump!();
                    }
                    continue;
                }
                _ => {
                    return Err(ParseError::UnexpectedChar { ch: '/', span });
                }
            }
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    ident.push(c);
                    bump!();
                } else {
                    break;
                }
            }
            let kind = match ident.as_str() {
                "Global" => TokenKind::KwGlobal,
                "Process" => TokenKind::KwProcess,
                "Main" => TokenKind::KwMain,
                "Initial" => TokenKind::KwInitial,
                "Normative" => TokenKind::KwNormative,
                "run" => TokenKind::KwRun,
                "faulty" => TokenKind::KwFaulty,
                "internal" => TokenKind::KwInternal,
                "BOOL" => TokenKind::KwBool,
                "true" => TokenKind::KwTrue,
                "false" => TokenKind::KwFalse,
                _ => TokenKind::Ident(ident),
            };
            tokens.push(Token { kind, span });
            continue;
        }
        // punctuation
        bump!();
        let kind = match c {
            '{' => TokenKind::LBrace,
            '}' => TokenKind::RBrace,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '[' => TokenKind::LBracket,
            ']' => TokenKind::RBracket,
            ':' => TokenKind::Colon,
            ';' => TokenKind::Semi,
            ',' => TokenKind::Comma,
            '!' => TokenKind::Not,
            '-' => match chars.peek() {
                Some('>') => {
                    bump!();
                    TokenKind::Arrow
                }
                _ => return Err(ParseError::UnexpectedChar { ch: '-', span }),
            },
            '=' => match chars.peek() {
                Some('=') => {
                    bump!();
                    TokenKind::EqEq
                }
                _ => TokenKind::Assign,
            },
            '&' => match chars.peek() {
                Some('&') => {
                    bump!();
                    TokenKind::AndAnd
                }
                _ => return Err(ParseError::UnexpectedChar { ch: '&', span }),
            },
            '|' => match chars.peek() {
                Some('|') => {
                    bump!();
                    TokenKind::OrOr
                }
                _ => return Err(ParseError::UnexpectedChar { ch: '|', span }),
            },
            other => return Err(ParseError::UnexpectedChar { ch: other, span }),
        };
        tokens.push(Token { kind, span });
    }
}
