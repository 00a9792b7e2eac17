//! Infix expression parser.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' number | number | name '(' expr ')' | name | '(' expr ')'
//! ```
//!
//! A leading minus is accepted on numeric literals only, where it becomes a
//! single negative constant node, as in `(-7.047)`.

use crate::error::{Error, Result};
use crate::genome::{Expr, Func};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        match c {
            '+' | '-' | '*' | '/' => {
                out.push((start, Tok::Op(c)));
                i += 1;
            }
            '(' => {
                out.push((start, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((start, Tok::RParen));
                i += 1;
            }
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // exponent only when digits follow, so `2*e` keeps `e` a variable
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit = &text[start..i];
                let v: f64 = lit.parse().map_err(|_| Error::Parse {
                    position: start,
                    message: format!("bad number `{lit}`"),
                })?;
                out.push((start, Tok::Num(v)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(Error::Parse {
                    position: start,
                    message: format!("unexpected character `{}`", &text[start..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let f = if *c == '+' { Func::Add } else { Func::Sub };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Func(f, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let f = if *c == '*' { Func::Mul } else { Func::Div };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::Func(f, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Num(v)) => {
                        let v = -*v;
                        self.pos += 1;
                        Ok(Expr::Const(v))
                    }
                    _ => self.err("unary minus is only supported on numeric literals"),
                }
            }
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Const(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    let Some(f) = Func::from_name(&name).filter(|f| f.arity() == 1) else {
                        self.pos -= 1;
                        return self.err(format!("unknown function `{name}`"));
                    };
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(Expr::Func(f, vec![arg]))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            self.err("expected `)`")
        }
    }
}

/// Parses an infix expression with the usual precedence: function calls,
/// then `*` `/`, then `+` `-`, all left-associative.
pub fn parse_infix(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Size of a tree whose top `genes - 1` left-spine additions are linking
/// nodes, i.e. `((g0 + g1) + g2) + ...`; those nodes are not counted.
pub fn size_with_genes(tree: &Expr, genes: usize) -> Result<usize> {
    if genes == 0 {
        return Err(Error::config("gene count must be at least 1"));
    }
    let mut node = tree;
    for linked in 0..genes - 1 {
        match node {
            Expr::Func(Func::Add, args) => node = &args[0],
            _ => {
                return Err(Error::data(format!(
                    "expression has only {} top-level `+`-joined genes, {genes} requested",
                    linked + 1
                )))
            }
        }
    }
    Ok(tree.size() - (genes - 1))
}
