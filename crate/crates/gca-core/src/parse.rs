//! Poly-string parser: `+ - * ^ /`, parentheses, rational literals, identifiers and
//! `ddr(name)` atoms. `i` is the imaginary unit when the algebra is over `Q(i)`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{Algebra, Elem};
use crate::coeff::{Coeff, Field};
use crate::error::{GcaError, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(s: &str) -> Result<Vec<Lexed>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push(Lexed { tok: t, line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Lexed { tok: Tok::Num(text.parse().expect("digits")), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Lexed { tok: Tok::Ident(text), line: l0, col: c0 });
            continue;
        }
        return Err(GcaError::Parse { line: l0, col: c0, msg: format!("unexpected character `{c}`") });
    }
    Ok(out)
}

struct Parser<'a> {
    alg: &'a Arc<Algebra>,
    toks: Vec<Lexed>,
    pos: usize,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|l| (l.line, l.col)).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(GcaError::Parse { line, col, msg: msg.into() })
    }

    fn err_at<T>(&self, at: (usize, usize), msg: impl Into<String>) -> Result<T> {
        Err(GcaError::Parse { line: at.0, col: at.1, msg: msg.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Elem> {
        let mut acc = if self.eat(&Tok::Minus) {
            -self.term()?
        } else {
            self.eat(&Tok::Plus);
            self.term()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Elem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                let at = self.here();
                let den = self.unary()?;
                acc = match acc.try_div(&den) {
                    Ok(q) => q,
                    Err(_) => {
                        return self.err_at(at, format!("cannot divide by `{den}`: not a constant or product of declared units"))
                    }
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Elem> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Elem> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Elem> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Elem::constant(self.alg, Coeff::from_big(n)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "ddr" {
                    if !self.eat(&Tok::LParen) {
                        return self.err("expected `(` after ddr");
                    }
                    let inner = match self.peek().cloned() {
                        Some(Tok::Ident(n)) => n,
                        _ => return self.err("expected a generator name inside ddr(..)"),
                    };
                    self.pos += 1;
                    if !self.eat(&Tok::RParen) {
                        return self.err("expected `)`");
                    }
                    let full = format!("ddr({inner})");
                    return Elem::gen(self.alg, &full).or_else(|_| self.err_at(at, format!("unknown generator `{full}`")));
                }
                if name == "i" && self.alg.field() == Field::Gaussian {
                    return Ok(Elem::constant(self.alg, Coeff::i()));
                }
                Elem::gen(self.alg, &name).or_else(|_| self.err_at(at, format!("unknown generator `{name}`")))
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_elem(alg: &Arc<Algebra>, s: &str) -> Result<Elem> {
    let toks = lex(s)?;
    let end = {
        let lines: Vec<&str> = s.split('\n').collect();
        (lines.len(), lines.last().map(|l| l.chars().count() + 1).unwrap_or(1))
    };
    if toks.is_empty() {
        return Err(GcaError::Parse { line: end.0, col: end.1, msg: "empty expression".into() });
    }
    let mut p = Parser { alg, toks, pos: 0, end };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
