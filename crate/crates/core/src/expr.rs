//! Expression grammar for right-hand sides.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' integer)?
//! atom  := number | identifier | '(' expr ')'
//! ```
//!
//! Numbers are integers or finite decimals and are read exactly.

use num_traits::{One, Zero};

use crate::algebra::{parse_rational, MultiPoly, RatFunc, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |i: usize, msg: String| Error::Syntax { line, column: col0 + i, message: msg };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let q = parse_rational(&text).ok_or_else(|| err(start, format!("malformed number `{text}`")))?;
                out.push(Token { tok: Tok::Num(q), col: col0 + start });
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Ident(text), col: col0 + start });
                continue;
            }
            other => return Err(err(i, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, col: col0 + start });
        i += 1;
    }
    out.push(Token { tok: Tok::End, col: col0 + chars.len() });
    Ok(out)
}

/// A sum of rate-like terms, kept apart so that reaction extraction can see
/// each term of the right-hand side as written.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TermSum {
    pub terms: Vec<RatFunc>,
}

impl TermSum {
    pub fn single(t: RatFunc) -> Self {
        let mut s = TermSum::default();
        s.push(t);
        s
    }

    fn push(&mut self, t: RatFunc) {
        if t.is_zero() {
            return;
        }
        if t.is_polynomial() && t.num().num_terms() > 1 {
            // polynomial terms are kept monomial by monomial
            for (m, c) in t.num().terms() {
                self.terms.push(RatFunc::from_poly(MultiPoly::term(c.clone(), m.clone())));
            }
        } else {
            self.terms.push(t);
        }
    }

    pub fn total(&self) -> RatFunc {
        self.terms.iter().cloned().fold(RatFunc::zero(), |a, b| a + b)
    }

    fn add(mut self, o: TermSum) -> TermSum {
        for t in o.terms {
            self.push(t);
        }
        self
    }

    fn neg(self) -> TermSum {
        TermSum { terms: self.terms.into_iter().map(|t| -t).collect() }
    }

    fn mul(&self, o: &TermSum) -> TermSum {
        let mut out = TermSum::default();
        for a in &self.terms {
            for b in &o.terms {
                out.push(a.clone() * b.clone());
            }
        }
        out
    }

    fn div(&self, o: &TermSum) -> Option<TermSum> {
        let d = o.total();
        if d.is_zero() {
            return None;
        }
        let mut out = TermSum::default();
        for a in &self.terms {
            out.push(a.clone() / d.clone());
        }
        Some(out)
    }

    /// Canonical text; parsing it back yields the same terms.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let s = t.display_with(names);
            if i == 0 {
                out.push_str(&s);
            } else if let Some(rest) = s.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&s);
            }
        }
        out
    }
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    resolve: &'a dyn Fn(&str) -> Option<usize>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn col(&self) -> usize {
        self.toks[self.pos].col
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, column: self.col(), message: msg.into() }
    }

    fn expr(&mut self) -> Result<TermSum> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TermSum> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    let col = self.col();
                    let d = self.unary()?;
                    acc = acc.div(&d).ok_or(Error::Syntax {
                        line: self.line,
                        column: col,
                        message: "division by zero".into(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<TermSum> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<TermSum> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        let e = match self.bump() {
            Tok::Num(q) if q.is_integer() && q >= Rational::zero() => q.to_integer(),
            _ => {
                return Err(Error::Syntax {
                    line: self.line,
                    column: col,
                    message: "exponent must be a non-negative integer".into(),
                })
            }
        };
        let e: u32 = e.try_into().map_err(|_| Error::Syntax {
            line: self.line,
            column: col,
            message: "exponent too large".into(),
        })?;
        let mut acc = TermSum::single(RatFunc::one());
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<TermSum> {
        let col = self.col();
        match self.bump() {
            Tok::Num(q) => Ok(TermSum::single(RatFunc::constant(q))),
            Tok::Ident(name) => match (self.resolve)(&name) {
                Some(i) => Ok(TermSum::single(RatFunc::var(i))),
                None => Err(Error::UnknownSymbol(name)),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(Error::Syntax { line: self.line, column: col, message: "unexpected end of expression".into() }),
            t => Err(Error::Syntax { line: self.line, column: col, message: format!("unexpected token {t:?}") }),
        }
    }
}

/// Parses an expression located at `line`, starting at column `col0` (1-based).
pub fn parse_terms_at(src: &str, resolve: &dyn Fn(&str) -> Option<usize>, line: usize, col0: usize) -> Result<TermSum> {
    let toks = lex(src, line, col0)?;
    let mut p = Parser { toks, pos: 0, line, resolve };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

pub fn parse_terms(src: &str, resolve: &dyn Fn(&str) -> Option<usize>) -> Result<TermSum> {
    parse_terms_at(src, resolve, 1, 1)
}

/// Parses an expression into a single rational function.
pub fn parse_expr(src: &str, names: &[String]) -> Result<RatFunc> {
    let resolve = |s: &str| names.iter().position(|n| n == s);
    Ok(parse_terms(src, &resolve)?.total())
}
