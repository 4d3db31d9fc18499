//! Recursive-descent parser for the polynomial grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer ('/' integer)? | var | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-x1^2` is `-(x1^2)`.

use num_bigint::BigInt;

use super::{Family, Field, Poly, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let name = &text[start..i];
                let family = match name {
                    "x" => Family::X,
                    "t" => Family::T,
                    "e" => Family::E,
                    _ => {
                        return Err(Error::UnknownFamily { pos: start, name: name.to_string() })
                    }
                };
                let dstart = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let index: u32 = text[dstart..i].parse().map_err(|_| Error::Parse {
                    pos: dstart,
                    msg: format!("variable `{name}` needs a positive index"),
                })?;
                if index == 0 {
                    return Err(Error::Parse { pos: dstart, msg: "indices start at 1".into() });
                }
                out.push((start, Tok::Var(Var::new(family, index))));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Parse { pos: start, msg: format!("unexpected character `{ch}`") });
            }
        }
        i += 1;
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
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn expr<F: Field>(&mut self) -> Result<Poly<F>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<F: Field>(&mut self) -> Result<Poly<F>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Int(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    return self.err("implicit multiplication is not allowed; use `*`")
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary<F: Field>(&mut self) -> Result<Poly<F>> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power<F: Field>(&mut self) -> Result<Poly<F>> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Int(n)) => u32::try_from(n.clone()).or_else(|_| self.err("exponent too large"))?,
                _ => return self.err("expected a nonnegative integer exponent"),
            };
            self.pos += 1;
            if let Some(Tok::Caret) = self.peek() {
                return self.err("chained exponents need parentheses");
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom<F: Field>(&mut self) -> Result<Poly<F>> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut den = BigInt::from(1);
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.peek() {
                        Some(Tok::Int(d)) => den = d.clone(),
                        _ => return self.err("expected an integer denominator"),
                    }
                    self.pos += 1;
                }
                match F::from_ratio(&n, &den) {
                    Some(c) => Ok(Poly::constant(c)),
                    None => {
                        self.pos -= 1;
                        self.err("denominator vanishes in the coefficient field")
                    }
                }
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Poly::var(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(_) => self.err("expected a number, variable or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub(super) fn parse<F: Field>(text: &str) -> Result<Poly<F>> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::QPoly;

    #[test]
    fn precedence() {
        assert_eq!(QPoly::parse("-x1^2").unwrap().to_string(), "-x1^2");
        assert_eq!(QPoly::parse("2*x1^2 - -x2").unwrap().to_string(), "2*x1^2 + x2");
        assert_eq!(QPoly::parse("(1/2)^2").unwrap().to_string(), "1/4");
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(QPoly::parse("x1 x2"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(QPoly::parse("2x1"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(QPoly::parse("x1 + y2"), Err(Error::UnknownFamily { pos: 5, .. })));
        assert!(matches!(QPoly::parse("z1"), Err(Error::UnknownFamily { .. })));
        assert!(matches!(QPoly::parse("x0"), Err(Error::Parse { .. })));
        assert!(matches!(QPoly::parse("(x1"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(QPoly::parse("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(QPoly::parse(""), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(QPoly::parse("x1^2^3"), Err(Error::Parse { .. })));
    }
}
