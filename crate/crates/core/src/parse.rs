//! Polynomial expression parser.
//!
//! Grammar: integer or rational coefficients, declared variable names, the
//! operators `+ - * ^` and parentheses. Multiplication may be written
//! explicitly or by juxtaposition (`2*x*y` or `2x y`). `^` takes a
//! nonnegative integer exponent.

use crate::poly::{MPoly, PolyQ};
use crate::rat::Fraction;
use crate::ring::Rationals;
use num::bigint::BigInt;
use num::{One, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, message: message.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            '/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().unwrap();
                toks.push((start, Tok::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            other => return err(i, format!("unexpected character `{other}`")),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a [&'a str],
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn ring(&self) -> (Rationals, usize) {
        (Rationals, self.vars.len())
    }

    fn expr(&mut self) -> Result<PolyQ, ParseError> {
        let mut negate = false;
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.try_add(&t).unwrap();
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.try_sub(&t).unwrap();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyQ, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.try_mul(&f).unwrap();
                }
                // juxtaposition
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = acc.try_mul(&f).unwrap();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<PolyQ, ParseError> {
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let k = n
                        .to_u64()
                        .ok_or(ParseError { pos, message: "exponent too large".into() })?;
                    Ok(base.pow(k))
                }
                Some(Tok::Minus) => err(pos, "negative exponent"),
                _ => err(pos, "expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<PolyQ, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => {
                // optional rational literal n/d
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dpos = self.here();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            if d == BigInt::from(0) {
                                return err(dpos, "zero denominator");
                            }
                            let (ring, arity) = self.ring();
                            Ok(MPoly::constant(ring, arity, Fraction::new(n, d)))
                        }
                        _ => err(dpos, "expected an integer denominator"),
                    }
                } else {
                    let (ring, arity) = self.ring();
                    Ok(MPoly::constant(ring, arity, Fraction::new(n, BigInt::one())))
                }
            }
            Some(Tok::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => {
                    let (ring, arity) = self.ring();
                    Ok(MPoly::var(ring, arity, i))
                }
                None => err(pos, format!("unknown variable `{name}`")),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let cpos = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => err(cpos, "expected `)`"),
                }
            }
            Some(t) => err(pos, format!("unexpected token {t:?}")),
            None => err(pos, "unexpected end of input"),
        }
    }
}

/// Parse an expression over the declared variables into a rational-coefficient
/// polynomial. Round-trips with the canonical renderer.
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<PolyQ, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return err(0, "empty input");
    }
    let mut p = Parser { toks, pos: 0, vars, end: text.len() };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return err(p.here(), "trailing input");
    }
    Ok(f)
}

/// The sorted list of distinct identifiers appearing in the expression.
pub fn infer_vars(text: &str) -> Result<Vec<String>, ParseError> {
    let toks = tokenize(text)?;
    let mut vars: Vec<String> = toks
        .into_iter()
        .filter_map(|(_, t)| match t {
            Tok::Ident(s) => Some(s),
            _ => None,
        })
        .collect();
    vars.sort();
    vars.dedup();
    Ok(vars)
}

/// Parse with the variable list inferred from the expression itself.
pub fn parse_poly_auto(text: &str) -> Result<(PolyQ, Vec<String>), ParseError> {
    let vars = infer_vars(text)?;
    let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let f = parse_poly(text, &refs)?;
    Ok((f, vars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{default_vars, reduce_mod_p};
    use crate::ring::PrimeField;

    #[test]
    fn two_terms() {
        let f = parse_poly("x^2 + y^3", &["x", "y"]).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.render(), "y^3 + x^2");
    }

    #[test]
    fn square_normalizes_mod_2() {
        let f = parse_poly("(x+y)^2", &["x", "y"]).unwrap();
        let r = reduce_mod_p(&f, PrimeField::new(2).unwrap()).unwrap();
        assert_eq!(r.render(), "x^2 + y^2");
    }

    #[test]
    fn negative_exponent_rejected() {
        let e = parse_poly("x^-1", &["x"]).unwrap_err();
        assert!(e.message.contains("negative exponent"), "{e}");
        assert_eq!(e.pos, 2);
    }

    #[test]
    fn unknown_variable() {
        let e = parse_poly("x + q", &["x", "y"]).unwrap_err();
        assert!(e.message.contains("unknown variable `q`"));
    }

    #[test]
    fn rational_coefficients_and_juxtaposition() {
        let f = parse_poly("3/4 x + 5", &["x"]).unwrap();
        assert_eq!(f.render(), "3/4*x + 5");
        let g = parse_poly("2x y^2", &["x", "y"]).unwrap();
        assert_eq!(g.render(), "2*x*y^2");
    }

    #[test]
    fn roundtrip_render_parse() {
        for s in ["x^3*y + 2*y^2 + 6", "x^2 + 4", "-x + 1/2", "0", "1"] {
            let vars = default_vars(2);
            let refs: Vec<&str> = vars.iter().map(|v| v.as_str()).collect();
            let f = parse_poly(s, &refs).unwrap();
            let g = parse_poly(&f.render_with(&refs), &refs).unwrap();
            assert_eq!(f, g);
        }
    }

    #[test]
    fn auto_vars() {
        let (f, vars) = parse_poly_auto("y^2 + x").unwrap();
        assert_eq!(vars, ["x", "y"]);
        assert_eq!(f.render(), "y^2 + x");
    }
}
