//! Parser for input polynomials over named variables.
//!
//! Grammar (whitespace insensitive):
//!   expr   := ['-'] term (('+' | '-') term)*
//!   term   := factor (['*'] factor)*          -- juxtaposition multiplies
//!   factor := atom ['^' integer]
//!   atom   := rational | ident | '(' expr ')'
//!   rational := digits ['/' digits]

use super::Poly;
use crate::error::{Error, Result};
use crate::exactmath::Rat;
use num::bigint::BigInt;
use num::traits::Zero;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
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
                let numer: BigInt = src[start..i].parse().unwrap();
                // a slash binds into the literal only when followed by digits
                if i < bytes.len() && bytes[i] == b'/' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    let dstart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let denom: BigInt = src[dstart..i].parse().unwrap();
                    if denom.is_zero() {
                        return Err(err(dstart, "zero denominator"));
                    }
                    toks.push((start, Tok::Num(Rat::new(numer, denom))));
                } else {
                    toks.push((start, Tok::Num(Rat::from_integer(numer))));
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => return Err(err(i, format!("unexpected character '{}'", c))),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    vars: &'a [String],
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
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            neg = true;
        }
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                // juxtaposition: "2x", "x y", "x(x+1)"
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let p = self.here();
            match self.bump() {
                Some(Tok::Num(e)) if e.is_integer() && !e.numer().sign().eq(&num::bigint::Sign::Minus) => {
                    let exp: u32 = e
                        .numer()
                        .try_into()
                        .map_err(|_| err(p, "exponent too large"))?;
                    let mut acc = Poly::one(self.nvars());
                    for _ in 0..exp {
                        acc = &acc * &base;
                    }
                    Ok(acc)
                }
                _ => Err(err(p, "expected nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let p = self.here();
        match self.bump() {
            Some(Tok::Num(c)) => Ok(Poly::constant(self.nvars(), c)),
            Some(Tok::Ident(name)) => {
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| err(p, format!("unknown variable '{}'", name)))?;
                Ok(Poly::var(self.nvars(), i))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let q = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(err(q, "expected ')'")),
                }
            }
            Some(t) => Err(err(p, format!("unexpected token {:?}", t))),
            None => Err(err(p, "unexpected end of input")),
        }
    }
}

/// Parse a polynomial. When `vars` is None the variables are inferred in
/// order of first appearance; otherwise every identifier must be listed.
pub fn parse_poly(src: &str, vars: Option<&[String]>) -> Result<(Poly, Vec<String>)> {
    let toks = tokenize(src)?;
    let var_list: Vec<String> = match vars {
        Some(v) => v.to_vec(),
        None => {
            let mut seen = Vec::new();
            for (_, t) in &toks {
                if let Tok::Ident(name) = t {
                    if !seen.contains(name) {
                        seen.push(name.clone());
                    }
                }
            }
            seen
        }
    };
    if var_list.is_empty() {
        return Err(err(0, "polynomial must involve at least one variable"));
    }
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        vars: &var_list,
        end: src.len(),
    };
    let p = parser.expr()?;
    if parser.pos != toks.len() {
        return Err(err(parser.here(), "trailing input"));
    }
    Ok((p, var_list))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rat_i};
    use crate::polyring::XMono;

    #[test]
    fn basic_sum_of_squares() {
        let (p, vars) = parse_poly("x^2 + y^2", None).unwrap();
        assert_eq!(vars, vec!["x", "y"]);
        assert_eq!(p.coeff(&XMono(vec![2, 0]), 0), rat_i(1));
        assert_eq!(p.coeff(&XMono(vec![0, 2]), 0), rat_i(1));
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn nested_and_implicit() {
        let (p, vars) = parse_poly("x(x^2+y^3)^2 + x", None).unwrap();
        assert_eq!(vars, vec!["x", "y"]);
        // x^5 + 2x^3y^3 + xy^6 + x
        assert_eq!(p.coeff(&XMono(vec![5, 0]), 0), rat_i(1));
        assert_eq!(p.coeff(&XMono(vec![3, 3]), 0), rat_i(2));
        assert_eq!(p.coeff(&XMono(vec![1, 6]), 0), rat_i(1));
        assert_eq!(p.coeff(&XMono(vec![1, 0]), 0), rat_i(1));
    }

    #[test]
    fn rational_coefficients_and_minus() {
        let (p, _) = parse_poly("1/2 x^2 - 3y", None).unwrap();
        assert_eq!(p.coeff(&XMono(vec![2, 0]), 0), rat(1, 2));
        assert_eq!(p.coeff(&XMono(vec![0, 1]), 0), rat_i(-3));
        let (q, _) = parse_poly("-x + x", None).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn explicit_vars_catch_typos() {
        let vars = vec!["x".to_string(), "y".to_string()];
        assert!(parse_poly("x + z", Some(&vars)).is_err());
        let (p, v) = parse_poly("y^3", Some(&vars)).unwrap();
        assert_eq!(v, vars);
        assert_eq!(p.coeff(&XMono(vec![0, 3]), 0), rat_i(1));
    }

    #[test]
    fn errors_report_position() {
        match parse_poly("x + ", None) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {:?}", other.map(|x| x.1)),
        }
        assert!(parse_poly("x ^ y", None).is_err());
        assert!(parse_poly("(x", None).is_err());
        assert!(parse_poly("1/0", None).is_err());
    }
}
