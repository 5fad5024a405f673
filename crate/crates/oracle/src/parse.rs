//! Recursive-descent reader for polynomial expressions.
//!
//! Grammar: `+ - * / ^`, parentheses, decimal literals, the variables `x y z`,
//! the constant `pi`, the functions `sqrt cbrt sin cos`, and named parameters.
//! Divisors, exponents and function arguments must be constant; a non-constant
//! base needs a non-negative integer exponent.

use std::collections::BTreeMap;

use crate::error::OracleError;
use crate::poly::{Polynomial, MAX_DEGREE};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, OracleError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lit = &text[start..i];
            let v = lit.parse().map_err(|_| OracleError::Parse { pos: start, msg: format!("bad number {lit:?}") })?;
            out.push((start, Token::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Token::Ident(text[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(OracleError::Parse { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
    nvars: usize,
    params: &'a BTreeMap<String, f64>,
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, OracleError> {
        Err(OracleError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.at) {
            Some((_, Token::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, op: char) -> Result<(), OracleError> {
        if self.peek_op() == Some(op) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {op:?}"))
        }
    }

    fn constant(&self, p: &Polynomial, what: &str) -> Result<f64, OracleError> {
        p.as_constant().map_or_else(|| self.err(format!("{what} must be constant")), Ok)
    }

    fn lift(&self, c: f64) -> Polynomial {
        Polynomial::constant(self.nvars, c).expect("validated nvars")
    }

    fn expr(&mut self) -> Result<Polynomial, OracleError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.at += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, OracleError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.at += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                let out = &acc * &rhs;
                self.bound(&out)?;
                out
            } else {
                let d = self.constant(&rhs, "divisor")?;
                if d == 0.0 {
                    return self.err("division by zero");
                }
                acc.divided(d)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, OracleError> {
        match self.peek_op() {
            Some('-') => {
                self.at += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, OracleError> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.at += 1;
        let exp = self.unary()?;
        let e = self.constant(&exp, "exponent")?;
        if let Some(b) = base.as_constant() {
            return Ok(self.lift(b.powf(e)));
        }
        if e < 0.0 || e.fract() != 0.0 || e > MAX_DEGREE as f64 {
            return self.err(format!("exponent {e} of a non-constant base"));
        }
        let out = base.pow(e as u32);
        self.bound(&out)?;
        Ok(out)
    }

    fn bound(&self, p: &Polynomial) -> Result<(), OracleError> {
        if p.degree() > MAX_DEGREE {
            return Err(OracleError::Degree { degree: p.degree(), bound: MAX_DEGREE });
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<Polynomial, OracleError> {
        let Some((_, tok)) = self.tokens.get(self.at).cloned() else {
            return self.err("unexpected end of input");
        };
        self.at += 1;
        match tok {
            Token::Num(v) => Ok(self.lift(v)),
            Token::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Token::Op(c) => {
                self.at -= 1;
                self.err(format!("unexpected {c:?}"))
            }
            Token::Ident(name) => {
                if self.peek_op() == Some('(') {
                    self.at += 1;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    let a = self.constant(&arg, "function argument")?;
                    let v = match name.as_str() {
                        "sqrt" => a.sqrt(),
                        "cbrt" => a.cbrt(),
                        "sin" => a.sin(),
                        "cos" => a.cos(),
                        _ => return self.err(format!("unknown function {name:?}")),
                    };
                    return Ok(self.lift(v));
                }
                if let Some(i) = ["x", "y", "z"].iter().position(|v| *v == name) {
                    if i >= self.nvars {
                        self.at -= 1;
                        return self.err(format!("variable {name} in a {}-variable polynomial", self.nvars));
                    }
                    return Ok(Polynomial::var(self.nvars, i).expect("checked"));
                }
                if name == "pi" {
                    return Ok(self.lift(std::f64::consts::PI));
                }
                match self.params.get(&name) {
                    Some(v) => Ok(self.lift(*v)),
                    None => {
                        self.at -= 1;
                        self.err(format!("unknown identifier {name:?}"))
                    }
                }
            }
        }
    }
}

pub(crate) fn parse(text: &str, nvars: usize, params: &BTreeMap<String, f64>) -> Result<Polynomial, OracleError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, at: 0, end: text.len(), nvars, params };
    let out = p.expr()?;
    if p.at < p.tokens.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Evaluates a constant expression such as `88/49` or `3^(15/2)/256`.
pub fn parse_constant(text: &str) -> Result<f64, OracleError> {
    let p = parse(text, 2, &BTreeMap::new())?;
    p.as_constant().ok_or(OracleError::Parse { pos: 0, msg: format!("{text:?} is not constant") })
}
