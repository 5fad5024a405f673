//! Sparse real polynomials in two or three variables.

use nalgebra::ComplexField;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::OracleError;

/// Exponent tuple; unused trailing slots stay 0.
pub type Monomial = [u8; 3];

/// Total degree accepted by the parser.
pub const MAX_DEGREE: u32 = 6;

const NAMES: [char; 3] = ['x', 'y', 'z'];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, f64>,
}

fn degree_of(m: &Monomial) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Result<Polynomial, OracleError> {
        if !(2..=3).contains(&nvars) {
            return Err(OracleError::Variables(nvars));
        }
        Ok(Polynomial { nvars, terms: BTreeMap::new() })
    }

    pub fn constant(nvars: usize, c: f64) -> Result<Polynomial, OracleError> {
        let mut p = Polynomial::zero(nvars)?;
        p.add_term([0; 3], c);
        Ok(p)
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Result<Polynomial, OracleError> {
        let mut p = Polynomial::zero(nvars)?;
        if i >= nvars {
            return Err(OracleError::Variables(i + 1));
        }
        let mut m = [0; 3];
        m[i] = 1;
        p.add_term(m, 1.0);
        Ok(p)
    }

    /// Builds from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, f64)>,
    ) -> Result<Polynomial, OracleError> {
        let mut p = Polynomial::zero(nvars)?;
        for (m, c) in terms {
            if m[nvars..].iter().any(|&e| e != 0) {
                return Err(OracleError::Variables(3));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Parses an expression in `x`, `y` (and `z` when `nvars == 3`).
    pub fn parse(text: &str, nvars: usize) -> Result<Polynomial, OracleError> {
        Polynomial::parse_with(text, nvars, &BTreeMap::new())
    }

    /// As [`Polynomial::parse`], resolving other identifiers from `params`.
    pub fn parse_with(text: &str, nvars: usize, params: &BTreeMap<String, f64>) -> Result<Polynomial, OracleError> {
        Polynomial::zero(nvars)?;
        crate::parse::parse(text, nvars, params)
    }

    fn add_term(&mut self, m: Monomial, c: f64) {
        let slot = self.terms.entry(m).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&m);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &f64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: Monomial) -> f64 {
        self.terms.get(&m).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(degree_of).max().unwrap_or(0)
    }

    /// The homogeneous part of degree `d`.
    pub fn homogeneous(&self, d: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| degree_of(m) == d).map(|(m, c)| (*m, *c)).collect();
        Polynomial { nvars: self.nvars, terms }
    }

    /// `Some(c)` when the polynomial is constant.
    pub fn as_constant(&self) -> Option<f64> {
        match self.terms.len() {
            0 => Some(0.0),
            1 => self.terms.get(&[0; 3]).copied(),
            _ => None,
        }
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        let mut out = Polynomial { nvars: self.nvars, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    /// Division by a constant, exact where `c / d` is.
    pub fn divided(&self, d: f64) -> Polynomial {
        let mut out = Polynomial { nvars: self.nvars, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            out.add_term(*m, c / d);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial { nvars: self.nvars, terms: BTreeMap::from([([0; 3], 1.0)]) };
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial { nvars: self.nvars, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut d = *m;
                d[i] -= 1;
                out.add_term(d, c * m[i] as f64);
            }
        }
        out
    }

    pub fn eval<T: ComplexField<RealField = f64> + Copy>(&self, at: &[T]) -> T {
        let mut sum = T::zero();
        for (m, c) in &self.terms {
            let mut t = T::from_real(*c);
            for (k, &e) in m.iter().enumerate().take(self.nvars) {
                for _ in 0..e {
                    t *= at[k];
                }
            }
            sum += t;
        }
        sum
    }

    /// `p(x_1 + s_1, ..., x_n + s_n)`.
    pub fn shifted(&self, s: &[f64]) -> Polynomial {
        let images: Vec<Polynomial> = (0..self.nvars)
            .map(|i| {
                &Polynomial::var(self.nvars, i).expect("valid")
                    + &Polynomial::constant(self.nvars, s[i]).expect("valid")
            })
            .collect();
        self.compose(&images)
    }

    /// Substitutes `images[i]` for the `i`-th variable.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial { nvars: self.nvars, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(self.nvars, *c).expect("valid");
            for (k, &e) in m.iter().enumerate().take(self.nvars) {
                t = &t * &images[k].pow(e as u32);
            }
            out = &out + &t;
        }
        out
    }

    /// Renames variable `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Polynomial {
        let mut out = Polynomial { nvars: self.nvars, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            let mut p = [0; 3];
            for i in 0..self.nvars {
                p[perm[i]] = m[i];
            }
            out.add_term(p, *c);
        }
        out
    }

    /// Largest coefficient difference against `other`.
    pub fn distance(&self, other: &Polynomial) -> f64 {
        (self - other).terms.values().fold(0.0, |a, c| a.max(c.abs()))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, *c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scale(-1.0)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial { nvars: self.nvars.max(rhs.nvars), terms: BTreeMap::new() };
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let m = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                out.add_term(m, x * y);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut order: Vec<_> = self.terms.iter().collect();
        order.sort_by(|(a, _), (b, _)| degree_of(b).cmp(&degree_of(a)).then(b.cmp(a)));
        for (k, (m, c)) in order.into_iter().enumerate() {
            let monomial: Vec<String> = (0..self.nvars)
                .filter(|&i| m[i] > 0)
                .map(|i| if m[i] == 1 { NAMES[i].to_string() } else { format!("{}^{}", NAMES[i], m[i]) })
                .collect();
            let (sign, mag) = if *c < 0.0 { ("-", -c) } else { ("+", *c) };
            match (k, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if monomial.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1.0 {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{mag}*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Gradient and Hessian polynomials, computed once.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub gradient: Vec<Polynomial>,
    pub hessian: Vec<Vec<Polynomial>>,
}

impl Derivatives {
    pub fn new(p: &Polynomial) -> Derivatives {
        let gradient: Vec<Polynomial> = (0..p.nvars).map(|i| p.derivative(i)).collect();
        let hessian = gradient.iter().map(|g| (0..p.nvars).map(|j| g.derivative(j)).collect()).collect();
        Derivatives { gradient, hessian }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let x = Polynomial::var(2, 0).unwrap();
        let y = Polynomial::var(2, 1).unwrap();
        let p = &(&x + &y).pow(2) - &(&x * &y).scale(2.0);
        assert_eq!(p.to_string(), "x^2 + y^2");
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(&[3.0, 4.0]), 25.0);
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = Polynomial::parse("x^3 - 2*x*y*z + z^2 - 1", 3).unwrap();
        let q = p.shifted(&[0.5, -1.0, 2.0]);
        let at = [0.3, 0.7, -0.2];
        assert!((q.eval(&at) - p.eval(&[0.8, -0.3, 1.8])).abs() < 1e-12);
    }

    #[test]
    fn derivatives() {
        let p = Polynomial::parse("x^4 + x^2*y - y^3", 2).unwrap();
        let d = Derivatives::new(&p);
        assert_eq!(d.gradient[0], Polynomial::parse("4*x^3 + 2*x*y", 2).unwrap());
        assert_eq!(d.hessian[0][1], Polynomial::parse("2*x", 2).unwrap());
        assert_eq!(d.hessian[1][1], Polynomial::parse("-6*y", 2).unwrap());
    }

    #[test]
    fn permutation() {
        let p = Polynomial::parse("x^2*y + 3*z", 3).unwrap();
        assert_eq!(p.permuted(&[1, 2, 0]), Polynomial::parse("y^2*z + 3*x", 3).unwrap());
    }
}
