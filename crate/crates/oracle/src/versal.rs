//! Versal families of the parabolic normal forms and their translation gauges.

use strata_core::Class;

use crate::error::OracleError;
use crate::poly::{Monomial, Polynomial};

const MATCH_TOL: f64 = 1e-12;

/// Number of deformation parameters besides the modulus `A`.
pub fn lambda_count(class: Class) -> usize {
    match class {
        Class::X9Plus | Class::X9Minus | Class::X9One | Class::X9Two => 8,
        Class::J10One | Class::J10Three => 9,
        Class::P8One | Class::P8Two => 7,
    }
}

fn check_modulus(class: Class, a: f64) -> Result<(), OracleError> {
    let ok = match class {
        Class::X9Plus | Class::X9Minus | Class::X9One | Class::J10Three => a.abs() < 1.0,
        Class::X9Two => a < -1.0,
        Class::J10One => a.is_finite(),
        Class::P8One => a < 1.0,
        Class::P8Two => a > 1.0,
    };
    if ok {
        Ok(())
    } else {
        Err(OracleError::Range(format!("A = {a} is outside the modulus range of {class}")))
    }
}

/// The principal part of the normal form.
pub fn normal_form(class: Class, a: f64) -> Result<Polynomial, OracleError> {
    check_modulus(class, a)?;
    let x4y4 = |s: f64| vec![([4, 0, 0], s), ([2, 2, 0], 2.0 * a * s), ([0, 4, 0], s)];
    let (nvars, terms): (usize, Vec<(Monomial, f64)>) = match class {
        Class::X9Plus | Class::X9Two => (2, x4y4(1.0)),
        Class::X9Minus => (2, x4y4(-1.0)),
        Class::X9One => (2, vec![([3, 1, 0], 1.0), ([2, 2, 0], 2.0 * a), ([1, 3, 0], 1.0)]),
        Class::J10One | Class::J10Three => {
            let s = if class == Class::J10One { 1.0 } else { -1.0 };
            (2, vec![([3, 0, 0], 1.0), ([2, 2, 0], -a), ([1, 4, 0], s), ([0, 6, 0], -a * s)])
        }
        Class::P8One | Class::P8Two => {
            (3, vec![([3, 0, 0], 1.0), ([0, 3, 0], 1.0), ([0, 0, 3], 1.0), ([1, 1, 1], -3.0 * a)])
        }
    };
    Polynomial::from_terms(nvars, terms)
}

/// Monomials multiplying `lambda_1, lambda_2, ...` in the versal family.
fn deformation_terms(class: Class) -> Vec<Vec<(Monomial, f64)>> {
    let single = |ms: &[Monomial]| ms.iter().map(|m| vec![(*m, 1.0)]).collect::<Vec<_>>();
    match class {
        Class::X9Plus | Class::X9Minus | Class::X9One | Class::X9Two => {
            single(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [2, 0, 0], [1, 1, 0], [0, 2, 0], [2, 1, 0], [1, 2, 0]])
        }
        Class::J10One | Class::J10Three => {
            let s = if class == Class::J10One { 3.0 } else { -3.0 };
            let mut out =
                single(&[[0, 0, 0], [0, 1, 0], [0, 2, 0], [0, 3, 0], [0, 4, 0], [1, 0, 0], [1, 1, 0], [1, 2, 0]]);
            out.push(vec![([2, 1, 0], 1.0), ([0, 5, 0], s)]);
            out
        }
        Class::P8One | Class::P8Two => {
            single(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1]])
        }
    }
}

/// The member of the versal family of `class` with modulus `a` and
/// deformation parameters `lambda`.
pub fn versal_polynomial(class: Class, a: f64, lambda: &[f64]) -> Result<Polynomial, OracleError> {
    let want = lambda_count(class);
    if lambda.len() != want {
        return Err(OracleError::Range(format!("{class} takes {want} deformation parameters, got {}", lambda.len())));
    }
    let base = normal_form(class, a)?;
    let extra = deformation_terms(class)
        .into_iter()
        .zip(lambda)
        .flat_map(|(ms, l)| ms.into_iter().map(move |(m, c)| (m, c * l)));
    Ok(&base + &Polynomial::from_terms(base.nvars(), extra)?)
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= MATCH_TOL
}

fn principal_mismatch(p: &Polynomial, expected: &[(Monomial, f64)], weights: [u32; 3], top: u32) -> bool {
    let weight = |m: &Monomial| (0..3).map(|i| m[i] as u32 * weights[i]).sum::<u32>();
    let above = p.terms().any(|(m, c)| weight(m) > top && *c != 0.0);
    let off = p
        .terms()
        .filter(|(m, _)| weight(m) == top)
        .any(|(m, c)| !expected.iter().any(|(e, _)| e == m) && !near(*c, 0.0));
    let wrong = expected.iter().any(|(m, c)| !near(p.coefficient(*m), *c));
    above || off || wrong
}

/// Moves `p` by a parallel translation into the gauge of the versal family:
/// no `x^3, y^3` terms for X9, no `x^2, y^2, z^2` for P8, no `x^2` for J10.
pub fn t_translate(p: &Polynomial, class: Class) -> Result<Polynomial, OracleError> {
    let wrong = || OracleError::PrincipalPart(class.to_string());
    if p.nvars() != class.nvars() as usize {
        return Err(wrong());
    }
    match class {
        Class::X9Plus | Class::X9Minus | Class::X9Two => {
            let s = p.coefficient([4, 0, 0]);
            let a2 = p.coefficient([2, 2, 0]);
            let expected = [([4, 0, 0], s), ([2, 2, 0], a2), ([0, 4, 0], s)];
            let sign_ok = if class == Class::X9Minus { s == -1.0 } else { s == 1.0 };
            if !sign_ok || principal_mismatch(p, &expected, [1, 1, 0], 4) {
                return Err(wrong());
            }
            check_modulus(class, a2 / (2.0 * s))?;
            let shift = [-p.coefficient([3, 0, 0]) / (4.0 * s), -p.coefficient([0, 3, 0]) / (4.0 * s)];
            Ok(p.shifted(&shift))
        }
        Class::X9One => Err(OracleError::Unsupported(
            "the X9^1 gauge is fixed by a translation with no closed form; translate by hand".into(),
        )),
        Class::J10One | Class::J10Three => {
            let a = -p.coefficient([2, 2, 0]);
            let s = if class == Class::J10One { 1.0 } else { -1.0 };
            let expected = [([3, 0, 0], 1.0), ([2, 2, 0], -a), ([1, 4, 0], s), ([0, 6, 0], -a * s)];
            if principal_mismatch(p, &expected, [2, 1, 0], 6) {
                return Err(wrong());
            }
            check_modulus(class, a)?;
            Ok(p.shifted(&[-p.coefficient([2, 0, 0]) / 3.0, 0.0]))
        }
        Class::P8One | Class::P8Two => {
            let a = -p.coefficient([1, 1, 1]) / 3.0;
            let expected = [([3, 0, 0], 1.0), ([0, 3, 0], 1.0), ([0, 0, 3], 1.0), ([1, 1, 1], -3.0 * a)];
            if principal_mismatch(p, &expected, [1, 1, 1], 3) {
                return Err(wrong());
            }
            check_modulus(class, a)?;
            let shift =
                [-p.coefficient([2, 0, 0]) / 3.0, -p.coefficient([0, 2, 0]) / 3.0, -p.coefficient([0, 0, 2]) / 3.0];
            Ok(p.shifted(&shift))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p8_members() {
        let p = versal_polynomial(Class::P8One, 0.0, &[0.0; 7]).unwrap();
        assert_eq!(p, Polynomial::parse("x^3+y^3+z^3", 3).unwrap());
        let mut l = [0.0; 7];
        l[0] = -1.0;
        let q = versal_polynomial(Class::P8Two, 2.0, &l).unwrap();
        assert_eq!(q, Polynomial::parse("x^3+y^3+z^3-6*x*y*z-1", 3).unwrap());
    }

    #[test]
    fn modulus_ranges() {
        assert!(versal_polynomial(Class::X9Plus, -3.0, &[0.0; 8]).is_err());
        assert!(versal_polynomial(Class::X9Two, -0.5, &[0.0; 8]).is_err());
        assert!(versal_polynomial(Class::J10Three, 1.5, &[0.0; 9]).is_err());
        assert!(versal_polynomial(Class::J10One, 1.5, &[0.0; 9]).is_ok());
        assert!(versal_polynomial(Class::P8One, 1.0, &[0.0; 7]).is_err());
        assert!(versal_polynomial(Class::P8One, 0.0, &[0.0; 6]).is_err());
    }

    #[test]
    fn j10_family_shape() {
        let mut l = [0.0; 9];
        l[8] = 1.0;
        let p = versal_polynomial(Class::J10Three, 0.5, &l).unwrap();
        let q = Polynomial::parse("(x-0.5*y^2)*(x^2-y^4) + (x^2-3*y^4)*y", 2).unwrap();
        assert!(p.distance(&q) < 1e-15);
    }

    #[test]
    fn translation_gauges() {
        let f = Polynomial::parse("x^4+x^3+y^4", 2).unwrap();
        let t = t_translate(&f, Class::X9Plus).unwrap();
        assert_eq!(t.coefficient([3, 0, 0]), 0.0);
        let g = Polynomial::parse("x^3+y^3+z^3+6*x*y*z+(x+y-2*z)^2", 3).unwrap();
        let t = t_translate(&g, Class::P8One).unwrap();
        assert!([[2, 0, 0], [0, 2, 0], [0, 0, 2]].iter().all(|m| t.coefficient(*m).abs() < 1e-12));
        let h = versal_polynomial(Class::P8Two, 2.0, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]).unwrap();
        assert_eq!(t_translate(&h, Class::P8Two).unwrap(), h);
        let j = Polynomial::parse("(x-0.5*y^2)*(x^2+y^4) + 3*x^2 + y", 2).unwrap();
        assert!(t_translate(&j, Class::J10One).unwrap().coefficient([2, 0, 0]).abs() < 1e-12);
    }

    #[test]
    fn wrong_principal_parts() {
        let f = Polynomial::parse("x^4+x*y^3+y^4", 2).unwrap();
        assert!(matches!(t_translate(&f, Class::X9Plus), Err(OracleError::PrincipalPart(_))));
        let g = Polynomial::parse("x^3+2*y^3+z^3", 3).unwrap();
        assert!(t_translate(&g, Class::P8One).is_err());
        let h = Polynomial::parse("x^3+y^3+z^3-6*x*y*z", 3).unwrap();
        assert!(t_translate(&h, Class::P8One).is_err());
        assert!(t_translate(&h, Class::P8Two).is_ok());
        assert!(matches!(t_translate(&f, Class::X9One), Err(OracleError::Unsupported(_))));
    }
}
