//! One-parameter families and the modulus equation of the quartic forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use strata_core::Class;

use crate::critical::{critical_points, CriticalOptions};
use crate::error::OracleError;
use crate::poly::Polynomial;
use crate::versal::t_translate;

fn default_tolerance() -> f64 {
    1e-6
}

/// Polynomials `template(t)` for `t` in `range`; other identifiers of the
/// template come from `fixed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Family {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub nvars: usize,
    pub template: String,
    pub parameter: String,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    pub range: (f64, f64),
    /// Applies the translation gauge of this class to every member.
    #[serde(default)]
    pub translate: Option<Class>,
    /// Critical values closer to zero than this count as discriminant touches.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub options: CriticalOptions,
}

impl Family {
    pub fn member(&self, t: f64) -> Result<Polynomial, OracleError> {
        let mut env = self.fixed.clone();
        env.insert(self.parameter.clone(), t);
        let p = Polynomial::parse_with(&self.template, self.nvars, &env)?;
        match self.translate {
            Some(class) => t_translate(&p, class),
            None => Ok(p),
        }
    }

    /// `n` equally spaced parameters, both ends included.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let (lo, hi) = self.range;
        match n {
            0 => vec![],
            1 => vec![lo],
            _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Family, OracleError> {
        serde_json::from_str(text).map_err(|e| OracleError::Parse { pos: 0, msg: e.to_string() })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub parameter: f64,
    pub real_count: usize,
    /// Infinite when the member has no real critical point.
    pub min_abs_value: f64,
    pub suspect_missed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub family: String,
    pub samples: Vec<ScanSample>,
    pub min_abs_value: f64,
    /// Parameters at which a critical value lies within tolerance of zero.
    pub touches: Vec<f64>,
}

impl ScanReport {
    pub fn is_clear(&self) -> bool {
        self.touches.is_empty()
    }
}

/// Scans `family` at `params` with the family's own search options.
pub fn family_scan(family: &Family, params: &[f64]) -> Result<ScanReport, OracleError> {
    let opts = &family.options;
    let samples = params
        .par_iter()
        .map(|&t| {
            let r = critical_points(&family.member(t)?, opts)?;
            let min_abs_value = r.points.iter().map(|p| p.value.abs()).fold(f64::INFINITY, f64::min);
            Ok(ScanSample { parameter: t, real_count: r.real_count, min_abs_value, suspect_missed: r.suspect_missed })
        })
        .collect::<Result<Vec<_>, OracleError>>()?;
    let min_abs_value = samples.iter().map(|s| s.min_abs_value).fold(f64::INFINITY, f64::min);
    let touches = samples.iter().filter(|s| s.min_abs_value < family.tolerance).map(|s| s.parameter).collect();
    Ok(ScanReport { family: family.name.clone(), samples, min_abs_value, touches })
}

/// `(A^2 + 3)^3 / (27 (A^2 - 1)^2) - 5`.
pub fn j_residual(a: f64) -> f64 {
    let u = a * a;
    (u + 3.0).powi(3) / (27.0 * (u - 1.0).powi(2)) - 5.0
}

/// Real roots of `u^3 + b u^2 + c u + d`, ascending.
fn cubic_roots(b: f64, c: f64, d: f64) -> Vec<f64> {
    let f = |u: f64| ((u + b) * u + c) * u + d;
    let bound = 1.0 + b.abs().max(c.abs()).max(d.abs());
    let disc = b * b - 3.0 * c;
    let mut cuts = vec![-bound];
    if disc > 0.0 {
        let s = disc.sqrt();
        cuts.extend([(-b - s) / 3.0, (-b + s) / 3.0]);
    }
    cuts.push(bound);
    let mut roots = Vec::new();
    for w in cuts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        if f(lo) == 0.0 {
            roots.push(lo);
            continue;
        }
        if f(lo).signum() == f(hi).signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo).signum() == f(mid).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

/// Roots with `A < -1` of `(A^2 + 3)^3 = 135 (A^2 - 1)^2`, ascending.
pub fn solve_j_equation() -> Vec<f64> {
    // In u = A^2: u^3 - 126 u^2 + 297 u - 108 = 0.
    let mut out: Vec<f64> = cubic_roots(-126.0, 297.0, -108.0)
        .into_iter()
        .filter(|&u| u > 1.0)
        .map(|u| {
            let mut a = -u.sqrt();
            for _ in 0..3 {
                let h = 1e-7 * a.abs();
                let slope = (j_residual(a + h) - j_residual(a - h)) / (2.0 * h);
                a -= j_residual(a) / slope;
            }
            a
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_roots() {
        let roots = solve_j_equation();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 11.118).abs() < 1e-3);
        assert!((roots[1] + 1.395).abs() < 1e-3);
        assert!(roots.iter().all(|&a| j_residual(a).abs() < 1e-9));
    }

    #[test]
    fn cubic_with_three_roots() {
        let r = cubic_roots(-6.0, 11.0, -6.0);
        assert_eq!(r.len(), 3);
        for (x, e) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_shift_family() {
        let fam = Family {
            name: "lifted".into(),
            description: String::new(),
            nvars: 2,
            template: "x^4+y^4+1+0*t".into(),
            parameter: "t".into(),
            fixed: BTreeMap::new(),
            range: (0.0, 1.0),
            translate: None,
            tolerance: 1e-6,
            options: CriticalOptions::default(),
        };
        let r = family_scan(&fam, &fam.grid(4)).unwrap();
        assert!(r.is_clear());
        assert!((r.min_abs_value - 1.0).abs() < 1e-12);
    }
}
