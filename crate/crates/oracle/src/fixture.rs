//! Registry of explicit polynomials with known critical data.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use strata_core::Class;

use crate::critical::{critical_points, CriticalOptions, CriticalPoint, CriticalReport};
use crate::error::OracleError;
use crate::family::Family;
use crate::parse::parse_constant;
use crate::poly::Polynomial;
use crate::versal::t_translate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    fn holds(self, v: f64, tol: f64) -> bool {
        match self {
            Sign::Negative => v < -tol,
            Sign::Positive => v > tol,
        }
    }
}

fn one() -> usize {
    1
}

/// Expected critical points; every given field must match.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    /// A constant expression.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<Sign>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default)]
    pub degenerate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<(usize, usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
    #[serde(default = "one")]
    pub count: usize,
    /// Overrides the fixture tolerance for value and coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndAt {
    pub shift: String,
    pub ind: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    #[serde(default)]
    pub real_count: Option<usize>,
    /// The listed points are all the real critical points.
    #[serde(default)]
    pub exhaustive: bool,
    pub points: Vec<PointSpec>,
    #[serde(default)]
    pub complex_count: Option<i64>,
    /// Sign of every critical value not matched by `points`.
    #[serde(default)]
    pub others: Option<Sign>,
    #[serde(default)]
    pub ind: Option<i64>,
    /// `Ind(f - shift)` at each listed shift.
    #[serde(default)]
    pub ind_at: Vec<IndAt>,
}

fn default_tolerance() -> f64 {
    1e-8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub nvars: usize,
    pub polynomial: String,
    #[serde(default)]
    pub translate: Option<Class>,
    #[serde(default)]
    pub options: CriticalOptions,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub note: Option<String>,
    pub expect: Expectation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub passed: bool,
    pub diffs: Vec<String>,
    pub report: CriticalReport,
}

macro_rules! embedded {
    ($dir:literal: $($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../../data/", $dir, "/", $name, ".json")))),*]
    };
}

const FIXTURES: &[(&str, &str)] = embedded!("fixtures":
    "ci", "ci3", "ci4", "e258", "1216", "ccd", "Pl", "Ql", "ean", "cur2", "lemx+", "lemx1", "x2a", "in9");
const FAMILIES: &[(&str, &str)] = embedded!("families": "fam1", "fam3");

fn parse_json<T: serde::de::DeserializeOwned>(name: &str, text: &str) -> Result<T, OracleError> {
    serde_json::from_str(text).map_err(|e| OracleError::Fixture { name: name.into(), msg: e.to_string() })
}

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(n, _)| *n).collect()
}

pub fn builtin_fixture(name: &str) -> Result<Fixture, OracleError> {
    let (_, text) = FIXTURES.iter().find(|(n, _)| *n == name).ok_or(OracleError::UnknownFixture(name.into()))?;
    parse_json(name, text)
}

pub fn family_names() -> Vec<&'static str> {
    FAMILIES.iter().map(|(n, _)| *n).collect()
}

pub fn builtin_family(name: &str) -> Result<Family, OracleError> {
    let (_, text) = FAMILIES.iter().find(|(n, _)| *n == name).ok_or(OracleError::UnknownFixture(name.into()))?;
    parse_json(name, text)
}

/// Reads every `*.json` fixture in `dir`, sorted by name.
pub fn load_fixture_dir(dir: &Path) -> Result<Vec<Fixture>, OracleError> {
    let io = |e: std::io::Error| OracleError::Fixture { name: dir.display().to_string(), msg: e.to_string() };
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.extension().is_some_and(|e| e == "json") {
            let text = std::fs::read_to_string(&path).map_err(io)?;
            out.push(parse_json::<Fixture>(&path.display().to_string(), &text)?);
        }
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

impl Fixture {
    pub fn polynomial(&self) -> Result<Polynomial, OracleError> {
        let p = Polynomial::parse_with(&self.polynomial, self.nvars, &BTreeMap::new())?;
        match self.translate {
            Some(class) => t_translate(&p, class),
            None => Ok(p),
        }
    }

    pub fn report(&self) -> Result<CriticalReport, OracleError> {
        critical_points(&self.polynomial()?, &self.options)
    }
}

struct Compiled {
    value: Option<f64>,
    coords: Option<Vec<f64>>,
    tol: f64,
}

fn describe(s: &PointSpec) -> String {
    let mut parts = Vec::new();
    if let Some(v) = &s.value {
        parts.push(format!("value {v}"));
    }
    if let Some(sign) = s.sign {
        parts.push(format!("{sign:?} value").to_lowercase());
    }
    if let Some(k) = s.index {
        parts.push(format!("index {k}"));
    }
    if s.degenerate {
        parts.push("degenerate".into());
    }
    if let Some(m) = s.multiplicity {
        parts.push(format!("multiplicity {m}"));
    }
    if let Some(sig) = s.signature {
        parts.push(format!("signature {sig:?}"));
    }
    if let Some(c) = &s.coords {
        parts.push(format!("at ({})", c.join(", ")));
    }
    parts.join(", ")
}

/// Newton locates a degenerate point only to about `eps^(1/3)`.
const DEGENERATE_COORD_TOL: f64 = 1e-5;

fn fits(s: &PointSpec, c: &Compiled, p: &CriticalPoint) -> bool {
    let coord_tol = if p.is_degenerate() { c.tol.max(DEGENERATE_COORD_TOL) } else { c.tol };
    c.value.is_none_or(|v| (p.value - v).abs() <= c.tol)
        && s.sign.is_none_or(|sign| sign.holds(p.value, c.tol))
        && s.index.is_none_or(|k| p.morse_index == Some(k))
        && (s.degenerate == p.is_degenerate())
        && s.multiplicity.is_none_or(|m| p.multiplicity == m)
        && s.signature.is_none_or(|sig| p.signature == sig)
        && c.coords.as_ref().is_none_or(|x| x.iter().zip(&p.coords).all(|(a, b)| (a - b).abs() <= coord_tol))
}

/// Compares the oracle's report on `f` with the fixture's expectations.
pub fn check_fixture(f: &Fixture) -> Result<FixtureOutcome, OracleError> {
    let report = f.report()?;
    let e = &f.expect;
    let mut diffs = Vec::new();
    let constant = |text: &str| {
        parse_constant(text).map_err(|err| OracleError::Fixture { name: f.name.clone(), msg: err.to_string() })
    };
    if let Some(n) = e.real_count {
        if report.real_count != n {
            diffs.push(format!("real_count: expected {n}, found {}", report.real_count));
        }
    }
    if let Some(n) = e.complex_count {
        if report.complex_count != n {
            diffs.push(format!("complex_count: expected {n}, found {}", report.complex_count));
        }
    }
    if report.suspect_missed {
        diffs.push(format!("complex_count {} is odd or negative: real points may be missing", report.complex_count));
    }
    let mut used = vec![false; report.points.len()];
    for spec in &e.points {
        let c = Compiled {
            value: spec.value.as_deref().map(constant).transpose()?,
            coords: spec.coords.as_ref().map(|cs| cs.iter().map(|t| constant(t)).collect()).transpose()?,
            tol: spec.tolerance.unwrap_or(f.tolerance),
        };
        let mut found = 0;
        for (i, p) in report.points.iter().enumerate() {
            if found < spec.count && !used[i] && fits(spec, &c, p) {
                used[i] = true;
                found += 1;
            }
        }
        if found < spec.count {
            diffs.push(format!("expected {} point(s) with {}, found {found}", spec.count, describe(spec)));
        }
    }
    for (p, _) in report.points.iter().zip(&used).filter(|(_, u)| !**u) {
        if e.exhaustive {
            diffs.push(format!("unexpected critical point with value {:.12} at {:?}", p.value, p.coords));
        } else if let Some(sign) = e.others {
            if !sign.holds(p.value, f.tolerance) {
                diffs.push(format!("value {:.12} at {:?} is not {sign:?}", p.value, p.coords).to_lowercase());
            }
        }
    }
    if let Some(k) = e.ind {
        if report.ind != Some(k) {
            diffs.push(format!("Ind: expected {k}, found {:?}", report.ind));
        }
    }
    for at in &e.ind_at {
        let got = report.minus_constant(constant(&at.shift)?).ind;
        if got != Some(at.ind) {
            diffs.push(format!("Ind(f - {}): expected {}, found {got:?}", at.shift, at.ind));
        }
    }
    Ok(FixtureOutcome { name: f.name.clone(), passed: diffs.is_empty(), diffs, report })
}

/// Runs the builtin fixture `name`.
pub fn fixture_check(name: &str) -> Result<FixtureOutcome, OracleError> {
    check_fixture(&builtin_fixture(name)?)
}
