//! Builtin seed states and the seed file format.
//!
//! ```text
//! class: P8^2
//! mu: 8
//! markers: real(-,odd) real(-,odd) pair(3,4) real(+,even) ...
//! zero_position: 3
//! matrix:
//!   -2 0 1 ...
//! real_string: 1 1 1 ...   (optional)
//! note: free text
//! ```
//!
//! Lines starting with `#` are ignored. `pair(a,b)` names its two consecutive
//! cycles, one-based; pairs follow all real markers. The real string is carried
//! along but takes no part in state identity.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::SeedError;
use crate::lattice::{IntersectionMatrix, RealString, Sign};
use crate::state::{Class, Marker, MorseDatum, Parity, VirtualFunction};

/// A seed state with its provenance note.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub format_version: u32,
    #[serde(flatten)]
    pub state: VirtualFunction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_string: Option<RealString>,
    pub note: String,
}

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedStatus {
    Available,
    /// Matrix data must be supplied as a seed file.
    Placeholder,
}

pub struct BuiltinEntry {
    pub name: &'static str,
    pub class: Class,
    pub status: SeedStatus,
    pub summary: &'static str,
}

pub const BUILTINS: &[BuiltinEntry] = &[
    BuiltinEntry {
        name: "p82-mat",
        class: Class::P8Two,
        status: SeedStatus::Available,
        summary: "all-real morsification, five negative and three positive values",
    },
    BuiltinEntry {
        name: "p82-fig7-e258",
        class: Class::P8Two,
        status: SeedStatus::Available,
        summary: "x^3+y^3+z^3-12xyz+3(x^2+y^2+z^2) shifted into (4/3,4); one minimum",
    },
    BuiltinEntry {
        name: "p81-base",
        class: Class::P8One,
        status: SeedStatus::Available,
        summary: "x^3+y^3+z^3-3(x+y+z), join of three A2 bases",
    },
    BuiltinEntry {
        name: "x9-plus",
        class: Class::X9Plus,
        status: SeedStatus::Placeholder,
        summary: "no matrix shipped",
    },
    BuiltinEntry {
        name: "x9-minus",
        class: Class::X9Minus,
        status: SeedStatus::Placeholder,
        summary: "no matrix shipped",
    },
    BuiltinEntry { name: "x9-1", class: Class::X9One, status: SeedStatus::Placeholder, summary: "no matrix shipped" },
    BuiltinEntry { name: "x9-2", class: Class::X9Two, status: SeedStatus::Placeholder, summary: "no matrix shipped" },
    BuiltinEntry { name: "j10-1", class: Class::J10One, status: SeedStatus::Placeholder, summary: "no matrix shipped" },
    BuiltinEntry {
        name: "j10-3",
        class: Class::J10Three,
        status: SeedStatus::Placeholder,
        summary: "no matrix shipped",
    },
];

const MATP8_2: [[i64; 8]; 8] = [
    [-2, 0, 0, 1, 1, 1, 0, 0],
    [0, -2, 0, 1, 1, 0, 1, 0],
    [0, 0, -2, 1, 1, 0, 0, 1],
    [1, 1, 1, -2, -2, 0, 0, 0],
    [1, 1, 1, -2, -2, 0, 0, 0],
    [1, 0, 0, 0, 0, -2, 0, 0],
    [0, 1, 0, 0, 0, 0, -2, 0],
    [0, 0, 1, 0, 0, 0, 0, -2],
];

/// Minimum, three index-1 points, the isolated index-1 point, three index-2
/// points. The minimum meets every cycle; each index-2 cycle meets two of the
/// first three index-1 cycles.
const FIG7_E258: [[i64; 8]; 8] = [
    [-2, 1, 1, 1, 1, 1, 1, 1],
    [1, -2, 0, 0, 0, 0, -1, -1],
    [1, 0, -2, 0, 0, -1, 0, -1],
    [1, 0, 0, -2, 0, -1, -1, 0],
    [1, 0, 0, 0, -2, 0, 0, 0],
    [1, 0, -1, -1, 0, -2, 0, 0],
    [1, -1, 0, -1, 0, 0, -2, 0],
    [1, -1, -1, 0, 0, 0, 0, -2],
];

fn p_real(sign: Sign, odd: bool) -> Marker {
    let p = if odd { Parity::Odd } else { Parity::Even };
    Marker::Real { sign, morse: MorseDatum::Parity(p) }
}

fn p82_mat() -> SeedSpec {
    let odd = [true, true, true, false, true, false, false, false];
    let markers =
        odd.iter().enumerate().map(|(i, &o)| p_real(if i < 5 { Sign::Minus } else { Sign::Plus }, o)).collect();
    let state = VirtualFunction {
        class: Class::P8Two,
        markers,
        zero_position: 5,
        matrix: IntersectionMatrix::from_rows(MATP8_2.iter().map(|r| r.to_vec()).collect()).expect("static matrix"),
    };
    SeedSpec {
        format_version: FORMAT_VERSION,
        state: state.canonicalize(),
        real_string: None,
        note: "all-real P8^2 morsification; slots 1,2,3,5 odd".into(),
    }
}

fn p82_fig7() -> SeedSpec {
    let odd = [false, true, true, true, true, false, false, false];
    let markers =
        odd.iter().enumerate().map(|(i, &o)| p_real(if i < 5 { Sign::Minus } else { Sign::Plus }, o)).collect();
    let state = VirtualFunction {
        class: Class::P8Two,
        markers,
        zero_position: 5,
        matrix: IntersectionMatrix::from_rows(FIG7_E258.iter().map(|r| r.to_vec()).collect()).expect("static matrix"),
    };
    SeedSpec {
        format_version: FORMAT_VERSION,
        state: state.canonicalize(),
        real_string: None,
        note: "Coxeter-Dynkin graph of f-C, f = x^3+y^3+z^3-12xyz+3(x^2+y^2+z^2), C in (4/3,4)".into(),
    }
}

/// Join of three A2 bases for `x^3-3x`: cycles indexed by `(i,j,k) ∈ {0,1}^3`,
/// `0` for the minimum (value -2) and `1` for the maximum (value 2). Two cycles
/// meet with index -1 iff their labels are comparable coordinatewise.
fn p81_base() -> SeedSpec {
    let labels: Vec<[u8; 3]> = (0u8..8).map(|n| [n >> 2 & 1, n >> 1 & 1, n & 1]).collect();
    // ascending critical values: 100 (value -2) precedes 011 (value 2)
    let order = [0usize, 1, 2, 4, 3, 5, 6, 7];
    let le = |a: &[u8; 3], b: &[u8; 3]| (0..3).all(|t| a[t] <= b[t]);
    let rows = order
        .iter()
        .map(|&a| {
            order
                .iter()
                .map(|&b| {
                    if a == b {
                        -2
                    } else if le(&labels[a], &labels[b]) || le(&labels[b], &labels[a]) {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let markers = order
        .iter()
        .map(|&a| {
            let index: u8 = labels[a].iter().sum();
            let value: i64 = labels[a].iter().map(|&l| if l == 1 { 2 } else { -2 }).sum();
            p_real(if value < 0 { Sign::Minus } else { Sign::Plus }, index % 2 == 1)
        })
        .collect();
    let state = VirtualFunction {
        class: Class::P8One,
        markers,
        zero_position: 4,
        matrix: IntersectionMatrix::from_rows(rows).expect("join matrix"),
    };
    SeedSpec {
        format_version: FORMAT_VERSION,
        state: state.canonicalize(),
        real_string: None,
        note: "x^3+y^3+z^3-3(x+y+z); join of three A2 bases".into(),
    }
}

pub fn builtin_spec(name: &str) -> Result<SeedSpec, SeedError> {
    let entry = BUILTINS.iter().find(|e| e.name == name).ok_or_else(|| SeedError::Unknown(name.to_string()))?;
    match entry.name {
        "p82-mat" => Ok(p82_mat()),
        "p82-fig7-e258" => Ok(p82_fig7()),
        "p81-base" => Ok(p81_base()),
        _ => Err(SeedError::Placeholder(name.to_string())),
    }
}

pub fn builtin_seed(name: &str) -> Result<VirtualFunction, SeedError> {
    builtin_spec(name).map(|s| s.state)
}

/// The default builtin seed of a class, if one ships with data.
pub fn default_seed(class: Class) -> Option<&'static str> {
    BUILTINS.iter().find(|e| e.class == class && e.status == SeedStatus::Available).map(|e| e.name)
}

pub fn validate_seed(v: &VirtualFunction) -> Vec<crate::state::Diagnostic> {
    v.validate()
}

fn first_violation(v: &VirtualFunction) -> Result<(), SeedError> {
    match v.validate().into_iter().next() {
        None => Ok(()),
        Some(d) => Err(SeedError::Invalid { invariant: d.invariant, detail: d.detail }),
    }
}

fn sign_char(s: Sign) -> char {
    match s {
        Sign::Plus => '+',
        Sign::Minus => '-',
    }
}

/// Renders a seed in the text format. Inverse of [`parse_seed`].
pub fn render_seed(spec: &SeedSpec) -> String {
    let v = &spec.state;
    let mut s = String::new();
    writeln!(s, "class: {}", v.class).unwrap();
    writeln!(s, "mu: {}", v.mu()).unwrap();
    let offs = v.cycle_offsets();
    let tokens: Vec<String> = v
        .markers
        .iter()
        .zip(&offs)
        .map(|(m, &c)| match *m {
            Marker::Real { sign, morse } => format!("real({},{})", sign_char(sign), morse),
            Marker::Pair => format!("pair({},{})", c + 1, c + 2),
        })
        .collect();
    writeln!(s, "markers: {}", tokens.join(" ")).unwrap();
    writeln!(s, "zero_position: {}", v.zero_position).unwrap();
    writeln!(s, "matrix:").unwrap();
    for row in v.matrix.rows() {
        let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(s, "  {}", r.join(" ")).unwrap();
    }
    if let Some(rs) = &spec.real_string {
        let r: Vec<String> = rs.0.iter().map(|x| x.to_string()).collect();
        writeln!(s, "real_string: {}", r.join(" ")).unwrap();
    }
    writeln!(s, "note: {}", spec.note).unwrap();
    s
}

fn perr(line: usize, field: &str, message: impl Into<String>) -> SeedError {
    SeedError::Parse { line, field: field.to_string(), message: message.into() }
}

fn parse_marker(tok: &str, line: usize) -> Result<(Marker, Option<(usize, usize)>), SeedError> {
    let bad = || perr(line, "markers", format!("bad token `{tok}`"));
    let (head, rest) = tok.split_once('(').ok_or_else(bad)?;
    let body = rest.strip_suffix(')').ok_or_else(bad)?;
    let (a, b) = body.split_once(',').ok_or_else(bad)?;
    match head {
        "real" => {
            let sign = match a.trim() {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                _ => return Err(bad()),
            };
            let morse = match b.trim() {
                "odd" => MorseDatum::Parity(Parity::Odd),
                "even" => MorseDatum::Parity(Parity::Even),
                k => MorseDatum::Index(k.parse().map_err(|_| bad())?),
            };
            Ok((Marker::Real { sign, morse }, None))
        }
        "pair" => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            Ok((Marker::Pair, Some((a, b))))
        }
        _ => Err(bad()),
    }
}

fn parse_ints(s: &str, line: usize, field: &str) -> Result<Vec<i64>, SeedError> {
    s.split_whitespace().map(|t| t.parse().map_err(|_| perr(line, field, format!("not an integer: `{t}`")))).collect()
}

/// Parses the text format without canonicalizing.
pub fn parse_seed(text: &str) -> Result<SeedSpec, SeedError> {
    let mut class = None;
    let mut mu = None;
    let mut markers = None;
    let mut zero = None;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut in_matrix = false;
    let mut real_string = None;
    let mut note = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        if in_matrix && raw.starts_with(char::is_whitespace) {
            rows.push(parse_ints(raw, ln, "matrix")?);
            continue;
        }
        in_matrix = false;
        let (key, val) = raw.split_once(':').ok_or_else(|| perr(ln, "?", "expected `field: value`"))?;
        let val = val.trim();
        match key.trim() {
            "class" => class = Some(val.parse::<Class>().map_err(|e| perr(ln, "class", e))?),
            "mu" => mu = Some(val.parse::<usize>().map_err(|_| perr(ln, "mu", "not a count"))?),
            "markers" => {
                let mut ms = Vec::new();
                let mut next_cycle = 1;
                for tok in val.split_whitespace() {
                    let (m, pair) = parse_marker(tok, ln)?;
                    if let Some((a, b)) = pair {
                        if (a, b) != (next_cycle, next_cycle + 1) {
                            return Err(perr(
                                ln,
                                "markers",
                                format!("pair({a},{b}) must name cycles {next_cycle},{}", next_cycle + 1),
                            ));
                        }
                    }
                    next_cycle += m.width();
                    ms.push(m);
                }
                markers = Some(ms);
            }
            "zero_position" => zero = Some(val.parse::<usize>().map_err(|_| perr(ln, "zero_position", "not a count"))?),
            "matrix" => {
                in_matrix = true;
                if !val.is_empty() {
                    return Err(perr(ln, "matrix", "rows go on the following indented lines"));
                }
            }
            "real_string" => real_string = Some(RealString(parse_ints(val, ln, "real_string")?)),
            "note" => note = val.to_string(),
            other => return Err(perr(ln, other, "unknown field")),
        }
    }
    let end = text.lines().count();
    let class = class.ok_or_else(|| perr(end, "class", "missing"))?;
    let mu = mu.ok_or_else(|| perr(end, "mu", "missing"))?;
    let markers = markers.ok_or_else(|| perr(end, "markers", "missing"))?;
    let zero_position = zero.ok_or_else(|| perr(end, "zero_position", "missing"))?;
    if let Some(rs) = &real_string {
        if rs.len() != mu {
            return Err(perr(end, "real_string", format!("{} entries for mu = {mu}", rs.len())));
        }
    }
    if rows.len() != mu {
        return Err(perr(end, "matrix", format!("{} rows for mu = {mu}", rows.len())));
    }
    let matrix = IntersectionMatrix::from_rows_unchecked(rows).map_err(|e| perr(end, "matrix", e.to_string()))?;
    if mu != class.mu() {
        return Err(SeedError::Invalid {
            invariant: "mu",
            detail: format!("class {class} needs mu={}, file declares {mu}", class.mu()),
        });
    }
    Ok(SeedSpec {
        format_version: FORMAT_VERSION,
        state: VirtualFunction { class, markers, zero_position, matrix },
        real_string,
        note,
    })
}

/// Parses, validates and canonicalizes.
pub fn load_seed_str(text: &str) -> Result<SeedSpec, SeedError> {
    let mut spec = parse_seed(text)?;
    first_violation(&spec.state)?;
    spec.state = spec.state.canonicalize();
    Ok(spec)
}

/// Loads a seed from the text format, or its JSON twin if the file starts with `{`.
pub fn load_seed(path: &Path) -> Result<SeedSpec, SeedError> {
    let text = std::fs::read_to_string(path).map_err(|e| SeedError::Io(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let mut spec = from_json(&text)?;
        first_violation(&spec.state)?;
        spec.state = spec.state.canonicalize();
        Ok(spec)
    } else {
        load_seed_str(&text)
    }
}

pub fn save_seed(spec: &SeedSpec, path: &Path) -> Result<(), SeedError> {
    std::fs::write(path, render_seed(spec)).map_err(|e| SeedError::Io(format!("{}: {e}", path.display())))
}

pub fn to_json(spec: &SeedSpec) -> String {
    serde_json::to_string_pretty(spec).expect("serializable")
}

pub fn from_json(text: &str) -> Result<SeedSpec, SeedError> {
    let spec: SeedSpec = serde_json::from_str(text).map_err(|e| SeedError::Json(e.to_string()))?;
    if spec.state.matrix.mu() != spec.state.class.mu() {
        return Err(SeedError::Invalid {
            invariant: "mu",
            detail: format!("class {} needs mu={}", spec.state.class, spec.state.class.mu()),
        });
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice;

    #[test]
    fn p82_mat_shape() {
        let v = builtin_seed("p82-mat").unwrap();
        assert_eq!(v.matrix.get(3, 4), -2);
        assert_eq!(v.negative_count(), 5);
        assert_eq!(v.positive_count(), 3);
        assert_eq!(v.ind(), -3);
        assert!(v.is_canonical());
        assert!(validate_seed(&v).is_empty());
    }

    #[test]
    fn fig7_seed_has_one_extremum_below_zero() {
        let v = builtin_seed("p82-fig7-e258").unwrap();
        assert!(validate_seed(&v).is_empty(), "{:?}", v.validate());
        assert_eq!(v.negative_count(), 5);
        assert_eq!(v.ind(), -3);
        assert!((1..8).all(|j| v.matrix.get(0, j).abs() == 1));
        assert!((0..8).all(|i| (0..8).all(|j| i == j || v.matrix.get(i, j).abs() <= 1)));
    }

    #[test]
    fn p81_base_shape() {
        let v = builtin_seed("p81-base").unwrap();
        assert!(validate_seed(&v).is_empty(), "{:?}", v.validate());
        assert_eq!(v.negative_count(), 4);
        assert_eq!(v.ind(), 1 - 3);
        assert_eq!(v.euler(), 0);
        let inv = lattice::form_invariants(&v.matrix);
        assert_eq!(inv.rank, 6);
    }

    #[test]
    fn placeholders_and_unknown() {
        assert!(matches!(builtin_seed("x9-2"), Err(SeedError::Placeholder(_))));
        assert!(matches!(builtin_seed("nope"), Err(SeedError::Unknown(_))));
        assert_eq!(default_seed(Class::P8Two), Some("p82-mat"));
        assert_eq!(default_seed(Class::J10One), None);
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        for name in ["p82-mat", "p82-fig7-e258", "p81-base"] {
            let spec = builtin_spec(name).unwrap();
            let text = render_seed(&spec);
            let back = load_seed_str(&text).unwrap();
            assert_eq!(back, spec);
            assert_eq!(render_seed(&back), text);
        }
    }

    #[test]
    fn json_round_trip() {
        let spec = builtin_spec("p82-mat").unwrap();
        assert_eq!(from_json(&to_json(&spec)).unwrap(), spec);
    }
}
