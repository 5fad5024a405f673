//! Virtual functions: the vertices of the formal graph.
//!
//! Vanishing cycles live in the zero level and are defined by paths from 0:
//! a real value is reached along an arc in the upper half-plane, passing above
//! the real values nearer to zero; a non-real value in the upper half-plane
//! along a path in that half-plane. The partner value of a pair is reached
//! along the conjugate path, so its cycle is the conjugate cycle.
//!
//! Cycles are numbered by marker order: real values ascending, then pairs in
//! the counterclockwise order of their paths at 0, each pair contributing its
//! upper cycle and then its lower one.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::str::FromStr;

use crate::error::StateError;
use crate::lattice::{self, Cycle, IntersectionMatrix, MatrixViolation, Sign};

/// Real forms of the parabolic classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Class {
    #[serde(rename = "X9+")]
    X9Plus,
    #[serde(rename = "X9-")]
    X9Minus,
    #[serde(rename = "X9^1")]
    X9One,
    #[serde(rename = "X9^2")]
    X9Two,
    #[serde(rename = "J10^1")]
    J10One,
    #[serde(rename = "J10^3")]
    J10Three,
    #[serde(rename = "P8^1")]
    P8One,
    #[serde(rename = "P8^2")]
    P8Two,
}

impl Class {
    pub const ALL: [Class; 8] = [
        Class::X9Plus,
        Class::X9Minus,
        Class::X9One,
        Class::X9Two,
        Class::J10One,
        Class::J10Three,
        Class::P8One,
        Class::P8Two,
    ];

    /// Milnor number.
    pub fn mu(self) -> usize {
        match self {
            Class::X9Plus | Class::X9Minus | Class::X9One | Class::X9Two => 9,
            Class::J10One | Class::J10Three => 10,
            Class::P8One | Class::P8Two => 8,
        }
    }

    /// Number of variables of the model functions (X9/J10 in the plane, P8 in space).
    pub fn nvars(self) -> u8 {
        if self.is_p8() {
            3
        } else {
            2
        }
    }

    pub fn is_p8(self) -> bool {
        matches!(self, Class::P8One | Class::P8Two)
    }

    /// P8 virtual data only record parities of Morse indices.
    pub fn parity_only(self) -> bool {
        self.is_p8()
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::X9Plus => "X9+",
            Class::X9Minus => "X9-",
            Class::X9One => "X9^1",
            Class::X9Two => "X9^2",
            Class::J10One => "J10^1",
            Class::J10Three => "J10^3",
            Class::P8One => "P8^1",
            Class::P8Two => "P8^2",
        }
    }

    /// Identifier used on the command line and in CSV output.
    pub fn slug(self) -> &'static str {
        match self {
            Class::X9Plus => "x9_plus",
            Class::X9Minus => "x9_minus",
            Class::X9One => "x9_1",
            Class::X9Two => "x9_2",
            Class::J10One => "j10_1",
            Class::J10Three => "j10_3",
            Class::P8One => "p8_1",
            Class::P8Two => "p8_2",
        }
    }

    fn code(self) -> u8 {
        Class::ALL.iter().position(|&c| c == self).unwrap() as u8
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Class {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Class::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(t) || c.slug().eq_ignore_ascii_case(t))
            .ok_or_else(|| format!("unknown class `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Morse data of one real critical point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorseDatum {
    Parity(Parity),
    Index(u8),
}

impl MorseDatum {
    pub fn parity(self) -> Parity {
        match self {
            MorseDatum::Parity(p) => p,
            MorseDatum::Index(k) if k % 2 == 0 => Parity::Even,
            MorseDatum::Index(_) => Parity::Odd,
        }
    }

    pub fn is_odd(self) -> bool {
        self.parity() == Parity::Odd
    }

    /// Datum of the same point for `-f` in `nvars` variables.
    pub fn negated(self, nvars: u8) -> Self {
        match self {
            MorseDatum::Parity(p) if nvars % 2 == 1 => MorseDatum::Parity(p.flip()),
            MorseDatum::Parity(p) => MorseDatum::Parity(p),
            MorseDatum::Index(k) => MorseDatum::Index(nvars.saturating_sub(k)),
        }
    }

    /// Data of a newborn pair as `(lower value, upper value)`; the point with
    /// the larger value has the larger index.
    pub fn birth_candidates(class: Class) -> Vec<(Self, Self)> {
        if class.parity_only() {
            vec![
                (MorseDatum::Parity(Parity::Odd), MorseDatum::Parity(Parity::Even)),
                (MorseDatum::Parity(Parity::Even), MorseDatum::Parity(Parity::Odd)),
            ]
        } else {
            (0..class.nvars()).map(|k| (MorseDatum::Index(k), MorseDatum::Index(k + 1))).collect()
        }
    }

    /// Whether two colliding points with these data can cancel.
    pub fn cancels(lower: Self, upper: Self) -> bool {
        match (lower, upper) {
            (MorseDatum::Index(a), MorseDatum::Index(b)) => b == a + 1,
            (a, b) => a.parity() != b.parity(),
        }
    }

    fn code(self) -> u8 {
        match self {
            MorseDatum::Parity(Parity::Even) => 0,
            MorseDatum::Parity(Parity::Odd) => 1,
            MorseDatum::Index(k) => 2 + k,
        }
    }
}

impl fmt::Display for MorseDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorseDatum::Parity(Parity::Even) => f.write_str("even"),
            MorseDatum::Parity(Parity::Odd) => f.write_str("odd"),
            MorseDatum::Index(k) => write!(f, "{k}"),
        }
    }
}

/// A real critical value or a conjugate pair of non-real ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Marker {
    Real { sign: Sign, morse: MorseDatum },
    Pair,
}

impl Marker {
    pub fn width(self) -> usize {
        match self {
            Marker::Real { .. } => 1,
            Marker::Pair => 2,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Marker::Real { .. })
    }
}

/// A violated invariant of a virtual function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub invariant: &'static str,
    pub detail: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VirtualFunction {
    pub class: Class,
    /// Real markers by ascending value, then pairs in path order.
    pub markers: Vec<Marker>,
    /// Number of negative real values.
    pub zero_position: usize,
    pub matrix: IntersectionMatrix,
}

impl VirtualFunction {
    pub fn mu(&self) -> usize {
        self.matrix.mu()
    }

    /// First cycle of each marker.
    pub fn cycle_offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.markers.len());
        let mut c = 0;
        for m in &self.markers {
            out.push(c);
            c += m.width();
        }
        out
    }

    pub fn real_count(&self) -> usize {
        self.markers.iter().filter(|m| m.is_real()).count()
    }

    pub fn pair_count(&self) -> usize {
        self.markers.len() - self.real_count()
    }

    /// Cycle of the upper value of pair `i`; its partner follows it.
    pub fn upper(&self, i: usize) -> usize {
        self.real_count() + 2 * i
    }

    pub fn lower(&self, i: usize) -> usize {
        self.upper(i) + 1
    }

    /// Real slots as `(marker position, cycle, sign, datum)`.
    pub fn real_slots(&self) -> impl Iterator<Item = (usize, usize, Sign, MorseDatum)> + '_ {
        self.markers.iter().zip(self.cycle_offsets()).enumerate().filter_map(|(p, (m, c))| match *m {
            Marker::Real { sign, morse } => Some((p, c, sign, morse)),
            Marker::Pair => None,
        })
    }

    pub fn morse(&self, slot: usize) -> MorseDatum {
        match self.markers[slot] {
            Marker::Real { morse, .. } => morse,
            Marker::Pair => panic!("slot {slot} is a pair"),
        }
    }

    pub fn negative_count(&self) -> usize {
        self.zero_position.min(self.real_count())
    }

    pub fn positive_count(&self) -> usize {
        self.real_count() - self.negative_count()
    }

    /// Even-index minus odd-index count over real critical points with negative value.
    pub fn ind(&self) -> i64 {
        self.real_slots().filter(|s| s.2 == Sign::Minus).map(|s| if s.3.is_odd() { -1 } else { 1 }).sum()
    }

    /// Alternating count over all real critical points.
    pub fn euler(&self) -> i64 {
        self.real_slots().map(|s| if s.3.is_odd() { -1 } else { 1 }).sum()
    }

    /// Images of the basis cycles under complex conjugation of the zero level.
    ///
    /// A real cycle goes to `ε` times the cycle of the mirrored path, which passes
    /// below the real values nearer to zero: `ε = (-1)^(k+1)` for positive values
    /// and `(-1)^k` for negative ones. The two cycles of a pair are exchanged.
    pub fn conjugation(&self) -> Vec<Cycle> {
        let mu = self.mu();
        let z = self.zero_position;
        let n = self.real_count();
        let mut out = Vec::with_capacity(mu);
        for c in 0..n {
            let odd = self.morse(c).is_odd();
            let mut v = lattice::unit(mu, c);
            let eps = if c >= z {
                for d in (z..c).rev() {
                    lattice::reflect_in_basis(&self.matrix, d, &mut v);
                }
                if odd {
                    1
                } else {
                    -1
                }
            } else {
                for d in (c + 1)..z {
                    lattice::reflect_in_basis(&self.matrix, d, &mut v);
                }
                if odd {
                    -1
                } else {
                    1
                }
            };
            if eps < 0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(v);
        }
        for i in 0..self.pair_count() {
            out.push(lattice::unit(mu, self.lower(i)));
            out.push(lattice::unit(mu, self.upper(i)));
        }
        out
    }

    /// Every violated invariant; empty means valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut push = |invariant, detail: String| out.push(Diagnostic { invariant, detail });
        let width: usize = self.markers.iter().map(|m| m.width()).sum();
        if self.matrix.mu() != self.class.mu() {
            push("mu", format!("class {} needs mu={}, matrix has {}", self.class, self.class.mu(), self.matrix.mu()));
        }
        if width != self.matrix.mu() {
            push("count", format!("reals + 2*pairs = {width} but mu = {}", self.matrix.mu()));
        }
        let structural = self.matrix.violations();
        for v in &structural {
            match *v {
                MatrixViolation::Diagonal { i, value } => {
                    push("diagonal", format!("entry ({0},{0}) is {value}, expected -2", i + 1))
                }
                MatrixViolation::Asymmetric { i, j } => {
                    push("symmetric", format!("entry ({},{}) differs from its transpose", i + 1, j + 1))
                }
            }
        }
        let reals = self.real_count();
        if self.zero_position > reals {
            push("zero_position", format!("{} exceeds the number of real values {reals}", self.zero_position));
        }
        if let Some(p) = self.markers.iter().position(|m| !m.is_real()) {
            if self.markers[p..].iter().any(|m| m.is_real()) {
                push("layout", format!("real marker after the pair at position {}", p + 1));
            }
        }
        for (p, m) in self.markers.iter().enumerate() {
            if let Marker::Real { sign, morse } = *m {
                let expected = if p < self.zero_position { Sign::Minus } else { Sign::Plus };
                if sign != expected {
                    push("ordering", format!("real slot {} has sign {sign:?} on the {expected:?} side of zero", p + 1));
                }
                match morse {
                    MorseDatum::Parity(_) if !self.class.parity_only() => {
                        push("morse", format!("slot {}: class {} needs full Morse indices", p + 1, self.class))
                    }
                    MorseDatum::Index(_) if self.class.parity_only() => {
                        push("morse", format!("slot {}: class {} records parities only", p + 1, self.class))
                    }
                    MorseDatum::Index(k) if k > self.class.nvars() => {
                        push("morse", format!("slot {}: index {k} exceeds {} variables", p + 1, self.class.nvars()))
                    }
                    _ => {}
                }
            }
        }
        let shaped = width == self.matrix.mu() && structural.is_empty();
        let laid_out =
            self.zero_position <= reals && self.markers.iter().skip_while(|m| m.is_real()).all(|m| !m.is_real());
        if shaped && laid_out {
            if let Some(detail) = self.conjugation_defect() {
                push("conjugation", detail);
            }
        }
        out
    }

    /// Why the conjugation computed from the data is not an isometric involution.
    fn conjugation_defect(&self) -> Option<String> {
        let iota = self.conjugation();
        let mu = self.mu();
        for a in 0..mu {
            for b in a..mu {
                if lattice::pairing(&self.matrix, &iota[a], &iota[b]) != self.matrix.get(a, b) {
                    return Some(format!("conjugation does not preserve entry ({},{})", a + 1, b + 1));
                }
            }
            let twice = apply(&iota, &iota[a]);
            if twice != lattice::unit(mu, a) {
                return Some(format!("conjugation is not an involution on cycle {}", a + 1));
            }
        }
        None
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ensure_valid(&self) -> Result<(), StateError> {
        match self.validate().first() {
            None => Ok(()),
            Some(d) => Err(StateError::Invalid(d.to_string())),
        }
    }

    /// Orientation units: each real cycle alone, each pair as a whole
    /// (the lower cycle of a pair is the conjugate of the upper one).
    fn units(&self) -> Vec<(usize, usize)> {
        let n = self.real_count();
        (0..n).map(|c| (c, 1)).chain((0..self.pair_count()).map(|i| (n + 2 * i, 2))).collect()
    }

    /// Orientation-normalized representative.
    ///
    /// Units are oriented one at a time: the lowest unit with a nonzero entry
    /// against an oriented cycle makes its first such entry positive; if there is
    /// none, the lowest remaining unit keeps its orientation. Reorienting such a
    /// root together with everything oriented from it leaves the data unchanged.
    pub fn canonicalize(&self) -> VirtualFunction {
        let mu = self.mu();
        let m = &self.matrix;
        let units = self.units();
        let mut done = vec![false; units.len()];
        let mut neg = vec![false; mu];
        let mut is_fixed = vec![false; mu];
        for _ in 0..units.len() {
            let hit = units.iter().enumerate().filter(|(u, _)| !done[*u]).find_map(|(u, &(c0, w))| {
                (c0..c0 + w).find_map(|c| (0..mu).find(|&f| is_fixed[f] && m.get(c, f) != 0).map(|f| (u, c, f)))
            });
            let (u, flip) = match hit {
                Some((u, c, f)) => {
                    let e = if neg[f] { -m.get(c, f) } else { m.get(c, f) };
                    (u, e < 0)
                }
                None => (done.iter().position(|d| !d).expect("unit left"), false),
            };
            let (c0, w) = units[u];
            for c in c0..c0 + w {
                neg[c] = flip;
                is_fixed[c] = true;
            }
            done[u] = true;
        }
        if !neg.iter().any(|&b| b) {
            return self.clone();
        }
        VirtualFunction { matrix: lattice::orient(m, &neg), ..self.clone() }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize() == *self
    }

    /// Byte encoding of a canonical state; equal states have equal keys.
    pub fn state_key(&self) -> Result<StateKey, StateError> {
        if !self.is_canonical() {
            return Err(StateError::NotCanonical);
        }
        Ok(self.key_unchecked())
    }

    pub(crate) fn key_unchecked(&self) -> StateKey {
        let mu = self.mu();
        let mut b = Vec::with_capacity(8 + self.markers.len() + mu * mu);
        b.push(self.class.code());
        push_varint(&mut b, mu as i64);
        push_varint(&mut b, self.markers.len() as i64);
        for m in &self.markers {
            match *m {
                Marker::Pair => b.push(0xff),
                Marker::Real { sign, morse } => {
                    let s = if sign == Sign::Minus { 0x80 } else { 0 };
                    b.push(s | morse.code());
                }
            }
        }
        push_varint(&mut b, self.zero_position as i64);
        for i in 0..mu {
            for j in (i + 1)..mu {
                push_varint(&mut b, self.matrix.get(i, j));
            }
        }
        StateKey(b.into_boxed_slice())
    }

    /// The state of `-f∘L` for a real linear map `L` preserving the class.
    ///
    /// Values change sign, so the real order reverses and Morse indices
    /// complement. The new canonical paths are the conjugates of the old ones,
    /// whose cycles are the conjugates of the old cycles; conjugation is an
    /// isometry, so only the order changes: pairs reverse, keeping upper first.
    /// In two variables `k ↦ 2-k` keeps the parity, so every real cycle changes
    /// its conjugation sign; the lower cycles of the pairs are negated to match.
    fn mirrored(&self) -> VirtualFunction {
        let n = self.real_count();
        let p = self.pair_count();
        let nvars = self.class.nvars();
        let mut markers: Vec<Marker> = self.markers[..n]
            .iter()
            .rev()
            .map(|m| match *m {
                Marker::Real { sign, morse } => Marker::Real { sign: sign.flip(), morse: morse.negated(nvars) },
                Marker::Pair => Marker::Pair,
            })
            .collect();
        markers.extend(std::iter::repeat_n(Marker::Pair, p));
        let mut perm: Vec<usize> = (0..n).rev().collect();
        for i in (0..p).rev() {
            perm.push(n + 2 * i);
            perm.push(n + 2 * i + 1);
        }
        let mut matrix = IntersectionMatrix::from_rows_unchecked(self.matrix.submatrix(&perm)).expect("square");
        if nvars == 2 {
            let lower: Vec<bool> = (0..self.mu()).map(|c| c >= n && (c - n) % 2 == 1).collect();
            matrix = lattice::orient(&matrix, &lower);
        }
        VirtualFunction { class: self.class, markers, zero_position: n - self.zero_position, matrix }.canonicalize()
    }

    /// Data-level action of `f(x,y,z) ↦ -f(-x,-y,-z)` on P8 states.
    pub fn involution_minus(&self) -> Result<VirtualFunction, StateError> {
        if !self.class.is_p8() {
            return Err(StateError::WrongClass { expected: "P8", got: self.class.to_string() });
        }
        Ok(self.mirrored())
    }

    /// Data-level action of `f(x,y) ↦ -f((x+y)/√2, (x-y)/√2)` on X9^2 states.
    pub fn involution_ze(&self) -> Result<VirtualFunction, StateError> {
        if self.class != Class::X9Two {
            return Err(StateError::WrongClass { expected: "X9^2", got: self.class.to_string() });
        }
        Ok(self.mirrored())
    }

    /// Data-level action of `f(x,y) ↦ -f(x,-y)` on X9^1 states.
    pub fn involution_x91(&self) -> Result<VirtualFunction, StateError> {
        if self.class != Class::X9One {
            return Err(StateError::WrongClass { expected: "X9^1", got: self.class.to_string() });
        }
        Ok(self.mirrored())
    }

    /// The class involution, if the class carries one.
    pub fn involution(&self) -> Option<VirtualFunction> {
        match self.class {
            Class::P8One | Class::P8Two | Class::X9One | Class::X9Two => Some(self.mirrored()),
            _ => None,
        }
    }
}

/// `Σ x_j · images[j]`.
pub(crate) fn apply(images: &[Cycle], x: &[i64]) -> Cycle {
    let mut out = vec![0; x.len()];
    for (xj, img) in x.iter().zip(images).filter(|(v, _)| **v != 0) {
        for (o, v) in out.iter_mut().zip(img) {
            *o += xj * v;
        }
    }
    out
}

fn push_varint(b: &mut Vec<u8>, v: i64) {
    let mut z = ((v << 1) ^ (v >> 63)) as u64;
    loop {
        let byte = (z & 0x7f) as u8;
        z >>= 7;
        if z == 0 {
            b.push(byte);
            break;
        }
        b.push(byte | 0x80);
    }
}

/// Canonical byte encoding of a state. Ordering is bytewise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(Box<[u8]>);

impl StateKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Short stable identifier: leading hex digits of the SHA-256 of the key.
    pub fn short_id(&self) -> String {
        let digest = Sha256::digest(&self.0);
        hex::encode(&digest[..8])
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(&self.0))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Diagnostics other than the class Milnor number, for small test lattices.
    pub fn structural(v: &VirtualFunction) -> Vec<Diagnostic> {
        v.validate().into_iter().filter(|d| d.invariant != "mu").collect()
    }

    pub fn real(sign: Sign, odd: bool) -> Marker {
        let p = if odd { Parity::Odd } else { Parity::Even };
        Marker::Real { sign, morse: MorseDatum::Parity(p) }
    }

    pub fn small(markers: Vec<Marker>, zero_position: usize, rows: Vec<Vec<i64>>) -> VirtualFunction {
        VirtualFunction {
            class: Class::P8Two,
            markers,
            zero_position,
            matrix: IntersectionMatrix::from_rows(rows).unwrap(),
        }
    }

    fn two_cycle(entry: i64) -> VirtualFunction {
        small(vec![real(Sign::Minus, true), real(Sign::Minus, false)], 2, vec![vec![-2, entry], vec![entry, -2]])
    }

    #[test]
    fn ind_counts_negative_slots() {
        let v = two_cycle(1);
        assert_eq!(v.ind(), 0);
        let mut w = v.clone();
        w.markers[1] = real(Sign::Plus, false);
        w.zero_position = 1;
        assert_eq!(w.ind(), -1);
        w.markers[0] = real(Sign::Plus, true);
        w.zero_position = 0;
        assert_eq!(w.ind(), 0);
    }

    #[test]
    fn canonicalize_collapses_orientations() {
        let v = two_cycle(-1);
        let c = v.canonicalize();
        assert_eq!(c.matrix.get(0, 1), 1);
        assert!(c.is_canonical());
        assert_eq!(two_cycle(1).canonicalize(), c);
    }

    #[test]
    fn pair_cycles_flip_together() {
        // <U,L> is invariant under joint reorientation, so these differ.
        let rows = |e: i64| vec![vec![-2, e], vec![e, -2]];
        let a = small(vec![Marker::Pair], 0, rows(1)).canonicalize();
        let b = small(vec![Marker::Pair], 0, rows(-1)).canonicalize();
        assert_ne!(a, b);
        assert_eq!(a.matrix.get(0, 1), 1);
    }

    #[test]
    fn key_requires_canonical() {
        let v = two_cycle(-1);
        assert_eq!(v.state_key(), Err(StateError::NotCanonical));
        assert!(v.canonicalize().state_key().is_ok());
    }

    #[test]
    fn class_parsing() {
        assert_eq!("p8_2".parse::<Class>().unwrap(), Class::P8Two);
        assert_eq!("X9^1".parse::<Class>().unwrap(), Class::X9One);
        assert!("P9".parse::<Class>().is_err());
    }

    #[test]
    fn validate_reports_sign_order() {
        let mut v = two_cycle(0);
        v.markers = vec![real(Sign::Plus, true), real(Sign::Minus, false)];
        v.zero_position = 0;
        let d = structural(&v);
        assert!(d.iter().any(|d| d.invariant == "ordering"), "{d:?}");
    }

    #[test]
    fn validate_reports_pair_before_real() {
        let v =
            small(vec![Marker::Pair, real(Sign::Plus, true)], 0, vec![vec![-2, 0, 0], vec![0, -2, 0], vec![0, 0, -2]]);
        let d = structural(&v);
        assert!(d.iter().any(|d| d.invariant == "layout"), "{d:?}");
    }

    #[test]
    fn conjugation_of_a2_pair_of_reals() {
        // Nearest positive odd cycle is conjugation-invariant; the next one
        // maps to minus its reflection in the first.
        let v = small(vec![real(Sign::Plus, true), real(Sign::Plus, false)], 0, vec![vec![-2, 1], vec![1, -2]]);
        let iota = v.conjugation();
        assert_eq!(iota[0], vec![1, 0]);
        assert_eq!(iota[1], vec![-1, -1]);
        assert!(structural(&v).is_empty());
        let mut bad = v.clone();
        bad.markers[1] = real(Sign::Plus, true);
        assert!(structural(&bad).iter().any(|d| d.invariant == "conjugation"));
    }
}
