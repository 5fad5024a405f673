//! Elementary surgeries of virtual functions.
//!
//! Each flip is a change of distinguished basis in the zero level: a value
//! crossing the path of another reflects that value's cycle in its own. Flips
//! that keep the zero level fixed commute with complex conjugation, which fixes
//! the Morse data of newborn real points and rules out some collisions.
//!
//! Every successor is returned in canonical orientation. Only zero crossings of
//! a real critical value leave a virtual component.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::FlipError;
use crate::lattice::{self, Cycle, Sign};
use crate::state::{apply, Marker, MorseDatum, VirtualFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Over,
    Under,
}

impl Variant {
    pub fn opposite(self) -> Self {
        match self {
            Variant::Over => Variant::Under,
            Variant::Under => Variant::Over,
        }
    }
}

/// `Up` moves a value toward larger values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn opposite(self) -> Self {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Negative,
    Positive,
}

/// Positions are zero-based real slots. Ordering is by kind, then fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Flip {
    /// Real values `pos`, `pos+1` on one side of zero exchange order.
    Transposition { pos: usize },
    /// The real value next to zero changes sign.
    ZeroCrossing { direction: Direction },
    /// Real values `pos`, `pos+1` collide and leave the axis as a pair.
    Death { pos: usize },
    /// The pair whose path is outermost toward `side` lands on the axis with
    /// `gap` real values between it and zero, and splits into two real values.
    Birth { side: Side, gap: usize },
    /// The same pair passes through the axis there without colliding.
    AxisCrossing { side: Side, gap: usize },
    /// Pairs `pos`, `pos+1` exchange path order. `Over`: the second value
    /// crosses the path of the first.
    Braid { pos: usize, variant: Variant },
}

impl Flip {
    pub fn is_discriminant(&self) -> bool {
        matches!(self, Flip::ZeroCrossing { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Flip::Transposition { .. } => "transposition",
            Flip::ZeroCrossing { .. } => "zero_crossing",
            Flip::Death { .. } => "death",
            Flip::Birth { .. } => "birth",
            Flip::AxisCrossing { .. } => "axis_crossing",
            Flip::Braid { .. } => "braid",
        }
    }

    /// The flip undoing `self` on the successor of `v`.
    pub fn inverse(&self, v: &VirtualFunction) -> Flip {
        let z = v.zero_position;
        match *self {
            Flip::Transposition { .. } | Flip::AxisCrossing { .. } => *self,
            Flip::ZeroCrossing { direction } => Flip::ZeroCrossing { direction: direction.opposite() },
            Flip::Death { pos } if pos >= z => Flip::Birth { side: Side::Positive, gap: pos - z },
            Flip::Death { pos } => Flip::Birth { side: Side::Negative, gap: z - pos - 2 },
            Flip::Birth { side: Side::Positive, gap } => Flip::Death { pos: z + gap },
            Flip::Birth { side: Side::Negative, gap } => Flip::Death { pos: z - gap },
            Flip::Braid { pos, variant } => Flip::Braid { pos, variant: variant.opposite() },
        }
    }
}

impl fmt::Display for Flip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sd = |s: Side| if s == Side::Positive { '+' } else { '-' };
        match *self {
            Flip::Transposition { pos } => write!(f, "transposition({pos})"),
            Flip::ZeroCrossing { direction: Direction::Up } => f.write_str("zero_crossing(up)"),
            Flip::ZeroCrossing { direction: Direction::Down } => f.write_str("zero_crossing(down)"),
            Flip::Death { pos } => write!(f, "death({pos})"),
            Flip::Birth { side, gap } => write!(f, "birth({}{gap})", sd(side)),
            Flip::AxisCrossing { side, gap } => write!(f, "axis_crossing({}{gap})", sd(side)),
            Flip::Braid { pos, variant: Variant::Over } => write!(f, "braid({pos},over)"),
            Flip::Braid { pos, variant: Variant::Under } => write!(f, "braid({pos},under)"),
        }
    }
}

fn reject(flip: &Flip, rule: &'static str) -> FlipError {
    FlipError::NotApplicable { flip: flip.to_string(), rule }
}

fn neg(x: &[i64]) -> Cycle {
    x.iter().map(|v| -v).collect()
}

fn candidates(v: &VirtualFunction) -> Vec<Flip> {
    let n = v.real_count();
    let z = v.zero_position;
    let p = v.pair_count();
    let mut out = Vec::new();
    for pos in (0..n.saturating_sub(1)).filter(|&pos| pos + 1 != z) {
        out.push(Flip::Transposition { pos });
        out.push(Flip::Death { pos });
    }
    out.push(Flip::ZeroCrossing { direction: Direction::Up });
    out.push(Flip::ZeroCrossing { direction: Direction::Down });
    if p > 0 {
        for (side, max) in [(Side::Negative, z), (Side::Positive, n - z)] {
            for gap in 0..=max {
                out.push(Flip::Birth { side, gap });
                out.push(Flip::AxisCrossing { side, gap });
            }
        }
    }
    for pos in 0..p.saturating_sub(1) {
        out.push(Flip::Braid { pos, variant: Variant::Over });
        out.push(Flip::Braid { pos, variant: Variant::Under });
    }
    out
}

/// Flips that may apply to `v`, sorted; a superset of [`available_flips`].
/// Drawing from it until [`apply_flip`] succeeds samples available flips uniformly.
pub fn candidate_flips(v: &VirtualFunction) -> Vec<Flip> {
    let mut out = candidates(v);
    out.sort();
    out
}

/// Flips applicable to `v`, sorted.
pub fn available_flips(v: &VirtualFunction) -> Vec<Flip> {
    successors(v).into_iter().map(|(f, _)| f).collect()
}

/// All successors of `v` with the flips producing them, sorted by flip.
pub fn successors(v: &VirtualFunction) -> Vec<(Flip, VirtualFunction)> {
    let iota = v.conjugation();
    let mut out: Vec<(Flip, VirtualFunction)> =
        candidates(v).into_iter().filter_map(|f| apply_with(v, &f, &iota).ok().map(|w| (f, w))).collect();
    out.sort_by_key(|a| a.0);
    out
}

/// Applies one flip and canonicalizes the result.
pub fn apply_flip(v: &VirtualFunction, flip: &Flip) -> Result<VirtualFunction, FlipError> {
    apply_with(v, flip, &v.conjugation())
}

/// A new distinguished basis in old coordinates, with real data.
#[derive(Clone)]
struct Frame<'a> {
    v: &'a VirtualFunction,
    reals: Vec<(Cycle, MorseDatum)>,
    zero_position: usize,
    pairs: Vec<(Cycle, Cycle)>,
}

impl<'a> Frame<'a> {
    fn identity(v: &'a VirtualFunction) -> Self {
        let mu = v.mu();
        let reals = (0..v.real_count()).map(|c| (lattice::unit(mu, c), v.morse(c))).collect();
        let pairs =
            (0..v.pair_count()).map(|i| (lattice::unit(mu, v.upper(i)), lattice::unit(mu, v.lower(i)))).collect();
        Frame { v, reals, zero_position: v.zero_position, pairs }
    }

    fn reflect(&self, c: &[i64], x: &[i64]) -> Cycle {
        lattice::reflect(&self.v.matrix, c, x)
    }

    fn reflect_reals(&mut self, c: &[i64], slots: &[usize]) {
        for &s in slots {
            self.reals[s].0 = self.reflect(c, &self.reals[s].0);
        }
    }

    fn basis(&self) -> Vec<Cycle> {
        let mut b: Vec<Cycle> = self.reals.iter().map(|r| r.0.clone()).collect();
        for (u, l) in &self.pairs {
            b.push(u.clone());
            b.push(l.clone());
        }
        b
    }

    fn state(&self) -> Result<VirtualFunction, FlipError> {
        let matrix = lattice::gram(&self.v.matrix, &self.basis())?;
        let z = self.zero_position;
        let mut markers: Vec<Marker> = self
            .reals
            .iter()
            .enumerate()
            .map(|(i, r)| Marker::Real { sign: if i < z { Sign::Minus } else { Sign::Plus }, morse: r.1 })
            .collect();
        markers.extend(std::iter::repeat_n(Marker::Pair, self.pairs.len()));
        Ok(VirtualFunction { class: self.v.class, markers, zero_position: z, matrix })
    }

    /// Whether `new`, built from this frame, sees the conjugation `iota`.
    fn commutes(&self, iota: &[Cycle], new: &VirtualFunction) -> bool {
        let basis = self.basis();
        basis.iter().zip(new.conjugation()).all(|(b, img)| apply(iota, b) == combine(&img, &basis))
    }
}

fn combine(coef: &[i64], basis: &[Cycle]) -> Cycle {
    let mut out = vec![0; basis.first().map_or(0, Vec::len)];
    for (c, b) in coef.iter().zip(basis).filter(|(c, _)| **c != 0) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

fn apply_with(v: &VirtualFunction, flip: &Flip, iota: &[Cycle]) -> Result<VirtualFunction, FlipError> {
    let n = v.real_count();
    let z = v.zero_position;
    let p = v.pair_count();
    let m = &v.matrix;
    let mu = v.mu();
    let mut fr = Frame::identity(v);
    match *flip {
        Flip::Transposition { pos } | Flip::Death { pos } if pos + 1 >= n || pos + 1 == z => {
            return Err(reject(flip, "needs two real values on one side of zero"));
        }
        Flip::Transposition { pos } => {
            if m.get(pos, pos + 1) != 0 {
                return Err(reject(flip, "cycles must be orthogonal"));
            }
            fr.reals.swap(pos, pos + 1);
        }
        Flip::ZeroCrossing { direction } => {
            let c = match direction {
                Direction::Down if z < n => z,
                Direction::Up if z > 0 => z - 1,
                _ => return Err(reject(flip, "no real value on that side of zero")),
            };
            let e = lattice::unit(mu, c);
            for i in 0..p {
                fr.pairs[i].1 = fr.reflect(&e, &fr.pairs[i].1);
            }
            fr.zero_position = if direction == Direction::Down { z + 1 } else { z - 1 };
        }
        Flip::Death { pos } => {
            if m.get(pos, pos + 1).abs() != 1 {
                return Err(reject(flip, "cycles must meet with index 1"));
            }
            let positive = pos >= z;
            let (near, far) = if positive { (pos, pos + 1) } else { (pos + 1, pos) };
            if !MorseDatum::cancels(v.morse(pos), v.morse(pos + 1)) {
                return Err(reject(flip, "Morse data do not cancel"));
            }
            let w = fr.reflect(&lattice::unit(mu, far), &lattice::unit(mu, near));
            let mut wb = lattice::unit(mu, far);
            let outer: Vec<usize> = if positive {
                for c in (z..pos).rev() {
                    lattice::reflect_in_basis(m, c, &mut wb);
                }
                (pos + 2..n).collect()
            } else {
                for c in pos + 2..z {
                    lattice::reflect_in_basis(m, c, &mut wb);
                }
                (0..pos).collect()
            };
            fr.reflect_reals(&w, &outer);
            let l = apply(iota, &w);
            if l != wb && l != neg(&wb) {
                return Err(reject(flip, "collision is not conjugation-symmetric"));
            }
            fr.reals.drain(pos..pos + 2);
            if positive {
                fr.pairs.insert(0, (w, l));
            } else {
                fr.pairs.push((w, l));
                fr.zero_position = z - 2;
            }
        }
        Flip::Birth { side, gap } | Flip::AxisCrossing { side, gap } => {
            let positive = side == Side::Positive;
            if p == 0 || gap > if positive { n - z } else { z } {
                return Err(reject(flip, "no pair or gap beyond the real values"));
            }
            let (w, wb) = if positive { fr.pairs.remove(0) } else { fr.pairs.pop().expect("pair") };
            // Farther real slots, and nearer ones from zero outward.
            let (outer, inner): (Vec<usize>, Vec<usize>) = if positive {
                ((z + gap..n).collect(), (z..z + gap).collect())
            } else {
                ((0..z - gap).collect(), (z - gap..z).rev().collect())
            };
            fr.reflect_reals(&w, &outer);
            let mut wbp = wb;
            for &c in &inner {
                lattice::reflect_in_basis(m, c, &mut wbp);
            }
            let k = lattice::pairing(m, &wbp, &w);
            if let Flip::Birth { .. } = flip {
                if k.abs() != 1 {
                    return Err(reject(flip, "pair cycles must meet with index 1"));
                }
                let near: Cycle = w.iter().zip(&wbp).map(|(a, b)| a + k * b).collect();
                let at = if positive { z + gap } else { z - gap };
                let (lo_cycle, hi_cycle) = if positive { (near, wbp) } else { (wbp, near) };
                for (lo, hi) in MorseDatum::birth_candidates(v.class) {
                    let mut trial = fr.clone();
                    trial.reals.splice(at..at, [(lo_cycle.clone(), lo), (hi_cycle.clone(), hi)]);
                    if !positive {
                        trial.zero_position = z + 2;
                    }
                    let s = trial.state()?;
                    if trial.commutes(iota, &s) {
                        return Ok(s.canonicalize());
                    }
                }
                return Err(reject(flip, "no Morse data compatible with conjugation"));
            }
            if k != 0 {
                return Err(reject(flip, "pair cycles must be orthogonal"));
            }
            let u = wbp;
            fr.reflect_reals(&u, &outer);
            let mut l = w;
            for &c in inner.iter().rev() {
                lattice::reflect_in_basis(m, c, &mut l);
            }
            let iu = apply(iota, &u);
            if iu != l && iu != neg(&l) {
                return Err(reject(flip, "crossing is not conjugation-symmetric"));
            }
            if positive {
                fr.pairs.insert(0, (u, iu));
            } else {
                fr.pairs.push((u, iu));
            }
        }
        Flip::Braid { pos, variant } => {
            if pos + 1 >= p {
                return Err(reject(flip, "needs two neighbouring pairs"));
            }
            let a = fr.pairs[pos].0.clone();
            let b = fr.pairs[pos + 1].0.clone();
            let (x, y) = match variant {
                Variant::Over => {
                    let y = fr.reflect(&b, &a);
                    (b, y)
                }
                Variant::Under => (fr.reflect(&a, &b), a),
            };
            let (lx, ly) = (apply(iota, &x), apply(iota, &y));
            fr.pairs[pos] = (x, lx);
            fr.pairs[pos + 1] = (y, ly);
        }
    }
    Ok(fr.state()?.canonicalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::tests::{real, small, structural};

    fn a2_reals(odd_near: bool, odd_far: bool) -> VirtualFunction {
        small(vec![real(Sign::Plus, odd_near), real(Sign::Plus, odd_far)], 0, vec![vec![-2, 1], vec![1, -2]])
    }

    #[test]
    fn zero_crossing_changes_ind() {
        let v = a2_reals(true, false);
        let w = apply_flip(&v, &Flip::ZeroCrossing { direction: Direction::Down }).unwrap();
        assert_eq!(w.zero_position, 1);
        assert_eq!(w.ind(), v.ind() - 1);
        assert!(structural(&w).is_empty(), "{:?}", structural(&w));
        assert!(apply_flip(&v, &Flip::ZeroCrossing { direction: Direction::Up }).is_err());
    }

    #[test]
    fn death_then_birth_round_trip() {
        let v = a2_reals(true, false).canonicalize();
        let d = Flip::Death { pos: 0 };
        let w = apply_flip(&v, &d).unwrap();
        assert_eq!((w.real_count(), w.pair_count()), (0, 1));
        assert!(structural(&w).is_empty(), "{:?}", structural(&w));
        assert_eq!(apply_flip(&w, &d.inverse(&v)).unwrap(), v);
    }

    #[test]
    fn newborn_data_follow_the_pair_intersection() {
        let mut seen = Vec::new();
        for e in [1, -1] {
            let v = small(vec![Marker::Pair], 0, vec![vec![-2, e], vec![e, -2]]);
            let w = apply_flip(&v, &Flip::Birth { side: Side::Positive, gap: 0 }).unwrap();
            assert_ne!(w.morse(0).is_odd(), w.morse(1).is_odd());
            seen.push(w.morse(0));
        }
        assert_ne!(seen[0], seen[1]);
    }

    #[test]
    fn death_needs_cancelling_data() {
        assert!(apply_flip(&a2_reals(true, true), &Flip::Death { pos: 0 }).is_err());
        assert!(apply_flip(&a2_reals(false, false), &Flip::Death { pos: 0 }).is_err());
    }

    #[test]
    fn transposition_needs_orthogonality() {
        assert!(apply_flip(&a2_reals(true, false), &Flip::Transposition { pos: 0 }).is_err());
        let o = small(vec![real(Sign::Plus, true), real(Sign::Plus, false)], 0, vec![vec![-2, 0], vec![0, -2]]);
        let w = apply_flip(&o, &Flip::Transposition { pos: 0 }).unwrap();
        assert!(!w.morse(0).is_odd());
    }

    #[test]
    fn orthogonal_pair_crosses_the_axis() {
        let v = small(vec![Marker::Pair], 0, vec![vec![-2, 0], vec![0, -2]]);
        let w = apply_flip(&v, &Flip::AxisCrossing { side: Side::Positive, gap: 0 }).unwrap();
        assert!(structural(&w).is_empty());
        assert!(apply_flip(&v, &Flip::Birth { side: Side::Positive, gap: 0 }).is_err());
    }

    #[test]
    fn braid_variants_are_inverse() {
        let rows = vec![vec![-2, 0, 1, 0], vec![0, -2, 0, 1], vec![1, 0, -2, 0], vec![0, 1, 0, -2]];
        let v = small(vec![Marker::Pair, Marker::Pair], 0, rows).canonicalize();
        assert!(structural(&v).is_empty(), "{:?}", structural(&v));
        let over = Flip::Braid { pos: 0, variant: Variant::Over };
        let w = apply_flip(&v, &over).unwrap();
        assert_eq!(apply_flip(&w, &over.inverse(&v)).unwrap(), v);
    }

    #[test]
    fn seed_successors_are_valid_and_sorted() {
        let v = crate::seeds::builtin_seed("p82-mat").unwrap();
        let s = successors(&v);
        assert!(!s.is_empty());
        assert!(s.windows(2).all(|w| w[0].0 < w[1].0));
        for (f, w) in &s {
            assert!(w.is_valid(), "{f}: {:?}", w.validate());
            assert!(w.is_canonical());
        }
    }
}
