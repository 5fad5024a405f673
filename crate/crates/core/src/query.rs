//! Conjunctive queries over enumerated states, and homology-index candidates.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::enumerate::FormalGraph;
use crate::error::QueryError;
use crate::flip::Side;
use crate::state::{Class, MorseDatum, Parity, VirtualFunction};

/// One clause of a [`Predicate`]. Slot and cycle indices are zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Condition {
    RealCount {
        count: usize,
    },
    /// Number of real values on one side of zero.
    SideCount {
        side: Side,
        count: usize,
    },
    ParityCount {
        parity: Parity,
        count: usize,
    },
    IndexCount {
        index: u8,
        count: usize,
    },
    Ind {
        value: i64,
    },
    /// The lowest real point is a minimum: lowest datum, and its cycle meets
    /// every other real cycle with index ±1.
    HasMinimum,
    /// Mirror of [`Condition::HasMinimum`] for the highest real point.
    HasMaximum,
    /// Every real value with an odd datum lies below every even one.
    OddBelowEven,
    /// Every real value on `side` has datum parity `parity`.
    SideParity {
        side: Side,
        parity: Parity,
    },
    Entry {
        i: usize,
        j: usize,
        value: i64,
    },
    /// The leading square block of the intersection matrix.
    LeadingBlock {
        rows: Vec<Vec<i64>>,
    },
}

/// Conjunction of conditions; the empty predicate matches everything.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Predicate {
    #[serde(default)]
    pub name: String,
    pub all: Vec<Condition>,
}

fn extremal(v: &VirtualFunction, slot: usize, datum: MorseDatum) -> bool {
    let n = v.real_count();
    let matches = match v.morse(slot) {
        MorseDatum::Parity(p) => p == datum.parity(),
        d => d == datum,
    };
    matches && (0..n).filter(|&j| j != slot).all(|j| v.matrix.get(slot, j).abs() == 1)
}

impl Condition {
    pub fn matches(&self, v: &VirtualFunction) -> bool {
        let n = v.real_count();
        let z = v.zero_position;
        let on_side = |side: Side| if side == Side::Negative { 0..z } else { z..n };
        match self {
            Condition::RealCount { count } => n == *count,
            Condition::SideCount { side, count } => on_side(*side).len() == *count,
            Condition::ParityCount { parity, count } => {
                (0..n).filter(|&k| v.morse(k).parity() == *parity).count() == *count
            }
            Condition::IndexCount { index, count } => {
                (0..n).filter(|&k| v.morse(k) == MorseDatum::Index(*index)).count() == *count
            }
            Condition::Ind { value } => v.ind() == *value,
            Condition::HasMinimum => n > 0 && extremal(v, 0, MorseDatum::Index(0)),
            Condition::HasMaximum => n > 0 && extremal(v, n - 1, MorseDatum::Index(v.class.nvars())),
            Condition::OddBelowEven => {
                let first_even = (0..n).find(|&k| !v.morse(k).is_odd()).unwrap_or(n);
                (first_even..n).all(|k| !v.morse(k).is_odd())
            }
            Condition::SideParity { side, parity } => on_side(*side).all(|k| v.morse(k).parity() == *parity),
            Condition::Entry { i, j, value } => v.matrix.get(*i, *j) == *value,
            Condition::LeadingBlock { rows } => {
                rows.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| v.matrix.get(i, j) == x))
            }
        }
    }

    fn check(&self, class: Class) -> Result<(), QueryError> {
        let mu = class.mu();
        let bad = |m: String| Err(QueryError::Invalid(m));
        match self {
            Condition::Entry { i, j, .. } if *i >= mu || *j >= mu => {
                bad(format!("entry ({i},{j}) outside a {mu}x{mu} matrix"))
            }
            Condition::LeadingBlock { rows } if rows.len() > mu || rows.iter().any(|r| r.len() != rows.len()) => {
                bad(format!("leading block must be square and at most {mu}x{mu}"))
            }
            Condition::IndexCount { .. } if class.parity_only() => {
                bad(format!("class {class} records only Morse index parities"))
            }
            Condition::IndexCount { index, .. } if *index > class.nvars() => {
                bad(format!("Morse index {index} exceeds {} variables", class.nvars()))
            }
            _ => Ok(()),
        }
    }
}

impl Predicate {
    pub fn matches(&self, v: &VirtualFunction) -> bool {
        self.all.iter().all(|c| c.matches(v))
    }

    pub fn check(&self, class: Class) -> Result<(), QueryError> {
        self.all.iter().try_for_each(|c| c.check(class))
    }

    /// The predicate extended by one more condition.
    pub fn and(&self, c: Condition) -> Predicate {
        let mut out = self.clone();
        out.all.push(c);
        out
    }

    pub fn from_json(text: &str) -> Result<Predicate, QueryError> {
        serde_json::from_str(text).map_err(|e| QueryError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Indices of matching nodes, ascending (that is, in key order).
pub fn filter_vf(g: &FormalGraph, p: &Predicate) -> Result<Vec<usize>, QueryError> {
    p.check(g.class)?;
    Ok((0..g.len()).filter(|&i| p.matches(&g.nodes[i])).collect())
}

/// Betti triples `(b0,b1,b2)` of `H_*(W_0, W_-)` compatible with the strong
/// Morse inequalities for `below[k]` critical points of index `k` under zero.
///
/// Dimension 3 is assumed to carry no homology, so the alternating sum of the
/// triple equals that of the counts.
pub fn hi_candidates(below: &[usize], class: Class) -> Result<BTreeSet<(u32, u32, u32)>, QueryError> {
    if !class.is_p8() {
        return Err(QueryError::Invalid(format!("homology index is defined for P8 classes, got {class}")));
    }
    if below.len() > 4 {
        return Err(QueryError::Invalid("Morse indices of a 3-variable function are at most 3".into()));
    }
    let c: Vec<i64> = (0..4).map(|k| below.get(k).copied().unwrap_or(0) as i64).collect();
    let total: i64 = below.iter().sum::<usize>() as i64;
    let euler = c[0] - c[1] + c[2] - c[3];
    let mut out = BTreeSet::new();
    for b0 in 0..=total {
        for b1 in 0..=total {
            let b2 = euler - b0 + b1;
            if b2 < 0 {
                continue;
            }
            let b = [b0, b1, b2, 0];
            let strong = (0..4).all(|k| {
                let s = |x: &[i64]| (0..=k).map(|i| if (k - i) % 2 == 0 { x[i] } else { -x[i] }).sum::<i64>();
                s(&b) <= s(&c)
            });
            if strong {
                out.insert((b0 as u32, b1 as u32, b2 as u32));
            }
        }
    }
    if out.is_empty() {
        return Err(QueryError::Inconsistent(below.to_vec()));
    }
    Ok(out)
}
