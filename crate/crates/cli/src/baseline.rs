//! Published enumeration counts, and the report emitted when a run disagrees.

use strata_core::enumerate::StatsRow;
use strata_core::Class;

/// Expected totals for one class. `None` fields are not published.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Baseline {
    pub class: Class,
    pub states: Option<usize>,
    pub components: usize,
    /// In component order: Ind ascending, then Card descending.
    pub cards: Option<&'static [usize]>,
    pub inds: Option<&'static [i64]>,
}

const P82_CARDS: &[usize] = &[258, 156, 60, 60, 1216, 336, 336, 1318, 844, 844, 1648, 1648, 262, 94, 94];
const P82_INDS: &[i64] = &[-3, -3, -3, -3, -2, -2, -2, -1, -1, -1, 0, 0, 1, 1, 1];
const P81_INDS: &[i64] = &[-3, -3, -2, -1, 0, 1, 1];

pub fn baseline(class: Class) -> Baseline {
    let only = |components| Baseline { class, states: None, components, cards: None, inds: None };
    match class {
        Class::P8Two => {
            Baseline { class, states: Some(9174), components: 15, cards: Some(P82_CARDS), inds: Some(P82_INDS) }
        }
        Class::P8One => Baseline { class, states: Some(6503), components: 7, cards: None, inds: Some(P81_INDS) },
        Class::X9Plus | Class::X9Minus => only(7),
        Class::X9One => only(10),
        Class::X9Two => only(18),
        Class::J10One => only(10),
        Class::J10Three => only(23),
    }
}

/// Pairs of one-based component numbers exchanged by the class involution.
pub fn expected_partners(class: Class) -> Option<&'static [(usize, usize)]> {
    match class {
        Class::P8Two => Some(&[(3, 4), (6, 7), (9, 10), (11, 12), (14, 15)]),
        _ => None,
    }
}

/// One line per disagreement with the published counts; empty when all agree.
pub fn divergence(class: Class, states: usize, rows: &[StatsRow]) -> Vec<String> {
    let b = baseline(class);
    let mut out = Vec::new();
    if let Some(n) = b.states.filter(|&n| n != states) {
        out.push(format!("{class}: {states} virtual functions, published {n}"));
    }
    if rows.len() != b.components {
        out.push(format!("{class}: {} virtual components, published {}", rows.len(), b.components));
    }
    let cards: Vec<usize> = rows.iter().map(|r| r.card).collect();
    if let Some(expected) = b.cards.filter(|e| **e != cards[..]) {
        out.push(format!("{class}: Card row {cards:?}, published {expected:?}"));
    }
    let mut inds: Vec<i64> = rows.iter().map(|r| r.ind).collect();
    inds.sort();
    if let Some(expected) = b.inds {
        let mut e = expected.to_vec();
        e.sort();
        if e != inds {
            out.push(format!("{class}: Ind multiset {inds:?}, published {e:?}"));
        }
    }
    for &(a, c) in expected_partners(class).unwrap_or(&[]) {
        let got = rows.get(a - 1).and_then(|r| r.partner);
        if got != Some(c) {
            let shown = got.map_or("none".to_string(), |p| p.to_string());
            out.push(format!("{class}: component {a} has partner {shown}, published {c}"));
        }
    }
    if !out.is_empty() {
        out.insert(0, format!("convention divergence for {class} ({} finding(s)):", out.len()));
    }
    out
}
