//! Output formats. Every writer is byte-deterministic for a given graph.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use strata_core::enumerate::{component_of, StatsRow};
use strata_core::{FormalGraph, Marker, VirtualComponent, VirtualFunction};

pub const FORMAT_VERSION: u32 = 1;

fn csv_bytes<R: Serialize>(rows: impl IntoIterator<Item = R>, header: &[&str]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

#[derive(Serialize)]
struct ComponentRecord<'a> {
    class: &'a str,
    component_id: &'a str,
    ind: i64,
    card: usize,
    partner_id: &'a str,
}

/// Columns `class,component_id,ind,card,partner_id`; one row per component.
pub fn stats_csv(rows: &[StatsRow]) -> Vec<u8> {
    let records = rows.iter().map(|r| ComponentRecord {
        class: r.class.slug(),
        component_id: &r.component_id,
        ind: r.ind,
        card: r.card,
        partner_id: r.partner_id.as_deref().unwrap_or(""),
    });
    csv_bytes(records, &["class", "component_id", "ind", "card", "partner_id"])
}

#[derive(Serialize)]
struct MatchRecord<'a> {
    state_id: String,
    component_id: &'a str,
    ind: i64,
    card: usize,
}

/// Columns `state_id,component_id,ind,card`; one row per matching node.
pub fn matches_csv(g: &FormalGraph, comps: &[VirtualComponent], rows: &[StatsRow], hits: &[usize]) -> Vec<u8> {
    let owner = component_of(g, comps);
    let records = hits.iter().map(|&i| {
        let c = &rows[owner[i]];
        MatchRecord { state_id: g.keys[i].short_id(), component_id: &c.component_id, ind: c.ind, card: c.card }
    });
    csv_bytes(records, &["state_id", "component_id", "ind", "card"])
}

#[derive(Serialize)]
struct NodeEntry<'a> {
    id: String,
    component: usize,
    #[serde(flatten)]
    state: &'a VirtualFunction,
}

#[derive(Serialize)]
struct GraphDump<'a> {
    format_version: u32,
    class: strata_core::Class,
    components: &'a [StatsRow],
    nodes: Vec<NodeEntry<'a>>,
}

/// Every node with its one-based component number.
pub fn nodes_json(g: &FormalGraph, comps: &[VirtualComponent], rows: &[StatsRow]) -> String {
    let owner = component_of(g, comps);
    let nodes = g
        .nodes
        .iter()
        .zip(&g.keys)
        .zip(owner)
        .map(|((state, key), c)| NodeEntry { id: key.short_id(), component: c + 1, state })
        .collect();
    let dump = GraphDump { format_version: FORMAT_VERSION, class: g.class, components: rows, nodes };
    serde_json::to_string_pretty(&dump).expect("serializable") + "\n"
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Coxeter–Dynkin graph: one vertex per cycle, one edge per nonzero
/// off-diagonal entry labelled by it. Odd real cycles are boxes, even real
/// cycles circles, pair cycles dashed ellipses.
pub fn state_dot(name: &str, v: &VirtualFunction) -> String {
    let mut s = String::new();
    writeln!(s, "graph {} {{", quote(name)).unwrap();
    writeln!(s, "  label={};", quote(&format!("{} zero_position={}", v.class, v.zero_position))).unwrap();
    let offsets = v.cycle_offsets();
    for (m, &c) in v.markers.iter().zip(&offsets) {
        match *m {
            Marker::Real { sign, morse } => {
                let shape = if morse.is_odd() { "box" } else { "circle" };
                let label = format!("{} {}{}", c + 1, if sign.as_i64() < 0 { '-' } else { '+' }, morse);
                writeln!(s, "  c{} [label={}, shape={shape}];", c + 1, quote(&label)).unwrap();
            }
            Marker::Pair => {
                for (k, part) in [(c, "U"), (c + 1, "L")] {
                    let label = format!("{} {part}", k + 1);
                    writeln!(s, "  c{} [label={}, shape=ellipse, style=dashed];", k + 1, quote(&label)).unwrap();
                }
            }
        }
    }
    let mu = v.mu();
    for i in 0..mu {
        for j in (i + 1)..mu {
            let e = v.matrix.get(i, j);
            if e != 0 {
                writeln!(s, "  c{} -- c{} [label={}];", i + 1, j + 1, quote(&e.to_string())).unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}

/// Component graph: one vertex per virtual component, one edge per pair of
/// components joined by zero crossings, labelled with the number of such flips.
pub fn component_dot(g: &FormalGraph, comps: &[VirtualComponent], rows: &[StatsRow]) -> String {
    let owner = component_of(g, comps);
    let mut joins: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in g.edges.iter().filter(|e| e.flip.is_discriminant() && e.from < e.to) {
        let (a, b) = (owner[e.from as usize], owner[e.to as usize]);
        if a != b {
            *joins.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut s = String::new();
    writeln!(s, "graph {} {{", quote(&format!("{} components", g.class))).unwrap();
    for (i, r) in rows.iter().enumerate() {
        let label = format!("{}: Ind {} Card {}\\n{}", i + 1, r.ind, r.card, r.component_id);
        writeln!(s, "  k{} [label=\"{label}\"];", i + 1).unwrap();
    }
    for ((a, b), n) in joins {
        writeln!(s, "  k{} -- k{} [label=\"{n}\"];", a + 1, b + 1).unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use strata_core::enumerate::stats;
    use strata_core::{explore, seeds, virtual_components};

    #[test]
    fn csv_header_and_quoting() {
        let g = explore(&[seeds::builtin_seed("p81-base").unwrap()], 100_000).unwrap();
        let comps = virtual_components(&g);
        let text = String::from_utf8(stats_csv(&stats(&g, &comps))).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("class,component_id,ind,card,partner_id"));
        assert_eq!(lines.count(), 7);
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}
