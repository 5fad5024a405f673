//! Closure of seed states under flips, and its virtual components.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

use crate::error::EnumerateError;
use crate::flip::{successors, Flip};
use crate::state::{Class, StateKey, VirtualFunction};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Budget from `STRATA_BUDGET`, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> usize {
    std::env::var("STRATA_BUDGET").ok().and_then(|s| s.trim().parse().ok()).filter(|&b| b > 0).unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub flip: Flip,
}

/// Nodes are sorted by state key; edge endpoints index into `nodes`.
#[derive(Clone, Debug)]
pub struct FormalGraph {
    pub class: Class,
    pub nodes: Vec<VirtualFunction>,
    pub keys: Vec<StateKey>,
    pub edges: Vec<Edge>,
}

impl FormalGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, key: &StateKey) -> Option<usize> {
        self.keys.binary_search(key).ok()
    }

    pub fn index_of_state(&self, v: &VirtualFunction) -> Option<usize> {
        self.index_of(&v.canonicalize().key_unchecked())
    }
}

/// Breadth-first closure of `seeds` under all flips.
///
/// Each level is expanded in parallel and merged in frontier order, so the
/// result does not depend on the thread count.
pub fn explore(seeds: &[VirtualFunction], budget: usize) -> Result<FormalGraph, EnumerateError> {
    let first = seeds.first().ok_or(EnumerateError::BadSeed { index: 0, reason: "no seeds".into() })?;
    let class = first.class;
    let mut index: HashMap<StateKey, u32> = HashMap::new();
    let mut nodes: Vec<VirtualFunction> = Vec::new();
    let mut keys: Vec<StateKey> = Vec::new();
    let mut frontier: Vec<u32> = Vec::new();
    for (i, s) in seeds.iter().enumerate() {
        if s.class != class {
            return Err(EnumerateError::MixedClasses(class.to_string(), s.class.to_string()));
        }
        if let Some(d) = s.validate().first() {
            return Err(EnumerateError::BadSeed { index: i, reason: d.to_string() });
        }
        let c = s.canonicalize();
        let k = c.key_unchecked();
        if !index.contains_key(&k) {
            index.insert(k.clone(), nodes.len() as u32);
            frontier.push(nodes.len() as u32);
            nodes.push(c);
            keys.push(k);
        }
    }
    if nodes.len() > budget {
        return Err(EnumerateError::BudgetExceeded { budget });
    }
    let mut raw_edges: Vec<(u32, Flip, StateKey)> = Vec::new();
    while !frontier.is_empty() {
        let expanded: Vec<Vec<(Flip, VirtualFunction, StateKey)>> = frontier
            .par_iter()
            .map(|&i| {
                successors(&nodes[i as usize])
                    .into_iter()
                    .map(|(f, w)| {
                        let k = w.key_unchecked();
                        (f, w, k)
                    })
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (&src, succ) in frontier.iter().zip(expanded) {
            for (f, w, k) in succ {
                if !index.contains_key(&k) {
                    if nodes.len() >= budget {
                        return Err(EnumerateError::BudgetExceeded { budget });
                    }
                    let id = nodes.len() as u32;
                    index.insert(k.clone(), id);
                    next.push(id);
                    nodes.push(w);
                    keys.push(k.clone());
                }
                raw_edges.push((src, f, k));
            }
        }
        frontier = next;
    }
    let mut order: Vec<u32> = (0..nodes.len() as u32).collect();
    order.sort_by(|&a, &b| keys[a as usize].cmp(&keys[b as usize]));
    let mut rank = vec![0u32; nodes.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old as usize] = new as u32;
    }
    let mut edges: Vec<Edge> = raw_edges
        .into_iter()
        .map(|(src, flip, k)| Edge { from: rank[src as usize], to: rank[index[&k] as usize], flip })
        .collect();
    edges.sort();
    edges.dedup();
    let mut slots: Vec<Option<(VirtualFunction, StateKey)>> = nodes.into_iter().zip(keys).map(Some).collect();
    let (nodes, keys) = order.iter().map(|&o| slots[o as usize].take().expect("each node once")).unzip();
    Ok(FormalGraph { class, nodes, keys, edges })
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VirtualComponent {
    /// Node indices, ascending.
    pub members: Vec<u32>,
    pub card: usize,
    pub ind: i64,
}

impl VirtualComponent {
    /// Smallest member, whose key names the component.
    pub fn representative(&self) -> u32 {
        self.members[0]
    }
}

/// Components of the graph without discriminant edges, sorted by Ind
/// ascending, then Card descending, then representative key.
pub fn virtual_components(g: &FormalGraph) -> Vec<VirtualComponent> {
    let mut uf = UnionFind::new(g.len());
    for e in g.edges.iter().filter(|e| !e.flip.is_discriminant()) {
        uf.union(e.from, e.to);
    }
    let mut groups: HashMap<u32, Vec<u32>> = HashMap::new();
    for i in 0..g.len() as u32 {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let mut comps: Vec<VirtualComponent> = groups
        .into_values()
        .map(|members| VirtualComponent { card: members.len(), ind: g.nodes[members[0] as usize].ind(), members })
        .collect();
    comps.sort_by(|a, b| a.ind.cmp(&b.ind).then(b.card.cmp(&a.card)).then(a.representative().cmp(&b.representative())));
    comps
}

/// Component index of every node.
pub fn component_of(g: &FormalGraph, comps: &[VirtualComponent]) -> Vec<usize> {
    let mut out = vec![usize::MAX; g.len()];
    for (c, comp) in comps.iter().enumerate() {
        for &m in &comp.members {
            out[m as usize] = c;
        }
    }
    out
}

/// Image of each component under the class involution, if the class has one.
///
/// `None` entries mean the image of a member left the graph, which signals a
/// convention error rather than a property of the class.
pub fn involution_partners(g: &FormalGraph, comps: &[VirtualComponent]) -> Option<Vec<Option<usize>>> {
    let owner = component_of(g, comps);
    let mut out = Vec::with_capacity(comps.len());
    for c in comps {
        let rep = &g.nodes[c.representative() as usize];
        let img = rep.involution()?;
        out.push(g.index_of_state(&img).map(|i| owner[i]));
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StatsRow {
    pub class: Class,
    /// One-based position in the sorted component list.
    pub number: usize,
    pub component_id: String,
    pub ind: i64,
    pub card: usize,
    pub partner: Option<usize>,
    pub partner_id: Option<String>,
}

pub fn stats(g: &FormalGraph, comps: &[VirtualComponent]) -> Vec<StatsRow> {
    let partners = involution_partners(g, comps);
    comps
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let partner = partners.as_ref().and_then(|p| p[i]);
            StatsRow {
                class: g.class,
                number: i + 1,
                component_id: g.keys[c.representative() as usize].short_id(),
                ind: c.ind,
                card: c.card,
                partner: partner.map(|p| p + 1),
                partner_id: partner.map(|p| g.keys[comps[p].representative() as usize].short_id()),
            }
        })
        .collect()
}
