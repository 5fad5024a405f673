use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::OnceLock;

use strata_core::enumerate::{component_of, involution_partners, stats, virtual_components};
use strata_core::query::{filter_vf, Condition, Predicate};
use strata_core::{apply_flip, explore, seeds, successors, Class, FormalGraph, Parity, Side, VirtualComponent};

struct Run {
    graph: FormalGraph,
    comps: Vec<VirtualComponent>,
}

fn run(name: &str) -> Run {
    let seed = seeds::builtin_seed(name).unwrap();
    let graph = explore(&[seed], 100_000).unwrap();
    let comps = virtual_components(&graph);
    Run { graph, comps }
}

fn p82() -> &'static Run {
    static R: OnceLock<Run> = OnceLock::new();
    R.get_or_init(|| run("p82-mat"))
}

fn p81() -> &'static Run {
    static R: OnceLock<Run> = OnceLock::new();
    R.get_or_init(|| run("p81-base"))
}

#[test]
fn p82_table() {
    let r = p82();
    assert_eq!(r.graph.len(), 9174);
    let card: Vec<usize> = r.comps.iter().map(|c| c.card).collect();
    let ind: Vec<i64> = r.comps.iter().map(|c| c.ind).collect();
    assert_eq!(card, [258, 156, 60, 60, 1216, 336, 336, 1318, 844, 844, 1648, 1648, 262, 94, 94]);
    assert_eq!(ind, [-3, -3, -3, -3, -2, -2, -2, -1, -1, -1, 0, 0, 1, 1, 1]);
}

#[test]
fn p82_partners_pair_equal_cards() {
    let r = p82();
    let partners: Vec<usize> =
        involution_partners(&r.graph, &r.comps).unwrap().into_iter().map(|p| p.unwrap() + 1).collect();
    assert_eq!(partners, [1, 2, 4, 3, 5, 7, 6, 8, 10, 9, 12, 11, 13, 15, 14]);
}

#[test]
fn p81_table() {
    let r = p81();
    assert_eq!(r.graph.len(), 6503);
    let mut ind: Vec<i64> = r.comps.iter().map(|c| c.ind).collect();
    ind.sort();
    assert_eq!(ind, [-3, -3, -2, -1, 0, 1, 1]);
    let rows = stats(&r.graph, &r.comps);
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|row| row.class == Class::P8One && row.partner.is_some()));
}

#[test]
fn naive_closure_agrees() {
    let seed = seeds::builtin_seed("p81-base").unwrap();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([seed.canonicalize()]);
    seen.insert(queue[0].state_key().unwrap());
    let mut undirected: BTreeMap<_, Vec<_>> = BTreeMap::new();
    while let Some(v) = queue.pop_front() {
        let k = v.state_key().unwrap();
        for (f, w) in successors(&v) {
            let wk = w.state_key().unwrap();
            if !f.is_discriminant() {
                undirected.entry(k.clone()).or_default().push(wk.clone());
            }
            if seen.insert(wk) {
                queue.push_back(w);
            }
        }
    }
    let r = p81();
    assert_eq!(seen.len(), r.graph.len());
    assert!(seen.iter().zip(&r.graph.keys).all(|(a, b)| a == b));
    let mut comp = BTreeMap::new();
    let mut count = 0;
    for start in &seen {
        if comp.contains_key(start) {
            continue;
        }
        let mut stack = vec![start.clone()];
        comp.insert(start.clone(), count);
        while let Some(k) = stack.pop() {
            for n in undirected.get(&k).into_iter().flatten() {
                if !comp.contains_key(n) {
                    comp.insert(n.clone(), count);
                    stack.push(n.clone());
                }
            }
        }
        count += 1;
    }
    assert_eq!(count, r.comps.len());
}

#[test]
fn closure_and_edge_symmetry() {
    let r = p81();
    let edges: BTreeSet<(u32, u32)> = r.graph.edges.iter().map(|e| (e.from, e.to)).collect();
    for e in &r.graph.edges {
        assert!(edges.contains(&(e.to, e.from)), "{e:?} has no reverse");
        let v = &r.graph.nodes[e.from as usize];
        let w = apply_flip(v, &e.flip).unwrap();
        assert_eq!(r.graph.index_of_state(&w), Some(e.to as usize));
    }
}

#[test]
fn exploration_is_schedule_independent() {
    let seed = seeds::builtin_seed("p81-base").unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let g1 = single.install(|| explore(std::slice::from_ref(&seed), 100_000).unwrap());
    let g2 = explore(&[seed.involution().unwrap(), seed], 100_000).unwrap();
    assert_eq!(g1.keys, g2.keys);
    assert_eq!(g1.edges, g2.edges);
    assert_eq!(g1.keys, p81().graph.keys);
}

#[test]
fn fig7_seed_lies_in_the_card_258_component() {
    let r = p82();
    let owner = component_of(&r.graph, &r.comps);
    let v = seeds::builtin_seed("p82-fig7-e258").unwrap();
    let i = r.graph.index_of_state(&v).expect("in the P8^2 graph");
    assert_eq!(r.comps[owner[i]].card, 258);
}

#[test]
fn card_60_and_156_states_carry_a_double_entry() {
    let r = p82();
    let owner = component_of(&r.graph, &r.comps);
    for (i, v) in r.graph.nodes.iter().enumerate() {
        let card = r.comps[owner[i]].card;
        let mu = v.mu();
        let double = (0..mu).any(|a| (0..mu).any(|b| a != b && v.matrix.get(a, b).abs() == 2));
        if card == 60 || card == 156 {
            assert!(double, "state {i} in Card {card} has no entry of absolute value 2");
        }
    }
    let fig7 = seeds::builtin_seed("p82-fig7-e258").unwrap();
    assert!((0..8).all(|a| (0..8).all(|b| a == b || fig7.matrix.get(a, b).abs() <= 1)));
}

#[test]
fn six_real_point_chain() {
    let g = &p82().graph;
    let six = Predicate { name: "six".into(), all: vec![Condition::RealCount { count: 6 }] };
    let minimum = six.and(Condition::HasMinimum);
    let four_two = minimum.and(Condition::SideCount { side: Side::Negative, count: 4 });
    let even_above = four_two.and(Condition::SideParity { side: Side::Positive, parity: Parity::Even });
    let counts: Vec<usize> =
        [&six, &minimum, &four_two, &even_above].iter().map(|p| filter_vf(g, p).unwrap().len()).collect();
    assert_eq!(counts, [1897, 140, 20, 12]);
    for i in filter_vf(g, &even_above).unwrap() {
        assert_eq!(g.nodes[i].matrix.get(6, 7), 1);
    }
}

#[test]
fn budget_is_enforced() {
    let seed = seeds::builtin_seed("p81-base").unwrap();
    assert!(explore(&[seed], 100).is_err());
}
