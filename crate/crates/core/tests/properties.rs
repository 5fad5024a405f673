use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strata_core::enumerate::component_of;
use strata_core::lattice::form_invariants;
use strata_core::{
    apply_flip, available_flips, explore, seeds, virtual_components, Class, FormalGraph, IntersectionMatrix, Marker,
    MorseDatum, Sign, VirtualComponent, VirtualFunction,
};

struct Run {
    graph: FormalGraph,
    comps: Vec<VirtualComponent>,
}

fn run(name: &str) -> Run {
    let graph = explore(&[seeds::builtin_seed(name).unwrap()], 100_000).unwrap();
    let comps = virtual_components(&graph);
    Run { graph, comps }
}

fn graphs() -> &'static [Run; 2] {
    static R: OnceLock<[Run; 2]> = OnceLock::new();
    R.get_or_init(|| [run("p82-mat"), run("p81-base")])
}

fn structurally_sound(v: &VirtualFunction) -> bool {
    let mu = v.mu();
    (0..mu).all(|i| v.matrix.get(i, i) == -2 && (0..mu).all(|j| v.matrix.get(i, j) == v.matrix.get(j, i)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_walks_keep_the_lattice(second in any::<bool>(), choices in proptest::collection::vec(any::<usize>(), 0..=50)) {
        let mut v = seeds::builtin_seed(if second { "p82-mat" } else { "p81-base" }).unwrap();
        let start = form_invariants(&v.matrix);
        for c in choices {
            let flips = available_flips(&v);
            prop_assert!(!flips.is_empty());
            let f = flips[c % flips.len()];
            v = apply_flip(&v, &f).unwrap();
            prop_assert!(structurally_sound(&v), "after {f}");
            prop_assert_eq!(form_invariants(&v.matrix), start, "after {}", f);
            prop_assert!(v.is_valid(), "after {f}: {:?}", v.validate());
        }
    }
}

#[test]
fn every_flip_is_undone_by_its_inverse() {
    let states = graphs().iter().flat_map(|r| r.graph.nodes.iter()).take(10_000);
    let mut checked = 0usize;
    for v in states {
        let v = v.canonicalize();
        for f in available_flips(&v) {
            let w = apply_flip(&v, &f).unwrap();
            let back = apply_flip(&w, &f.inverse(&v)).unwrap_or_else(|e| panic!("{f} then {}: {e}", f.inverse(&v)));
            assert_eq!(back.canonicalize(), v, "{f}");
            checked += 1;
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn ind_changes_only_across_the_discriminant() {
    for r in graphs() {
        let g = &r.graph;
        for e in &g.edges {
            let (a, b) = (g.nodes[e.from as usize].ind(), g.nodes[e.to as usize].ind());
            if e.flip.is_discriminant() {
                assert_eq!((a - b).abs(), 1, "{}", e.flip);
            } else {
                assert_eq!(a, b, "{}", e.flip);
            }
        }
        assert!(g.nodes.iter().all(|v| (-3..=1).contains(&v.ind())));
    }
}

#[test]
fn minus_involution_pairs_components_of_equal_ind_and_card() {
    for r in graphs() {
        let owner = component_of(&r.graph, &r.comps);
        for (i, v) in r.graph.nodes.iter().enumerate() {
            let m = v.involution_minus().unwrap();
            assert_eq!(m.involution_minus().unwrap(), v.canonicalize());
            assert_eq!(m.ind(), v.ind());
            let j = r.graph.index_of_state(&m).expect("image stays in the graph");
            assert_eq!(r.comps[owner[j]].card, r.comps[owner[i]].card);
        }
    }
}

/// `reals` positive saddles, pairwise orthogonal, real `i` meeting both cycles
/// of pair `i`; consecutive pairs are chained upper to upper, lower to lower.
fn synthetic(class: Class, reals: usize) -> VirtualFunction {
    let mu = class.mu();
    let pairs = (mu - reals) / 2;
    let saddle = Marker::Real { sign: Sign::Plus, morse: MorseDatum::Index(1) };
    let mut markers = vec![saddle; reals];
    markers.extend(vec![Marker::Pair; pairs]);
    let mut rows = vec![vec![0i64; mu]; mu];
    let mut link = |a: usize, b: usize| {
        rows[a][b] = 1;
        rows[b][a] = 1;
    };
    let (upper, lower) = (|i: usize| reals + 2 * i, |i: usize| reals + 2 * i + 1);
    for i in 0..reals {
        link(i, upper(i));
        link(i, lower(i));
    }
    for i in 1..pairs {
        link(upper(i - 1), upper(i));
        link(lower(i - 1), lower(i));
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = -2;
    }
    VirtualFunction { class, markers, zero_position: 0, matrix: IntersectionMatrix::from_rows(rows).unwrap() }
}

/// Checks `check(v, image)` along 200 random walks of 40 flips from `seed`.
fn along_walks(
    seed: &VirtualFunction,
    involution: impl Fn(&VirtualFunction) -> VirtualFunction,
    check: impl Fn(&VirtualFunction, &VirtualFunction),
) {
    assert!(seed.is_valid(), "{:?}", seed.validate());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let mut v = seed.clone();
        for _ in 0..40 {
            let m = involution(&v);
            assert!(m.is_valid(), "{:?} from {:?}", m.validate(), v.markers);
            assert_eq!(involution(&m), v.canonicalize());
            check(&v, &m);
            let flips = available_flips(&v);
            v = apply_flip(&v, &flips[rng.gen_range(0..flips.len())]).unwrap();
        }
    }
}

#[test]
fn ze_involution_reflects_ind_about_minus_three_halves() {
    let seed = synthetic(Class::X9Two, 3);
    assert_eq!(seed.euler(), -3);
    along_walks(&seed, |v| v.involution_ze().unwrap(), |v, m| assert_eq!(m.ind(), -3 - v.ind()));
    assert!(seed.involution_minus().is_err());
}

#[test]
fn x91_involution_pairs_ind_values_summing_to_minus_one() {
    let seed = synthetic(Class::X9One, 1);
    along_walks(&seed, |v| v.involution_x91().unwrap(), |v, m| assert_eq!(v.ind() + m.ind(), -1));
    assert!(seed.involution_ze().is_err());
}
