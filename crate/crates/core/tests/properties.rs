//! Property tests over random graphs, trees, markings and series.

use num_bigint::BigInt;
use proptest::prelude::*;

use p4forge::classes::{is_member, is_member_definitional, GraphClass};
use p4forge::decomposition::canonical_tree;
use p4forge::egf::ClassSeriesBundle;
use p4forge::graph::{all_labeled_graphs, count_occurrences, LabeledGraph, OccurrenceMode, PartialInjection};
use p4forge::occurrence::{bull, p4_tilde};
use p4forge::pattern::{all_patterns, pattern_counts};
use p4forge::random::RandomSource;
use p4forge::sampler::{build_tables, prime_occurrences_in_tree};
use p4forge::series::LabeledCounts;

fn graph(max_n: usize) -> impl Strategy<Value = LabeledGraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = LabeledGraph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

/// A graph with a random partial injection of its labels onto marks
/// `1..=k`.
fn marked_graph(max_n: usize) -> impl Strategy<Value = (LabeledGraph, PartialInjection)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), Just((1..=n).collect::<Vec<_>>()).prop_shuffle(), 1..=n).prop_map(|(g, labels, k)| {
            let inj = PartialInjection::new(labels.into_iter().take(k).zip(1..)).expect("injective");
            (g, inj)
        })
    })
}

fn class() -> impl Strategy<Value = GraphClass> {
    proptest::sample::select(GraphClass::ALL.to_vec())
}

fn counts(len: usize) -> impl Strategy<Value = LabeledCounts> {
    proptest::collection::vec(-50i64..50, len).prop_map(move |v| {
        LabeledCounts::from_counts(v.into_iter().map(BigInt::from).collect(), len - 1)
    })
}

/// Inclusions between the classes, smaller class first.
const INCLUSIONS: [(GraphClass, GraphClass); 7] = [
    (GraphClass::Cograph, GraphClass::Reducible),
    (GraphClass::Reducible, GraphClass::Sparse),
    (GraphClass::Reducible, GraphClass::Extendible),
    (GraphClass::Sparse, GraphClass::Lite),
    (GraphClass::Lite, GraphClass::Tidy),
    (GraphClass::Extendible, GraphClass::Tidy),
    (GraphClass::Sparse, GraphClass::Tidy),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonical_tree_round_trips(g in graph(14)) {
        let t = canonical_tree(&g).unwrap();
        prop_assert!(t.is_canonical());
        prop_assert_eq!(t.graph_of().unwrap(), g);
        prop_assert_eq!(canonical_tree(&t.graph_of().unwrap()).unwrap(), t);
    }

    #[test]
    fn flipping_the_tree_complements_the_graph(g in graph(12)) {
        let t = canonical_tree(&g).unwrap();
        prop_assert_eq!(t.flipped().graph_of().unwrap(), g.complement().unwrap());
    }

    #[test]
    fn induced_subgraph_commutes_with_complement((g, inj) in marked_graph(10)) {
        let a = g.complement().unwrap().induced_subgraph(&inj).unwrap();
        let b = g.induced_subgraph(&inj).unwrap().complement().unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn induced_subtree_commutes_with_graph_of((g, inj) in marked_graph(10)) {
        let t = canonical_tree(&g).unwrap();
        let via_tree = t.induced_subtree(&inj).unwrap().graph_of().unwrap();
        prop_assert_eq!(via_tree, g.induced_subgraph(&inj).unwrap());
    }

    #[test]
    fn recognizers_agree(g in graph(9)) {
        for class in GraphClass::ALL {
            prop_assert_eq!(is_member(&g, class).unwrap(), is_member_definitional(&g, class).unwrap(), "{}", class);
        }
    }

    #[test]
    fn class_inclusions_hold(g in graph(10)) {
        for (small, large) in INCLUSIONS {
            if is_member(&g, small).unwrap() {
                prop_assert!(is_member(&g, large).unwrap(), "{} but not {}", small, large);
            }
        }
    }

    #[test]
    fn substitution_into_a_connected_graph_is_connected(outer in graph(5), parts in proptest::collection::vec(graph(4), 5)) {
        prop_assume!(outer.order() >= 2);
        let parts = &parts[..outer.order()];
        let g = LabeledGraph::substitute(&outer, parts).unwrap();
        if outer.is_connected() {
            prop_assert!(g.is_connected());
        }
        if outer.complement().unwrap().is_connected() {
            prop_assert!(g.complement().unwrap().is_connected());
        }
    }

    #[test]
    fn occurrences_of_all_patterns_count_injections(host in graph(7), k in 1usize..=3) {
        prop_assume!(k <= host.order());
        let total: u128 = all_labeled_graphs(k)
            .map(|p| count_occurrences(&p, &host, OccurrenceMode::IgnoreBlossom).unwrap())
            .sum();
        let n = host.order() as u128;
        let falling: u128 = (0..k as u128).map(|i| n - i).product();
        prop_assert_eq!(total, falling);
    }

    #[test]
    fn labeled_products_match_series_products(a in counts(12), b in counts(12)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).to_series(), a.to_series().mul(&b.to_series()));
        prop_assert_eq!(LabeledCounts::from_series(&a.to_series()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn class_equations_hold_at_any_order(class in class(), order in 1usize..60) {
        let b = ClassSeriesBundle::new(class, order);
        let one = LabeledCounts::constant(1, order);
        prop_assert_eq!(b.t(), &b.exp_t_notplus().sub(&one));
        // T^⊕ = 1/(2 − E·(1 + P•)), so T^⊕·(2 − E·(1 + P•)) = 1.
        let e_one_pb = b.exp_t_notplus().mul(&one.add(b.p_bullet()));
        prop_assert_eq!(b.t_plus().mul(&one.scale(2).sub(&e_one_pb)), one.clone());
        prop_assert_eq!(b.t_blo(), &b.exp_t_notplus().mul(b.t_plus()));
    }

    #[test]
    fn pattern_counts_are_flip_invariant(class in class(), idx in 0usize..20) {
        let tau = &all_patterns(3).unwrap()[idx];
        let b = ClassSeriesBundle::new(class, 14);
        prop_assert_eq!(pattern_counts(tau, &b).unwrap(), pattern_counts(&tau.flipped(), &b).unwrap());
    }

    #[test]
    fn samples_are_members_with_exact_occurrence_counts(class in class(), n in 1usize..=10, seed in any::<u64>()) {
        let tables = build_tables(class, 10).unwrap();
        let mut rng = RandomSource::new(seed);
        let t = tables.sample_tree(n, &mut rng).unwrap();
        let g = t.graph_of().unwrap();
        prop_assert!(is_member(&g, class).unwrap());
        prop_assert!(is_member_definitional(&g, class).unwrap());
        for pattern in [p4_tilde(), bull()] {
            let direct = count_occurrences(&pattern, &g, OccurrenceMode::IgnoreBlossom).unwrap();
            prop_assert_eq!(prime_occurrences_in_tree(&pattern, &t).unwrap(), direct);
        }
    }

    #[test]
    fn same_seed_same_sample(class in class(), seed in any::<u64>()) {
        let tables = build_tables(class, 25).unwrap();
        let a = tables.sample_tree(25, &mut RandomSource::new(seed)).unwrap();
        let b = tables.sample_tree(25, &mut RandomSource::new(seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}
