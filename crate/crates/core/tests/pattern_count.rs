mod common;

use common::{brute_force_copies, in_scope_patterns, random_graph};
use proptest::prelude::*;
use ramsey_cema::graph::{EdgeColoring, SimpleGraph};
use ramsey_cema::pattern::{binomial, reward, GenericCounter, PatternGraph, SubgraphCounter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn worked_examples() {
    let k = |q| SimpleGraph::complete(q).unwrap();
    assert_eq!(PatternGraph::book(2).unwrap().count(&k(4)).unwrap(), 6);
    assert_eq!(
        brute_force_copies(&PatternGraph::book(2).unwrap().graph(), &k(4)),
        6
    );
    assert_eq!(PatternGraph::wheel(5).unwrap().count(&k(5)).unwrap(), 15);
    assert_eq!(
        brute_force_copies(&PatternGraph::wheel(5).unwrap().graph(), &k(5)),
        15
    );
    assert_eq!(
        PatternGraph::complete_bipartite(2, 5)
            .unwrap()
            .count(&k(7))
            .unwrap(),
        21
    );
    assert_eq!(PatternGraph::clique(3).unwrap().count(&k(6)).unwrap(), 20);
    let generic_k3 = GenericCounter::new(k(3), "K3").unwrap();
    assert_eq!(generic_k3.count(&k(6)).unwrap(), 20);
}

#[test]
fn each_pattern_counts_itself_once() {
    for p in in_scope_patterns() {
        assert_eq!(p.count(&p.graph()).unwrap(), 1, "{p}");
        assert_eq!(p.graph().edge_count(), p.edge_count(), "{p}");
        assert_eq!(p.graph().n(), p.vertex_count(), "{p}");
    }
}

#[test]
fn family_automorphisms_match_permutation_check() {
    for p in in_scope_patterns() {
        let generic = GenericCounter::new(p.graph(), p.spec()).unwrap();
        assert_eq!(p.automorphisms(), generic.automorphisms(), "{p}");
    }
}

#[test]
fn closed_forms_on_complete_hosts() {
    let fact = |k: u64| (1..=k).product::<u64>();
    for q in 1..=9u64 {
        let host = SimpleGraph::complete(q as usize).unwrap();
        for p in 2..=6u64 {
            let pat = PatternGraph::book(p as usize).unwrap();
            let closed = binomial(q, 2).unwrap() * binomial(q.saturating_sub(2), p).unwrap();
            assert_eq!(pat.count(&host).unwrap(), closed, "B{p} in K{q}");
            assert_eq!(
                brute_force_copies(&pat.graph(), &host),
                closed,
                "B{p} in K{q}"
            );
        }
        for (s, t) in [(1, 2), (1, 4), (2, 3), (2, 5), (3, 5), (2, 6)] {
            let pat = PatternGraph::complete_bipartite(s as usize, t as usize).unwrap();
            let closed = binomial(q, s).unwrap() * binomial(q - s.min(q), t).unwrap();
            assert_eq!(pat.count(&host).unwrap(), closed, "K{s},{t} in K{q}");
            assert_eq!(
                brute_force_copies(&pat.graph(), &host),
                closed,
                "K{s},{t} in K{q}"
            );
        }
        for w in 5..=8u64 {
            let pat = PatternGraph::wheel(w as usize).unwrap();
            let closed = if q == 0 {
                0
            } else {
                q * binomial(q - 1, w - 1).unwrap() * fact(w - 2) / 2
            };
            assert_eq!(pat.count(&host).unwrap(), closed, "W{w} in K{q}");
            assert_eq!(
                brute_force_copies(&pat.graph(), &host),
                closed,
                "W{w} in K{q}"
            );
        }
    }
}

#[test]
fn specialized_counters_match_generic_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let patterns = in_scope_patterns();
    let oracles: Vec<GenericCounter> = patterns
        .iter()
        .map(|p| GenericCounter::new(p.graph(), p.spec()).unwrap())
        .collect();
    for _ in 0..500 {
        let n = rng.gen_range(1..=10);
        let density = rng.gen_range(0.3..0.95);
        let g = random_graph(n, density, &mut rng);
        for (p, oracle) in patterns.iter().zip(&oracles) {
            assert_eq!(
                p.count(&g).unwrap(),
                oracle.count(&g).unwrap(),
                "{p} on {g:?}"
            );
            assert_eq!(
                p.find_copy(&g).is_some(),
                oracle.find_copy(&g).is_some(),
                "{p} on {g:?}"
            );
        }
    }
}

#[test]
fn book_matches_generic_on_gnp() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let b3 = PatternGraph::book(3).unwrap();
    let oracle = GenericCounter::new(b3.graph(), "B3").unwrap();
    for _ in 0..100 {
        let g = random_graph(10, 0.5, &mut rng);
        assert_eq!(b3.count(&g).unwrap(), oracle.count(&g).unwrap());
    }
}

#[test]
fn brute_force_agrees_on_small_random_hosts() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let patterns = in_scope_patterns();
    for _ in 0..20 {
        let g = random_graph(7, 0.7, &mut rng);
        for p in &patterns {
            assert_eq!(
                p.count(&g).unwrap(),
                brute_force_copies(&p.graph(), &g),
                "{p}"
            );
        }
    }
}

#[test]
fn host_smaller_than_pattern() {
    for p in in_scope_patterns() {
        let host = SimpleGraph::complete(p.vertex_count() - 1).unwrap();
        assert_eq!(p.count(&host).unwrap(), 0, "{p}");
        assert!(p.find_copy(&host).is_none());
    }
}

#[test]
fn witnesses_are_genuine_copies() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let g = random_graph(9, 0.75, &mut rng);
        for p in in_scope_patterns() {
            if let Some(vs) = p.find_copy(&g) {
                assert!(vs.windows(2).all(|w| w[0] < w[1]));
                assert!(p.is_copy_on(&g, &vs).unwrap(), "{p}: {vs:?}");
            } else {
                assert_eq!(p.count(&g).unwrap(), 0);
            }
        }
    }
}

fn graph_strategy() -> impl Strategy<Value = SimpleGraph> {
    (1usize..=10).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = SimpleGraph::empty(n).unwrap();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        g.add_edge(i, j);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn permutation_of(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn counts_are_relabeling_invariant(
        (g, perm) in graph_strategy().prop_flat_map(|g| { let n = g.n(); (Just(g), permutation_of(n)) })
    ) {
        let h = g.relabel(&perm).unwrap();
        for p in in_scope_patterns() {
            prop_assert_eq!(p.count(&g).unwrap(), p.count(&h).unwrap());
        }
    }

    #[test]
    fn adding_an_edge_never_lowers_counts(g in graph_strategy(), a in 0usize..10, b in 0usize..10) {
        let n = g.n();
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let mut bigger = g.clone();
        bigger.add_edge(a, b);
        for p in in_scope_patterns() {
            prop_assert!(p.count(&bigger).unwrap() >= p.count(&g).unwrap());
        }
    }

    #[test]
    fn two_color_reward_via_complement(g in graph_strategy(), pair in 0usize..3) {
        let specs = [["K3", "K3"], ["B2", "W5"], ["K2,5", "K4"]][pair];
        let pats: Vec<PatternGraph> = specs.iter().map(|s| PatternGraph::parse(s).unwrap()).collect();
        let n = g.n();
        let colors: Vec<u8> = ramsey_cema::graph::edge_pairs(n).map(|(i, j)| u8::from(g.has_edge(i, j))).collect();
        let c = EdgeColoring::from_colors(n, 2, colors).unwrap();
        prop_assert_eq!(c.monochrome_graph(1).unwrap(), g.clone());
        prop_assert_eq!(c.monochrome_graph(0).unwrap(), g.complement());
        let r = reward(&c, &pats).unwrap();
        let direct = pats[0].count(&g.complement()).unwrap() + pats[1].count(&g).unwrap();
        prop_assert_eq!(r.total, direct);
        prop_assert_eq!(r.total, r.per_color.iter().sum::<u64>());
    }
}
