mod common;

use common::{brute_partition, brute_restricted, rat, small_graph};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use potts_core::chromatic::exact_count_oracle;
use potts_core::graph::{canonical_code, parse_edge_list, to_edge_list, PartiallyColoredGraph, RootedGraph};
use potts_core::potts::{
    marginal, partition_poly, partition_poly_with_budget, restricted_partition_polys, root_marginals,
};
use potts_core::PottsError;
use proptest::prelude::*;

#[test]
fn k3_at_six_colors() {
    let g = PartiallyColoredGraph::new(3, 6, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let p = partition_poly(&g).unwrap();
    assert_eq!(p.coeffs(), &[120, 90, 0, 6].map(BigInt::from));
    assert_eq!(p.eval_rational(&BigRational::one()), BigRational::from_integer(216.into()));
}

#[test]
fn budget_is_enforced() {
    let g = PartiallyColoredGraph::new(12, 6, (0..11).map(|i| (i, i + 1))).unwrap();
    assert!(matches!(partition_poly_with_budget(&g, 1000), Err(PottsError::BudgetExceeded { .. })));
}

#[test]
fn pinned_clash_gives_zero_count() {
    let g = PartiallyColoredGraph::from_parts(3, 3, [(0, 1), (1, 2)], [(0, 1), (1, 1)]).unwrap();
    assert!(partition_poly(&g).unwrap().eval_rational(&BigRational::zero()).is_zero());
    assert_eq!(exact_count_oracle(&g).unwrap(), BigInt::zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_matches_brute_force(g in small_graph(6, 2..=5)) {
        prop_assert_eq!(partition_poly(&g).unwrap(), brute_partition(&g));
    }

    #[test]
    fn restricted_parts_match_brute_force(g in small_graph(5, 2..=5)) {
        let rg = RootedGraph::new(g.clone(), 0).unwrap();
        let parts = restricted_partition_polys(&rg).unwrap();
        let total = parts.iter().fold(potts_core::poly::WPolynomial::zero(), |acc, p| &acc + p);
        prop_assert_eq!(&total, &partition_poly(&g).unwrap());
        for (j, p) in parts.iter().enumerate() {
            prop_assert_eq!(p, &brute_restricted(&g, 0, j + 1));
        }
    }

    #[test]
    fn value_at_one_is_a_power_of_q(g in small_graph(7, 2..=6)) {
        let z = partition_poly(&g).unwrap().eval_rational(&BigRational::one());
        let expect = num_traits::pow(BigInt::from(g.q()), g.free_count());
        prop_assert_eq!(z, BigRational::from_integer(expect));
    }

    #[test]
    fn value_at_zero_counts_proper_colorings(g in small_graph(6, 2..=5)) {
        let z = partition_poly(&g).unwrap().eval_rational(&BigRational::zero());
        prop_assert_eq!(z, BigRational::from_integer(exact_count_oracle(&g).unwrap()));
    }

    #[test]
    fn marginals_are_a_distribution(g in small_graph(6, 2..=5), k in 1i64..=4) {
        let w = rat(k, 4);
        let rg = RootedGraph::new(g, 0).unwrap();
        let m = root_marginals(&rg, &w).unwrap();
        prop_assert!(m.iter().all(|p| *p >= BigRational::zero()));
        prop_assert_eq!(m.iter().sum::<BigRational>(), BigRational::one());
        prop_assert_eq!(&m[0], &marginal(rg.graph(), &w, 0, 1).unwrap());
    }

    #[test]
    fn relabeling_colors_permutes_marginals(g in small_graph(5, 3..=5), shift in 1usize..5) {
        let q = g.q();
        let map: Vec<usize> = (0..q).map(|c| (c + shift) % q + 1).collect();
        let h = g.relabel_colors(&map).unwrap();
        prop_assert_eq!(partition_poly(&g).unwrap(), partition_poly(&h).unwrap());
        let w = rat(1, 3);
        let before = root_marginals(&RootedGraph::new(g, 0).unwrap(), &w).unwrap();
        let after = root_marginals(&RootedGraph::new(h, 0).unwrap(), &w).unwrap();
        for c in 0..q {
            prop_assert_eq!(&before[c], &after[map[c] - 1]);
        }
    }

    #[test]
    fn pin_to_leaves_keeps_the_polynomial(g in small_graph(6, 2..=5)) {
        let h = g.pin_to_leaves();
        prop_assert_eq!(partition_poly(&g).unwrap(), partition_poly(&h).unwrap());
        prop_assert!((0..h.n()).all(|v| h.is_free(v) || h.degree(v) <= 1));
    }

    #[test]
    fn edge_lists_round_trip(g in small_graph(8, 1..=7)) {
        let text = to_edge_list(&g);
        let back = parse_edge_list(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(to_edge_list(&back), text);
    }

    #[test]
    fn canonical_code_ignores_vertex_order(g in small_graph(6, 2..=4), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        let pins: Vec<(usize, usize)> = (0..g.n()).filter_map(|v| g.pin(v).map(|c| (perm[v], c))).collect();
        let h = PartiallyColoredGraph::from_parts(g.n(), g.q(), edges, pins).unwrap();
        prop_assert_eq!(canonical_code(&g), canonical_code(&h));
    }
}
