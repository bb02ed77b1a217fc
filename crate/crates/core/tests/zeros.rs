mod common;

use common::{rat, small_graph};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use potts_core::graph::{enumerate_graphs, PartiallyColoredGraph, PinPolicy};
use potts_core::poly::{GaussianRational, WPolynomial};
use potts_core::potts::partition_poly;
use potts_core::zeros::*;
use proptest::prelude::*;

#[test]
fn triangle_roots_at_six_colors() {
    let g = PartiallyColoredGraph::new(3, 6, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let r = roots_in_w(&g).unwrap();
    assert_eq!(r.degree, 3);
    assert!(r.degree_check && r.residuals_ok());
    assert!(r.min_dist() > 0.0);
    for root in &r.roots {
        let z = root.value();
        let value = Complex64::new(120.0, 0.0) + 90.0 * z + 6.0 * z * z * z;
        assert!(value.norm() < 1e-9, "{z}");
    }
}

#[test]
fn rounded_root_gets_a_definite_verdict() {
    let g = PartiallyColoredGraph::new(3, 6, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let r = roots_in_w(&g).unwrap();
    for root in &r.roots {
        let wt = GaussianRational::round_to_dyadic(root.value(), 16).unwrap();
        let z = partition_poly(&g).unwrap().eval_gaussian(&wt);
        assert_eq!(certify_nonvanishing(&g, &wt).unwrap(), !z.is_zero());
        assert!(z.to_complex().norm() < 1e-2);
    }
}

#[test]
fn nonvanishing_near_the_middle_of_the_interval() {
    let wt = GaussianRational::new(rat(1, 2), rat(1, 1000));
    for g in enumerate_graphs(6, 3, 6, PinPolicy::SinglePin) {
        assert!(certify_nonvanishing(&g, &wt).unwrap());
        assert!(certify_nonvanishing(&g, &GaussianRational::from_integer(1.into())).unwrap());
    }
}

#[test]
fn exploratory_scan_is_flagged() {
    let graphs = enumerate_graphs(5, 3, 4, PinPolicy::None);
    let s = zero_free_scan(&graphs, 4, 3).unwrap();
    assert!(s.exploratory);
    assert_eq!(s.graphs, graphs.len());
    let s = zero_free_scan(&graphs, 6, 3).unwrap();
    assert!(!s.exploratory && s.margin_positive() && s.all_degree_checks);
}

#[test]
fn clique_table_has_a_slope() {
    let table = clique_margins(&[3, 4, 5]).unwrap();
    assert!(table.iter().all(|c| c.margin > 0.0 && c.q == 2 * c.delta));
    assert!(log_log_slope(&table).unwrap().is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn roots_are_complete_and_conjugate_symmetric(g in small_graph(7, 2..=6)) {
        let r = roots_in_w(&g).unwrap();
        prop_assert!(r.degree_check);
        prop_assert!(r.residuals_ok(), "{r:?}");
        for a in &r.roots {
            let conj = a.value().conj();
            prop_assert!(r.roots.iter().any(|b| (b.value() - conj).norm() < 1e-10));
        }
    }

    #[test]
    fn positive_on_the_half_open_interval(g in small_graph(7, 2..=6), k in 1i64..=16) {
        // Nonnegative coefficients with Z(1) > 0 force Z > 0 on (0, 1].
        let p = partition_poly(&g).unwrap();
        prop_assert!(p.coeffs().iter().all(|c| !c.is_negative()));
        prop_assert!(p.eval_rational(&rat(k, 16)) > BigRational::zero());
        let r = roots_in_w(&g).unwrap();
        for root in &r.roots {
            let z = root.value();
            prop_assert!(!(z.im == 0.0 && z.re > 0.0 && z.re <= 1.0), "{z}");
        }
    }

    #[test]
    fn distance_is_zero_exactly_on_the_segment(re in -2.0f64..3.0, im in -2.0f64..2.0) {
        let d = distance_to_unit_interval(Complex64::new(re, im));
        prop_assert!(d >= im.abs());
        prop_assert_eq!(d == 0.0, im == 0.0 && (0.0..=1.0).contains(&re));
    }
}

#[test]
fn linear_partition_function_distance() {
    let r = report_for_poly(String::new(), 3, &WPolynomial::from_i64s(&[6, 3]));
    assert!((r.min_dist() - 2.0).abs() < 1e-12);
}
