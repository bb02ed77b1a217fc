mod common;

use common::rat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use potts_core::chromatic::exact_count_oracle;
use potts_core::graph::{generate_family, FamilyKind, PartiallyColoredGraph};
use potts_core::interpolation::*;
use potts_core::poly::WPolynomial;
use potts_core::potts::partition_poly;
use potts_core::zeros::report_for_poly;
use potts_core::PottsError;
use proptest::prelude::*;

fn ln_p(p: &WPolynomial, w: f64) -> f64 {
    p.eval_complex(num_complex::Complex64::new(w, 0.0)).re.ln()
}

#[test]
fn triangle_and_petersen_counts() {
    for (kind, q) in [(FamilyKind::Clique { n: 3 }, 6), (FamilyKind::Petersen, 6)] {
        let g = generate_family(&kind, q).unwrap();
        let exact = exact_count_oracle(&g).unwrap();
        let e = approx_count_colorings(&g, 0.01).unwrap().with_exact(&exact);
        assert!(e.eps_achieved <= 0.01);
        assert!(e.log_error().unwrap() <= e.eps_achieved, "{e:?}");
    }
}

#[test]
fn plan_for_a_known_margin() {
    // Roots at -1/5, -5, -6.
    let p = &(&WPolynomial::from_i64s(&[1, 5]) * &WPolynomial::from_i64s(&[5, 1])) * &WPolynomial::from_i64s(&[6, 1]);
    let report = report_for_poly(String::new(), 0, &p);
    assert!((report.min_dist() - 0.2).abs() < 1e-12);
    let plan = choose_plan(&report, 0.01).unwrap();
    assert_eq!(plan.steps(), 10);
    assert!(plan.error_bound <= 0.01);
    let smaller = choose_plan(&report, 0.01).map(|p| p.order).unwrap();
    assert!(choose_plan(&report, 0.005).unwrap().order >= smaller);
}

#[test]
fn plan_without_roots() {
    let report = report_for_poly(String::new(), 3, &WPolynomial::constant(27));
    let plan = choose_plan(&report, 0.01).unwrap();
    assert_eq!((plan.steps(), plan.order, plan.error_bound), (1, 0, 0.0));
}

#[test]
fn root_on_the_interval_refuses() {
    let report = report_for_poly(String::new(), 0, &WPolynomial::from_i64s(&[-1, 2]));
    assert!(matches!(choose_plan(&report, 0.1), Err(PottsError::CannotInterpolate(_))));
}

#[test]
fn intermediate_target() {
    let g = generate_family(&FamilyKind::Cycle { n: 6 }, 3).unwrap();
    let target = rat(1, 3);
    let e = approx_partition_at(&g, &target, 1e-6).unwrap();
    let exact = partition_poly(&g).unwrap().eval_rational(&target).to_f64().unwrap();
    assert!((e.log_xi - exact.ln()).abs() <= e.eps_achieved.max(1e-12));
    assert!(approx_partition_at(&g, &rat(3, 2), 0.1).is_err());
}

#[test]
fn repeated_runs_are_bit_identical() {
    let g = generate_family(&FamilyKind::Petersen, 6).unwrap();
    let a = approx_count_colorings(&g, 0.01).unwrap();
    let b = approx_count_colorings(&g, 0.01).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.log_xi.to_bits(), b.log_xi.to_bits());
}

#[test]
fn no_proper_coloring() {
    let g = PartiallyColoredGraph::new(4, 3, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let e = approx_count_colorings(&g, 0.01).unwrap();
    assert!(e.exact_zero);
    assert_eq!(exact_count_oracle(&g).unwrap(), BigInt::from(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivatives_match_finite_differences(coeffs in proptest::collection::vec(1i64..30, 2..6), k in 1i64..=4) {
        let p = WPolynomial::from_i64s(&coeffs);
        let w0 = k as f64 / 4.0;
        let d = log_derivatives_at(&p, &rat(k, 4), 2).unwrap();
        // Five-point stencils.
        let h = 1e-3;
        let f = |k: f64| ln_p(&p, w0 + k * h);
        let first = (f(-2.0) - 8.0 * f(-1.0) + 8.0 * f(1.0) - f(2.0)) / (12.0 * h);
        let second = (-f(-2.0) + 16.0 * f(-1.0) - 30.0 * f(0.0) + 16.0 * f(1.0) - f(2.0)) / (12.0 * h * h);
        prop_assert!((d[0].to_f64().unwrap() - first).abs() < 1e-8);
        prop_assert!((d[1].to_f64().unwrap() - second).abs() < 1e-4);
    }

    #[test]
    fn looser_eps_never_needs_more(coeffs in proptest::collection::vec(1i64..30, 2..8), e in 1e-6f64..0.1) {
        let report = report_for_poly(String::new(), 0, &WPolynomial::from_i64s(&coeffs));
        if let (Ok(tight), Ok(loose)) = (choose_plan(&report, e), choose_plan(&report, 2.0 * e)) {
            prop_assert!(loose.steps() <= tight.steps() && loose.order <= tight.order);
        }
    }

    #[test]
    fn steps_respect_the_contraction(coeffs in proptest::collection::vec(1i64..30, 2..8)) {
        let report = report_for_poly(String::new(), 0, &WPolynomial::from_i64s(&coeffs));
        if let Ok(plan) = choose_plan(&report, 0.01) {
            for (pair, r) in plan.anchors.windows(2).zip(&plan.radii) {
                let h: f64 = (&pair[0] - &pair[1]).to_f64().unwrap();
                prop_assert!(h <= RHO * r + 1e-15);
            }
            prop_assert_eq!(plan.anchors.last().unwrap(), &BigRational::from_integer(0.into()));
        }
    }
}
