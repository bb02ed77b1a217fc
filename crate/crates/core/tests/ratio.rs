mod common;

use common::rat;
use num_complex::Complex64;
use num_rational::BigRational;
use potts_core::graph::{enumerate_graphs, PinPolicy, RootedGraph};
use potts_core::potts::ratio_vector_exact;
use potts_core::ratio::{f_value, grad_f, grad_from_exp, hat_transform, inner_product_bound, marginal_difference};
use potts_core::PottsError;
use proptest::prelude::*;

fn rooted_family(n_max: usize, delta: usize, q: usize) -> Vec<RootedGraph> {
    enumerate_graphs(n_max, delta, q, PinPolicy::AllPatterns)
        .into_iter()
        .flat_map(|g| {
            let roots: Vec<usize> = g.free_vertices().collect();
            roots.into_iter().map(move |v| RootedGraph::new(g.clone(), v).unwrap())
        })
        .filter(|rg| rg.in_class(delta))
        .collect()
}

#[test]
fn gradient_equals_marginal_difference() {
    let q = 4;
    let mut checked = 0;
    for rg in rooted_family(5, 3, q) {
        let c = rg.blocked_color_vector().counts().to_vec();
        for w in [rat(0, 1), rat(1, 3), rat(1, 2), rat(1, 1)] {
            let Ok(e) = ratio_vector_exact(&rg.strip_pinned_neighbors(), &w, q) else { continue };
            let grad = match grad_from_exp(&w, &c, &e) {
                Err(PottsError::Pole) => continue,
                other => other.unwrap(),
            };
            assert_eq!(grad, marginal_difference(&rg, &w).unwrap().entries, "{rg:?} at {w}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn inner_product_bound_on_sampled_directions() {
    let dirs = [
        vec![Complex64::new(0.3, 0.0), Complex64::new(-0.2, 0.0), Complex64::new(0.1, 0.0)],
        vec![Complex64::new(0.05, 0.3), Complex64::new(-0.4, 0.1), Complex64::new(0.0, -0.2)],
    ];
    for rg in rooted_family(5, 3, 4) {
        for w in [rat(0, 1), rat(1, 2), rat(9, 10)] {
            for x in &dirs {
                let Ok(b) = inner_product_bound(&rg, &w, x) else { continue };
                assert!(b.lhs <= b.rhs + 1e-12, "{rg:?} at {w}: {b:?}");
            }
        }
    }
}

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| Complex64::new(a, b)), len)
}

proptest! {
    #[test]
    fn hat_is_an_involution(x in complex_vec(5)) {
        let back = hat_transform(&hat_transform(&x));
        for (a, b) in back.iter().zip(&x) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences(
        x in proptest::collection::vec(-1.0f64..1.0, 4),
        c in proptest::collection::vec(0u32..3, 5),
        w in 0.05f64..1.0,
    ) {
        let wt = Complex64::new(w, 0.0);
        let xs: Vec<Complex64> = x.iter().map(|&a| Complex64::new(a, 0.0)).collect();
        let g = grad_f(wt, &c, &xs).unwrap();
        let h = 1e-6;
        for k in 0..xs.len() {
            let mut up = xs.clone();
            let mut down = xs.clone();
            up[k] += h;
            down[k] -= h;
            let fd = (f_value(wt, &c, &up).unwrap() - f_value(wt, &c, &down).unwrap()) / (2.0 * h);
            prop_assert!((fd - g[k]).norm() < 1e-6, "k = {k}: {fd} vs {}", g[k]);
        }
    }

    #[test]
    fn exact_gradient_agrees_with_float(
        num in proptest::collection::vec(1i64..20, 3),
        c in proptest::collection::vec(0u32..3, 4),
        wk in 0i64..=6,
    ) {
        let w = rat(wk, 6);
        let e: Vec<BigRational> = num.iter().map(|&a| rat(a, 7)).collect();
        let exact = grad_from_exp(&w, &c, &e);
        prop_assume!(exact != Err(PottsError::Pole));
        let exact = exact.unwrap();
        let xs: Vec<Complex64> = num.iter().map(|&a| Complex64::new((a as f64 / 7.0).ln(), 0.0)).collect();
        let float = grad_f(Complex64::new(wk as f64 / 6.0, 0.0), &c, &xs).unwrap();
        for (a, b) in exact.iter().zip(&float) {
            let a: f64 = num_traits::ToPrimitive::to_f64(a).unwrap();
            prop_assert!((a - b.re).abs() < 1e-12 && b.im.abs() < 1e-12);
        }
    }
}
