#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use potts_core::graph::PartiallyColoredGraph;
use potts_core::poly::WPolynomial;
use proptest::prelude::*;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Visits every full coloring that agrees with the pins.
pub fn for_each_coloring(g: &PartiallyColoredGraph, mut f: impl FnMut(&[usize])) {
    let free: Vec<usize> = g.free_vertices().collect();
    let mut colors: Vec<usize> = g.pins().iter().map(|p| p.unwrap_or(1)).collect();
    loop {
        f(&colors);
        let mut i = 0;
        loop {
            let Some(&v) = free.get(i) else { return };
            if colors[v] < g.q() {
                colors[v] += 1;
                break;
            }
            colors[v] = 1;
            i += 1;
        }
    }
}

/// `Z_G(w)` by summing over every coloring, one monomial at a time.
pub fn brute_partition(g: &PartiallyColoredGraph) -> WPolynomial {
    let mut counts = vec![0i64; g.edge_count() + 1];
    for_each_coloring(g, |c| {
        let mono = g.edges().filter(|&(u, v)| c[u] == c[v]).count();
        counts[mono] += 1;
    });
    WPolynomial::new(counts.into_iter().map(BigInt::from).collect())
}

/// `Z^j_{G,v}(w)` by brute force.
pub fn brute_restricted(g: &PartiallyColoredGraph, v: usize, j: usize) -> WPolynomial {
    let mut counts = vec![0i64; g.edge_count() + 1];
    for_each_coloring(g, |c| {
        if c[v] == j {
            counts[g.edges().filter(|&(a, b)| c[a] == c[b]).count()] += 1;
        }
    });
    WPolynomial::new(counts.into_iter().map(BigInt::from).collect())
}

/// Small graphs with max degree at most 3 and some pinned vertices.
pub fn small_graph(max_n: usize, q: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PartiallyColoredGraph> {
    (1..=max_n, q).prop_flat_map(|(n, q)| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let edge_mask = proptest::collection::vec(any::<bool>(), pairs.len());
        let pins = proptest::collection::vec(prop_oneof![3 => Just(None), 1 => (1..=q).prop_map(Some)], n);
        (Just(n), Just(q), Just(pairs), edge_mask, pins).prop_map(|(n, q, pairs, mask, pins)| {
            let mut g = PartiallyColoredGraph::new(n, q, []).unwrap();
            for (&(u, v), keep) in pairs.iter().zip(mask) {
                if keep && g.degree(u) < 3 && g.degree(v) < 3 {
                    g.add_edge(u, v).unwrap();
                }
            }
            // Keep vertex 0 free so it can serve as a root.
            for (v, pin) in pins.into_iter().enumerate().skip(1) {
                g.set_pin(v, pin).unwrap();
            }
            g
        })
    })
}
