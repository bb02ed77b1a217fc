//! Proper-coloring counts computed without the Potts engine, for use as an
//! independent oracle.
//!
//! Unpinned graphs go through the chromatic polynomial by deletion and
//! contraction; graphs with pins are counted by plain backtracking.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{PottsError, Result};
use crate::graph::PartiallyColoredGraph;
use crate::potts::check_budget;

/// Deletion–contraction is exponential in the number of edges.
const MAX_EDGES: u32 = 30;

/// Chromatic polynomial coefficients in `q`, lowest degree first.
pub fn chromatic_polynomial(n: usize, edges: &[(usize, usize)]) -> Result<Vec<BigInt>> {
    let m = u32::try_from(edges.len()).unwrap_or(u32::MAX);
    if m > MAX_EDGES {
        return Err(PottsError::BudgetExceeded {
            required: 1u128 << m.min(127),
            budget: 1u128 << MAX_EDGES,
        });
    }
    let mut adj = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    Ok(delete_contract(adj))
}

fn delete_contract(adj: Vec<BTreeSet<usize>>) -> Vec<BigInt> {
    let n = adj.len();
    let edge = (0..n).find_map(|u| adj[u].iter().next().map(|&v| (u, v)));
    let Some((u, v)) = edge else {
        let mut p = vec![BigInt::zero(); n + 1];
        p[n] = BigInt::one();
        return p;
    };
    let mut deleted = adj.clone();
    deleted[u].remove(&v);
    deleted[v].remove(&u);
    // Merge v into u, then drop v and shift the labels above it.
    let mut merged = deleted.clone();
    let vn: Vec<usize> = merged[v].iter().copied().collect();
    for x in vn {
        merged[x].remove(&v);
        merged[x].insert(u);
        merged[u].insert(x);
    }
    merged.remove(v);
    let relabel = |x: usize| if x > v { x - 1 } else { x };
    let contracted: Vec<BTreeSet<usize>> =
        merged.into_iter().map(|s| s.into_iter().map(relabel).collect()).collect();
    let a = delete_contract(deleted);
    let b = delete_contract(contracted);
    a.iter()
        .enumerate()
        .map(|(k, c)| c - b.get(k).cloned().unwrap_or_default())
        .collect()
}

/// Number of proper `q`-colorings of `g` that agree with its pins.
pub fn exact_count_oracle(g: &PartiallyColoredGraph) -> Result<BigInt> {
    let q = g.q();
    if g.free_count() == g.n() {
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let poly = chromatic_polynomial(g.n(), &edges)?;
        let qb = BigInt::from(q);
        return Ok(poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * &qb + c));
    }
    check_budget(g, u128::from(u64::MAX))?;
    if g.edges().any(|(u, v)| g.pin(u).is_some() && g.pin(u) == g.pin(v)) {
        return Ok(BigInt::zero());
    }
    let free: Vec<usize> = g.free_vertices().collect();
    let mut colors: Vec<usize> = g.pins().iter().map(|p| p.unwrap_or(0)).collect();
    Ok(BigInt::from(backtrack(g, &free, 0, &mut colors)))
}

fn backtrack(g: &PartiallyColoredGraph, free: &[usize], i: usize, colors: &mut [usize]) -> u64 {
    let Some(&v) = free.get(i) else { return 1 };
    let mut total = 0;
    for c in 1..=g.q() {
        if g.neighbors(v).iter().all(|&u| colors[u] != c) {
            colors[v] = c;
            total += backtrack(g, free, i + 1, colors);
        }
    }
    colors[v] = 0;
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(n: usize, q: usize, edges: &[(usize, usize)]) -> BigInt {
        exact_count_oracle(&PartiallyColoredGraph::new(n, q, edges.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn classic_values() {
        assert_eq!(count(3, 6, &[(0, 1), (1, 2), (0, 2)]), BigInt::from(120));
        assert_eq!(count(4, 3, &[(0, 1), (1, 2), (2, 3), (3, 0)]), BigInt::from(18));
        assert_eq!(count(2, 1, &[(0, 1)]), BigInt::zero());
        assert_eq!(count(3, 2, &[]), BigInt::from(8));
    }

    #[test]
    fn triangle_polynomial() {
        let p = chromatic_polynomial(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let expect: Vec<BigInt> = [0, 2, -3, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(p, expect);
    }

    #[test]
    fn pinned_counts() {
        let g = PartiallyColoredGraph::from_parts(3, 4, [(0, 1), (1, 2)], [(0, 1), (2, 2)]).unwrap();
        assert_eq!(exact_count_oracle(&g).unwrap(), BigInt::from(2));
        let clash = PartiallyColoredGraph::from_parts(2, 4, [(0, 1)], [(0, 1), (1, 1)]).unwrap();
        assert_eq!(exact_count_oracle(&clash).unwrap(), BigInt::zero());
    }
}
