//! Named graph families. Every generator returns an unpinned graph.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PartiallyColoredGraph;
use crate::error::{PottsError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    Cycle { n: usize },
    Clique { n: usize },
    Path { n: usize },
    Star { leaves: usize },
    RandomRegular { n: usize, d: usize, seed: u64 },
    CompleteBipartite { a: usize, b: usize },
    Petersen,
}

/// Rejection attempts for the configuration model before giving up.
const REGULAR_ATTEMPTS: usize = 10_000;

pub fn generate_family(kind: &FamilyKind, q: usize) -> Result<PartiallyColoredGraph> {
    let edges: Vec<(usize, usize)> = match *kind {
        FamilyKind::Cycle { n } => {
            if n < 3 {
                return Err(PottsError::InvalidGraph("a cycle needs at least 3 vertices".into()));
            }
            (0..n).map(|i| (i, (i + 1) % n)).collect()
        }
        FamilyKind::Clique { n } => {
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
        }
        FamilyKind::Path { n } => (1..n).map(|i| (i - 1, i)).collect(),
        FamilyKind::Star { leaves } => (1..=leaves).map(|i| (0, i)).collect(),
        FamilyKind::CompleteBipartite { a, b } => {
            (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect()
        }
        FamilyKind::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            outer.chain(spokes).chain(inner).collect()
        }
        FamilyKind::RandomRegular { n, d, seed } => random_regular_edges(n, d, seed)?,
    };
    let n = match *kind {
        FamilyKind::Cycle { n }
        | FamilyKind::Clique { n }
        | FamilyKind::Path { n }
        | FamilyKind::RandomRegular { n, .. } => n,
        FamilyKind::Star { leaves } => leaves + 1,
        FamilyKind::CompleteBipartite { a, b } => a + b,
        FamilyKind::Petersen => 10,
    };
    PartiallyColoredGraph::new(n, q, edges)
}

/// Configuration model with rejection of loops and multi-edges.
fn random_regular_edges(n: usize, d: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    if (n * d) % 2 == 1 || (d >= n && n > 0) {
        return Err(PottsError::InfeasibleRegular { n, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    'attempt: for _ in 0..REGULAR_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || edges.contains(&(u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        edges.sort_unstable();
        return Ok(edges);
    }
    Err(PottsError::InfeasibleRegular { n, d })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_families() {
        let c4 = generate_family(&FamilyKind::Cycle { n: 4 }, 3).unwrap();
        assert_eq!(c4.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        let k3 = generate_family(&FamilyKind::Clique { n: 3 }, 3).unwrap();
        assert_eq!(k3.edge_count(), 3);
        let p = generate_family(&FamilyKind::Petersen, 6).unwrap();
        assert_eq!((p.n(), p.edge_count(), p.max_degree()), (10, 15, 3));
        assert!((0..10).all(|v| p.degree(v) == 3));
        let kab = generate_family(&FamilyKind::CompleteBipartite { a: 2, b: 3 }, 3).unwrap();
        assert_eq!(kab.edge_count(), 6);
        let star = generate_family(&FamilyKind::Star { leaves: 4 }, 3).unwrap();
        assert_eq!(star.degree(0), 4);
    }

    #[test]
    fn random_regular_is_deterministic_and_regular() {
        let kind = FamilyKind::RandomRegular { n: 8, d: 3, seed: 7 };
        let a = generate_family(&kind, 6).unwrap();
        let b = generate_family(&kind, 6).unwrap();
        assert_eq!(a, b);
        assert!((0..8).all(|v| a.degree(v) == 3));
    }

    #[test]
    fn infeasible_regular() {
        let kind = FamilyKind::RandomRegular { n: 5, d: 3, seed: 1 };
        assert_eq!(generate_family(&kind, 6), Err(PottsError::InfeasibleRegular { n: 5, d: 3 }));
    }
}
