//! Exhaustive generation of small connected graphs up to isomorphism.
//!
//! Canonical forms come from color refinement followed by an
//! individualization search for the lexicographically smallest adjacency
//! code. This is exponential on highly symmetric dense graphs but fast for
//! the bounded-degree graphs on a dozen vertices used here.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Color, PartiallyColoredGraph};

/// Isomorphism invariant of a partially colored graph. Pins of equal color
/// are related, but the colors themselves are treated as interchangeable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    n: usize,
    labels: Vec<u8>,
    bits: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PinPolicy {
    /// Unpinned graphs only.
    None,
    /// Every set of leaves may be pinned, each pin with its own color.
    SinglePin,
    /// Every set of leaves with every partition of it into color classes.
    AllPatterns,
}

pub fn canonical_code(g: &PartiallyColoredGraph) -> CanonicalCode {
    // Auxiliary graph: pinned vertices point at one extra vertex per color
    // class, so that permuting colors leaves the code unchanged.
    let mut classes: Vec<Color> = g.pins().iter().flatten().copied().collect();
    classes.sort_unstable();
    classes.dedup();
    let n = g.n();
    let mut adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    adj.extend(classes.iter().map(|_| Vec::new()));
    let mut labels: Vec<u8> = (0..n).map(|v| u8::from(!g.is_free(v))).collect();
    labels.extend(classes.iter().map(|_| 2));
    for v in 0..n {
        if let Some(c) = g.pin(v) {
            let x = n + classes.binary_search(&c).unwrap();
            adj[v].push(x);
            adj[x].push(v);
        }
    }
    canonical_labeled(&adj, &labels)
}

fn canonical_labeled(adj: &[Vec<usize>], labels: &[u8]) -> CanonicalCode {
    let n = adj.len();
    let mut keyed: Vec<(u8, usize, usize)> =
        (0..n).map(|v| (labels[v], adj[v].len(), v)).collect();
    keyed.sort_unstable();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for (i, &(l, d, v)) in keyed.iter().enumerate() {
        if i > 0 && (keyed[i - 1].0, keyed[i - 1].1) == (l, d) {
            cells.last_mut().unwrap().push(v);
        } else {
            cells.push(vec![v]);
        }
    }
    let mut best: Option<(Vec<u8>, Vec<u64>)> = None;
    search(adj, labels, cells, &mut best);
    let (labels, bits) = best.unwrap_or_default();
    CanonicalCode { n, labels, bits }
}

fn refine(adj: &[Vec<usize>], cells: &mut Vec<Vec<usize>>) {
    let mut cell_of = vec![0usize; adj.len()];
    loop {
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        let mut next = Vec::with_capacity(cells.len());
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut counts = vec![0usize; cells.len()];
                    for &u in &adj[v] {
                        counts[cell_of[u]] += 1;
                    }
                    (counts, v)
                })
                .collect();
            keyed.sort_unstable();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|k| k.1).collect());
                    start = i;
                }
            }
        }
        let stable = next.len() == cells.len();
        *cells = next;
        if stable {
            return;
        }
    }
}

fn search(
    adj: &[Vec<usize>],
    labels: &[u8],
    mut cells: Vec<Vec<usize>>,
    best: &mut Option<(Vec<u8>, Vec<u64>)>,
) {
    refine(adj, &mut cells);
    let target = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i);
    let Some(idx) = target else {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let code = encode(adj, labels, &order);
        if best.as_ref().map_or(true, |b| code < *b) {
            *best = Some(code);
        }
        return;
    };
    for &v in &cells[idx] {
        let rest: Vec<usize> = cells[idx].iter().copied().filter(|&u| u != v).collect();
        let mut next = cells.clone();
        next.splice(idx..=idx, [vec![v], rest]);
        search(adj, labels, next, best);
    }
}

fn encode(adj: &[Vec<usize>], labels: &[u8], order: &[usize]) -> (Vec<u8>, Vec<u64>) {
    let n = order.len();
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let mut bits = vec![0u64; pairs.div_ceil(64)];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if adj[order[i]].iter().any(|&u| pos[u] == j) {
                bits[k / 64] |= 1 << (63 - k % 64);
            }
            k += 1;
        }
    }
    (order.iter().map(|&v| labels[v]).collect(), bits)
}

/// Connected graphs with at most `n_max` vertices (pins included) and maximum
/// degree at most `delta`, one per isomorphism class, decorated with pinned
/// leaves according to `policy`.
///
/// Pinned colors are assigned in order of first use starting from 1, so a
/// pattern with `k` color classes uses colors `1..=k`; patterns needing more
/// than `q` classes are skipped. Every pinned graph keeps at least one free
/// vertex. Output order is deterministic.
pub fn enumerate_graphs(
    n_max: usize,
    delta: usize,
    q: usize,
    policy: PinPolicy,
) -> Vec<PartiallyColoredGraph> {
    let base = connected_graphs(n_max, delta, q);
    if policy == PinPolicy::None {
        return base;
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in &base {
        let leaves: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) == 1).collect();
        for mask in 0u32..(1 << leaves.len()) {
            let chosen: Vec<usize> = leaves
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            if chosen.len() == g.n() || chosen.iter().any(|&v| chosen.contains(&g.neighbors(v)[0]))
            {
                continue;
            }
            let patterns = match policy {
                PinPolicy::SinglePin if chosen.len() <= q => vec![(1..=chosen.len()).collect()],
                PinPolicy::SinglePin => Vec::new(),
                _ => restricted_growth(chosen.len(), q),
            };
            for colors in patterns {
                let mut h = g.clone();
                for (&v, &c) in chosen.iter().zip(&colors) {
                    h.set_pin(v, Some(c)).expect("color within q");
                }
                if seen.insert(canonical_code(&h)) {
                    out.push(h);
                }
            }
        }
    }
    out
}

/// Color sequences for `k` items in first-use order using at most `q` colors.
fn restricted_growth(k: usize, q: usize) -> Vec<Vec<Color>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(k: usize, q: usize, used: usize, cur: &mut Vec<Color>, out: &mut Vec<Vec<Color>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in 1..=(used + 1).min(q) {
            cur.push(c);
            rec(k, q, used.max(c), cur, out);
            cur.pop();
        }
    }
    rec(k, q, 0, &mut cur, &mut out);
    out
}

fn connected_graphs(n_max: usize, delta: usize, q: usize) -> Vec<PartiallyColoredGraph> {
    if n_max == 0 {
        return Vec::new();
    }
    let mut level = vec![PartiallyColoredGraph::new(1, q, []).unwrap()];
    let mut all = level.clone();
    for _ in 1..n_max {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            let open: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) < delta).collect();
            for mask in 1u32..(1 << open.len()) {
                if mask.count_ones() as usize > delta {
                    continue;
                }
                let mut h = g.clone();
                let x = h.add_vertex(None).unwrap();
                for (i, &v) in open.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        h.add_edge(v, x).unwrap();
                    }
                }
                let code = canonical_code(&h);
                if seen.insert(code.clone()) {
                    next.push((code, h));
                }
            }
        }
        next.sort_by(|a, b| (a.1.edge_count(), &a.0).cmp(&(b.1.edge_count(), &b.0)));
        level = next.into_iter().map(|(_, g)| g).collect();
        all.extend(level.iter().cloned());
    }
    all
}

/// Ways to realize `k` interchangeable color classes inside `1..=q` that
/// differ in how colors 1 and `q` are hit. Entry `i` of a map is the color
/// given to class `i + 1`; classes not sent to 1 or `q` fill `2, 3, ...`.
pub fn color_embeddings(k: usize, q: usize) -> Vec<Vec<Color>> {
    if q == 1 {
        return if k <= 1 { vec![vec![1; k]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let choices: Vec<Option<usize>> = std::iter::once(None).chain((0..k).map(Some)).collect();
    for &first in &choices {
        for &last in &choices {
            if first.is_some() && first == last {
                continue;
            }
            let assigned = usize::from(first.is_some()) + usize::from(last.is_some());
            if k - assigned > q - 2 {
                continue;
            }
            let mut next = 2;
            let map = (0..k)
                .map(|i| {
                    if Some(i) == first {
                        1
                    } else if Some(i) == last {
                        q
                    } else {
                        next += 1;
                        next - 1
                    }
                })
                .collect();
            out.push(map);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_by_order(graphs: &[PartiallyColoredGraph], n_max: usize) -> Vec<usize> {
        (1..=n_max).map(|n| graphs.iter().filter(|g| g.n() == n).count()).collect()
    }

    #[test]
    fn connected_graph_counts() {
        let g = enumerate_graphs(3, 2, 3, PinPolicy::None);
        assert_eq!(g.len(), 4);
        assert_eq!(enumerate_graphs(1, 3, 3, PinPolicy::None).len(), 1);
        // Connected graphs by order: 1, 1, 2, 6, 21, 112.
        let g = enumerate_graphs(6, 5, 3, PinPolicy::None);
        assert_eq!(count_by_order(&g, 6), vec![1, 1, 2, 6, 21, 112]);
        // K4 is the only 4-vertex graph with a vertex of degree 3 excluded by delta = 2.
        let g = enumerate_graphs(4, 2, 3, PinPolicy::None);
        assert_eq!(count_by_order(&g, 4), vec![1, 1, 2, 2]);
    }

    #[test]
    fn canonical_code_is_label_invariant() {
        let a = PartiallyColoredGraph::from_parts(4, 3, [(0, 1), (1, 2), (2, 3)], [(0, 1)]).unwrap();
        let b = PartiallyColoredGraph::from_parts(4, 3, [(3, 2), (2, 1), (1, 0)], [(3, 2)]).unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
        let c = PartiallyColoredGraph::from_parts(4, 3, [(0, 1), (1, 2), (2, 3)], [(1, 2)]).unwrap();
        assert_ne!(canonical_code(&a), canonical_code(&c));
    }

    #[test]
    fn pinned_patterns() {
        // Path on 3 vertices: pin none, one end, or both ends (same or
        // different colors).
        let g: Vec<_> = enumerate_graphs(3, 2, 3, PinPolicy::AllPatterns)
            .into_iter()
            .filter(|g| g.n() == 3 && g.edge_count() == 2)
            .collect();
        assert_eq!(g.len(), 4);
        let single: Vec<_> = enumerate_graphs(3, 2, 3, PinPolicy::SinglePin)
            .into_iter()
            .filter(|g| g.n() == 3 && g.edge_count() == 2)
            .collect();
        assert_eq!(single.len(), 3);
        for g in enumerate_graphs(5, 3, 4, PinPolicy::AllPatterns) {
            assert!(g.free_count() > 0);
            assert!(g.pins_are_leaves() && g.pins_independent() && g.is_connected());
        }
    }

    #[test]
    fn embeddings_cover_distinguished_colors() {
        let e = color_embeddings(1, 4);
        assert_eq!(e, vec![vec![2], vec![4], vec![1]]);
        let e = color_embeddings(2, 3);
        assert!(e.contains(&vec![1, 3]) && e.contains(&vec![3, 1]) && e.contains(&vec![1, 2]));
        assert!(!e.iter().any(|m| m == &vec![2, 2]));
        assert_eq!(color_embeddings(0, 5), vec![Vec::<Color>::new()]);
    }
}
