//! Exact partition functions, marginals and log-ratios.
//!
//! Colorings of the free vertices are enumerated up to permutations of the
//! colors that no pin uses: those colors are interchangeable, so each
//! coloring is visited once per pattern of "new" color classes and weighted
//! by the number of ways to name the classes.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{PottsError, Result};
use crate::graph::{Color, PartiallyColoredGraph, RootedGraph, Vertex};
use crate::poly::WPolynomial;

/// Default cap on `q^{#free}`.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Checks `q^{#free}` against `budget`.
pub fn check_budget(g: &PartiallyColoredGraph, budget: u128) -> Result<()> {
    let free = u32::try_from(g.free_count()).unwrap_or(u32::MAX);
    let required = (g.q() as u128).checked_pow(free).unwrap_or(u128::MAX);
    if required > budget {
        return Err(PottsError::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Color of a free vertex during enumeration: one of the distinguished
/// colors, or the index of an anonymous class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    Fixed(usize),
    Class(usize),
}

/// Visits every coloring of the free vertices of `g`, up to renaming colors
/// outside `distinguished`, which must contain every pinned color.
///
/// The callback receives the slot of each vertex (pinned vertices report
/// their own color's slot), the number of monochromatic edges and the number
/// of colorings represented.
pub(crate) fn for_each_coloring<F>(
    g: &PartiallyColoredGraph,
    distinguished: &[Color],
    budget: u128,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[Slot], usize, u128),
{
    check_budget(g, budget)?;
    let q = g.q();
    let d = distinguished.len();
    let spare = q - d;
    let slot_of = |c: Color| Slot::Fixed(distinguished.iter().position(|&x| x == c).unwrap());

    // Breadth-first order keeps neighbors close, so conflicts are counted
    // as early as possible.
    let mut order = Vec::with_capacity(g.free_count());
    let mut placed = vec![false; g.n()];
    for s in g.free_vertices() {
        if placed[s] {
            continue;
        }
        placed[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &x in g.neighbors(u) {
                if g.is_free(x) && !placed[x] {
                    placed[x] = true;
                    order.push(x);
                }
            }
        }
    }

    let mut slots = vec![Slot::Class(usize::MAX); g.n()];
    let mut base_mono = 0;
    for v in 0..g.n() {
        if let Some(c) = g.pin(v) {
            slots[v] = slot_of(c);
        }
    }
    for (u, v) in g.edges() {
        if let (Some(a), Some(b)) = (g.pin(u), g.pin(v)) {
            base_mono += usize::from(a == b);
        }
    }
    // Already-colored neighbors of each free vertex at the time it is colored.
    let mut rank = vec![usize::MAX; g.n()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let earlier: Vec<Vec<Vertex>> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&u| !g.is_free(u) || rank[u] < i)
                .collect()
        })
        .collect();

    struct State<'a, F> {
        order: &'a [Vertex],
        earlier: &'a [Vec<Vertex>],
        slots: Vec<Slot>,
        d: usize,
        spare: usize,
        visit: F,
    }

    fn rec<F: FnMut(&[Slot], usize, u128)>(
        st: &mut State<'_, F>,
        i: usize,
        used: usize,
        mono: usize,
        weight: u128,
    ) {
        if i == st.order.len() {
            (st.visit)(&st.slots, mono, weight);
            return;
        }
        let v = st.order[i];
        let options = (0..st.d)
            .map(Slot::Fixed)
            .chain((0..used).map(Slot::Class))
            .chain((used < st.spare).then_some(Slot::Class(used)));
        for s in options {
            let hits = st.earlier[i].iter().filter(|&&u| st.slots[u] == s).count();
            st.slots[v] = s;
            let (used2, w2) = match s {
                Slot::Class(k) if k == used => (used + 1, weight * (st.spare - used) as u128),
                _ => (used, weight),
            };
            rec(st, i + 1, used2, mono + hits, w2);
        }
        st.slots[v] = Slot::Class(usize::MAX);
    }

    let mut st = State { order: &order, earlier: &earlier, slots, d, spare, visit: &mut visit };
    rec(&mut st, 0, 0, base_mono, 1);
    Ok(())
}

fn pinned_colors(g: &PartiallyColoredGraph) -> Vec<Color> {
    let mut cs: Vec<Color> = g.pins().iter().flatten().copied().collect();
    cs.sort_unstable();
    cs.dedup();
    cs
}

fn to_poly(table: &[u128]) -> WPolynomial {
    WPolynomial::new(table.iter().map(|&c| BigInt::from(c)).collect())
}

/// `Z_G(w)`: coefficient `k` counts colorings extending the pins with
/// exactly `k` monochromatic edges.
pub fn partition_poly(g: &PartiallyColoredGraph) -> Result<WPolynomial> {
    partition_poly_with_budget(g, DEFAULT_BUDGET)
}

pub fn partition_poly_with_budget(g: &PartiallyColoredGraph, budget: u128) -> Result<WPolynomial> {
    let mut table = vec![0u128; g.edge_count() + 1];
    for_each_coloring(g, &pinned_colors(g), budget, |_, m, wt| table[m] += wt)?;
    Ok(to_poly(&table))
}

/// `Z^j_{G,v}` for every color `j = 1..=q` at the root.
pub fn restricted_partition_polys(rg: &RootedGraph) -> Result<Vec<WPolynomial>> {
    restricted_partition_polys_with_budget(rg, DEFAULT_BUDGET)
}

pub fn restricted_partition_polys_with_budget(
    rg: &RootedGraph,
    budget: u128,
) -> Result<Vec<WPolynomial>> {
    let g = rg.graph();
    let q = g.q();
    let fixed = pinned_colors(g);
    let spare = q - fixed.len();
    let width = g.edge_count() + 1;
    let mut by_fixed = vec![vec![0u128; width]; fixed.len()];
    let mut anonymous = vec![0u128; width];
    for_each_coloring(g, &fixed, budget, |slots, m, wt| match slots[rg.root()] {
        Slot::Fixed(i) => by_fixed[i][m] += wt,
        Slot::Class(_) => anonymous[m] += wt,
    })?;
    // Every unpinned color sees the same share of the anonymous total.
    if spare > 0 {
        for c in anonymous.iter_mut() {
            debug_assert_eq!(*c % spare as u128, 0);
            *c /= spare as u128;
        }
    }
    Ok((1..=q)
        .map(|j| match fixed.binary_search(&j) {
            Ok(i) => to_poly(&by_fixed[i]),
            Err(_) => to_poly(&anonymous),
        })
        .collect())
}

pub fn restricted_partition_poly(rg: &RootedGraph, j: Color) -> Result<WPolynomial> {
    if j == 0 || j > rg.q() {
        return Err(PottsError::InvalidColor { color: j, q: rg.q() });
    }
    Ok(restricted_partition_polys(rg)?.swap_remove(j - 1))
}

/// Probability that `v` receives color `j` under the Potts measure at `w`.
pub fn marginal(g: &PartiallyColoredGraph, w: &BigRational, v: Vertex, j: Color) -> Result<BigRational> {
    if j == 0 || j > g.q() {
        return Err(PottsError::InvalidColor { color: j, q: g.q() });
    }
    if v >= g.n() {
        return Err(PottsError::InvalidRoot { vertex: v });
    }
    if let Some(c) = g.pin(v) {
        return Ok(if c == j { BigRational::one() } else { BigRational::zero() });
    }
    let rg = RootedGraph::new(g.clone(), v)?;
    Ok(root_marginals(&rg, w)?.swap_remove(j - 1))
}

/// All `q` root marginals at `w`.
pub fn root_marginals(rg: &RootedGraph, w: &BigRational) -> Result<Vec<BigRational>> {
    marginals_from_polys(&restricted_partition_polys(rg)?, w)
}

pub(crate) fn marginals_from_polys(polys: &[WPolynomial], w: &BigRational) -> Result<Vec<BigRational>> {
    let values: Vec<BigRational> = polys.iter().map(|p| p.eval_rational(w)).collect();
    let z: BigRational = values.iter().sum();
    if z.is_zero() {
        return Err(PottsError::UndefinedMeasure);
    }
    Ok(values.into_iter().map(|x| x / &z).collect())
}

/// Log-ratios `log(Z^j / Z^ref)` at the root for every color `j != ref`,
/// in increasing order of `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRatioVector {
    pub reference: Color,
    pub entries: Vec<Complex64>,
}

impl LogRatioVector {
    /// Color that entry `k` refers to.
    pub fn color_of(&self, k: usize) -> Color {
        if k + 1 < self.reference {
            k + 1
        } else {
            k + 2
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Principal logarithm of a ratio, refusing zero and the negative real axis.
pub(crate) fn principal_log(ratio: Complex64, color: Color) -> Result<Complex64> {
    if ratio.re == 0.0 && ratio.im == 0.0 {
        return Err(PottsError::ZeroRatio { color });
    }
    if ratio.im == 0.0 && ratio.re < 0.0 {
        return Err(PottsError::Branch { re: ratio.re, im: ratio.im });
    }
    Ok(ratio.ln())
}

pub fn log_ratio_vector(rg: &RootedGraph, wt: Complex64, reference: Color) -> Result<LogRatioVector> {
    log_ratio_from_polys(&restricted_partition_polys(rg)?, wt, reference)
}

pub(crate) fn log_ratio_from_polys(
    polys: &[WPolynomial],
    wt: Complex64,
    reference: Color,
) -> Result<LogRatioVector> {
    let q = polys.len();
    if reference == 0 || reference > q {
        return Err(PottsError::InvalidColor { color: reference, q });
    }
    let den = polys[reference - 1].eval_complex(wt);
    if den == Complex64::new(0.0, 0.0) {
        return Err(PottsError::ZeroRatio { color: reference });
    }
    let entries = (1..=q)
        .filter(|&j| j != reference)
        .map(|j| principal_log(polys[j - 1].eval_complex(wt) / den, j))
        .collect::<Result<Vec<_>>>()?;
    Ok(LogRatioVector { reference, entries })
}

/// Exact ratios `Z^j(w) / Z^ref(w)` for `j != ref`, i.e. the exponentials of
/// the real log-ratio vector.
pub fn ratio_vector_exact(rg: &RootedGraph, w: &BigRational, reference: Color) -> Result<Vec<BigRational>> {
    ratios_from_polys(&restricted_partition_polys(rg)?, w, reference)
}

pub(crate) fn ratios_from_polys(
    polys: &[WPolynomial],
    w: &BigRational,
    reference: Color,
) -> Result<Vec<BigRational>> {
    let q = polys.len();
    if reference == 0 || reference > q {
        return Err(PottsError::InvalidColor { color: reference, q });
    }
    let den = polys[reference - 1].eval_rational(w);
    if den.is_zero() {
        return Err(PottsError::ZeroRatio { color: reference });
    }
    (1..=q)
        .filter(|&j| j != reference)
        .map(|j| {
            let num = polys[j - 1].eval_rational(w);
            if num.is_zero() {
                Err(PottsError::ZeroRatio { color: j })
            } else {
                Ok(num / &den)
            }
        })
        .collect()
}

/// Expectation of `w^k` over the Potts measure on `G - v`, where `k` is the
/// number of neighbors of `v` colored `ell`.
pub fn neighborhood_expectation(
    g: &PartiallyColoredGraph,
    w: &BigRational,
    v: Vertex,
    ell: Color,
) -> Result<BigRational> {
    if ell == 0 || ell > g.q() {
        return Err(PottsError::InvalidColor { color: ell, q: g.q() });
    }
    if v >= g.n() {
        return Err(PottsError::InvalidRoot { vertex: v });
    }
    let (rest, map) = g.remove_vertex(v);
    let nbrs: Vec<Vertex> = g.neighbors(v).iter().map(|&u| map[u].unwrap()).collect();
    let mut fixed = pinned_colors(&rest);
    if let Err(pos) = fixed.binary_search(&ell) {
        fixed.insert(pos, ell);
    }
    let target = Slot::Fixed(fixed.binary_search(&ell).unwrap());
    let width = rest.edge_count() + 1;
    // table[m][k]: weight of colorings with m monochromatic edges and k
    // neighbors of v colored ell.
    let mut table = vec![vec![0u128; nbrs.len() + 1]; width];
    for_each_coloring(&rest, &fixed, DEFAULT_BUDGET, |slots, m, wt| {
        let k = nbrs.iter().filter(|&&u| slots[u] == target).count();
        table[m][k] += wt;
    })?;
    let mut z = BigRational::zero();
    let mut num = BigRational::zero();
    let mut wm = BigRational::one();
    for row in &table {
        let mut wk = BigRational::one();
        for &c in row {
            let c = BigRational::from_integer(BigInt::from(c));
            z += &c * &wm;
            num += &c * &wm * &wk;
            wk *= w;
        }
        wm *= w;
    }
    if z.is_zero() {
        return Err(PottsError::UndefinedMeasure);
    }
    Ok(num / z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn edge(q: usize) -> PartiallyColoredGraph {
        PartiallyColoredGraph::new(2, q, [(0, 1)]).unwrap()
    }

    #[test]
    fn single_edge_and_triangle() {
        assert_eq!(partition_poly(&edge(3)).unwrap(), WPolynomial::from_i64s(&[6, 3]));
        let k3 = PartiallyColoredGraph::new(3, 6, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(partition_poly(&k3).unwrap(), WPolynomial::from_i64s(&[120, 90, 0, 6]));
    }

    #[test]
    fn pinned_edge_restrictions() {
        let g = edge(3).with_pin(0, 1).unwrap();
        let rg = RootedGraph::new(g, 1).unwrap();
        let r = restricted_partition_polys(&rg).unwrap();
        assert_eq!(r[0], WPolynomial::from_i64s(&[0, 1]));
        assert_eq!(r[1], WPolynomial::constant(1));
        assert_eq!(r[2], WPolynomial::constant(1));
        assert_eq!(partition_poly(rg.graph()).unwrap(), WPolynomial::from_i64s(&[2, 1]));
    }

    #[test]
    fn isolated_vertex() {
        let g = PartiallyColoredGraph::new(1, 4, []).unwrap();
        let rg = RootedGraph::new(g.clone(), 0).unwrap();
        assert_eq!(restricted_partition_poly(&rg, 2).unwrap(), WPolynomial::constant(1));
        assert_eq!(marginal(&g, &rat(1, 3), 0, 4).unwrap(), rat(1, 4));
        let lr = log_ratio_vector(&rg, Complex64::new(0.5, 0.1), 4).unwrap();
        assert!(lr.entries.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn marginals_with_a_pinned_neighbor() {
        let g = edge(3).with_pin(0, 1).unwrap();
        assert_eq!(marginal(&g, &rat(0, 1), 1, 1).unwrap(), rat(0, 1));
        assert_eq!(marginal(&g, &rat(0, 1), 1, 2).unwrap(), rat(1, 2));
        assert_eq!(marginal(&g, &rat(1, 2), 1, 1).unwrap(), rat(1, 5));
        let rg = RootedGraph::new(g, 1).unwrap();
        let lr = log_ratio_vector(&rg, Complex64::new(0.5, 0.0), 3).unwrap();
        assert!((lr.entries[0].re - 0.5f64.ln()).abs() < 1e-15);
        assert_eq!(lr.entries[1], Complex64::new(0.0, 0.0));
        assert_eq!(lr.color_of(0), 1);
        assert_eq!(lr.color_of(1), 2);
    }

    #[test]
    fn undefined_measure_and_zero_ratio() {
        let k3 = PartiallyColoredGraph::new(3, 2, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(marginal(&k3, &rat(0, 1), 0, 1), Err(PottsError::UndefinedMeasure));
        let g = edge(3).with_pin(0, 1).unwrap();
        let rg = RootedGraph::new(g, 1).unwrap();
        assert_eq!(
            ratio_vector_exact(&rg, &rat(0, 1), 3),
            Err(PottsError::ZeroRatio { color: 1 })
        );
    }

    #[test]
    fn star_expectation() {
        let star = PartiallyColoredGraph::new(3, 3, [(0, 1), (0, 2)]).unwrap();
        assert_eq!(neighborhood_expectation(&star, &rat(0, 1), 0, 1).unwrap(), rat(4, 9));
        let iso = PartiallyColoredGraph::new(1, 3, []).unwrap();
        assert_eq!(neighborhood_expectation(&iso, &rat(1, 2), 0, 2).unwrap(), rat(1, 1));
    }

    #[test]
    fn budget_is_enforced() {
        let g = PartiallyColoredGraph::new(30, 10, []).unwrap();
        assert!(matches!(partition_poly(&g), Err(PottsError::BudgetExceeded { .. })));
        assert!(partition_poly_with_budget(&PartiallyColoredGraph::new(3, 10, []).unwrap(), 1000).is_ok());
    }
}
