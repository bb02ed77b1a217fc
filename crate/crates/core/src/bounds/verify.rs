//! Exhaustive checks of the bounds and exact identities over enumerated
//! families of small graphs.
//!
//! Every check is split into instances (graph, root, color, weight). Exact
//! rational comparisons are used wherever the bound is rational in `w`;
//! the remaining ones compare doubles with a `1e-12` relative guard band.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    few_blocked_bound, lower_bound_basic, ratio_envelope, sparse_neighborhood_bound,
    sum_lower_bound, upper_bound_basic_exact, ConstantPack,
};
use crate::error::{PottsError, Result};
use crate::graph::{
    canonical_code, color_embeddings, enumerate_graphs, to_edge_list, Color, PartiallyColoredGraph,
    PinPolicy, RootedGraph, Vertex,
};
use crate::poly::WPolynomial;
use crate::potts::{
    marginal, marginals_from_polys, neighborhood_expectation, partition_poly,
    restricted_partition_polys,
};
use crate::ratio::{difference_from_marginals, grad_from_exp, inner_product_from_parts, pq_from_exp};

const IDS: &[&str] = &[
    "prob_basic",
    "prob_basic_degree",
    "prob_basic_lower",
    "ratio_envelope",
    "few_blocked",
    "sparse_neighborhood",
    "inner_product",
    "sum_lower_bound",
    "gradient_identity",
    "telescoping",
    "eion_trick",
    "pin_to_leaves",
];

/// Registered bound and identity ids, in report order.
pub fn bound_ids() -> &'static [&'static str] {
    IDS
}

/// Connected graphs with at most `n_max` vertices and maximum degree at most
/// `delta`, with pinned leaves according to `pins`, colored from `1..=q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub n_max: usize,
    pub delta: usize,
    pub q: usize,
    pub pins: PinPolicy,
}

impl Family {
    pub fn new(n_max: usize, delta: usize, q: usize) -> Self {
        Family { n_max, delta, q, pins: PinPolicy::AllPatterns }
    }

    pub fn graphs(&self) -> Vec<PartiallyColoredGraph> {
        enumerate_graphs(self.n_max, self.delta, self.q, self.pins)
    }

    /// Unpinned family members with every pattern of pins on every vertex
    /// subset, leaves or not. Used for the pin normalization check.
    pub fn graphs_pinned_anywhere(&self) -> Vec<PartiallyColoredGraph> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in enumerate_graphs(self.n_max, self.delta, self.q, PinPolicy::None) {
            let n = g.n();
            for mask in 1u32..(1 << n) {
                let chosen: Vec<Vertex> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                for pattern in set_partitions(chosen.len(), self.q) {
                    let mut h = g.clone();
                    for (&v, &c) in chosen.iter().zip(&pattern) {
                        h.set_pin(v, Some(c)).expect("pattern colors fit in q");
                    }
                    if seen.insert(canonical_code(&h)) {
                        out.push(h);
                    }
                }
            }
        }
        out
    }
}

/// Restricted growth strings of length `k` with at most `max_classes`
/// classes, labelled from 1.
fn set_partitions(k: usize, max_classes: usize) -> Vec<Vec<Color>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(k: usize, max: usize, used: usize, cur: &mut Vec<Color>, out: &mut Vec<Vec<Color>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in 1..=(used + 1).min(max) {
            cur.push(c);
            rec(k, max, used.max(c), cur, out);
            cur.pop();
        }
    }
    rec(k, max_classes, 0, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Regime {
    InRegime,
    OutOfRegime { reason: String },
}

/// The instance attaining the worst slack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Edge-list text of the graph.
    pub graph: String,
    pub root: Option<Vertex>,
    pub color: Option<Color>,
    pub w: String,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: String,
    pub family: Family,
    pub grid: Vec<String>,
    pub regime: Regime,
    pub instances_checked: u64,
    /// Instances whose measure or ratio is undefined (e.g. `w = 0` with no
    /// proper extension).
    pub skipped: u64,
    pub violations: u64,
    /// Minimum over instances of the signed slack; `None` when nothing was
    /// checked.
    pub worst_slack: Option<f64>,
    pub witness: Option<Witness>,
}

impl BoundReport {
    pub const CSV_HEADER: [&'static str; 10] = [
        "bound_id",
        "n_max",
        "delta",
        "q",
        "regime",
        "instances_checked",
        "skipped",
        "violations",
        "worst_slack",
        "witness",
    ];

    pub fn in_regime(&self) -> bool {
        self.regime == Regime::InRegime
    }

    /// Zero violations, or out of regime where violations are expected.
    pub fn passed(&self) -> bool {
        self.violations == 0 || !self.in_regime()
    }

    /// One CSV row matching [`BoundReport::CSV_HEADER`]. The witness graph is
    /// flattened to a single line with `;` separators.
    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.bound_id.clone(),
            self.family.n_max.to_string(),
            self.family.delta.to_string(),
            self.family.q.to_string(),
            match &self.regime {
                Regime::InRegime => "in_regime".into(),
                Regime::OutOfRegime { .. } => "out_of_regime".into(),
            },
            self.instances_checked.to_string(),
            self.skipped.to_string(),
            self.violations.to_string(),
            self.worst_slack.map(|s| s.to_string()).unwrap_or_default(),
            self.witness
                .as_ref()
                .map(|w| w.graph.trim_end().replace('\n', ";"))
                .unwrap_or_default(),
        ]
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    skipped: u64,
    violations: u64,
    worst: Option<(f64, Witness)>,
}

impl Tally {
    fn skip(&mut self) {
        self.skipped += 1;
    }

    fn record(&mut self, slack: f64, violated: bool, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        // Turns -0.0 from negated exact zeros into 0.0.
        let slack = slack + 0.0;
        if violated {
            self.violations += 1;
        }
        if self.worst.as_ref().map_or(true, |(s, _)| slack < *s) {
            self.worst = Some((slack, witness()));
        }
    }

    /// Exact comparison: the instance holds iff `slack >= 0`.
    fn record_exact(&mut self, lhs: &BigRational, rhs: &BigRational, slack: BigRational, wit: impl FnOnce(f64, f64) -> Witness) {
        let s = slack.to_f64().unwrap_or(f64::NAN);
        self.record(s, slack.is_negative(), || wit(to_f(lhs), to_f(rhs)));
    }

    /// Floating comparison with the guard band relative to `scale`.
    fn record_float(&mut self, slack: f64, scale: f64, wit: impl FnOnce() -> Witness) {
        let violated = !(slack >= -1e-12 * scale.abs().max(1.0));
        self.record(slack, violated, wit);
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.violations += other.violations;
        if let Some((s, w)) = other.worst {
            if self.worst.as_ref().map_or(true, |(t, _)| s < *t) {
                self.worst = Some((s, w));
            }
        }
        self
    }
}

fn to_f(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn witness(
    g: &PartiallyColoredGraph,
    root: Option<Vertex>,
    color: Option<Color>,
    w: impl ToString,
    lhs: f64,
    rhs: f64,
) -> Witness {
    Witness { graph: to_edge_list(g), root, color, w: w.to_string(), lhs, rhs }
}

struct Run<'a> {
    family: &'a Family,
    grid: &'a [BigRational],
    alpha: f64,
}

type Checker = fn(&Run, usize, &PartiallyColoredGraph) -> Result<Tally>;

fn regime(id: &str, family: &Family) -> Regime {
    let (q, delta) = (family.q, family.delta);
    match id {
        "prob_basic" | "prob_basic_degree" | "prob_basic_lower" | "ratio_envelope"
        | "few_blocked" | "sparse_neighborhood" | "sum_lower_bound"
            if q <= delta + 1 =>
        {
            Regime::OutOfRegime { reason: format!("needs q > Δ + 1, got q = {q}, Δ = {delta}") }
        }
        "eion_trick" if q < delta + 1 => {
            Regime::OutOfRegime { reason: format!("needs q >= Δ + 1, got q = {q}, Δ = {delta}") }
        }
        _ => Regime::InRegime,
    }
}

/// Runs one registered check over `family` at every weight in `grid`.
pub fn verify_bound(bound_id: &str, family: &Family, grid: &[BigRational]) -> Result<BoundReport> {
    let check: Checker = match bound_id {
        "prob_basic" => |r, i, g| check_prob_basic(r, i, g, false),
        "prob_basic_degree" => |r, i, g| check_prob_basic(r, i, g, true),
        "prob_basic_lower" => check_prob_basic_lower,
        "ratio_envelope" => check_ratio_envelope,
        "few_blocked" => check_few_blocked,
        "sparse_neighborhood" => check_sparse,
        "inner_product" => check_inner_product,
        "sum_lower_bound" => check_sum_lower_bound,
        "gradient_identity" => check_gradient,
        "telescoping" => check_telescoping,
        "eion_trick" => check_eion,
        "pin_to_leaves" => check_pin_to_leaves,
        other => return Err(PottsError::UnknownBound(other.to_string())),
    };
    let graphs = if bound_id == "pin_to_leaves" {
        family.graphs_pinned_anywhere()
    } else {
        family.graphs()
    };
    let run = Run { family, grid, alpha: ConstantPack::alpha_for(family.q, family.delta) };
    let tallies = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| check(&run, i, g))
        .collect::<Result<Vec<_>>>()?;
    let total = tallies.into_iter().fold(Tally::default(), Tally::merge);
    let (worst_slack, witness) = match total.worst {
        Some((s, w)) => (Some(s), Some(w)),
        None => (None, None),
    };
    Ok(BoundReport {
        bound_id: bound_id.to_string(),
        family: family.clone(),
        grid: grid.iter().map(|w| w.to_string()).collect(),
        regime: regime(bound_id, family),
        instances_checked: total.checked,
        skipped: total.skipped,
        violations: total.violations,
        worst_slack,
        witness,
    })
}

fn free_roots(g: &PartiallyColoredGraph) -> impl Iterator<Item = RootedGraph> + '_ {
    g.free_vertices().map(move |v| RootedGraph::new(g.clone(), v).expect("free vertex"))
}

/// The graph under every way of placing its pinned color classes relative
/// to the distinguished colors 1 and `q`.
fn color_variants(g: &PartiallyColoredGraph) -> Vec<PartiallyColoredGraph> {
    let k = g.pins().iter().flatten().copied().max().unwrap_or(0);
    if k == 0 {
        return vec![g.clone()];
    }
    color_embeddings(k, g.q())
        .into_iter()
        .map(|map| g.relabel_colors(&map).expect("embedding covers the classes"))
        .collect()
}

fn counts(rg: &RootedGraph) -> Vec<u32> {
    rg.blocked_color_vector().counts().to_vec()
}

fn check_prob_basic(run: &Run, _: usize, g: &PartiallyColoredGraph, degree_form: bool) -> Result<Tally> {
    let q = g.q();
    let mut t = Tally::default();
    for rg in free_roots(g) {
        let polys = restricted_partition_polys(&rg)?;
        let c = rg.blocked_color_vector();
        let v = rg.root();
        let d = if degree_form { g.degree(v) } else { g.free_degree(v) + c.blocked() };
        for w in run.grid {
            let Ok(m) = marginals_from_polys(&polys, w) else {
                t.skip();
                continue;
            };
            for j in 1..=q {
                let Ok(rhs) = upper_bound_basic_exact(q, d, c.get(j), w) else {
                    t.skip();
                    continue;
                };
                let lhs = &m[j - 1];
                t.record_exact(lhs, &rhs, &rhs - lhs, |l, r| witness(g, Some(v), Some(j), w, l, r));
            }
        }
    }
    Ok(t)
}

fn check_prob_basic_lower(run: &Run, _: usize, g: &PartiallyColoredGraph) -> Result<Tally> {
    let q = g.q();
    let mut t = Tally::default();
    let Ok(bound) = lower_bound_basic(q, run.family.delta, run.alpha) else {
        t.skipped += (g.free_count() * run.grid.len()) as u64;
        return Ok(t);
    };
    for rg in free_roots(g) {
        let polys = restricted_partition_polys(&rg)?;
        let c = rg.blocked_color_vector();
        for w in run.grid {
            let Ok(m) = marginals_from_polys(&polys, w) else {
                t.skip();
                continue;
            };
            for j in (1..=q).filter(|&j| c.get(j) == 0) {
                let lhs = to_f(&m[j - 1]);
                t.record_float(lhs - bound, bound, || witness(g, Some(rg.root()), Some(j), w, lhs, bound));
            }
        }
    }
    Ok(t)
}

fn check_few_blocked(run: &Run, _: usize, g: &PartiallyColoredGraph) -> Result<Tally> {
    let q = g.q();
    let mut t = Tally::default();
    if run.alpha <= 0.0 {
        t.skipped += (g.free_count() * run.grid.len()) as u64;
        return Ok(t);
    }
    for rg in free_roots(g) {
        let v = rg.root();
        let polys = restricted_partition_polys(&rg)?;
        let c = rg.blocked_color_vector();
        let (d, f) = (g.degree(v), g.free_degree(v));
        let free_nbrs: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&u| g.is_free(u)).collect();
        for w in run.grid {
            let Ok(m) = marginals_from_polys(&polys, w) else {
                t.skip();
                continue;
            };
            let wf = to_f(w);
            for j in (1..=q).filter(|&j| c.get(j) == 0) {
                let blocked = free_nbrs.iter().filter(|&&u| g.blocked_colors(u).contains(&j)).count();
                // Largest gamma with at most (1 - gamma) f blocked free neighbors.
                let gamma = if f == 0 { 1.0 } else { (f - blocked) as f64 / f as f64 };
                let rhs = few_blocked_bound(q, d, f, gamma, run.alpha, wf)?;
                let lhs = to_f(&m[j - 1]);
                t.record_float(rhs - lhs, rhs, || witness(g, Some(v), Some(j), w, lhs, rhs));
            }
        }
    }
    Ok(t)
}

fn check_sparse(run: &Run, _: usize, g: &PartiallyColoredGraph) -> Result<Tally> {
    let q = g.q();
    let mut t = Tally::default();
    if run.alpha <= 0.0 || !g.pins_are_leaves() {
        t.skipped += (g.free_count() * run.grid.len()) as u64;
        return Ok(t);
    }
    for rg in free_roots(g) {
        let v = rg.root();
        let polys = restricted_partition_polys(&rg)?;
        let c = rg.blocked_color_vector();
        let nbrs = g.neighbors(v);
        let e_h = nbrs
            .iter()
            .enumerate()
            .map(|(i, &a)| nbrs[i + 1..].iter().filter(|&&b| g.has_edge(a, b)).count())
            .sum();
        let l_size = q - c.blocked();
        for w in run.grid {
            let Ok(m) = marginals_from_polys(&polys, w) else {
                t.skip();
                continue;
            };
            let rhs = sparse_neighborhood_bound(q, run.family.delta, g.free_degree(v), l_size, e_h, to_f(w))?;
            for j in (1..=q).filter(|&j| c.get(j) == 0) {
                let lhs = to_f(&m[j - 1]);
                t.record_float(rhs - lhs, rhs, || witness(g, Some(v), Some(j), w, lhs, rhs));
            }
        }
    }
    Ok(t)
}

fn check_ratio_envelope(run: &Run, _: usize, g: &PartiallyColoredGraph) -> Result<Tally> {
    let q = g.q();
    let mut t = Tally::default();
    let Ok(env) = ratio_envelope(q, run.family.delta, run.alpha) else {
        t.skipped += (g.free_count() * run.grid.len()) as u64;
        return Ok(t);
    };
    for h in color_variants(g) {
        for rg in free_roots(&h).filter(|rg| rg.in_class(run.family.delta)) {
            let v = rg.root();
            let c = counts(&rg);
            let bar = restricted_partition_polys(&rg.strip_pinned_neighbors())?;
            for w in run.grid {
                let zq = bar[q - 1].eval_rational(w);
                if zq.is_zero() {
                    t.skip();
                    continue;
                }
                let e: Vec<BigRational> = bar[..q - 1].iter().map(|p| p.eval_rational(w) / &zq).collect();
                for (k, ej) in e.iter().enumerate() {
                    let x = to_f(ej);
                    let slack = (x - env.lo).min(env.hi - x);
                    t.record_float(slack, env.hi, || witness(&h, Some(v), Some(k + 1), w, x, env.lo));
                }
                let (p, qq) = pq_from_exp(w, &c, &e)?;
                if qq.is_zero() {
                    t.skip();
                    continue;
                }
                let r = to_f(&(p / qq)).abs();
                let slack = (r - env.f_lo).min(env.f_hi - r);
                t.record_float(slack, env.f_hi, || witness(&h, Some(v), None, w, r, env.f_lo));
            }
        }
    }
    Ok(t)
}

/// Root marginals of `G`, `G^{+1}` and `G^{+q}` as polynomials.
struct Attached {
    base: Vec<WPolynomial>,
    first: Vec<WPolynomial>,
    last: Vec<WPolynomial>,
}

impl Attached {
    fn new(rg: &RootedGraph) -> Result<Self> {
        Ok(Attached {
            base: restricted_partition_polys(rg)?,
            first: restricted_partition_polys(&rg.attach_pinned_leaf(1)?)?,
            last: restricted_partition_polys(&rg.attach_pinned_leaf(rg.q())?)?,
        })
    }
}

fn instance_seed(index: usize, parts: &[usize]) -> u64 {
    parts.iter().fold(index as u64 ^ 0x5eed, |acc, &p| acc.wrapping_mul(1_000_003).wrapping_add(p as u64))
}

fn check_inner_product(run: &Run, index: usize, g: &PartiallyColoredGraph) -> Result<Tally> {
    let q = g.q();
    let mut t = Tally::default();
    for (vi, h) in color_variants(g).iter().enumerate() {
        for rg in free_roots(h) {
            let v = rg.root();
            let a = Attached::new(&rg)?;
            for (wi, w) in run.grid.iter().enumerate() {
                let parts = (
                    marginals_from_polys(&a.base, w),
                    marginals_from_polys(&a.first, w),
                    marginals_from_polys(&a.last, w),
                );
                let (Ok(base), Ok(first), Ok(last)) = parts else {
                    t.skip();
                    continue;
                };
                let md = difference_from_marginals(first, last);
                let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(index, &[vi, v, wi]));
                for trial in 0..3 {
                    let x: Vec<Complex64> = (0..q - 1)
                        .map(|_| {
                            let re = rng.gen_range(-1.0..=1.0);
                            let im = if trial == 2 { rng.gen_range(-1.0..=1.0) } else { 0.0 };
                            Complex64::new(re, im)
                        })
                        .collect();
                    let b = inner_product_from_parts(&md, &base, w, &x);
                    t.record_float(b.rhs - b.lhs, b.rhs, || witness(h, Some(v), None, w, b.lhs, b.rhs));
                }
            }
        }
    }
    Ok(t)
}

fn check_sum_lower_bound(run: &Run, index: usize, g: &PartiallyColoredGraph) -> Result<Tally> {
    let q = g.q();
    let delta = run.family.delta;
    let mut t = Tally::default();
    let Ok(pack) = ConstantPack::new(run.alpha) else {
        t.skipped += (g.free_count() * run.grid.len()) as u64;
        return Ok(t);
    };
    let eps1 = 0.99 * pack.c1 / delta.max(1) as f64;
    let eps2 = 0.99 * PI / 8.0;
    for rg in free_roots(g).filter(|rg| rg.in_class(delta)) {
        let v = rg.root();
        let c = counts(&rg);
        let bar = restricted_partition_polys(&rg.strip_pinned_neighbors())?;
        for (wi, w) in run.grid.iter().enumerate() {
            let z: Vec<f64> = bar.iter().map(|p| to_f(&p.eval_rational(w))).collect();
            if z.contains(&0.0) {
                t.skip();
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(index, &[v, wi]));
            for ell in 1..=q {
                let x: Vec<Complex64> = (1..=q)
                    .filter(|&j| j != ell)
                    .map(|j| {
                        let r = (z[j - 1] / z[ell - 1]).ln();
                        r + Complex64::from_polar(eps2 * rng.gen::<f64>(), rng.gen_range(0.0..2.0 * PI))
                    })
                    .collect();
                let wt = to_f(w) + Complex64::from_polar(eps1 * rng.gen::<f64>(), rng.gen_range(0.0..2.0 * PI));
                for tau in 0..2 {
                    let (lhs, rhs) = sum_lower_bound(wt, &c, &x, tau, ell, &pack, delta)?;
                    t.record_float(lhs - rhs, rhs, || witness(g, Some(v), Some(ell), wt, lhs, rhs));
                }
            }
        }
    }
    Ok(t)
}

fn check_gradient(run: &Run, _: usize, g: &PartiallyColoredGraph) -> Result<Tally> {
    let q = g.q();
    let mut t = Tally::default();
    for h in color_variants(g) {
        for rg in free_roots(&h).filter(|rg| rg.in_class(run.family.delta)) {
            let v = rg.root();
            let c = counts(&rg);
            let a = Attached::new(&rg)?;
            let bar = restricted_partition_polys(&rg.strip_pinned_neighbors())?;
            for w in run.grid {
                let zq = bar[q - 1].eval_rational(w);
                let (Ok(first), Ok(last)) = (marginals_from_polys(&a.first, w), marginals_from_polys(&a.last, w)) else {
                    t.skip();
                    continue;
                };
                if zq.is_zero() {
                    t.skip();
                    continue;
                }
                let e: Vec<BigRational> = bar[..q - 1].iter().map(|p| p.eval_rational(w) / &zq).collect();
                let grad = match grad_from_exp(w, &c, &e) {
                    Ok(grad) => grad,
                    Err(PottsError::Pole) => {
                        t.skip();
                        continue;
                    }
                    Err(err) => return Err(err),
                };
                let md = difference_from_marginals(first, last);
                let worst = grad
                    .iter()
                    .zip(&md.entries)
                    .map(|(a, b)| (a - b).abs())
                    .max()
                    .unwrap_or_else(BigRational::zero);
                let exact = worst.is_zero();
                let (l, r) = (to_f(&grad[0]), to_f(&md.entries[0]));
                t.record(-to_f(&worst), !exact, || witness(&h, Some(v), None, w, l, r));
            }
        }
    }
    Ok(t)
}

fn check_telescoping(run: &Run, _: usize, g: &PartiallyColoredGraph) -> Result<Tally> {
    let q = g.q();
    let mut t = Tally::default();
    for h in color_variants(g) {
        for rg in free_roots(&h) {
            let v = rg.root();
            let z = restricted_partition_polys(&rg)?;
            let mut reversed = h.neighbors(v).to_vec();
            reversed.reverse();
            for order in [None, Some(reversed.as_slice())] {
                let terms = rg.telescoping_decompose(1, q, order)?;
                let hats = terms
                    .iter()
                    .map(|term| restricted_partition_polys(&term.hat))
                    .collect::<Result<Vec<_>>>()?;
                let mut lhs = z[0].clone();
                let mut rhs = z[q - 1].clone();
                for hz in &hats {
                    lhs = &lhs * &hz[q - 1];
                    rhs = &rhs * &hz[0];
                }
                let holds = lhs == rhs;
                t.record(if holds { 0.0 } else { -1.0 }, !holds, || {
                    witness(&h, Some(v), Some(1), "polynomial", 0.0, 0.0)
                });
                if order.is_some() {
                    continue;
                }
                // Each factor as P_c / Q_c at the exact ratios of the
                // stripped reduced graph.
                for (term, hz) in terms.iter().zip(&hats) {
                    let Some(reduced) = &term.reduced else { continue };
                    let c = counts(reduced);
                    let bar = restricted_partition_polys(&reduced.strip_pinned_neighbors())?;
                    for w in run.grid {
                        let zq = bar[q - 1].eval_rational(w);
                        if zq.is_zero() {
                            t.skip();
                            continue;
                        }
                        let e: Vec<BigRational> =
                            bar[..q - 1].iter().map(|p| p.eval_rational(w) / &zq).collect();
                        let (p, qq) = pq_from_exp(w, &c, &e)?;
                        let (z1, zl) = (hz[0].eval_rational(w), hz[q - 1].eval_rational(w));
                        let holds = p * &zq == z1 && qq * &zq == zl;
                        t.record(if holds { 0.0 } else { -1.0 }, !holds, || {
                            witness(&h, Some(v), Some(1), w, to_f(&z1), to_f(&zl))
                        });
                    }
                }
            }
        }
    }
    Ok(t)
}

fn check_eion(run: &Run, _: usize, g: &PartiallyColoredGraph) -> Result<Tally> {
    let q = g.q();
    let mut t = Tally::default();
    if g.max_degree() + 1 > q {
        t.skipped += (g.free_count() * run.grid.len()) as u64;
        return Ok(t);
    }
    for h in color_variants(g) {
        for v in h.free_vertices() {
            for w in run.grid {
                let Ok(lhs) = marginal(&h, w, v, q) else {
                    t.skip();
                    continue;
                };
                let e = (1..=q)
                    .map(|ell| neighborhood_expectation(&h, w, v, ell))
                    .collect::<Result<Vec<_>>>();
                let e = match e {
                    Ok(e) => e,
                    Err(PottsError::UndefinedMeasure) => {
                        t.skip();
                        continue;
                    }
                    Err(err) => return Err(err),
                };
                let total: BigRational = e.iter().sum();
                let rhs = &e[q - 1] / total;
                let diff = (&lhs - &rhs).abs();
                t.record(-to_f(&diff), !diff.is_zero(), || witness(&h, Some(v), Some(q), w, to_f(&lhs), to_f(&rhs)));
            }
        }
    }
    Ok(t)
}

fn check_pin_to_leaves(_: &Run, _: usize, g: &PartiallyColoredGraph) -> Result<Tally> {
    let mut t = Tally::default();
    let h = g.pin_to_leaves();
    let leaves = (0..h.n()).all(|v| h.is_free(v) || h.degree(v) <= 1);
    let holds = partition_poly(g)? == partition_poly(&h)? && leaves;
    t.record(if holds { 0.0 } else { -1.0 }, !holds, || witness(g, None, None, "polynomial", 0.0, 0.0));
    Ok(t)
}

/// The neighborhood-clique witness for the basic upper bound: the root has
/// `delta - 1` neighbors forming a clique, each with a leaf pinned to color 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tightness {
    pub graph: String,
    pub marginal: f64,
    pub bound: f64,
    /// `(bound - marginal) / bound`.
    pub relative_slack: f64,
}

pub fn prob_basic_tightness(delta: usize, q: usize) -> Result<Tightness> {
    if delta < 2 {
        return Err(PottsError::Domain("the witness needs Δ >= 2".into()));
    }
    let k = delta - 1;
    let mut g = PartiallyColoredGraph::new(k + 1, q, [])?;
    for a in 1..=k {
        g.add_edge(0, a)?;
        for b in a + 1..=k {
            g.add_edge(a, b)?;
        }
        let leaf = g.add_vertex(Some(1))?;
        g.add_edge(a, leaf)?;
    }
    let w = BigRational::zero();
    let m = to_f(&marginal(&g, &w, 0, 1)?);
    let bound = to_f(&upper_bound_basic_exact(q, g.degree(0), 0, &w)?);
    Ok(Tightness {
        graph: to_edge_list(&g),
        marginal: m,
        bound,
        relative_slack: (bound - m) / bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::grid;

    #[test]
    fn set_partition_counts() {
        assert_eq!(set_partitions(3, 5).len(), 5);
        assert_eq!(set_partitions(4, 2).len(), 8);
        assert_eq!(set_partitions(0, 2), vec![Vec::<Color>::new()]);
    }

    #[test]
    fn unknown_id() {
        let err = verify_bound("nope", &Family::new(2, 2, 3), &grid(2)).unwrap_err();
        assert_eq!(err, PottsError::UnknownBound("nope".into()));
    }

    #[test]
    fn small_family_passes_every_check() {
        let fam = Family::new(4, 3, 5);
        let mut bad = Vec::new();
        for id in bound_ids().iter().filter(|&&id| id != "prob_basic") {
            let r = verify_bound(id, &fam, &grid(3)).unwrap();
            assert!(r.in_regime(), "{id}");
            assert!(r.instances_checked > 0, "{id}");
            if r.violations > 0 {
                bad.push(format!("{id}: {r:?}"));
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn out_of_regime_is_flagged() {
        let r = verify_bound("prob_basic", &Family::new(4, 3, 4), &grid(3)).unwrap();
        assert!(!r.in_regime());
        assert!(r.passed());
    }

    #[test]
    fn triangle_witness_is_tight() {
        let t = prob_basic_tightness(3, 6).unwrap();
        assert!((t.marginal - 0.25).abs() < 1e-15);
        assert!(t.relative_slack.abs() < 1e-12);
    }
}
