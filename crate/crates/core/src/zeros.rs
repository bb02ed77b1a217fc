//! Zeros of `Z_G` in the complex `w`-plane and their distance to `[0, 1]`,
//! exact non-vanishing certificates, and the three induction statements
//! evaluated on concrete rooted graphs.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PottsError, Result};
use crate::graph::{to_edge_list, PartiallyColoredGraph, RootedGraph};
use crate::poly::{GaussianRational, WPolynomial};
use crate::potts::{marginals_from_polys, partition_poly, restricted_partition_polys};
use crate::roots::polynomial_roots;

/// A root of the partition function with its residual `|Z(root)|`,
/// evaluated exactly at the double-precision root.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootEntry {
    /// `[re, im]`.
    pub root: [f64; 2],
    pub residual: f64,
}

impl RootEntry {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.root[0], self.root[1])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    /// Edge-list text of the graph.
    pub graph: String,
    pub q: usize,
    pub degree: usize,
    pub coeff_norm: f64,
    pub roots: Vec<RootEntry>,
    /// `None` when there are no roots (distance `+∞`).
    pub min_dist_to_interval: Option<f64>,
    /// The number of roots equals the degree.
    pub degree_check: bool,
}

impl ZeroReport {
    pub fn min_dist(&self) -> f64 {
        self.min_dist_to_interval.unwrap_or(f64::INFINITY)
    }

    pub fn max_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    /// Every residual is below `1e-8` times the coefficient norm.
    pub fn residuals_ok(&self) -> bool {
        self.max_residual() < 1e-8 * self.coeff_norm
    }
}

/// Euclidean distance from `z` to the segment `[0, 1]`.
pub fn distance_to_unit_interval(z: Complex64) -> f64 {
    Complex64::new(z.re - z.re.clamp(0.0, 1.0), z.im).norm()
}

pub fn roots_in_w(g: &PartiallyColoredGraph) -> Result<ZeroReport> {
    Ok(report_for_poly(to_edge_list(g), g.q(), &partition_poly(g)?))
}

pub fn report_for_poly(graph: String, q: usize, p: &WPolynomial) -> ZeroReport {
    let degree = p.degree().unwrap_or(0);
    let roots: Vec<RootEntry> = polynomial_roots(p)
        .into_iter()
        .map(|z| {
            let residual = GaussianRational::from_complex(z)
                .map(|g| p.eval_gaussian(&g).norm_sqr().to_f64().unwrap_or(f64::INFINITY).sqrt())
                .unwrap_or(f64::INFINITY);
            RootEntry { root: [z.re, z.im], residual }
        })
        .collect();
    let min_dist = roots
        .iter()
        .map(|r| distance_to_unit_interval(r.value()))
        .min_by(f64::total_cmp);
    ZeroReport {
        graph,
        q,
        degree,
        coeff_norm: p.coeff_norm(),
        degree_check: roots.len() == degree,
        roots,
        min_dist_to_interval: min_dist,
    }
}

/// Smallest integer `q` with `q >= (2 - 0.002) Δ`.
pub fn regime_q(delta: usize) -> usize {
    (1.998 * delta as f64 - 1e-9).ceil() as usize
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub q: usize,
    pub delta: usize,
    /// `q` is below the zero-free regime; results are exploratory.
    pub exploratory: bool,
    pub graphs: usize,
    pub min_margin: Option<f64>,
    pub worst_graph: Option<String>,
    pub max_residual_ratio: f64,
    pub all_degree_checks: bool,
    pub reports: Vec<ZeroReport>,
}

impl ScanSummary {
    pub fn margin_positive(&self) -> bool {
        self.min_margin.map_or(true, |m| m > 1e-12)
    }
}

/// Zero reports for every graph (all recolored to `q`), with the family
/// minimum distance to `[0, 1]`.
pub fn zero_free_scan(graphs: &[PartiallyColoredGraph], q: usize, delta: usize) -> Result<ScanSummary> {
    let reports = graphs
        .par_iter()
        .map(|g| roots_in_w(&g.with_q(q)?))
        .collect::<Result<Vec<_>>>()?;
    let worst = reports
        .iter()
        .filter(|r| r.min_dist_to_interval.is_some())
        .min_by(|a, b| a.min_dist().total_cmp(&b.min_dist()));
    Ok(ScanSummary {
        q,
        delta,
        exploratory: q < regime_q(delta),
        graphs: reports.len(),
        min_margin: worst.and_then(|r| r.min_dist_to_interval),
        worst_graph: worst.map(|r| r.graph.clone()),
        max_residual_ratio: reports
            .iter()
            .filter(|r| r.coeff_norm > 0.0)
            .map(|r| r.max_residual() / r.coeff_norm)
            .fold(0.0, f64::max),
        all_degree_checks: reports.iter().all(|r| r.degree_check),
        reports,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueMargin {
    pub delta: usize,
    pub q: usize,
    pub margin: f64,
}

/// Margins of `K_{Δ+1}` at `q = 2Δ`.
pub fn clique_margins(deltas: &[usize]) -> Result<Vec<CliqueMargin>> {
    deltas
        .iter()
        .map(|&delta| {
            let q = 2 * delta;
            let n = delta + 1;
            let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            let r = roots_in_w(&PartiallyColoredGraph::new(n, q, edges)?)?;
            Ok(CliqueMargin { delta, q, margin: r.min_dist() })
        })
        .collect()
}

/// Least-squares slope of `log margin` against `log Δ`.
pub fn log_log_slope(table: &[CliqueMargin]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = table
        .iter()
        .filter(|c| c.margin.is_finite() && c.margin > 0.0)
        .map(|c| ((c.delta as f64).ln(), c.margin.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Exact verdict `Z_G(wt) != 0`.
pub fn certify_nonvanishing(g: &PartiallyColoredGraph, wt: &GaussianRational) -> Result<bool> {
    Ok(!partition_poly(g)?.eval_gaussian(wt).is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InductionCheck {
    pub s1: bool,
    pub s2: bool,
    pub s3: bool,
    /// Worst `bound - lhs` for statement (i).
    pub margin1: f64,
    /// Worst `bound - lhs` for statement (ii).
    pub margin2: f64,
    pub free_degree: usize,
}

impl InductionCheck {
    pub fn holds(&self) -> bool {
        self.s1 && self.s2 && self.s3
    }
}

/// Evaluates the three induction statements at `(w, wt)` over all color
/// triples `i, j, k`.
///
/// Requires `(G, v)` in the class for `delta` with root free degree at most
/// `delta - 1`. A vanishing restricted partition function at `w` or `wt` is
/// reported as a `ZeroRatio` error (indeterminate).
pub fn induction_statement_check(
    rg: &RootedGraph,
    w: &BigRational,
    wt: Complex64,
    eps2: f64,
    delta: usize,
) -> Result<InductionCheck> {
    rg.check_in_class(delta)?;
    let g = rg.graph();
    let q = g.q();
    let d = g.free_degree(rg.root());
    if d + 1 > delta {
        return Err(PottsError::Domain(format!(
            "root free degree {d} exceeds Δ - 1 = {}",
            delta - 1
        )));
    }
    let bar = restricted_partition_polys(&rg.strip_pinned_neighbors())?;
    let at_w: Vec<BigRational> = bar.iter().map(|p| p.eval_rational(w)).collect();
    let at_wt: Vec<Complex64> = bar.iter().map(|p| p.eval_complex(wt)).collect();
    for (k, (a, b)) in at_w.iter().zip(&at_wt).enumerate() {
        if a.is_zero() || b.norm() == 0.0 {
            return Err(PottsError::ZeroRatio { color: k + 1 });
        }
    }
    // diff[i][j] = |R_{i,j}(w) - R_{i,j}(wt)|
    let mut diff = vec![vec![0.0; q]; q];
    for i in 0..q {
        for j in 0..q {
            if i == j {
                continue;
            }
            let real = (&at_w[i] / &at_w[j]).to_f64().unwrap_or(f64::NAN).ln();
            let ratio = at_wt[i] / at_wt[j];
            if ratio.im == 0.0 && ratio.re < 0.0 {
                return Err(PottsError::Branch { re: ratio.re, im: ratio.im });
            }
            diff[i][j] = (ratio.ln() - real).norm();
        }
    }
    let wf = w.to_f64().unwrap_or(f64::NAN);
    let bound1 = ((1.0 - wf) * d as f64 + 2.0 / 3.0) * eps2 / delta as f64;
    let worst_diff = diff.iter().flatten().copied().fold(0.0, f64::max);
    let margin1 = bound1 - worst_diff;

    let bound2 = eps2 / delta as f64;
    let mut margin2 = f64::INFINITY;
    for k in 1..=q {
        let plus = rg.attach_pinned_leaf(k)?;
        let probs = marginals_from_polys(&restricted_partition_polys(&plus)?, w)?;
        for j in 0..q {
            let worst_i = (0..q).map(|i| diff[i][j]).fold(0.0, f64::max);
            let lhs = probs[j].to_f64().unwrap_or(f64::NAN) * worst_i;
            margin2 = margin2.min(bound2 - lhs);
        }
    }

    let exact_wt = GaussianRational::from_complex(wt)
        .ok_or_else(|| PottsError::Domain("wt must be finite".into()))?;
    let s3 = certify_nonvanishing(g, &exact_wt)?;
    Ok(InductionCheck {
        s1: margin1 >= 0.0,
        s2: margin2 >= 0.0,
        s3,
        margin1,
        margin2,
        free_degree: d,
    })
}
