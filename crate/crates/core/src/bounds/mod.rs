//! Closed-form marginal bounds and constants, plus the empirical verifiers
//! in [`verify`] that check them against exact marginals.

pub mod verify;

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{pow, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{PottsError, Result};

pub use verify::{
    bound_ids, prob_basic_tightness, verify_bound, BoundReport, Family, Regime, Witness,
};

fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(PottsError::Domain(msg.into()))
}

/// The constants attached to a slack parameter `alpha > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantPack {
    pub alpha: f64,
    pub m: f64,
    pub f: f64,
    pub g: f64,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
}

impl ConstantPack {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return domain(format!("alpha must be positive, got {alpha}"));
        }
        let e1 = (1.0 / alpha).exp();
        let f = alpha * alpha / (3.0 * (1.0 + alpha) * e1);
        let g = 22.0 * e1 * (1.0 + alpha) / alpha;
        Ok(ConstantPack {
            alpha,
            m: (1.0 + alpha) * e1 / alpha,
            f,
            g,
            c: f / 2.0,
            c1: f / (2.0 * g),
            c2: alpha.powi(3) / (16.0 * (1.0 + alpha).powi(3) * e1 * e1),
        })
    }

    /// Largest `alpha` with `q >= (1 + alpha) delta + 1`.
    pub fn alpha_for(q: usize, delta: usize) -> f64 {
        (q as f64 - 1.0) / delta.max(1) as f64 - 1.0
    }
}

fn check_alpha_regime(q: usize, delta: usize, alpha: f64) -> Result<()> {
    if !(alpha > 0.0) {
        return domain(format!("alpha must be positive, got {alpha}"));
    }
    if (q as f64) < (1.0 + alpha) * delta as f64 + 1.0 - 1e-12 {
        return domain(format!("q = {q} is below (1 + alpha) * {delta} + 1 for alpha = {alpha}"));
    }
    Ok(())
}

/// `w^{c_j} / (q - (f + b) + (f + b) w)`.
pub fn upper_bound_basic(q: usize, f: usize, b: usize, c_j: u32, w: f64) -> Result<f64> {
    upper_bound_basic_degree(q, f + b, c_j, w)
}

/// `w^{c_j} / (q - d + d w)`.
pub fn upper_bound_basic_degree(q: usize, d: usize, c_j: u32, w: f64) -> Result<f64> {
    let den = q as f64 - d as f64 + d as f64 * w;
    if den <= 0.0 {
        return domain(format!("denominator q - d + d w = {den} is not positive"));
    }
    Ok(w.powi(c_j as i32) / den)
}

/// Exact form of [`upper_bound_basic_degree`]; pass `d = f + b` for the
/// first form.
pub fn upper_bound_basic_exact(q: usize, d: usize, c_j: u32, w: &BigRational) -> Result<BigRational> {
    let d_r = BigRational::from_integer(d.into());
    let den = BigRational::from_integer(q.into()) - &d_r + &d_r * w;
    if den <= BigRational::zero() {
        return domain("denominator q - d + d w is not positive");
    }
    Ok(pow(w.clone(), c_j as usize) / den)
}

/// `1 / (e^{1/alpha} q)` for a color free at the root.
pub fn lower_bound_basic(q: usize, delta: usize, alpha: f64) -> Result<f64> {
    check_alpha_regime(q, delta, alpha)?;
    Ok(1.0 / ((1.0 / alpha).exp() * q as f64))
}

/// Envelope for `exp(R_j)` and for `|P/Q|` at real log-ratio points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioEnvelope {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

pub fn ratio_envelope(q: usize, delta: usize, alpha: f64) -> Result<RatioEnvelope> {
    check_alpha_regime(q, delta, alpha)?;
    let (qf, gap) = (q as f64, (q - delta) as f64);
    let e1 = (1.0 / alpha).exp();
    let lo = gap / (qf * e1);
    let f_lo = gap.powi(3) / (qf.powi(3) * e1 * e1);
    Ok(RatioEnvelope { lo, hi: 1.0 / lo, f_lo, f_hi: 1.0 / f_lo })
}

/// `|Σ_{j≠ℓ} wt^{c_j} e^{x_j} + wt^{c_ℓ+τ}|` against `C(alpha) Δ`.
///
/// `x` lists the entries for colors `j ≠ ell` in increasing order of `j`.
pub fn sum_lower_bound(
    wt: Complex64,
    c: &[u32],
    x: &[Complex64],
    tau: u32,
    ell: usize,
    pack: &ConstantPack,
    delta: usize,
) -> Result<(f64, f64)> {
    let q = c.len();
    if ell == 0 || ell > q || x.len() + 1 != q {
        return domain("x must hold one entry per color other than ell");
    }
    let mut sum = wt.powu(c[ell - 1] + tau);
    let others = (1..=q).filter(|&j| j != ell);
    for (j, xj) in others.zip(x) {
        sum += wt.powu(c[j - 1]) * xj.exp();
    }
    Ok((sum.norm(), pack.c * delta as f64))
}

/// `|Σ u_j|` against `cos(φ/2) Σ |u_j|` for nonzero planar vectors whose
/// pairwise angles are at most `phi < 2π/3`.
pub fn barvinok_cone_check(us: &[Complex64], phi: f64) -> Result<(f64, f64)> {
    if !(0.0..2.0 * PI / 3.0).contains(&phi) {
        return domain(format!("cone angle {phi} must lie in [0, 2π/3)"));
    }
    if us.iter().any(|u| u.norm() == 0.0) {
        return domain("vectors must be nonzero");
    }
    for (i, a) in us.iter().enumerate() {
        for b in &us[i + 1..] {
            let angle = (b / a).arg().abs();
            if angle > phi + 1e-12 {
                return domain(format!("pairwise angle {angle} exceeds {phi}"));
            }
        }
    }
    let lhs = us.iter().sum::<Complex64>().norm();
    let rhs = (phi / 2.0).cos() * us.iter().map(|u| u.norm()).sum::<f64>();
    Ok((lhs, rhs))
}

/// `((1-w) exp(-γ f / (q e^{1/α})) + w) / (q - d + d w)`.
pub fn few_blocked_bound(q: usize, d: usize, f: usize, gamma: f64, alpha: f64, w: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return domain(format!("gamma must lie in [0, 1], got {gamma}"));
    }
    if !(alpha > 0.0) {
        return domain(format!("alpha must be positive, got {alpha}"));
    }
    let den = q as f64 - d as f64 + d as f64 * w;
    if den <= 0.0 {
        return domain("denominator q - d + d w is not positive");
    }
    let decay = (-gamma * f as f64 / (q as f64 * (1.0 / alpha).exp())).exp();
    Ok(((1.0 - w) * decay + w) / den)
}

/// `exp(-0.998 γ / (1.998 e^{1000/996})) / 0.998`, the worst case of the
/// few-blocked bound times `f + 1` over the corollary's parameter range.
pub fn few_blocked_chain(gamma: f64) -> f64 {
    (-0.998 * gamma / (1.998 * (1000.0f64 / 996.0).exp())).exp() / 0.998
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FewBlockedCorollary {
    /// Claimed bound on `(f + 1) ℙ[Φ(v) = j]`: 1 or 0.977.
    pub multiplier: f64,
    /// [`few_blocked_chain`] at the threshold that `gamma` clears.
    pub chain: f64,
    /// `(f + 1)` times the lemma bound at `w = 0`, `d = Δ` and
    /// `alpha = 1 - η - 1/Δ`, for the given parameters.
    pub lemma_times_f_plus_1: f64,
}

pub fn corollary_few_blocked(q: f64, delta: usize, f: usize, gamma: f64, eta: f64) -> Result<FewBlockedCorollary> {
    let df = delta as f64;
    if delta < 500 || !(0.0..=0.002).contains(&eta) || q < (2.0 - eta) * df || f + 1 > delta {
        return domain("needs Δ >= 500, 0 <= η <= 0.002, q >= (2 - η)Δ and f <= Δ - 1");
    }
    let (threshold, multiplier) = if gamma >= 0.14 {
        (0.14, 0.977)
    } else if gamma >= 0.02 {
        (0.02, 1.0)
    } else {
        return domain(format!("gamma = {gamma} is below 0.02"));
    };
    if gamma > 1.0 {
        return domain("gamma must be at most 1");
    }
    let chain = few_blocked_chain(threshold);
    if chain >= multiplier {
        return domain(format!("chain value {chain} does not clear {multiplier}"));
    }
    let alpha = 1.0 - eta - 1.0 / df;
    let decay = (-gamma * f as f64 / (q * (1.0 / alpha).exp())).exp();
    Ok(FewBlockedCorollary {
        multiplier,
        chain,
        lemma_times_f_plus_1: (f as f64 + 1.0) * decay / (q - df),
    })
}

/// Sparse-neighborhood bound
/// `1 / (|L| A^{((q-Δ)f + 2e(H) + f)/|L|} B^{fq/|L|})` with
/// `A = 1 - (1-w)/(q-Δ+1-w)` and `B = 1 - w/(q-Δ+1)`.
pub fn sparse_neighborhood_bound(
    q: usize,
    delta: usize,
    f: usize,
    l_size: usize,
    e_h: usize,
    w: f64,
) -> Result<f64> {
    if l_size == 0 {
        return domain("the set of free colors must be nonempty");
    }
    if q <= delta + 1 {
        return domain(format!("needs q > Δ + 1, got q = {q}, Δ = {delta}"));
    }
    let (qf, df, ff, lf) = (q as f64, delta as f64, f as f64, l_size as f64);
    let a = 1.0 - (1.0 - w) / (qf - df + 1.0 - w);
    let b = 1.0 - w / (qf - df + 1.0);
    let ea = ((qf - df) * ff + 2.0 * e_h as f64 + ff) / lf;
    let eb = ff * qf / lf;
    Ok(1.0 / (lf * a.powf(ea) * b.powf(eb)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseCorollary {
    /// `(1 - (1-w)/((1-η)Δ))^{((1-η)Δ + 0.36Δ)/(2-η-1/Δ)}`, at least 0.5053.
    pub first_factor: f64,
    /// `(1 - w/((1-η)Δ))^{(2-η)Δ/(2-η-1/Δ)}`, at least 0.9979.
    pub second_factor: f64,
    /// `1 / (0.504 (2 - η - 1/Δ))`, below 1.
    pub final_multiplier: f64,
    /// `(f + 1)` times the lemma bound with `|L| = q - Δ + f` and
    /// `2e(H) = d̄ f`.
    pub lemma_times_f_plus_1: f64,
}

pub fn corollary_sparse(q: f64, delta: usize, f: f64, dbar: f64, eta: f64, w: f64) -> Result<SparseCorollary> {
    let df = delta as f64;
    if delta < 500
        || !(0.0..=0.002).contains(&eta)
        || q < (2.0 - eta) * df
        || f < (1.0 - eta) * df - 2.0 / 3.0
        || f > df
        || !(0.0..=0.002).contains(&w)
        || dbar > 0.36 * f
    {
        return domain(
            "needs Δ >= 500, η <= 0.002, q >= (2-η)Δ, f >= (1-η)Δ - 2/3, w <= 0.002, d̄ <= 0.36 f",
        );
    }
    let scale = 2.0 - eta - 1.0 / df;
    let base = (1.0 - eta) * df;
    let first_factor = (1.0 - (1.0 - w) / base).powf(((1.0 - eta) * df + 0.36 * df) / scale);
    let second_factor = (1.0 - w / base).powf((2.0 - eta) * df / scale);
    let l = q - df + f;
    let a = 1.0 - (1.0 - w) / (q - df + 1.0 - w);
    let b = 1.0 - w / (q - df + 1.0);
    let bound = 1.0 / (l * a.powf(((q - df) * f + dbar * f + f) / l) * b.powf(f * q / l));
    Ok(SparseCorollary {
        first_factor,
        second_factor,
        final_multiplier: 1.0 / (0.504 * scale),
        lemma_times_f_plus_1: (f + 1.0) * bound,
    })
}

/// `min(π/8, C1(α)/Δ, C2(α) ε, ε / (8 C2(α)))`.
pub fn delta_for_epsilon(alpha: f64, delta_deg: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("epsilon must lie in (0, 1), got {eps}"));
    }
    if delta_deg == 0 {
        return domain("maximum degree must be positive");
    }
    let p = ConstantPack::new(alpha)?;
    Ok((PI / 8.0)
        .min(p.c1 / delta_deg as f64)
        .min(p.c2 * eps)
        .min(eps / (8.0 * p.c2)))
}

/// Perturbation radii for the induction statements: `ε1` from the δ chain
/// with `ε = ε2 / (3Δ²)`.
pub fn epsilon1_for(alpha: f64, delta_deg: usize, eps2: f64) -> Result<f64> {
    delta_for_epsilon(alpha, delta_deg, eps2 / (3.0 * (delta_deg * delta_deg) as f64))
}

/// `w` as an exact rational, for grids given as `k / n`.
pub fn grid(points: usize) -> Vec<BigRational> {
    if points <= 1 {
        return vec![BigRational::one()];
    }
    let n = (points - 1) as i64;
    (0..=n).map(|k| BigRational::new(k.into(), n.into())).collect()
}
