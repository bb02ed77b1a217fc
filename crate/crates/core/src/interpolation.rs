//! Deterministic approximation of `log Z_G(w)` by Taylor stepping from the
//! anchor `Z_G(1) = q^{#free}` down to the target weight.
//!
//! The truncation error of one step follows from `log p(w) = log c +
//! Σ log(w - r_i)`: expanding at `w_a` with step `h`, root `r_i` contributes
//! a tail `Σ_{j>m} (h/|w_a - r_i|)^j / j`, so a step with `x = h / r` (where
//! `r` is the distance from `w_a` to the nearest root) has error at most
//! `deg p · x^{m+1} / ((m+1)(1-x))`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{PottsError, Result};
use crate::graph::PartiallyColoredGraph;
use crate::poly::WPolynomial;
use crate::potts::partition_poly;
use crate::zeros::{report_for_poly, ZeroReport};

/// Contraction factor: every step is at most this fraction of the distance
/// from its anchor to the nearest root.
pub const RHO: f64 = 0.5;

/// Largest Taylor order tried before giving up.
const MAX_ORDER: usize = 2000;

/// Taylor coefficients of `p` at `w0`, i.e. `p(w0 + h) = Σ b_k h^k`.
fn shifted_coeffs(p: &WPolynomial, w0: &BigRational) -> Vec<BigRational> {
    let mut b: Vec<BigRational> =
        p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
    // Repeated synthetic division by (w - w0).
    let n = b.len();
    for i in 0..n {
        for k in (i..n - 1).rev() {
            let carry = &b[k + 1] * w0;
            b[k] += carry;
        }
    }
    b
}

/// Taylor coefficients `a_1..=a_m` of `log p` at `w0`:
/// `log p(w0 + h) = log p(w0) + Σ a_k h^k`.
fn log_taylor(p: &WPolynomial, w0: &BigRational, m: usize) -> Result<Vec<BigRational>> {
    let b = shifted_coeffs(p, w0);
    let b0 = b.first().cloned().unwrap_or_else(BigRational::zero);
    if b0.is_zero() {
        return Err(PottsError::Pole);
    }
    let coeff = |k: usize| b.get(k).cloned().unwrap_or_else(BigRational::zero);
    let mut a: Vec<BigRational> = vec![BigRational::zero(); m + 1];
    for k in 1..=m {
        let mut s = BigRational::from_integer(BigInt::from(k)) * coeff(k);
        for i in 1..k {
            s -= BigRational::from_integer(BigInt::from(i)) * &a[i] * coeff(k - i);
        }
        a[k] = s / (&b0 * BigRational::from_integer(BigInt::from(k)));
    }
    a.remove(0);
    Ok(a)
}

/// Derivatives `(log p)^{(k)}(w0)` for `k = 1..=m`, exact.
pub fn log_derivatives_at(p: &WPolynomial, w0: &BigRational, m: usize) -> Result<Vec<BigRational>> {
    let a = log_taylor(p, w0, m)?;
    let mut fact = BigRational::one();
    Ok(a.into_iter()
        .enumerate()
        .map(|(i, ak)| {
            fact *= BigRational::from_integer(BigInt::from(i + 1));
            ak * &fact
        })
        .collect())
}

/// Rigorous bound on `Σ_{j>m} x^j / j` for `0 <= x < 1`.
pub fn tail_bound(x: f64, m: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    x.powi(m as i32 + 1) / ((m as f64 + 1.0) * (1.0 - x))
}

fn nearest_root(roots: &[Complex64], w: f64) -> f64 {
    roots.iter().map(|r| (r - w).norm()).fold(f64::INFINITY, f64::min)
}

/// `m`-term estimate of `log p(w_b) - log p(w_a)` and its error bound.
/// The step must be shorter than the distance from `w_a` to every root.
pub fn taylor_step(
    p: &WPolynomial,
    w_a: &BigRational,
    w_b: &BigRational,
    m: usize,
) -> Result<(Complex64, f64)> {
    let roots = crate::roots::polynomial_roots(p);
    let (delta, bound) = exact_step(p, w_a, w_b, m, &roots)?;
    Ok((Complex64::new(delta.to_f64().unwrap_or(f64::NAN), 0.0), bound))
}

fn exact_step(
    p: &WPolynomial,
    w_a: &BigRational,
    w_b: &BigRational,
    m: usize,
    roots: &[Complex64],
) -> Result<(BigRational, f64)> {
    let h = w_b - w_a;
    if h.is_zero() {
        return Ok((BigRational::zero(), 0.0));
    }
    let step = h.abs().to_f64().unwrap_or(f64::INFINITY);
    let radius = nearest_root(roots, w_a.to_f64().unwrap_or(f64::NAN));
    if step >= radius {
        return Err(PottsError::StepTooLarge { step, radius });
    }
    let a = log_taylor(p, w_a, m)?;
    let mut hk = BigRational::one();
    let mut delta = BigRational::zero();
    for ak in &a {
        hk *= &h;
        delta += ak * &hk;
    }
    let deg = p.degree().unwrap_or(0) as f64;
    Ok((delta, deg * tail_bound(step / radius, m)))
}

/// Uniform steps from `w = 1` to the target with a common Taylor order.
#[derive(Clone, Debug, PartialEq)]
pub struct StepPlan {
    /// `1 = w_0 > w_1 > ... > w_T = target`.
    pub anchors: Vec<BigRational>,
    pub order: usize,
    /// Distance from each anchor `w_0..w_{T-1}` to the nearest root.
    pub radii: Vec<f64>,
    /// Sum of the per-step tail bounds.
    pub error_bound: f64,
}

impl StepPlan {
    pub fn steps(&self) -> usize {
        self.anchors.len() - 1
    }
}

pub fn choose_plan(report: &ZeroReport, eps: f64) -> Result<StepPlan> {
    choose_plan_to(report, eps, &BigRational::zero())
}

/// Plan for the segment from 1 down to `target ∈ [0, 1]`.
pub fn choose_plan_to(report: &ZeroReport, eps: f64, target: &BigRational) -> Result<StepPlan> {
    if !(eps > 0.0) {
        return Err(PottsError::Domain(format!("eps must be positive, got {eps}")));
    }
    if *target < BigRational::zero() || *target > BigRational::one() {
        return Err(PottsError::Domain("target must lie in [0, 1]".into()));
    }
    let one = BigRational::one();
    if report.roots.is_empty() {
        return Ok(StepPlan {
            anchors: vec![one, target.clone()],
            order: 0,
            radii: vec![f64::INFINITY],
            error_bound: 0.0,
        });
    }
    let margin = report.min_dist();
    if !(margin > 1e-12) {
        return Err(PottsError::CannotInterpolate(format!(
            "a root lies within {margin} of [0, 1]"
        )));
    }
    let span = (&one - target).to_f64().unwrap_or(1.0);
    let steps = ((span / (RHO * margin)).ceil() as usize).max(1);
    let h = (&one - target) / BigRational::from_integer(BigInt::from(steps));
    let anchors: Vec<BigRational> = (0..=steps)
        .map(|k| &one - &h * BigRational::from_integer(BigInt::from(k)))
        .collect();
    let roots: Vec<Complex64> = report.roots.iter().map(|r| r.value()).collect();
    let radii: Vec<f64> = anchors[..steps]
        .iter()
        .map(|a| nearest_root(&roots, a.to_f64().unwrap_or(f64::NAN)))
        .collect();
    let hf = h.to_f64().unwrap_or(f64::INFINITY);
    let deg = report.degree as f64;
    let total = |m: usize| radii.iter().map(|r| deg * tail_bound(hf / r, m)).sum::<f64>();
    let order = (0..=MAX_ORDER).find(|&m| total(m) <= eps).ok_or_else(|| {
        PottsError::CannotInterpolate(format!("no Taylor order up to {MAX_ORDER} reaches eps = {eps}"))
    })?;
    let error_bound = total(order);
    Ok(StepPlan { anchors, order, radii, error_bound })
}

/// Approximation `ξ` of `Z_G(target)` with `e^{-eps_achieved} <= Z/ξ <=
/// e^{eps_achieved}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountEstimate {
    /// Decimal rendering of `ξ`.
    pub xi: String,
    pub log_xi: f64,
    pub target: String,
    pub eps_target: f64,
    pub eps_achieved: f64,
    pub steps: usize,
    pub m: usize,
    /// Set when `Z(target) = 0`, detected exactly; `ξ` is then 0.
    pub exact_zero: bool,
    /// Exact value from an independent oracle, when supplied.
    pub exact_value: Option<String>,
}

impl CountEstimate {
    pub fn with_exact(mut self, value: &BigInt) -> Self {
        self.exact_value = Some(value.to_string());
        self
    }

    /// `|log ξ - log exact|`, when an exact value is attached and both are
    /// positive.
    pub fn log_error(&self) -> Option<f64> {
        let exact: BigInt = self.exact_value.as_ref()?.parse().ok()?;
        if self.exact_zero || exact <= BigInt::zero() {
            return None;
        }
        Some((self.log_xi - ln_bigint(&exact)).abs())
    }
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Approximate number of proper colorings, `Z_G(0)`.
pub fn approx_count_colorings(g: &PartiallyColoredGraph, eps: f64) -> Result<CountEstimate> {
    approx_partition_at(g, &BigRational::zero(), eps)
}

pub fn approx_partition_at(g: &PartiallyColoredGraph, target: &BigRational, eps: f64) -> Result<CountEstimate> {
    let p = partition_poly(g)?;
    let log_anchor = g.free_count() as f64 * (g.q() as f64).ln();
    if p.eval_rational(target).is_zero() {
        return Ok(CountEstimate {
            xi: "0".into(),
            log_xi: f64::NEG_INFINITY,
            target: target.to_string(),
            eps_target: eps,
            eps_achieved: 0.0,
            steps: 0,
            m: 0,
            exact_zero: true,
            exact_value: None,
        });
    }
    let report = report_for_poly(String::new(), g.q(), &p);
    let plan = choose_plan_to(&report, eps, target)?;
    let roots: Vec<Complex64> = report.roots.iter().map(|r| r.value()).collect();
    let mut total = BigRational::zero();
    let mut achieved = 0.0;
    for pair in plan.anchors.windows(2) {
        let (delta, bound) = exact_step(&p, &pair[0], &pair[1], plan.order, &roots)?;
        total += delta;
        achieved += bound;
    }
    let log_xi = log_anchor + total.to_f64().unwrap_or(f64::NAN);
    Ok(CountEstimate {
        xi: format!("{}", log_xi.exp()),
        log_xi,
        target: target.to_string(),
        eps_target: eps,
        eps_achieved: achieved,
        steps: plan.steps(),
        m: plan.order,
        exact_zero: false,
        exact_value: None,
    })
}
