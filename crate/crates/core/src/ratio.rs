//! The functions `P_c`, `Q_c` and `F = log(P/Q)` that advance log-ratios one
//! level in the telescoping recursion, their gradient, and the marginal
//! difference vector that the gradient equals at real log-ratio points.
//!
//! Coordinates: `x` has length `q - 1`, entry `k` belongs to color `k + 1`,
//! and color `q` is the reference. Vectors `c` are blocked-color counts of
//! length `q`.
//!
//! Both `P`/`Q` and the gradient are rational in `w` and `e^{x}`, so they are
//! implemented once over any field and evaluated either in `Complex64` or
//! exactly in `BigRational` (passing the ratios `e^{x_j}` directly).

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{pow, Num, One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{PottsError, Result};
use crate::graph::RootedGraph;
use crate::potts::{principal_log, root_marginals};

fn check_shape(c: &[u32], len: usize) -> Result<()> {
    if c.len() < 2 || len + 1 != c.len() {
        return Err(PottsError::Domain(format!(
            "expected q >= 2 with c of length q and x of length q - 1, got {} and {len}",
            c.len()
        )));
    }
    Ok(())
}

/// `(P_c, Q_c)` given `e = (e^{x_1}, ..., e^{x_{q-1}})`.
pub fn pq_from_exp<T: Num + Clone>(wt: &T, c: &[u32], e: &[T]) -> Result<(T, T)> {
    check_shape(c, e.len())?;
    let q = c.len();
    let wp = |k: u32| pow(wt.clone(), k as usize);
    let middle = (1..q - 1).fold(T::zero(), |acc, j| acc + wp(c[j]) * e[j].clone());
    let p = wp(c[0] + 1) * e[0].clone() + middle.clone() + wp(c[q - 1]);
    let qq = wp(c[0]) * e[0].clone() + middle + wp(c[q - 1] + 1);
    Ok((p, qq))
}

/// Gradient of `log(P/Q)` with respect to `x`, given `e = exp(x)`.
pub fn grad_from_exp<T: Num + Clone>(wt: &T, c: &[u32], e: &[T]) -> Result<Vec<T>> {
    let (p, q) = pq_from_exp(wt, c, e)?;
    if p.is_zero() || q.is_zero() {
        return Err(PottsError::Pole);
    }
    Ok(e.iter()
        .enumerate()
        .map(|(j, ej)| {
            let term = pow(wt.clone(), c[j] as usize) * ej.clone();
            let mut g = term.clone() / p.clone() - term.clone() / q.clone();
            if j == 0 {
                g = g + (wt.clone() - T::one()) * term / p.clone();
            }
            g
        })
        .collect())
}

fn exps(x: &[Complex64]) -> Vec<Complex64> {
    x.iter().map(|z| z.exp()).collect()
}

pub fn p_c(wt: Complex64, c: &[u32], x: &[Complex64]) -> Result<Complex64> {
    Ok(pq_from_exp(&wt, c, &exps(x))?.0)
}

pub fn q_c(wt: Complex64, c: &[u32], x: &[Complex64]) -> Result<Complex64> {
    Ok(pq_from_exp(&wt, c, &exps(x))?.1)
}

/// `F_{wt,c}(x) = log(P_c / Q_c)` on the principal branch.
pub fn f_value(wt: Complex64, c: &[u32], x: &[Complex64]) -> Result<Complex64> {
    let (p, q) = pq_from_exp(&wt, c, &exps(x))?;
    if p.norm() == 0.0 || q.norm() == 0.0 {
        return Err(PottsError::Pole);
    }
    principal_log(p / q, 1).map_err(|e| match e {
        PottsError::ZeroRatio { .. } => PottsError::Pole,
        other => other,
    })
}

pub fn grad_f(wt: Complex64, c: &[u32], x: &[Complex64]) -> Result<Vec<Complex64>> {
    grad_from_exp(&wt, c, &exps(x))
}

/// Re-references a log-ratio vector from color `q` to color 1:
/// `x̂_1 = -x_1`, `x̂_j = x_j - x_1`.
pub fn hat_transform(x: &[Complex64]) -> Vec<Complex64> {
    let Some(&x1) = x.first() else { return Vec::new() };
    std::iter::once(-x1).chain(x[1..].iter().map(|&xj| xj - x1)).collect()
}

/// Point `t R(w) + (1 - t) R(wt)` on the segment between two log-ratio
/// vectors and the gradient `∇F_{w,c}` there. Integrating the inner product
/// of this gradient with `R(w) - R(wt)` over `t ∈ [0,1]` recovers
/// `F_{w,c}(R(w)) - F_{w,c}(R(wt))`.
pub fn path_integrand(
    w: f64,
    c: &[u32],
    r_w: &[Complex64],
    r_wt: &[Complex64],
    t: f64,
) -> Result<(Vec<Complex64>, Complex64)> {
    let y: Vec<Complex64> = r_w.iter().zip(r_wt).map(|(a, b)| a * t + b * (1.0 - t)).collect();
    let g = grad_f(Complex64::new(w, 0.0), c, &y)?;
    let value = g.iter().zip(r_w.iter().zip(r_wt)).map(|(gj, (a, b))| gj * (a - b)).sum();
    Ok((y, value))
}

/// `P_{G,v}(w)` and its hat variant, exact.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalDifference {
    /// `ℙ_{G^{+1}}[v = j] - ℙ_{G^{+q}}[v = j]` for `j = 1..q-1`.
    pub entries: Vec<BigRational>,
    /// Same as `entries` except the first, which is
    /// `ℙ_{G^{+1}}[v = q] - ℙ_{G^{+q}}[v = q]`.
    pub hat: Vec<BigRational>,
    /// Root marginals of `G^{+1}` (all `q` colors).
    pub plus_first: Vec<BigRational>,
    /// Root marginals of `G^{+q}` (all `q` colors).
    pub plus_last: Vec<BigRational>,
}

pub fn marginal_difference(rg: &RootedGraph, w: &BigRational) -> Result<MarginalDifference> {
    let q = rg.q();
    if q < 2 {
        return Err(PottsError::Domain("marginal difference needs q >= 2".into()));
    }
    let plus_first = root_marginals(&rg.attach_pinned_leaf(1)?, w)?;
    let plus_last = root_marginals(&rg.attach_pinned_leaf(q)?, w)?;
    Ok(difference_from_marginals(plus_first, plus_last))
}

pub(crate) fn difference_from_marginals(
    plus_first: Vec<BigRational>,
    plus_last: Vec<BigRational>,
) -> MarginalDifference {
    let q = plus_first.len();
    let entries: Vec<BigRational> =
        (0..q - 1).map(|j| &plus_first[j] - &plus_last[j]).collect();
    let mut hat = entries.clone();
    hat[0] = &plus_first[q - 1] - &plus_last[q - 1];
    MarginalDifference { entries, hat, plus_first, plus_last }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerProductCase {
    /// `ℙ_G[v = 1] <= ℙ_G[v = q]`; bound in terms of `‖x‖∞`.
    FirstNotLikelier,
    /// `ℙ_G[v = 1] > ℙ_G[v = q]`; bound in terms of `‖x̂‖∞`.
    FirstLikelier,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerProductBound {
    pub lhs: f64,
    pub rhs: f64,
    pub case: InnerProductCase,
}

/// `|⟨P_{G,v}(w), x⟩|` against the marginal bound, for complex `x`.
///
/// The inner product is rotated onto the positive real axis before being
/// evaluated against `Re(x)`, which gives its modulus.
pub fn inner_product_bound(
    rg: &RootedGraph,
    w: &BigRational,
    x: &[Complex64],
) -> Result<InnerProductBound> {
    let q = rg.q();
    if x.len() + 1 != q {
        return Err(PottsError::Domain("x must have length q - 1".into()));
    }
    let md = marginal_difference(rg, w)?;
    let base = root_marginals(rg, w)?;
    Ok(inner_product_from_parts(&md, &base, w, x))
}

pub(crate) fn inner_product_from_parts(
    md: &MarginalDifference,
    base: &[BigRational],
    w: &BigRational,
    x: &[Complex64],
) -> InnerProductBound {
    let q = base.len();
    let p: Vec<f64> = md.entries.iter().map(|r| r.to_f64().unwrap()).collect();
    let raw: Complex64 = p.iter().zip(x).map(|(pj, xj)| xj * pj).sum();
    let rotation = if raw.norm() > 0.0 { raw.conj() / raw.norm() } else { Complex64::one() };
    let lhs: f64 = p.iter().zip(x).map(|(pj, xj)| pj * (xj * rotation).re).sum::<f64>().abs();
    let one_minus_w = 1.0 - w.to_f64().unwrap();
    let sup = |v: &[Complex64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (rhs, case) = if base[0] <= base[q - 1] {
        let factor = md.plus_first[q - 1].to_f64().unwrap();
        (one_minus_w * factor * sup(x), InnerProductCase::FirstNotLikelier)
    } else {
        let factor = md.plus_last[0].to_f64().unwrap();
        (one_minus_w * factor * sup(&hat_transform(x)), InnerProductCase::FirstLikelier)
    };
    InnerProductBound { lhs, rhs, case }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PartiallyColoredGraph;
    use num_traits::Zero;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn p_and_q_examples() {
        let (p, q) = pq_from_exp(&rat(1, 2), &[0, 0, 2], &[rat(2, 1), rat(1, 1)]).unwrap();
        assert_eq!((p, q), (rat(9, 4), rat(25, 8)));
        let w = c(0.3);
        let zero = [c(0.0); 3];
        let p = p_c(w, &[0; 4], &zero).unwrap();
        assert!((p - c(3.3)).norm() < 1e-15);
        assert_eq!(p, q_c(w, &[0; 4], &zero).unwrap());
        let p = p_c(c(1.0), &[1, 0, 0, 0], &zero).unwrap();
        assert_eq!(p, c(4.0));
    }

    #[test]
    fn f_vanishes_on_symmetric_inputs() {
        assert_eq!(f_value(c(0.4), &[0; 4], &[c(0.0); 3]).unwrap(), c(0.0));
        let x = [Complex64::new(0.3, -0.2), c(1.1), Complex64::new(-0.5, 0.4)];
        assert!(f_value(c(1.0), &[2, 0, 1, 0], &x).unwrap().norm() < 1e-15);
    }

    #[test]
    fn gradient_at_origin() {
        let wt = Complex64::new(0.25, 0.1);
        let g = grad_f(wt, &[0; 5], &[c(0.0); 4]).unwrap();
        assert!((g[0] - (wt - 1.0) / (wt + 4.0)).norm() < 1e-15);
        assert!(g[1..].iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn hat_examples() {
        let x = [c(1.0), c(2.0), c(5.0)];
        assert_eq!(hat_transform(&x), vec![c(-1.0), c(1.0), c(4.0)]);
        assert_eq!(hat_transform(&[c(0.0); 3]), vec![c(0.0); 3]);
        assert_eq!(hat_transform(&hat_transform(&x)), x.to_vec());
    }

    #[test]
    fn isolated_root_marginal_difference() {
        let rg = RootedGraph::new(PartiallyColoredGraph::new(1, 3, []).unwrap(), 0).unwrap();
        let md = marginal_difference(&rg, &rat(0, 1)).unwrap();
        assert_eq!(md.entries, vec![rat(-1, 2), rat(0, 1)]);
        assert_eq!(md.hat, vec![rat(1, 2), rat(0, 1)]);
        let md = marginal_difference(&rg, &rat(1, 1)).unwrap();
        assert!(md.entries.iter().all(Zero::is_zero));
    }

    #[test]
    fn inner_product_trivial_cases() {
        let rg = RootedGraph::new(PartiallyColoredGraph::new(2, 4, [(0, 1)]).unwrap(), 0).unwrap();
        let b = inner_product_bound(&rg, &rat(1, 3), &[c(0.0); 3]).unwrap();
        assert_eq!((b.lhs, b.rhs), (0.0, 0.0));
        let x = [Complex64::new(0.2, 0.7), c(-0.4), Complex64::new(0.0, 1.0)];
        let b = inner_product_bound(&rg, &rat(1, 1), &x).unwrap();
        assert_eq!(b.lhs, 0.0);
        let b = inner_product_bound(&rg, &rat(1, 4), &x).unwrap();
        assert!(b.lhs <= b.rhs);
    }
}
