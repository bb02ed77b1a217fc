//! Complex roots of integer polynomials.
//!
//! Each squarefree factor is solved by Aberth–Ehrlich iteration, falling
//! back to the eigenvalues of the companion matrix when the iteration does
//! not settle; roots are then repeated by multiplicity.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::poly::{squarefree_decomposition, WPolynomial};

const MAX_ITER: usize = 2000;

/// All roots of `p` with multiplicity; the result has `deg p` entries.
pub fn polynomial_roots(p: &WPolynomial) -> Vec<Complex64> {
    let mut out = Vec::new();
    for (factor, mult) in squarefree_decomposition(p) {
        let roots = simple_roots(&factor.to_f64_coeffs());
        for z in roots {
            out.extend(std::iter::repeat(z).take(mult));
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

fn eval_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Roots of a polynomial without repeated roots, coefficients in increasing
/// degree.
fn simple_roots(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    match n {
        0 => return Vec::new(),
        1 => return vec![Complex64::new(-c[0] / c[1], 0.0)],
        _ => {}
    }
    let mut roots = aberth(c).unwrap_or_else(|| companion(c));
    for z in roots.iter_mut() {
        polish(c, z);
    }
    // Real coefficients: pair each root with the conjugate of its partner
    // so the output is conjugate symmetric.
    symmetrize(&mut roots);
    roots
}

fn aberth(c: &[f64]) -> Option<Vec<Complex64>> {
    let n = c.len() - 1;
    let lead = c[n].abs();
    // Cauchy radius bounds every root modulus.
    let radius = 1.0 + c[..n].iter().map(|a| a.abs() / lead).fold(0.0, f64::max);
    let start = (c[0].abs() / lead).powf(1.0 / n as f64).clamp(1e-3, radius);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(start, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..MAX_ITER {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                return None;
            }
            z[i] -= step;
            worst = worst.max(step.norm() / (1.0 + z[i].norm()));
        }
        if worst < 1e-13 {
            return Some(z);
        }
    }
    None
}

fn companion(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / c[n];
    }
    m.complex_eigenvalues().iter().copied().collect()
}

fn polish(c: &[f64], z: &mut Complex64) {
    for _ in 0..3 {
        let (p, dp) = eval_with_derivative(c, *z);
        if dp.norm() == 0.0 {
            return;
        }
        let next = *z - p / dp;
        if !next.is_finite() || eval_with_derivative(c, next).0.norm() >= p.norm() {
            return;
        }
        *z = next;
    }
}

fn symmetrize(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        let target = roots[i].conj();
        let partner = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (roots[a] - target).norm().total_cmp(&(roots[b] - target).norm()));
        let scale = 1e-8 * (1.0 + roots[i].norm());
        match partner {
            Some(j) if roots[i].im.abs() > scale && (roots[j] - target).norm() < scale => {
                used[j] = true;
                let mid = (roots[i] + roots[j].conj()) / 2.0;
                roots[i] = mid;
                roots[j] = mid.conj();
            }
            _ if roots[i].im.abs() <= scale => roots[i].im = 0.0,
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-10
    }

    #[test]
    fn linear_and_quadratic() {
        let r = polynomial_roots(&WPolynomial::from_i64s(&[6, 3]));
        assert_eq!(r.len(), 1);
        assert!(close(r[0], Complex64::new(-2.0, 0.0)));
        let r = polynomial_roots(&WPolynomial::from_i64s(&[1, 0, 1]));
        assert!(close(r[0], Complex64::new(0.0, -1.0)) && close(r[1], Complex64::new(0.0, 1.0)));
        assert!(polynomial_roots(&WPolynomial::constant(7)).is_empty());
    }

    #[test]
    fn multiplicities_survive() {
        // (w + 1)^3 (w - 2) w^2
        let p = &(&WPolynomial::from_i64s(&[1, 3, 3, 1]) * &WPolynomial::from_i64s(&[-2, 1]))
            * &WPolynomial::monomial(2);
        let r = polynomial_roots(&p);
        assert_eq!(r.len(), 6);
        assert_eq!(r.iter().filter(|z| close(**z, Complex64::new(-1.0, 0.0))).count(), 3);
        assert_eq!(r.iter().filter(|z| close(**z, Complex64::new(0.0, 0.0))).count(), 2);
        assert!(r.iter().any(|z| close(*z, Complex64::new(2.0, 0.0))));
    }

    #[test]
    fn companion_agrees_with_aberth() {
        let c = [120.0, 90.0, 0.0, 6.0];
        let mut a = aberth(&c).unwrap();
        let mut b = companion(&c);
        let key = |z: &Complex64, w: &Complex64| z.re.total_cmp(&w.re).then(z.im.total_cmp(&w.im));
        a.sort_by(key);
        b.sort_by(key);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-9, "{x} vs {y}");
        }
    }
}
