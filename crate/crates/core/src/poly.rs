//! Exact integer polynomials in the edge weight `w`, Gaussian rationals,
//! and the rational-coefficient algebra needed for squarefree factoring.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Polynomial with integer coefficients; `coeffs[k]` multiplies `w^k`.
/// Trailing zeros are never stored, so the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WPolynomial {
    coeffs: Vec<BigInt>,
}

impl WPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        WPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        WPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The monomial `w^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        WPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Multiplication by `w^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        WPolynomial { coeffs }
    }

    pub fn eval_rational(&self, w: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * w + BigRational::from_integer(c.clone()))
    }

    pub fn eval_complex(&self, w: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + to_f64(c))
    }

    pub fn eval_gaussian(&self, w: &GaussianRational) -> GaussianRational {
        self.coeffs.iter().rev().fold(GaussianRational::zero(), |acc, c| {
            &(&acc * w) + &GaussianRational::from_integer(c.clone())
        })
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.to_f64_coeffs().iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

fn to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(f64::INFINITY)
}

impl Add for &WPolynomial {
    type Output = WPolynomial;

    fn add(self, rhs: &WPolynomial) -> WPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        WPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &WPolynomial {
    type Output = WPolynomial;

    fn sub(self, rhs: &WPolynomial) -> WPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        WPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &WPolynomial {
    type Output = WPolynomial;

    fn mul(self, rhs: &WPolynomial) -> WPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return WPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        WPolynomial::new(out)
    }
}

impl fmt::Display for WPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}")?,
            }
            match k {
                0 => {}
                1 => f.write_str("w")?,
                _ => write!(f, "w^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for WPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for WPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(WPolynomial::new)
    }
}

/// Complex number with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self::new(BigRational::from_integer(n), BigRational::zero())
    }

    pub fn from_real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    /// Exact conversion of a finite double-precision complex number.
    pub fn from_complex(z: Complex64) -> Option<Self> {
        Some(Self::new(BigRational::from_float(z.re)?, BigRational::from_float(z.im)?))
    }

    /// Nearest point of the grid `(a + b i) / 2^bits`.
    pub fn round_to_dyadic(z: Complex64, bits: u32) -> Option<Self> {
        let scale = f64::from(bits).exp2();
        let den = BigInt::one() << bits;
        let part = |x: f64| -> Option<BigRational> {
            let n = BigRational::from_float((x * scale).round())?.to_integer();
            Some(BigRational::new(n, den.clone()))
        };
        Some(Self::new(part(z.re)?, part(z.im)?))
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;

    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;

    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

/// Dense polynomial over the rationals, used for gcd computations.
#[derive(Clone, Debug, PartialEq)]
struct RatPoly(Vec<BigRational>);

impl RatPoly {
    fn from_int(p: &WPolynomial) -> Self {
        RatPoly(p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn monic(self) -> Self {
        match self.0.last().cloned() {
            Some(lead) => RatPoly(self.0.into_iter().map(|c| c / &lead).collect()),
            None => self,
        }
    }

    fn derivative(&self) -> Self {
        RatPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
        .trim()
    }

    fn sub(&self, rhs: &RatPoly) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let get = |p: &RatPoly, k: usize| p.0.get(k).cloned().unwrap_or_else(BigRational::zero);
        RatPoly((0..n).map(|k| get(self, k) - get(rhs, k)).collect()).trim()
    }

    fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let mut rem = self.0.clone();
        if rem.len() < d.0.len() {
            return (RatPoly(Vec::new()), self.clone());
        }
        let lead = d.0.last().expect("nonzero divisor");
        let mut quot = vec![BigRational::zero(); rem.len() - d.0.len() + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d.deg()] / lead;
            for (i, dc) in d.0.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(d.deg());
        (RatPoly(quot).trim(), RatPoly(rem).trim())
    }

    fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scales to a primitive integer polynomial with positive leading coefficient.
    fn to_primitive(&self) -> WPolynomial {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(Signed::is_negative) { -1 } else { 1 };
        WPolynomial::new(ints.into_iter().map(|c| c / &g * sign).collect())
    }
}

/// Squarefree decomposition `p = c · Π f_i^i` (Yun's algorithm). Returns the
/// nonconstant factors as primitive integer polynomials with multiplicities.
pub fn squarefree_decomposition(p: &WPolynomial) -> Vec<(WPolynomial, usize)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let f = RatPoly::from_int(p);
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.div_rem(&a0).0;
    let c = fp.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        let next_b = b.div_rem(&a).0;
        let next_c = d.div_rem(&a).0;
        d = next_c.sub(&next_b.derivative());
        if a.deg() > 0 {
            out.push((a.to_primitive(), i));
        }
        b = next_b;
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn horner_evaluation() {
        let p = WPolynomial::from_i64s(&[6, 3]);
        assert_eq!(p.eval_rational(&rat(0, 1)), rat(6, 1));
        assert_eq!(p.eval_complex(Complex64::new(0.0, 1.0)), Complex64::new(6.0, 3.0));
        let k3 = WPolynomial::from_i64s(&[60, 60, 0, 5]);
        assert_eq!(k3.eval_rational(&rat(1, 1)), rat(125, 1));
        let i = GaussianRational::new(rat(0, 1), rat(1, 1));
        assert_eq!(p.eval_gaussian(&i), GaussianRational::new(rat(6, 1), rat(3, 1)));
    }

    #[test]
    fn trims_and_displays() {
        let p = WPolynomial::from_i64s(&[1, 0, 2, 0, 0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "1 + 2w^2");
        assert_eq!(WPolynomial::from_i64s(&[0, -1]).to_string(), "-w");
        assert!(WPolynomial::from_i64s(&[0, 0]).is_zero());
    }

    #[test]
    fn json_is_decimal_strings() {
        let p = WPolynomial::new(vec![BigInt::from(120), BigInt::from(90), BigInt::zero(), BigInt::from(6)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["120","90","0","6"]"#);
        assert_eq!(serde_json::from_str::<WPolynomial>(&s).unwrap(), p);
    }

    #[test]
    fn arithmetic() {
        let a = WPolynomial::from_i64s(&[1, 1]);
        let sq = &a * &a;
        assert_eq!(sq, WPolynomial::from_i64s(&[1, 2, 1]));
        assert_eq!(&sq - &a, WPolynomial::from_i64s(&[0, 1, 1]));
        assert_eq!(a.shift(2), WPolynomial::from_i64s(&[0, 0, 1, 1]));
        assert_eq!(sq.derivative(), WPolynomial::from_i64s(&[2, 2]));
    }

    #[test]
    fn squarefree_factors() {
        // (w + 1)^2 (w - 2) w^3
        let a = WPolynomial::from_i64s(&[1, 1]);
        let b = WPolynomial::from_i64s(&[-2, 1]);
        let p = &(&(&a * &a) * &b) * &WPolynomial::monomial(3);
        let f = squarefree_decomposition(&p);
        assert_eq!(
            f,
            vec![
                (b.clone(), 1),
                (a.clone(), 2),
                (WPolynomial::from_i64s(&[0, 1]), 3),
            ]
        );
        assert!(squarefree_decomposition(&WPolynomial::constant(4)).is_empty());
    }

    #[test]
    fn dyadic_rounding() {
        let z = GaussianRational::round_to_dyadic(Complex64::new(0.3, -1.0), 16).unwrap();
        assert_eq!(z.im, rat(-1, 1));
        assert!((z.re.to_f64().unwrap() - 0.3).abs() < 1e-5);
    }
}
