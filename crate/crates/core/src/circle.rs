//! Trigonometric polynomials on the circle, the Riesz interpolation formula
//! and the rotation group.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{BoasError, Result};
use crate::operators::{BernsteinCertificate, OneParameterGroup};

/// `P(t) = a_0 + sum_{m=1}^n (a_m cos mt + b_m sin mt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    a: Vec<f64>,
    // b[0] is unused and kept at zero
    b: Vec<f64>,
    declared: Option<f64>,
}

impl TrigPolynomial {
    /// `a` holds `a_0..a_n`, `b` holds `b_1..b_n`.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(BoasError::InvalidParameter("need at least a_0".into()));
        }
        if b.len() + 1 != a.len() {
            return Err(BoasError::InvalidParameter(format!(
                "{} cosine and {} sine coefficients do not describe one degree",
                a.len(),
                b.len()
            )));
        }
        if a.iter().chain(&b).any(|c| !c.is_finite()) {
            return Err(BoasError::InvalidParameter("non-finite coefficient".into()));
        }
        let mut bb = Vec::with_capacity(a.len());
        bb.push(0.0);
        bb.extend(b);
        Ok(Self {
            a,
            b: bb,
            declared: None,
        })
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            a: vec![0.0; degree + 1],
            b: vec![0.0; degree + 1],
            declared: None,
        }
    }

    /// `cos(m t)` or, with `sine`, `sin(m t)`.
    pub fn monomial(m: usize, sine: bool) -> Self {
        let mut p = Self::zero(m);
        if sine {
            p.b[m] = 1.0;
        } else {
            p.a[m] = 1.0;
        }
        p
    }

    /// Seeded degree-`n` polynomial with coefficients uniform in `[-1, 1]`.
    pub fn random(degree: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = Self::zero(degree);
        for m in 0..=degree {
            p.a[m] = rng.gen_range(-1.0..=1.0);
            if m > 0 {
                p.b[m] = rng.gen_range(-1.0..=1.0);
            }
        }
        p
    }

    /// Parses `{"a": [a_0, ..., a_n], "b": [b_1, ..., b_n]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Coeffs {
            a: Vec<f64>,
            b: Vec<f64>,
        }
        let c: Coeffs = serde_json::from_str(text).map_err(|e| BoasError::Format(e.to_string()))?;
        Self::new(c.a, c.b).map_err(|e| BoasError::Format(e.to_string()))
    }

    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.a
    }

    /// `b_1..b_n`.
    pub fn sin_coeffs(&self) -> &[f64] {
        &self.b[1..]
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut sum = self.a[0];
        for m in 1..self.a.len() {
            let (s, c) = (m as f64 * t).sin_cos();
            sum += self.a[m] * c + self.b[m] * s;
        }
        sum
    }

    /// Exact derivative by coefficient shift.
    pub fn derivative(&self) -> Self {
        let mut d = Self::zero(self.degree());
        for m in 1..self.a.len() {
            let mf = m as f64;
            d.a[m] = mf * self.b[m];
            d.b[m] = -mf * self.a[m];
        }
        d
    }

    /// `t -> P(t + tau)`.
    pub fn rotate(&self, tau: f64) -> Self {
        let mut r = Self::zero(self.degree());
        r.a[0] = self.a[0];
        for m in 1..self.a.len() {
            let (s, c) = (m as f64 * tau).sin_cos();
            r.a[m] = self.a[m] * c + self.b[m] * s;
            r.b[m] = self.b[m] * c - self.a[m] * s;
        }
        r.declared = self.declared;
        r
    }

    fn axpy(&mut self, w: f64, other: &Self) {
        if other.a.len() > self.a.len() {
            self.a.resize(other.a.len(), 0.0);
            self.b.resize(other.b.len(), 0.0);
        }
        for m in 0..other.a.len() {
            self.a[m] += w * other.a[m];
            self.b[m] += w * other.b[m];
        }
    }

    /// Maximum of `|P|` on `8n + 64` equally spaced points of `[0, 2 pi)`.
    pub fn sup_norm(&self) -> f64 {
        let points = 8 * self.degree() + 64;
        (0..points)
            .map(|i| self.eval(2.0 * PI * i as f64 / points as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// Nodes `t_k = (2k-1) pi / (2n)` and weights
/// `(1/(4n)) (-1)^{k+1} / sin^2(t_k/2)`, `k = 1..2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszStencil {
    degree: usize,
    nodes: Vec<(f64, f64)>,
}

impl RieszStencil {
    pub fn new(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(BoasError::Degenerate(
                "a degree-0 polynomial has derivative 0".into(),
            ));
        }
        let n = degree as f64;
        let nodes = (1..=2 * degree)
            .map(|k| {
                let t = (2 * k - 1) as f64 * PI / (2.0 * n);
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                let s = (t / 2.0).sin();
                (sign / (4.0 * n * s * s), t)
            })
            .collect();
        Ok(Self { degree, nodes })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `(weight, t_k)` pairs.
    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    /// Exact derivative at `t` of any trigonometric polynomial of degree at
    /// most the stencil degree, given as a function.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F, t: f64) -> f64 {
        self.nodes.iter().map(|&(w, tk)| w * f(t + tk)).sum()
    }

    pub fn apply_array(&self, values: &[f64]) -> f64 {
        self.nodes.iter().zip(values).map(|(&(w, _), v)| w * v).sum()
    }
}

/// `P'(t)` from `2n` samples of `P`.
pub fn riesz_derivative(p: &TrigPolynomial, t: f64) -> Result<f64> {
    let stencil = RieszStencil::new(p.degree())?;
    Ok(stencil.apply(|s| p.eval(s), t))
}

/// `e^{tau D} P (t) = P(t + tau)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CircleRotationGroup;

pub fn rotation_group() -> CircleRotationGroup {
    CircleRotationGroup
}

impl OneParameterGroup for CircleRotationGroup {
    type Vector = TrigPolynomial;

    fn tag(&self) -> String {
        "circle-rotation".into()
    }

    fn superpose(&self, terms: &[(f64, f64)], v: &TrigPolynomial) -> TrigPolynomial {
        let mut out = TrigPolynomial::zero(v.degree());
        for &(w, s) in terms {
            out.axpy(w, &v.rotate(s));
        }
        out.declared = v.declared;
        out
    }

    fn add_scaled(&self, a: &TrigPolynomial, scale: f64, b: &TrigPolynomial) -> Result<TrigPolynomial> {
        let mut out = a.clone();
        out.axpy(scale, b);
        out.declared = match (a.declared, b.declared) {
            (Some(x), Some(y)) => Some(x.max(y)),
            _ => None,
        };
        Ok(out)
    }

    fn norm(&self, v: &TrigPolynomial) -> f64 {
        v.sup_norm()
    }

    fn certificate(&self, v: &TrigPolynomial) -> Option<BernsteinCertificate> {
        Some(BernsteinCertificate::new(
            v.declared.unwrap_or(v.degree() as f64),
        ))
    }

    fn with_certificate(&self, mut v: TrigPolynomial, cert: BernsteinCertificate) -> TrigPolynomial {
        v.declared = Some(cert.sigma);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::boas_apply;
    use crate::sinc_kernel::build_table;

    #[test]
    fn riesz_examples() {
        let sin = TrigPolynomial::monomial(1, true);
        assert!((riesz_derivative(&sin, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let cos = TrigPolynomial::monomial(1, false);
        assert!(riesz_derivative(&cos, 0.0).unwrap().abs() < 1e-15);
        let cos3 = TrigPolynomial::monomial(3, false);
        assert!((riesz_derivative(&cos3, PI / 6.0).unwrap() + 3.0).abs() < 1e-13);
        assert!(matches!(
            riesz_derivative(&TrigPolynomial::zero(0), 0.0),
            Err(BoasError::Degenerate(_))
        ));
    }

    #[test]
    fn riesz_is_exact_on_monomials() {
        for n in 1..=32 {
            let stencil = RieszStencil::new(n).unwrap();
            for m in 0..=n {
                for sine in [false, true] {
                    let p = TrigPolynomial::monomial(m, sine);
                    let dp = p.derivative();
                    for t in [0.0, 0.3, 2.1] {
                        let err = (stencil.apply(|s| p.eval(s), t) - dp.eval(t)).abs();
                        assert!(err < 1e-11 * (1.0 + m as f64), "n={n} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_is_exact() {
        let p = TrigPolynomial::random(7, 5);
        let r = p.rotate(2.0 * PI);
        for t in [0.0, 1.0, 4.0] {
            assert!((r.eval(t) - p.eval(t)).abs() < 1e-13);
            assert!((p.rotate(0.4).eval(t) - p.eval(t + 0.4)).abs() < 1e-13);
        }
        let s = TrigPolynomial::monomial(1, true).rotate(PI);
        assert!((s.sin_coeffs()[0] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let p = TrigPolynomial::from_json(r#"{"a": [0.5, 1.0], "b": [2.0]}"#).unwrap();
        assert_eq!(p.degree(), 1);
        assert!((p.eval(PI / 2.0) - 2.5).abs() < 1e-15);
        assert!(TrigPolynomial::from_json(r#"{"a": [1.0], "b": [2.0]}"#).is_err());
    }

    #[test]
    fn bernstein_inequality() {
        for seed in 0..20 {
            let p = TrigPolynomial::random(1 + seed as usize % 9, seed);
            assert!(p.derivative().sup_norm() <= p.degree() as f64 * p.sup_norm() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn boas_derivative_within_tail() {
        let g = rotation_group();
        let p = TrigPolynomial::random(6, 11);
        let table = build_table(1, 6.0, 2000).unwrap();
        let out = boas_apply(&g, &p, &table).unwrap();
        let err = (0..50)
            .map(|i| {
                let t = 0.13 * i as f64;
                (out.vector.eval(t) - p.derivative().eval(t)).abs()
            })
            .fold(0.0, f64::max);
        assert!(err <= out.tail_bound);
        assert!(boas_apply(&g, &p, &build_table(1, 5.0, 10).unwrap()).is_err());
    }
}
