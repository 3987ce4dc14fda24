//! Spherical harmonic expansions on S^2 under the three rotation groups
//! `e^{tau X_ij}`: field derivatives, the Laplace-Beltrami operator as a sum
//! of squares, commutators, variable-coefficient fields and products.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circle::{RieszStencil, TrigPolynomial};
use crate::error::{BoasError, Result};
use crate::operators::{
    boas_power, trajectory_derivative, BernsteinCertificate, OneParameterGroup, PointValue,
};
use crate::quadrature::gauss_legendre;
use crate::sinc_kernel::build_table;

pub type Point = [f64; 3];

const UNIT_TOLERANCE: f64 = 1e-12;

/// Highest derivative order accepted by [`field_derivative`].
pub const MAX_FIELD_ORDER: usize = 4;

/// `(sin theta cos phi, sin theta sin phi, cos theta)`.
pub fn from_angles(theta: f64, phi: f64) -> Point {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

fn check_unit(x: &Point) -> Result<()> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if (r - 1.0).abs() > UNIT_TOLERANCE {
        return Err(BoasError::Domain(format!("|x| = {r} is not 1")));
    }
    Ok(())
}

/// Position of coefficient `(l, m)`.
pub fn sh_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

/// Real orthonormal harmonics, no Condon-Shortley phase:
/// `Y_lm = q_lm(x3) sqrt(2) Re (x1 + i x2)^m` for `m > 0`, the imaginary part
/// for `m < 0`, and `q_l0(x3)` for `m = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    cap: usize,
    coeffs: Vec<f64>,
}

impl Expansion {
    pub fn new(cap: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != (cap + 1) * (cap + 1) {
            return Err(BoasError::InvalidParameter(format!(
                "degree cap {cap} needs {} coefficients, got {}",
                (cap + 1) * (cap + 1),
                coeffs.len()
            )));
        }
        Ok(Self { cap, coeffs })
    }

    pub fn zero(cap: usize) -> Self {
        Self {
            cap,
            coeffs: vec![0.0; (cap + 1) * (cap + 1)],
        }
    }

    pub fn basis(cap: usize, l: usize, m: i64) -> Result<Self> {
        if l > cap || m.unsigned_abs() as usize > l {
            return Err(BoasError::InvalidParameter(format!(
                "(l, m) = ({l}, {m}) is not a harmonic of degree at most {cap}"
            )));
        }
        let mut e = Self::zero(cap);
        e.coeffs[sh_index(l, m)] = 1.0;
        Ok(e)
    }

    /// Seeded expansion with coefficients uniform in `[-1, 1]`.
    pub fn random(cap: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..(cap + 1) * (cap + 1))
            .map(|_| rng.gen_range(-1.0..=1.0))
            .collect();
        Self { cap, coeffs }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize, m: i64) -> f64 {
        self.coeffs[sh_index(l, m)]
    }

    /// Euclidean coefficient norm, equal to the L2 norm on the sphere.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Coefficient norm restricted to degrees above `degree`.
    pub fn norm_above(&self, degree: usize) -> f64 {
        if degree >= self.cap {
            return 0.0;
        }
        self.coeffs[(degree + 1) * (degree + 1)..]
            .iter()
            .map(|c| c * c)
            .sum::<f64>()
            .sqrt()
    }

    /// `sum_l |c_l| sqrt((2l+1)/(4 pi))`, a bound for `sup |e|` by the addition theorem.
    pub fn sup_bound(&self) -> f64 {
        (0..=self.cap)
            .map(|l| {
                let block = &self.coeffs[l * l..(l + 1) * (l + 1)];
                block.iter().map(|c| c * c).sum::<f64>().sqrt() * ((2 * l + 1) as f64 / (4.0 * PI)).sqrt()
            })
            .sum()
    }

    /// `self - other` after padding to the larger cap.
    pub fn difference(&self, other: &Expansion) -> Expansion {
        let cap = self.cap.max(other.cap);
        let mut out = Expansion::zero(cap);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out.coeffs[i] -= c;
        }
        out
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        check_unit(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Point) -> f64 {
        let mut sum = 0.0;
        for_each_harmonic(self.cap, x, |idx, y| sum += self.coeffs[idx] * y);
        sum
    }
}

/// Calls `f(index, Y_lm(x))` for every harmonic of degree at most `cap`.
fn for_each_harmonic<F: FnMut(usize, f64)>(cap: usize, x: &Point, mut f: F) {
    let z = x[2];
    // q_mm, (Re, Im) of (x1 + i x2)^m
    let mut qmm = 1.0 / (4.0 * PI).sqrt();
    let (mut re, mut im) = (1.0, 0.0);
    for m in 0..=cap {
        if m > 0 {
            qmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
            let (r, i) = (re * x[0] - im * x[1], re * x[1] + im * x[0]);
            re = r;
            im = i;
        }
        let (cos_part, sin_part) = if m == 0 {
            (1.0, 0.0)
        } else {
            (2f64.sqrt() * re, 2f64.sqrt() * im)
        };
        let mf = m as f64;
        let mut q_prev = 0.0;
        let mut q = qmm;
        for l in m..=cap {
            if l == m + 1 {
                q_prev = q;
                q = (2.0 * mf + 3.0).sqrt() * z * q_prev;
            } else if l > m + 1 {
                let lf = l as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
                let next = a * (z * q - b * q_prev);
                q_prev = q;
                q = next;
            }
            f(sh_index(l, m as i64), q * cos_part);
            if m > 0 {
                f(sh_index(l, -(m as i64)), q * sin_part);
            }
        }
    }
}

/// Gauss-Legendre in `cos theta` times uniform azimuth, exact for products of
/// two expansions of degree at most `cap`.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    cap: usize,
    nodes: Vec<(Point, f64)>,
}

impl SphereQuadrature {
    pub fn new(cap: usize) -> Self {
        let n_quad = 2 * cap;
        let (zs, ws) = gauss_legendre(n_quad + 1);
        let azimuths = 2 * n_quad + 1;
        let mut nodes = Vec::with_capacity(zs.len() * azimuths);
        for (&z, &w) in zs.iter().zip(&ws) {
            let s = (1.0 - z * z).sqrt();
            for j in 0..azimuths {
                let phi = 2.0 * PI * j as f64 / azimuths as f64;
                let (sp, cp) = phi.sin_cos();
                nodes.push(([s * cp, s * sp, z], w * 2.0 * PI / azimuths as f64));
            }
        }
        Self { cap, nodes }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn nodes(&self) -> &[(Point, f64)] {
        &self.nodes
    }

    pub fn integrate<F: Fn(&Point) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().map(|(x, w)| w * f(x)).sum()
    }

    pub fn l2_norm<F: Fn(&Point) -> f64>(&self, f: F) -> f64 {
        self.integrate(|x| f(x).powi(2)).sqrt()
    }
}

/// Coefficients of `f` up to degree `cap` with the quadrature designed for `cap`.
pub fn project<F: Fn(&Point) -> f64>(f: F, cap: usize) -> Expansion {
    let quad = SphereQuadrature::new(cap);
    project_with(f, cap, &quad).expect("quadrature built for this cap")
}

pub fn project_with<F: Fn(&Point) -> f64>(f: F, cap: usize, quad: &SphereQuadrature) -> Result<Expansion> {
    if cap > quad.cap() {
        return Err(BoasError::Quadrature(format!(
            "degree cap {cap} exceeds the quadrature design cap {}",
            quad.cap()
        )));
    }
    let mut out = Expansion::zero(cap);
    for (x, w) in quad.nodes() {
        let v = w * f(x);
        if v != 0.0 {
            for_each_harmonic(cap, x, |idx, y| out.coeffs[idx] += v * y);
        }
    }
    Ok(out)
}

/// The rotation field `X_ij`, generating rotations of the `(x_i, x_j)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationField {
    X12,
    X13,
    X23,
}

impl RotationField {
    pub const ALL: [RotationField; 3] = [RotationField::X12, RotationField::X13, RotationField::X23];

    /// Zero-based `(i, j)`.
    pub fn plane(self) -> (usize, usize) {
        match self {
            RotationField::X12 => (0, 1),
            RotationField::X13 => (0, 2),
            RotationField::X23 => (1, 2),
        }
    }

    /// `R(tau)` with `R_ii = R_jj = cos tau`, `R_ij = -sin tau`, `R_ji = sin tau`.
    pub fn rotation(self, tau: f64) -> Matrix3<f64> {
        let (i, j) = self.plane();
        let (s, c) = tau.sin_cos();
        let mut r = Matrix3::identity();
        r[(i, i)] = c;
        r[(i, j)] = -s;
        r[(j, i)] = s;
        r[(j, j)] = c;
        r
    }

    pub fn rotate(self, tau: f64, x: &Point) -> Point {
        let y = self.rotation(tau) * Vector3::from(*x);
        [y[0], y[1], y[2]]
    }
}

/// `x -> sum_k w_k base(M_k x)`: an expansion seen through rotations.
#[derive(Debug, Clone)]
pub struct SphereFunction {
    base: Arc<Expansion>,
    terms: Vec<(f64, Matrix3<f64>)>,
    declared: Option<f64>,
}

impl SphereFunction {
    pub fn new(e: Expansion) -> Self {
        Self {
            base: Arc::new(e),
            terms: vec![(1.0, Matrix3::identity())],
            declared: None,
        }
    }

    pub fn base(&self) -> &Expansion {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval_unchecked(&self, x: &Point) -> f64 {
        let v = Vector3::from(*x);
        self.terms
            .iter()
            .map(|(w, m)| {
                let y = m * v;
                w * self.base.eval_unchecked(&[y[0], y[1], y[2]])
            })
            .sum()
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        check_unit(x)?;
        Ok(self.eval_unchecked(x))
    }
}

/// `e^{tau X_ij} f (x) = f(R_ij(tau) x)` with the quadrature L2 norm.
#[derive(Debug, Clone)]
pub struct SphereRotationGroup {
    field: RotationField,
    quad: Arc<SphereQuadrature>,
}

pub fn rotation_group(field: RotationField, cap: usize) -> SphereRotationGroup {
    SphereRotationGroup {
        field,
        quad: Arc::new(SphereQuadrature::new(cap)),
    }
}

impl SphereRotationGroup {
    pub fn field(&self) -> RotationField {
        self.field
    }
}

impl OneParameterGroup for SphereRotationGroup {
    type Vector = SphereFunction;

    fn tag(&self) -> String {
        format!("sphere-rotation({:?})", self.field)
    }

    fn superpose(&self, terms: &[(f64, f64)], v: &SphereFunction) -> SphereFunction {
        let mut out = Vec::with_capacity(terms.len() * v.terms.len());
        for &(w, s) in terms {
            let r = self.field.rotation(s);
            for (w2, m) in &v.terms {
                out.push((w * w2, m * r));
            }
        }
        SphereFunction {
            base: v.base.clone(),
            terms: out,
            declared: v.declared,
        }
    }

    fn add_scaled(&self, a: &SphereFunction, scale: f64, b: &SphereFunction) -> Result<SphereFunction> {
        if !Arc::ptr_eq(&a.base, &b.base) {
            return Err(BoasError::Incompatible(
                "sphere functions built on different expansions".into(),
            ));
        }
        let mut terms = a.terms.clone();
        terms.extend(b.terms.iter().map(|(w, m)| (scale * w, *m)));
        Ok(SphereFunction {
            base: a.base.clone(),
            terms,
            declared: match (a.declared, b.declared) {
                (Some(x), Some(y)) => Some(x.max(y)),
                _ => None,
            },
        })
    }

    fn norm(&self, v: &SphereFunction) -> f64 {
        self.quad.l2_norm(|x| v.eval_unchecked(x))
    }

    /// Every orbit of a degree-`n` expansion is a trigonometric polynomial of degree `n`.
    fn certificate(&self, v: &SphereFunction) -> Option<BernsteinCertificate> {
        Some(BernsteinCertificate::new(
            v.declared.unwrap_or(v.base.cap() as f64),
        ))
    }

    fn with_certificate(&self, mut v: SphereFunction, cert: BernsteinCertificate) -> SphereFunction {
        v.declared = Some(cert.sigma);
        v
    }
}

/// The orbit `tau -> e(R(tau) x)` as a trigonometric polynomial, recovered
/// exactly from `2n + 1` equally spaced samples.
pub fn orbit_trajectory(e: &Expansion, field: RotationField, x: &Point) -> TrigPolynomial {
    let n = e.cap();
    let samples = 2 * n + 1;
    let values: Vec<(f64, f64)> = (0..samples)
        .map(|j| {
            let tau = 2.0 * PI * j as f64 / samples as f64;
            (tau, e.eval_unchecked(&field.rotate(tau, x)))
        })
        .collect();
    let inv = 1.0 / samples as f64;
    let mut a = vec![values.iter().map(|v| v.1).sum::<f64>() * inv];
    let mut b = Vec::with_capacity(n);
    for m in 1..=n {
        let mf = m as f64;
        let (mut ca, mut cb) = (0.0, 0.0);
        for &(tau, v) in &values {
            let (s, c) = (mf * tau).sin_cos();
            ca += v * c;
            cb += v * s;
        }
        a.push(2.0 * inv * ca);
        b.push(2.0 * inv * cb);
    }
    TrigPolynomial::new(a, b).expect("matching coefficient lengths")
}

fn riesz_power(stencil: &RieszStencil, p: &TrigPolynomial, r: usize, t: f64) -> f64 {
    if r == 0 {
        return p.eval(t);
    }
    stencil
        .nodes()
        .iter()
        .map(|&(w, tk)| w * riesz_power(stencil, p, r - 1, t + tk))
        .sum()
}

/// How orbit derivatives are taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Exact: r-fold Riesz formula on the degree-n orbit.
    Riesz,
    /// Truncated order-r Boas series with bandwidth `n`.
    Boas { half_width: usize },
}

fn check_order(r: usize) -> Result<()> {
    if r == 0 || r > MAX_FIELD_ORDER {
        return Err(BoasError::UnsupportedOrder {
            order: r,
            max: MAX_FIELD_ORDER,
        });
    }
    Ok(())
}

/// `(D_ij^r e)(x)`.
pub fn field_derivative(e: &Expansion, field: RotationField, x: &Point, r: usize, method: Method) -> Result<f64> {
    match method {
        Method::Riesz => {
            check_unit(x)?;
            check_order(r)?;
            let stencil = RieszStencil::new(e.cap())?;
            let p = orbit_trajectory(e, field, x);
            Ok(riesz_power(&stencil, &p, r, 0.0))
        }
        Method::Boas { half_width } => {
            Ok(boas_field_point(e, field, x, r, e.cap() as f64, half_width)?.value)
        }
    }
}

/// Order-`r` Boas series along the orbit of `x` with bandwidth `sigma`; the
/// tail bound uses `sup |e| <= sup_bound(e)`.
pub fn boas_field_point(
    e: &Expansion,
    field: RotationField,
    x: &Point,
    r: usize,
    sigma: f64,
    half_width: usize,
) -> Result<PointValue> {
    check_unit(x)?;
    check_order(r)?;
    let group = rotation_group(field, e.cap());
    let v = SphereFunction::new(e.clone());
    let table = build_table(r, sigma, half_width)?;
    let out = trajectory_derivative(&group, &v, &table, 0.0)?;
    Ok(PointValue {
        value: out.vector.eval_unchecked(x),
        tail_bound: table.tail_mass() * e.sup_bound(),
    })
}

/// `(B(sigma, N)^r e)(x)` by composing order-1 operators.
pub fn boas_power_point(
    e: &Expansion,
    field: RotationField,
    x: &Point,
    r: usize,
    sigma: f64,
    half_width: usize,
) -> Result<f64> {
    check_unit(x)?;
    let group = rotation_group(field, e.cap());
    let v = SphereFunction::new(e.clone());
    let out = boas_power(&group, &v, sigma, half_width, r)?;
    Ok(out.vector.eval_unchecked(x))
}

/// `L e (x) = -sum_{ij} D_ij^2 e (x)`; `L Y_lm = l(l+1) Y_lm`.
pub fn laplace_beltrami(e: &Expansion, x: &Point, method: Method) -> Result<f64> {
    let mut sum = 0.0;
    for field in RotationField::ALL {
        sum -= field_derivative(e, field, x, 2, method)?;
    }
    Ok(sum)
}

/// `D_ij e` as an expansion of the same degree.
pub fn field_expansion(e: &Expansion, field: RotationField) -> Result<Expansion> {
    RieszStencil::new(e.cap())?;
    Ok(project(
        |x| field_derivative(e, field, x, 1, Method::Riesz).expect("validated"),
        e.cap(),
    ))
}

/// `L e` as an expansion, assembled pointwise from the Riesz path.
pub fn laplacian_expansion(e: &Expansion) -> Result<Expansion> {
    RieszStencil::new(e.cap())?;
    Ok(project(
        |x| laplace_beltrami(e, x, Method::Riesz).expect("validated"),
        e.cap(),
    ))
}

/// `x -> e(R_ij(tau) x)` as an expansion.
pub fn rotate_expansion(e: &Expansion, field: RotationField, tau: f64) -> Expansion {
    project(|x| e.eval_unchecked(&field.rotate(tau, x)), e.cap())
}

/// `|| [D_12, D_23] e - D_13 e ||_2`. With `D_ij e(x) = d/dtau e(R_ij(tau) x)`
/// the bracket equals `+D_13`.
pub fn commutator_residual(e: &Expansion) -> Result<f64> {
    if e.cap() == 0 {
        return Ok(0.0);
    }
    use RotationField::*;
    let d12_d23 = field_expansion(&field_expansion(e, X23)?, X12)?;
    let d23_d12 = field_expansion(&field_expansion(e, X12)?, X23)?;
    let d13 = field_expansion(e, X13)?;
    Ok(d12_d23.difference(&d23_d12).difference(&d13).l2_norm())
}

/// `|| L(e o R(tau)) - (L e) o R(tau) ||_2`.
pub fn laplacian_rotation_residual(e: &Expansion, field: RotationField, tau: f64) -> Result<f64> {
    let a = laplacian_expansion(&rotate_expansion(e, field, tau))?;
    let b = rotate_expansion(&laplacian_expansion(e)?, field, tau);
    Ok(a.difference(&b).l2_norm())
}

/// `sum_j a_j(x) (D_j e)(x)` over the fields `X12, X13, X23`.
pub fn vector_field_apply<A: Fn(&Point) -> [f64; 3]>(a: A, e: &Expansion, x: &Point) -> Result<f64> {
    check_unit(x)?;
    let coeffs = a(x);
    let mut sum = 0.0;
    for (c, field) in coeffs.iter().zip(RotationField::ALL) {
        if *c != 0.0 {
            sum += c * field_derivative(e, field, x, 1, Method::Riesz)?;
        }
    }
    Ok(sum)
}

/// `f g`, certified at degree `cap(f) + cap(g)`.
pub fn product_expansion(f: &Expansion, g: &Expansion) -> Expansion {
    project(|x| f.eval_unchecked(x) * g.eval_unchecked(x), f.cap() + g.cap())
}

/// `|D(fg)(x) - f(x) Dg(x) - g(x) Df(x)|` with every derivative from the Riesz
/// formula; the product orbit has degree `cap(f) + cap(g)`.
pub fn leibniz_residual(f: &Expansion, g: &Expansion, field: RotationField, x: &Point) -> Result<f64> {
    check_unit(x)?;
    let stencil = RieszStencil::new(f.cap() + g.cap())?;
    let fg = |tau: f64| {
        let y = field.rotate(tau, x);
        f.eval_unchecked(&y) * g.eval_unchecked(&y)
    };
    let lhs = stencil.apply(fg, 0.0);
    let df = field_derivative(f, field, x, 1, Method::Riesz)?;
    let dg = field_derivative(g, field, x, 1, Method::Riesz)?;
    Ok((lhs - f.eval_unchecked(x) * dg - g.eval_unchecked(x) * df).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const POINTS: [(f64, f64); 4] = [(0.7, 1.3), (0.2, -2.0), (2.5, 0.4), (1.5707963267948966, 0.0)];

    #[test]
    fn eval_examples() {
        let c = Expansion::basis(3, 0, 0).unwrap();
        for (t, p) in POINTS {
            assert_relative_eq!(c.eval(&from_angles(t, p)).unwrap(), 1.0 / (4.0 * PI).sqrt(), max_relative = 1e-14);
        }
        let y10 = Expansion::basis(1, 1, 0).unwrap();
        assert_relative_eq!(y10.eval(&[0.0, 0.0, 1.0]).unwrap(), (3.0 / (4.0 * PI)).sqrt(), max_relative = 1e-14);
        assert_eq!(Expansion::zero(4).eval(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!(matches!(c.eval(&[1.0, 1.0, 0.0]), Err(BoasError::Domain(_))));
    }

    #[test]
    fn basis_is_orthonormal() {
        let cap = 6;
        let quad = SphereQuadrature::new(cap);
        for l in 0..=cap {
            for m in -(l as i64)..=l as i64 {
                let e = Expansion::basis(cap, l, m).unwrap();
                let p = project_with(|x| e.eval_unchecked(x), cap, &quad).unwrap();
                for (i, c) in p.coeffs().iter().enumerate() {
                    let expect = if i == sh_index(l, m) { 1.0 } else { 0.0 };
                    assert!((c - expect).abs() < 1e-12, "l={l} m={m} i={i}");
                }
            }
        }
    }

    #[test]
    fn projection_examples() {
        let y32 = Expansion::basis(3, 3, 2).unwrap();
        let p = project(|x| y32.eval_unchecked(x), 5);
        assert!((p.coeff(3, 2) - 1.0).abs() < 1e-12);
        assert!(p.difference(&Expansion::basis(5, 3, 2).unwrap()).l2_norm() < 1e-12);
        assert_eq!(project(|_| 0.0, 4).l2_norm(), 0.0);
        assert!(matches!(
            project_with(|_| 1.0, 5, &SphereQuadrature::new(4)),
            Err(BoasError::Quadrature(_))
        ));
    }

    #[test]
    fn rotation_examples() {
        let e = Expansion::random(4, 9);
        let g = rotation_group(RotationField::X13, 4);
        let v = SphereFunction::new(e.clone());
        let w = g.apply(2.0 * PI, &v);
        for (x, _) in SphereQuadrature::new(2).nodes() {
            assert!((w.eval_unchecked(x) - e.eval_unchecked(x)).abs() < 1e-12);
        }
        assert_relative_eq!(g.norm(&g.apply(0.8, &v)), g.norm(&v), max_relative = 1e-12);
        let y10 = SphereFunction::new(Expansion::basis(1, 1, 0).unwrap());
        let rot = rotation_group(RotationField::X12, 1).apply(0.9, &y10);
        let x = from_angles(0.4, 1.0);
        assert!((rot.eval_unchecked(&x) - y10.eval_unchecked(&x)).abs() < 1e-15);
        // x1 -> x1 cos - x2 sin, so at pi/2 the x1 harmonic becomes -x2
        let y11 = Expansion::basis(1, 1, 1).unwrap();
        let y1m1 = Expansion::basis(1, 1, -1).unwrap();
        let r = rotation_group(RotationField::X12, 1).apply(PI / 2.0, &SphereFunction::new(y11));
        assert!((r.eval_unchecked(&x) + y1m1.eval_unchecked(&x)).abs() < 1e-14);
    }

    #[test]
    fn field_derivative_examples() {
        let y10 = Expansion::basis(1, 1, 0).unwrap();
        let x = from_angles(0.7, 1.3);
        assert!(field_derivative(&y10, RotationField::X12, &x, 1, Method::Riesz).unwrap().abs() < 1e-15);
        let pole = [0.0, 0.0, 1.0];
        assert!(field_derivative(&y10, RotationField::X13, &pole, 1, Method::Riesz).unwrap().abs() < 1e-14);
        // x3 component of R13(tau)(1,0,0) is sin tau
        let d = field_derivative(&y10, RotationField::X13, &[1.0, 0.0, 0.0], 1, Method::Riesz).unwrap();
        assert_relative_eq!(d, (3.0 / (4.0 * PI)).sqrt(), max_relative = 1e-13);
        assert!(field_derivative(&y10, RotationField::X13, &pole, 5, Method::Riesz).is_err());
        assert!(field_derivative(&Expansion::basis(0, 0, 0).unwrap(), RotationField::X13, &pole, 1, Method::Riesz).is_err());
    }

    #[test]
    fn boas_field_within_tail() {
        let e = Expansion::random(8, 21);
        let x = from_angles(1.1, 0.3);
        for r in [1, 2] {
            let exact = field_derivative(&e, RotationField::X23, &x, r, Method::Riesz).unwrap();
            let b = boas_field_point(&e, RotationField::X23, &x, r, 8.0, 2000).unwrap();
            assert!((b.value - exact).abs() <= b.tail_bound, "r={r}");
        }
        assert!(matches!(
            boas_field_point(&e, RotationField::X23, &x, 1, 7.0, 10),
            Err(BoasError::Certificate(_))
        ));
    }

    #[test]
    fn laplacian_eigenvalues() {
        for l in 0..=6 {
            for m in [0, l as i64, -(l as i64)] {
                let e = Expansion::basis(6, l, m).unwrap();
                for (t, p) in POINTS {
                    let x = from_angles(t, p);
                    let v = e.eval_unchecked(&x);
                    let lv = laplace_beltrami(&e, &x, Method::Riesz).unwrap();
                    assert!((lv - (l * (l + 1)) as f64 * v).abs() < 1e-10 * (1.0 + v.abs()));
                }
            }
        }
    }

    #[test]
    fn commutator_sign() {
        use RotationField::*;
        let e = Expansion::random(3, 4);
        assert!(commutator_residual(&e).unwrap() < 1e-10);
        let a = field_expansion(&field_expansion(&e, X23).unwrap(), X12).unwrap();
        let b = field_expansion(&field_expansion(&e, X12).unwrap(), X23).unwrap();
        let c = field_expansion(&e, X13).unwrap();
        let wrong = a.difference(&b).difference(&Expansion::zero(3).difference(&c));
        assert!(wrong.l2_norm() > 0.1);
        assert_eq!(commutator_residual(&Expansion::basis(0, 0, 0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn vector_field_reductions() {
        let e = Expansion::random(2, 8);
        let x = from_angles(0.9, 2.2);
        assert_eq!(vector_field_apply(|_| [0.0; 3], &e, &x).unwrap(), 0.0);
        let d = field_derivative(&e, RotationField::X12, &x, 1, Method::Riesz).unwrap();
        assert_eq!(vector_field_apply(|_| [1.0, 0.0, 0.0], &e, &x).unwrap(), d);
    }

    #[test]
    fn products_stay_in_degree() {
        let f = Expansion::random(2, 1);
        let g = Expansion::random(2, 2);
        let fg = project(|x| f.eval_unchecked(x) * g.eval_unchecked(x), 8);
        assert!(fg.norm_above(4) < 1e-10);
        assert!(fg.norm_above(3) > 1e-3);
        for field in RotationField::ALL {
            assert!(leibniz_residual(&f, &g, field, &from_angles(0.3, 0.5)).unwrap() < 1e-10);
        }
    }
}
