//! The one-parameter group contract and the operators built over it.
//!
//! A model supplies a [`OneParameterGroup`]: how the group moves a vector,
//! how finite superpositions `sum_j w_j e^{s_j D} v` are formed, a norm, and
//! a Bernstein certificate (an upper bound on the exponential type of the
//! trajectory `t -> e^{tD} v`). Everything else here is model-independent.

use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

use crate::error::{BoasError, Result};
use crate::quadrature::composite_rule;
use crate::sinc_kernel::{build_table, sinc_derivative, table_mass, CoefficientTable};

/// Relative slack allowed when comparing a certified type to a table bandwidth.
pub const CERTIFICATE_SLACK: f64 = 1e-9;

/// `C_h = int h(t) (1 + |t|) dt` for the smoothing kernel.
pub const SMOOTHING_CONSTANT: f64 = 1.0 + 12.0 * LN_2 / PI;

/// Normaliser of the smoothing kernel: `1 / int (sin(t/4)/t)^4 dt = 96/pi`.
pub const SMOOTHING_NORMALIZER: f64 = 96.0 / PI;

const SMOOTHING_PANEL_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinCertificate {
    pub sigma: f64,
}

impl BernsteinCertificate {
    pub fn new(sigma: f64) -> Self {
        Self { sigma }
    }

    pub fn admits(&self, bandwidth: f64) -> bool {
        self.sigma <= bandwidth * (1.0 + CERTIFICATE_SLACK)
    }
}

/// A strongly continuous group of isometries `e^{tD}` acting on a model space.
///
/// `apply(0, v)` must return `v` unchanged, and `superpose` must agree with
/// summing `apply` results.
pub trait OneParameterGroup {
    type Vector: Clone;

    fn tag(&self) -> String;

    /// `sum_j weight_j e^{shift_j D} v` for `terms = [(weight, shift)]`.
    fn superpose(&self, terms: &[(f64, f64)], v: &Self::Vector) -> Self::Vector;

    fn apply(&self, t: f64, v: &Self::Vector) -> Self::Vector {
        self.superpose(&[(1.0, t)], v)
    }

    /// `a + scale * b`.
    fn add_scaled(&self, a: &Self::Vector, scale: f64, b: &Self::Vector) -> Result<Self::Vector>;

    fn norm(&self, v: &Self::Vector) -> f64;

    fn certificate(&self, v: &Self::Vector) -> Option<BernsteinCertificate>;

    /// Attaches a certificate obtained outside the model (e.g. by smoothing).
    fn with_certificate(&self, v: Self::Vector, cert: BernsteinCertificate) -> Self::Vector;
}

/// A lazily evaluated superposition `sum_j w_j e^{s_j D} base` of group
/// translates of one base element. Any model whose vectors are pointwise
/// evaluable functions can use this as its vector type.
#[derive(Debug)]
pub struct OrbitSum<B> {
    base: Arc<B>,
    terms: Vec<(f64, f64)>,
    declared_type: Option<f64>,
}

impl<B> Clone for OrbitSum<B> {
    fn clone(&self) -> Self {
        Self {
            base: Arc::clone(&self.base),
            terms: self.terms.clone(),
            declared_type: self.declared_type,
        }
    }
}

impl<B> OrbitSum<B> {
    pub fn new(base: B) -> Self {
        Self::from_arc(Arc::new(base))
    }

    pub fn from_arc(base: Arc<B>) -> Self {
        Self {
            base,
            terms: vec![(1.0, 0.0)],
            declared_type: None,
        }
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    /// `(weight, shift)` pairs.
    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn declared_type(&self) -> Option<f64> {
        self.declared_type
    }

    pub fn with_declared_type(mut self, sigma: f64) -> Self {
        self.declared_type = Some(sigma);
        self
    }

    pub fn superpose(&self, outer: &[(f64, f64)]) -> Self {
        let mut terms = Vec::with_capacity(outer.len() * self.terms.len());
        for &(w, s) in outer {
            for &(u, r) in &self.terms {
                terms.push((w * u, s + r));
            }
        }
        Self {
            base: Arc::clone(&self.base),
            terms,
            declared_type: self.declared_type,
        }
    }

    pub fn add_scaled(&self, scale: f64, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.base, &other.base) {
            return Err(BoasError::Incompatible(
                "superpositions are over different base elements".into(),
            ));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|&(w, s)| (scale * w, s)));
        let declared_type = match (self.declared_type, other.declared_type) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Ok(Self {
            base: Arc::clone(&self.base),
            terms,
            declared_type,
        })
    }

    /// `sum_j w_j eval(s_j)` where `eval(s)` evaluates `e^{sD} base` at the point of interest.
    pub fn evaluate_with<T, F>(&self, mut eval: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(&B, f64) -> T,
    {
        self.terms
            .iter()
            .fold(T::default(), |acc, &(w, s)| acc + eval(&self.base, s) * w)
    }
}

/// A finite element `sum_i w_i e^{shift_i D}` of the group algebra whose shifts
/// lie on a lattice `step * (index + phase)`. Composition is convolution of
/// the weight sequences, which keeps r-fold products of Boas operators at
/// linear size instead of `(2N+1)^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftLattice {
    step: f64,
    phase: f64,
    first: i64,
    weights: Vec<f64>,
}

impl ShiftLattice {
    pub fn from_table(table: &CoefficientTable) -> Self {
        Self {
            step: table.step(),
            phase: table.phase(),
            first: -(table.half_width() as i64),
            weights: table.entries().iter().map(|e| e.weight).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    pub fn compose(&self, other: &ShiftLattice) -> Result<ShiftLattice> {
        if self.step != other.step {
            return Err(BoasError::Incompatible(
                "lattices with different steps do not compose".into(),
            ));
        }
        let mut weights = vec![0.0; self.weights.len() + other.weights.len() - 1];
        for (i, &a) in self.weights.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (out, &b) in weights[i..].iter_mut().zip(&other.weights) {
                *out += a * b;
            }
        }
        Ok(ShiftLattice {
            step: self.step,
            phase: self.phase + other.phase,
            first: self.first + other.first,
            weights,
        })
    }

    /// `(weight, t + shift)` pairs.
    pub fn terms(&self, t: f64) -> Vec<(f64, f64)> {
        self.weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (w, t + self.step * ((self.first + i as i64) as f64 + self.phase)))
            .collect()
    }
}

/// An operator output together with its truncation-tail bound
/// `sum_{|k|>N} |weight(k)| * norm(v)`.
#[derive(Debug, Clone)]
pub struct BoasOutput<V> {
    pub vector: V,
    pub tail_bound: f64,
}

/// A scalar Boas value at one point with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValue {
    pub value: f64,
    pub tail_bound: f64,
}

fn require_certificate<G: OneParameterGroup>(
    group: &G,
    v: &G::Vector,
    bandwidth: f64,
) -> Result<BernsteinCertificate> {
    let cert = group.certificate(v).ok_or_else(|| {
        BoasError::Certificate(format!(
            "vector carries no Bernstein certificate for {}",
            group.tag()
        ))
    })?;
    if !cert.admits(bandwidth) {
        return Err(BoasError::Certificate(format!(
            "certified type {} exceeds bandwidth {} for {}",
            cert.sigma,
            bandwidth,
            group.tag()
        )));
    }
    Ok(cert)
}

/// Truncated Boas operator: `sum_{|k|<=N} weight(k) e^{offset(k) D} v ~ D^r v`.
pub fn boas_apply<G: OneParameterGroup>(
    group: &G,
    v: &G::Vector,
    table: &CoefficientTable,
) -> Result<BoasOutput<G::Vector>> {
    trajectory_derivative(group, v, table, 0.0)
}

/// `sum_k weight(k) e^{(t + offset(k)) D} v ~ e^{tD} D^r v`.
pub fn trajectory_derivative<G: OneParameterGroup>(
    group: &G,
    v: &G::Vector,
    table: &CoefficientTable,
    t: f64,
) -> Result<BoasOutput<G::Vector>> {
    require_certificate(group, v, table.bandwidth())?;
    let vector = group.superpose(&table.terms(t), v);
    Ok(BoasOutput {
        vector,
        tail_bound: table.tail_mass() * group.norm(v),
    })
}

/// `B(sigma, N)^r v`, the r-fold composition of the order-1 operator.
pub fn boas_power<G: OneParameterGroup>(
    group: &G,
    v: &G::Vector,
    sigma: f64,
    half_width: usize,
    r: usize,
) -> Result<BoasOutput<G::Vector>> {
    if r == 0 {
        return Err(BoasError::InvalidParameter("power must be at least 1".into()));
    }
    let table = build_table(1, sigma, half_width)?;
    if r == 1 {
        return boas_apply(group, v, &table);
    }
    require_certificate(group, v, sigma)?;
    let single = ShiftLattice::from_table(&table);
    let mut lattice = single.clone();
    for _ in 1..r {
        lattice = lattice.compose(&single)?;
    }
    let vector = group.superpose(&lattice.terms(0.0), v);
    let mass = table_mass(&table);
    let full = sigma.powi(r as i32);
    let tail = (full - mass.powi(r as i32)).max(0.0);
    Ok(BoasOutput {
        vector,
        tail_bound: tail * group.norm(v),
    })
}

/// Where the `k = 0` divided difference `Dv` of the Q operator comes from.
pub enum Auxiliary<'a, V> {
    /// Not available; odd orders then fail with [`BoasError::MissingAuxiliary`].
    None,
    /// Computed by the order-1 Boas operator at the same bandwidth and width.
    Boas,
    Supplied(&'a V),
}

/// The Q-form of the derivative:
/// `D^n v ~ n (sigma/pi)^{n-1} sum_{|k|<=N} Delta_k(v) sinc^{(n-1)}(-k)` with
/// `Delta_k(v) = (e^{k pi/sigma D} v - v) / (k pi/sigma)` and `Delta_0(v) = Dv`.
pub fn q_apply<G: OneParameterGroup>(
    group: &G,
    v: &G::Vector,
    n: usize,
    sigma: f64,
    half_width: usize,
    auxiliary: Auxiliary<'_, G::Vector>,
) -> Result<BoasOutput<G::Vector>> {
    if n == 0 {
        return Err(BoasError::InvalidParameter("order must be at least 1".into()));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(BoasError::InvalidParameter(format!(
            "bandwidth must be positive, got {sigma}"
        )));
    }
    if half_width == 0 {
        return Err(BoasError::InvalidParameter("half-width must be at least 1".into()));
    }
    require_certificate(group, v, sigma)?;
    let scale = n as f64 * (sigma / PI).powi(n as i32 - 1);
    let step = PI / sigma;
    let centre = scale * sinc_derivative(n - 1, 0.0)?;

    let mut terms = Vec::with_capacity(2 * half_width + 1);
    let mut identity_weight = 0.0;
    for k in (-(half_width as i64))..=(half_width as i64) {
        if k == 0 {
            continue;
        }
        let shift = step * k as f64;
        let c = scale * sinc_derivative(n - 1, -(k as f64))? / shift;
        terms.push((c, shift));
        identity_weight -= c;
    }
    terms.push((identity_weight, 0.0));
    let mut vector = group.superpose(&terms, v);

    if centre != 0.0 {
        let derivative = match auxiliary {
            Auxiliary::None => return Err(BoasError::MissingAuxiliary(n)),
            Auxiliary::Boas => boas_apply(group, v, &build_table(1, sigma, half_width)?)?.vector,
            Auxiliary::Supplied(d) => d.clone(),
        };
        vector = group.add_scaled(&vector, centre, &derivative)?;
    }

    let tail = q_tail_mass(n, sigma, half_width)?;
    Ok(BoasOutput {
        vector,
        tail_bound: tail * group.norm(v),
    })
}

/// `sum_{|k|>N} 2 |c_k|` for the Q weights, summed to `64N + 1024` with the
/// `O(k^-2)` remainder estimated from the last term.
fn q_tail_mass(n: usize, sigma: f64, half_width: usize) -> Result<f64> {
    let scale = n as f64 * (sigma / PI).powi(n as i32 - 1);
    let step = PI / sigma;
    let last = 64 * half_width + 1024;
    let mut sum = 0.0;
    let mut term = 0.0;
    for k in half_width + 1..=last {
        let kf = k as f64;
        let a = sinc_derivative(n - 1, -kf)?.abs() + sinc_derivative(n - 1, kf)?.abs();
        term = 2.0 * scale * a / (step * kf);
        sum += term;
    }
    Ok(sum + term * last as f64)
}

/// Quadrature description for `R_h^sigma v = int h(t) e^{(t/sigma) D} v dt`
/// with `h(t) = a (sin(t/4)/t)^4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingKernelSpec {
    pub normalizer: f64,
    pub truncation: f64,
    pub node_count: usize,
    pub tail_tol: f64,
}

impl SmoothingKernelSpec {
    /// Smallest truncation whose analytic tail `2a/(3T^3)` is at most `tol/2`,
    /// with panels no wider than `pi`.
    pub fn for_tolerance(tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(BoasError::Quadrature(format!(
                "tail tolerance must lie in (0, 1), got {tol}"
            )));
        }
        let a = SMOOTHING_NORMALIZER;
        let truncation = (4.0 * a / (3.0 * tol)).cbrt();
        let node_count = Self::required_nodes(truncation);
        Self::new(a, truncation, node_count, tol)
    }

    pub fn new(normalizer: f64, truncation: f64, node_count: usize, tail_tol: f64) -> Result<Self> {
        if !(normalizer > 0.0 && truncation > 0.0) {
            return Err(BoasError::Quadrature(
                "normalizer and truncation must be positive".into(),
            ));
        }
        let spec = Self {
            normalizer,
            truncation,
            node_count,
            tail_tol,
        };
        if spec.tail_bound() > tail_tol {
            return Err(BoasError::Quadrature(format!(
                "truncation {truncation} leaves tail {} above tolerance {tail_tol}",
                spec.tail_bound()
            )));
        }
        let needed = Self::required_nodes(truncation);
        if node_count < needed {
            return Err(BoasError::Quadrature(format!(
                "{node_count} nodes cannot resolve [-{truncation}, {truncation}]; need {needed}"
            )));
        }
        Ok(spec)
    }

    fn required_nodes(truncation: f64) -> usize {
        (2.0 * truncation / PI).ceil() as usize * SMOOTHING_PANEL_ORDER
    }

    /// `int_{|t|>T} h <= 2a / (3 T^3)` from `h(t) <= a t^-4`.
    pub fn tail_bound(&self) -> f64 {
        2.0 * self.normalizer / (3.0 * self.truncation.powi(3))
    }

    pub fn kernel(&self, t: f64) -> f64 {
        smoothing_kernel(self.normalizer, t)
    }

    /// `(node, weight * h(node))` pairs on `[-T, T]`.
    pub fn rule(&self) -> Vec<(f64, f64)> {
        let panels = self.node_count / SMOOTHING_PANEL_ORDER;
        composite_rule(-self.truncation, self.truncation, panels, SMOOTHING_PANEL_ORDER)
            .into_iter()
            .map(|(t, w)| (t, w * self.kernel(t)))
            .collect()
    }
}

/// `a (sin(t/4)/t)^4`, continuous through `t = 0`.
pub fn smoothing_kernel(a: f64, t: f64) -> f64 {
    let q = if t.abs() < 1e-4 {
        0.25 * (1.0 - t * t / 96.0)
    } else {
        (t / 4.0).sin() / t
    };
    a * q.powi(4)
}

/// Quadrature approximation of `int h(t) e^{(t/sigma) D} v dt`, certified at `sigma`.
pub fn smooth<G: OneParameterGroup>(
    group: &G,
    v: &G::Vector,
    sigma: f64,
    spec: &SmoothingKernelSpec,
) -> Result<G::Vector> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(BoasError::InvalidParameter(format!(
            "bandwidth must be positive, got {sigma}"
        )));
    }
    let terms: Vec<(f64, f64)> = spec
        .rule()
        .into_iter()
        .map(|(t, w)| (w, t / sigma))
        .collect();
    let out = group.superpose(&terms, v);
    Ok(group.with_certificate(out, BernsteinCertificate::new(sigma)))
}

/// Probe-grid estimate of `Omega(v, s) = sup_{|tau|<=s} ||v - e^{tau D} v||`:
/// the maximum over `probes` equally spaced `tau` in `[-s, s]`. A lower bound.
pub fn modulus<G: OneParameterGroup>(group: &G, v: &G::Vector, s: f64, probes: usize) -> Result<f64> {
    if probes < 16 {
        return Err(BoasError::InvalidParameter(format!(
            "at least 16 probes are required, got {probes}"
        )));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(BoasError::InvalidParameter(format!("radius must be nonnegative, got {s}")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let mut best: f64 = 0.0;
    for i in 0..probes {
        let tau = -s + 2.0 * s * i as f64 / (probes - 1) as f64;
        let diff = group.superpose(&[(1.0, 0.0), (-1.0, tau)], v);
        best = best.max(group.norm(&diff));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Scalar test model: vectors are functions of the trajectory parameter,
    /// represented by their sample at 0 through a closure over shifts.
    struct Shift;
    #[derive(Clone)]
    struct Wave {
        terms: Vec<(f64, f64)>,
        freq: f64,
        phase: f64,
        cert: Option<f64>,
    }
    impl Wave {
        fn at(&self, x: f64) -> f64 {
            self.terms.iter().map(|(w, s)| w * (self.freq * (x + s) + self.phase).sin()).sum()
        }
    }
    impl OneParameterGroup for Shift {
        type Vector = Wave;
        fn tag(&self) -> String {
            "shift".into()
        }
        fn superpose(&self, terms: &[(f64, f64)], v: &Wave) -> Wave {
            let mut out = Vec::new();
            for &(w, s) in terms {
                for &(u, r) in &v.terms {
                    out.push((w * u, s + r));
                }
            }
            Wave { terms: out, ..v.clone() }
        }
        fn add_scaled(&self, a: &Wave, scale: f64, b: &Wave) -> Result<Wave> {
            let mut t = a.terms.clone();
            t.extend(b.terms.iter().map(|&(w, s)| (scale * w, s)));
            Ok(Wave { terms: t, ..a.clone() })
        }
        fn norm(&self, v: &Wave) -> f64 {
            (0..64).map(|i| v.at(i as f64 * 0.1).abs()).fold(0.0, f64::max)
        }
        fn certificate(&self, v: &Wave) -> Option<BernsteinCertificate> {
            v.cert.map(BernsteinCertificate::new)
        }
        fn with_certificate(&self, v: Wave, c: BernsteinCertificate) -> Wave {
            Wave { cert: Some(c.sigma), ..v }
        }
    }

    fn wave(freq: f64) -> Wave {
        Wave { terms: vec![(1.0, 0.0)], freq, phase: 0.0, cert: Some(freq) }
    }

    #[test]
    fn identity_action_is_exact() {
        let v = wave(1.3);
        let w = Shift.apply(0.0, &v);
        assert_eq!(w.terms, v.terms);
    }

    #[test]
    fn certificates_are_enforced() {
        let v = wave(2.0);
        let t = build_table(1, 1.0, 8).unwrap();
        assert!(matches!(boas_apply(&Shift, &v, &t), Err(BoasError::Certificate(_))));
        let bare = Wave { cert: None, ..wave(1.0) };
        assert!(boas_apply(&Shift, &bare, &build_table(1, 3.0, 8).unwrap()).is_err());
    }

    #[test]
    fn trajectory_at_zero_matches_boas_bitwise() {
        let v = wave(0.8);
        let t = build_table(3, 1.0, 20).unwrap();
        let a = boas_apply(&Shift, &v, &t).unwrap();
        let b = trajectory_derivative(&Shift, &v, &t, 0.0).unwrap();
        assert_eq!(a.vector.terms, b.vector.terms);
    }

    #[test]
    fn power_one_is_boas_order_one() {
        let v = wave(0.8);
        let a = boas_power(&Shift, &v, 1.0, 30, 1).unwrap();
        let b = boas_apply(&Shift, &v, &build_table(1, 1.0, 30).unwrap()).unwrap();
        assert_eq!(a.vector.terms, b.vector.terms);
    }

    #[test]
    fn lattice_composition_matches_nested_superposition() {
        let t = build_table(1, 1.7, 5).unwrap();
        let l = ShiftLattice::from_table(&t);
        let sq = l.compose(&l).unwrap();
        assert_eq!(sq.len(), 21);
        let v = wave(0.5);
        let nested = Shift.superpose(&t.terms(0.0), &Shift.superpose(&t.terms(0.0), &v));
        let flat = Shift.superpose(&sq.terms(0.0), &v);
        for x in [0.0, 0.3, -1.1] {
            assert!((nested.at(x) - flat.at(x)).abs() < 1e-12);
        }
        assert!(sq.mass() <= l.mass() * l.mass() * (1.0 + 1e-14));
    }

    #[test]
    fn q_requires_auxiliary_for_odd_orders() {
        let v = wave(0.9);
        assert!(matches!(
            q_apply(&Shift, &v, 3, 1.0, 10, Auxiliary::None),
            Err(BoasError::MissingAuxiliary(3))
        ));
        assert!(q_apply(&Shift, &v, 2, 1.0, 10, Auxiliary::None).is_ok());
        assert!(q_apply(&Shift, &v, 3, 1.0, 10, Auxiliary::Boas).is_ok());
    }

    #[test]
    fn q_order_one_returns_supplied_derivative() {
        let v = wave(0.9);
        let d = Wave { terms: vec![(0.9, PI / 1.8)], ..v.clone() };
        let out = q_apply(&Shift, &v, 1, 1.0, 50, Auxiliary::Supplied(&d)).unwrap();
        for x in [0.0, 0.7, 2.0] {
            assert!((out.vector.at(x) - d.at(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_trajectory_leaves_unpaired_end_term() {
        // k and 1-k cancel in pairs; on {-N..N} only k = -N is left over.
        let v = Wave { terms: vec![(1.0, 0.0)], freq: 0.0, phase: PI / 2.0, cert: Some(0.0) };
        let table = build_table(1, 1.0, 10).unwrap();
        let out = boas_apply(&Shift, &v, &table).unwrap();
        let end = table.entries()[0].weight;
        assert!((Shift.norm(&out.vector) - end.abs()).abs() < 1e-15);
        assert!(end.abs() <= out.tail_bound);
        let out = q_apply(&Shift, &v, 2, 1.0, 10, Auxiliary::None).unwrap();
        assert_eq!(Shift.norm(&out.vector), 0.0);
        assert_eq!(modulus(&Shift, &v, 1.0, 16).unwrap(), 0.0);
    }

    #[test]
    fn odd_table_weights_pair_off() {
        for r in [1usize, 3, 5] {
            let t = build_table(r, 2.0, 50).unwrap();
            let s: f64 = t.entries()[1..].iter().map(|e| e.weight).sum();
            let m: f64 = table_mass(&t);
            assert!(s.abs() < 1e-12 * m);
        }
    }

    #[test]
    fn smoothing_spec_validation() {
        let spec = SmoothingKernelSpec::for_tolerance(1e-6).unwrap();
        assert!(spec.tail_bound() <= 1e-6);
        assert!(SmoothingKernelSpec::new(spec.normalizer, spec.truncation, 8, 1e-6).is_err());
        assert!(SmoothingKernelSpec::new(spec.normalizer, 5.0, 1000, 1e-6).is_err());
        assert!(SmoothingKernelSpec::for_tolerance(0.0).is_err());
        let total: f64 = spec.rule().iter().map(|(_, w)| w).sum();
        assert!(total <= 1.0 + 1e-12 && total > 1.0 - 1e-6);
    }

    #[test]
    fn kernel_is_continuous_at_origin() {
        let a = SMOOTHING_NORMALIZER;
        let near = smoothing_kernel(a, 1.0001e-4);
        let at = smoothing_kernel(a, 0.0);
        assert!((near - at).abs() < 1e-9 * at);
    }

    #[test]
    fn modulus_rejects_few_probes() {
        assert!(modulus(&Shift, &wave(1.0), 1.0, 8).is_err());
        assert_eq!(modulus(&Shift, &wave(1.0), 0.0, 16).unwrap(), 0.0);
    }
}
