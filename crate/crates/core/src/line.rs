//! Models on the real line: band-limited sinc series and compactly supported
//! fixtures, moved by translation or by the Schrödinger group
//! `s -> e^{2 pi i s (pD + qX)}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{BoasError, Result};
use crate::operators::{boas_apply, BernsteinCertificate, OneParameterGroup, OrbitSum};
use crate::sinc_kernel::{build_table, sin_cos_pi, sinc_derivative_unchecked};

/// Highest order accepted by [`SincSeriesSignal::derivative`].
pub const MAX_ORACLE_ORDER: usize = 6;

/// `f(t) = sum_j c_j sinc(band t / pi - j)` over a contiguous window of `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SincSeriesSignal {
    band: f64,
    first: i64,
    coeffs: Vec<f64>,
}

/// Builds a sinc series from sparse coefficients; the window spans the
/// smallest to largest index given.
pub fn make_sinc_signal(band: f64, coeffs: &BTreeMap<i64, f64>) -> Result<SincSeriesSignal> {
    if !(band.is_finite() && band > 0.0) {
        return Err(BoasError::InvalidParameter(format!(
            "band must be positive, got {band}"
        )));
    }
    if coeffs.values().all(|&c| c == 0.0) {
        return Err(BoasError::InvalidParameter(
            "a sinc series needs at least one nonzero coefficient".into(),
        ));
    }
    if coeffs.values().any(|c| !c.is_finite()) {
        return Err(BoasError::InvalidParameter("non-finite coefficient".into()));
    }
    let first = *coeffs.keys().next().unwrap();
    let last = *coeffs.keys().next_back().unwrap();
    let mut dense = vec![0.0; (last - first + 1) as usize];
    for (&j, &c) in coeffs {
        dense[(j - first) as usize] = c;
    }
    Ok(SincSeriesSignal {
        band,
        first,
        coeffs: dense,
    })
}

impl SincSeriesSignal {
    pub fn band(&self) -> f64 {
        self.band
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.first + i as i64, c))
    }

    /// Seeded random series on the window `[-half, half]`, coefficients uniform in `[-1, 1]`.
    pub fn random(band: f64, half: i64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: BTreeMap<i64, f64> = (-half..=half)
            .map(|j| (j, rng.gen_range(-1.0..=1.0)))
            .collect();
        make_sinc_signal(band, &coeffs)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = self.band * t / PI;
        let (s, _) = sin_cos_pi(u);
        if s == 0.0 && u == u.round() {
            let j = u as i64;
            return self.coeff(j);
        }
        // sin(pi (u - j)) = (-1)^j sin(pi u)
        let mut sum = 0.0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = self.first + i as i64;
            let sign = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            sum += c * sign / (u - j as f64);
        }
        sum * s / PI
    }

    fn coeff(&self, j: i64) -> f64 {
        let i = j - self.first;
        if i < 0 || i as usize >= self.coeffs.len() {
            0.0
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Exact `r`-th derivative `sum_j c_j (band/pi)^r sinc^(r)(band t/pi - j)`.
    pub fn derivative(&self, r: usize, t: f64) -> Result<f64> {
        if r > MAX_ORACLE_ORDER {
            return Err(BoasError::UnsupportedOrder {
                order: r,
                max: MAX_ORACLE_ORDER,
            });
        }
        if r == 0 {
            return Ok(self.eval(t));
        }
        let u = self.band * t / PI;
        let scale = (self.band / PI).powi(r as i32);
        Ok(self
            .coefficients()
            .map(|(j, c)| c * sinc_derivative_unchecked(r, u - j as f64))
            .sum::<f64>()
            * scale)
    }

    /// `sum |c_j|`, an upper bound for `sup |f|`.
    pub fn sup_bound(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

/// Convenience wrapper matching the operation name used by the CLI.
pub fn derivative_oracle(sig: &SincSeriesSignal, r: usize, t: f64) -> Result<f64> {
    sig.derivative(r, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompactShape {
    /// `max(0, 1 - |x|/L)`
    Hat,
    /// `(1 + cos(pi x / L)) / 2` on `[-L, L]`
    Bump,
}

/// A continuous function vanishing outside `[-radius, radius]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactSignal {
    pub shape: CompactShape,
    pub radius: f64,
}

impl CompactSignal {
    pub fn new(shape: CompactShape, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(BoasError::InvalidParameter(format!(
                "support radius must be positive, got {radius}"
            )));
        }
        Ok(Self { shape, radius })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x.abs() >= self.radius {
            return 0.0;
        }
        match self.shape {
            CompactShape::Hat => 1.0 - x.abs() / self.radius,
            CompactShape::Bump => 0.5 * (1.0 + (PI * x / self.radius).cos()),
        }
    }
}

/// Base functions available to the line models.
#[derive(Debug, Clone, PartialEq)]
pub enum LineSignal {
    Sinc(SincSeriesSignal),
    Compact(CompactSignal),
    /// `amplitude * sin(freq t + phase)`
    Sine { amplitude: f64, freq: f64, phase: f64 },
    /// `(2/pi) asin(sin t)`: period `2 pi`, slopes `+-2/pi`, not band-limited.
    Triangle,
    /// A band-limited series cut to `[-radius, radius]`.
    Truncated { inner: SincSeriesSignal, radius: f64 },
    Zero,
}

impl LineSignal {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            LineSignal::Sinc(s) => s.eval(x),
            LineSignal::Compact(c) => c.eval(x),
            LineSignal::Sine {
                amplitude,
                freq,
                phase,
            } => amplitude * (freq * x + phase).sin(),
            LineSignal::Triangle => 2.0 / PI * x.sin().asin(),
            LineSignal::Truncated { inner, radius } => {
                if x.abs() <= *radius {
                    inner.eval(x)
                } else {
                    0.0
                }
            }
            LineSignal::Zero => 0.0,
        }
    }

    /// Exponential type under translation, when the model can certify one.
    pub fn band_type(&self) -> Option<f64> {
        match self {
            LineSignal::Sinc(s) => Some(s.band),
            LineSignal::Sine { freq, .. } => Some(freq.abs()),
            LineSignal::Zero => Some(0.0),
            _ => None,
        }
    }

    /// Radius of a certified support interval `[-L, L]`.
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            LineSignal::Compact(c) => Some(c.radius),
            LineSignal::Truncated { radius, .. } => Some(*radius),
            LineSignal::Zero => Some(0.0),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LineSignal::Zero)
    }

    /// Analytic `r`-th derivative where one is available.
    pub fn derivative(&self, r: usize, x: f64) -> Option<f64> {
        match self {
            LineSignal::Sinc(s) => s.derivative(r, x).ok(),
            LineSignal::Sine {
                amplitude,
                freq,
                phase,
            } => Some(amplitude * freq.powi(r as i32) * (freq * x + phase + r as f64 * PI / 2.0).sin()),
            LineSignal::Zero => Some(0.0),
            _ => None,
        }
    }

    pub fn sup_bound(&self) -> f64 {
        match self {
            LineSignal::Sinc(s) => s.sup_bound(),
            LineSignal::Compact(_) | LineSignal::Triangle => 1.0,
            LineSignal::Sine { amplitude, .. } => amplitude.abs(),
            LineSignal::Truncated { inner, .. } => inner.sup_bound(),
            LineSignal::Zero => 0.0,
        }
    }

    /// Cuts a sinc series to `[-radius, radius]`; the result keeps only a
    /// support certificate.
    pub fn truncate(self, radius: f64) -> Result<LineSignal> {
        match self {
            LineSignal::Sinc(inner) => Ok(LineSignal::Truncated { inner, radius }),
            other => Err(BoasError::InvalidParameter(format!(
                "only sinc series can be truncated, got {other:?}"
            ))),
        }
    }
}

/// Both translation and support certificates for one function. Succeeds only
/// for the zero function: a nonzero function of exponential type cannot also
/// have compact support.
pub fn dual_certificate(signal: &LineSignal) -> Result<(f64, f64)> {
    match (signal.band_type(), signal.support_radius()) {
        (Some(b), Some(l)) if signal.is_zero() => Ok((b, l)),
        (band, support) => Err(BoasError::Certificate(format!(
            "no nonzero function is both band-limited and compactly supported \
             (band certificate {band:?}, support certificate {support:?})"
        ))),
    }
}

#[derive(Deserialize)]
struct SignalFile {
    band: f64,
    coeffs: BTreeMap<String, f64>,
}

/// Parses `{"band": number, "coeffs": {"j": number, ...}}`.
pub fn parse_signal_json(text: &str) -> Result<SincSeriesSignal> {
    let file: SignalFile =
        serde_json::from_str(text).map_err(|e| BoasError::Format(e.to_string()))?;
    let mut coeffs = BTreeMap::new();
    for (k, v) in file.coeffs {
        let j: i64 = k
            .trim()
            .parse()
            .map_err(|_| BoasError::Format(format!("coefficient key {k:?} is not an integer")))?;
        coeffs.insert(j, v);
    }
    make_sinc_signal(file.band, &coeffs).map_err(|e| BoasError::Format(e.to_string()))
}

/// Names accepted by [`catalog_signal`].
pub const CATALOG: &[&str] = &["sinc-pulse", "sinc-random", "hat", "bump", "triangle", "sine", "cosine"];

/// Named fixtures. `sinc-random` draws its coefficients from `seed`.
pub fn catalog_signal(name: &str, seed: u64) -> Result<LineSignal> {
    let single = |j: i64| -> Result<LineSignal> {
        let mut c = BTreeMap::new();
        c.insert(j, 1.0);
        Ok(LineSignal::Sinc(make_sinc_signal(PI, &c)?))
    };
    match name {
        "sinc-pulse" => single(0),
        "sinc-random" => Ok(LineSignal::Sinc(SincSeriesSignal::random(2.0 * PI, 8, seed)?)),
        "hat" => Ok(LineSignal::Compact(CompactSignal::new(CompactShape::Hat, 1.0)?)),
        "bump" => Ok(LineSignal::Compact(CompactSignal::new(CompactShape::Bump, 1.0)?)),
        "triangle" => Ok(LineSignal::Triangle),
        "sine" => Ok(LineSignal::Sine {
            amplitude: 1.0,
            freq: PI,
            phase: 0.0,
        }),
        "cosine" => Ok(LineSignal::Sine {
            amplitude: 1.0,
            freq: PI,
            phase: PI / 2.0,
        }),
        other => Err(BoasError::InvalidParameter(format!(
            "unknown signal {other:?}; known: {}",
            CATALOG.join(", ")
        ))),
    }
}

/// Equally spaced evaluation points on `[lo, hi]` used for sup-norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl SupGrid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Self {
        Self { lo, hi, points }
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.points.max(2);
        (0..n).map(move |i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
    }
}

impl Default for SupGrid {
    fn default() -> Self {
        Self::new(-8.0, 8.0, 161)
    }
}

pub type LineVector = OrbitSum<LineSignal>;

pub fn line_vector(signal: LineSignal) -> LineVector {
    OrbitSum::new(signal)
}

/// `e^{tD} f (x) = f(x + t)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TranslationGroup {
    pub grid: SupGrid,
}

/// The translation group with the default sup-norm grid.
pub fn translation_group() -> TranslationGroup {
    TranslationGroup::default()
}

impl TranslationGroup {
    pub fn with_grid(grid: SupGrid) -> Self {
        Self { grid }
    }

    pub fn eval(&self, v: &LineVector, x: f64) -> f64 {
        v.evaluate_with(|base, s| base.eval(x + s))
    }
}

impl OneParameterGroup for TranslationGroup {
    type Vector = LineVector;

    fn tag(&self) -> String {
        "line-translation".into()
    }

    fn superpose(&self, terms: &[(f64, f64)], v: &LineVector) -> LineVector {
        v.superpose(terms)
    }

    fn add_scaled(&self, a: &LineVector, scale: f64, b: &LineVector) -> Result<LineVector> {
        a.add_scaled(scale, b)
    }

    fn norm(&self, v: &LineVector) -> f64 {
        self.grid.iter().map(|x| self.eval(v, x).abs()).fold(0.0, f64::max)
    }

    fn certificate(&self, v: &LineVector) -> Option<BernsteinCertificate> {
        v.declared_type()
            .or_else(|| v.base().band_type())
            .map(BernsteinCertificate::new)
    }

    fn with_certificate(&self, v: LineVector, cert: BernsteinCertificate) -> LineVector {
        v.with_declared_type(cert.sigma)
    }
}

/// `e^{2 pi i s (pD + qX)} f (x) = e^{2 pi i (s q x + s^2 p q / 2)} f(x + s p)`.
#[derive(Debug, Clone, Copy)]
pub struct SchrodingerGroup {
    p: f64,
    q: f64,
    pub grid: SupGrid,
}

pub fn schrodinger_group(p: f64, q: f64) -> Result<SchrodingerGroup> {
    if p == 0.0 && q == 0.0 {
        return Err(BoasError::InvalidParameter(
            "(p, q) = (0, 0) generates the trivial group".into(),
        ));
    }
    if !(p.is_finite() && q.is_finite()) {
        return Err(BoasError::InvalidParameter("p and q must be finite".into()));
    }
    Ok(SchrodingerGroup {
        p,
        q,
        grid: SupGrid::new(-2.0, 2.0, 161),
    })
}

/// The group element at parameter `s` applied to `f` and evaluated at `x`.
pub fn schrodinger_action<F: Fn(f64) -> Complex64>(p: f64, q: f64, s: f64, f: F, x: f64) -> Complex64 {
    let phase = 2.0 * PI * (s * q * x + 0.5 * s * s * p * q);
    Complex64::from_polar(1.0, phase) * f(x + s * p)
}

impl SchrodingerGroup {
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn with_grid(mut self, grid: SupGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn eval(&self, v: &LineVector, x: f64) -> Complex64 {
        v.evaluate_with(|base, s| {
            schrodinger_action(self.p, self.q, s, |y| Complex64::new(base.eval(y), 0.0), x)
        })
    }
}

impl OneParameterGroup for SchrodingerGroup {
    type Vector = LineVector;

    fn tag(&self) -> String {
        format!("schrodinger(p={}, q={})", self.p, self.q)
    }

    fn superpose(&self, terms: &[(f64, f64)], v: &LineVector) -> LineVector {
        v.superpose(terms)
    }

    fn add_scaled(&self, a: &LineVector, scale: f64, b: &LineVector) -> Result<LineVector> {
        a.add_scaled(scale, b)
    }

    fn norm(&self, v: &LineVector) -> f64 {
        self.grid.iter().map(|x| self.eval(v, x).norm()).fold(0.0, f64::max)
    }

    /// Pure translation (`q = 0`) certifies band-limited signals at `|p| band`;
    /// pure modulation (`p = 0`) certifies support in `[-L, L]` at `2 pi |q| L`.
    /// Mixed generators have chirped trajectories and certify nothing.
    fn certificate(&self, v: &LineVector) -> Option<BernsteinCertificate> {
        if let Some(d) = v.declared_type() {
            return Some(BernsteinCertificate::new(d));
        }
        let base = v.base();
        let sigma = if self.q == 0.0 {
            base.band_type().map(|b| self.p.abs() * b)
        } else if self.p == 0.0 {
            base.support_radius().map(|l| 2.0 * PI * self.q.abs() * l)
        } else if base.is_zero() {
            Some(0.0)
        } else {
            None
        };
        sigma.map(BernsteinCertificate::new)
    }

    fn with_certificate(&self, v: LineVector, cert: BernsteinCertificate) -> LineVector {
        v.with_declared_type(cert.sigma)
    }
}

/// `x f(x)` recovered as `B(sigma, N) f / (2 pi i)` for the modulation group
/// with `sigma = 2 pi L`.
#[derive(Debug, Clone)]
pub struct PositionMultiply {
    /// `(x, value)` at each requested point.
    pub values: Vec<(f64, Complex64)>,
    pub tail_bound: f64,
}

pub fn position_multiply_via_boas(f: &LineSignal, half_width: usize, points: &[f64]) -> Result<PositionMultiply> {
    let radius = f.support_radius().ok_or_else(|| {
        BoasError::Certificate("position multiplication needs a compactly supported signal".into())
    })?;
    let group = schrodinger_group(0.0, 1.0)?;
    let v = line_vector(f.clone());
    if radius == 0.0 {
        return Ok(PositionMultiply {
            values: points.iter().map(|&x| (x, Complex64::new(0.0, 0.0))).collect(),
            tail_bound: 0.0,
        });
    }
    let table = build_table(1, 2.0 * PI * radius, half_width)?;
    let out = boas_apply(&group, &v, &table)?;
    let denom = Complex64::new(0.0, 2.0 * PI);
    Ok(PositionMultiply {
        values: points
            .iter()
            .map(|&x| (x, group.eval(&out.vector, x) / denom))
            .collect(),
        tail_bound: out.tail_bound / (2.0 * PI),
    })
}
