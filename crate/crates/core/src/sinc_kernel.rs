//! The cardinal sine, its derivatives of every supported order, and the
//! weight families `A_{m,k}` and `B_{m,k}` of the Boas-type derivative series.
//!
//! Weights come from the closed forms. The sinc-derivative route is kept as an
//! independent cross-check and is what the tests compare the closed forms to.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{BoasError, Result};

/// Highest derivative order `sinc_derivative` and `build_table` accept.
pub const MAX_ORDER: usize = 64;

const FACTORIALS: [f64; 21] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
];

/// `n!` in floating point; exact table up to `20!`, log-gamma above.
pub fn factorial(n: usize) -> f64 {
    if n < FACTORIALS.len() {
        FACTORIALS[n]
    } else {
        ln_gamma(n as f64 + 1.0).exp()
    }
}

/// `(sin(pi x), cos(pi x))` with the argument reduced modulo 2 first, so that
/// integers and half-integers give exact zeros.
pub fn sin_cos_pi(x: f64) -> (f64, f64) {
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]; fold into [-1/2, 1/2] where possible for exact zeros
    if r == 0.0 {
        (0.0, 1.0)
    } else if r == 0.5 {
        (1.0, 0.0)
    } else if r == -0.5 {
        (-1.0, 0.0)
    } else if r == 1.0 || r == -1.0 {
        (0.0, -1.0)
    } else {
        (PI * r).sin_cos()
    }
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(BoasError::Domain(format!("non-finite argument {x}")))
    }
}

/// `sin(pi x) / (pi x)`, with value 1 at the origin.
pub fn sinc(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(sinc_unchecked(x))
}

pub(crate) fn sinc_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x.abs() < 1e-4 {
        let y = PI * x;
        let y2 = y * y;
        return 1.0 - y2 / 6.0 + y2 * y2 / 120.0;
    }
    sin_cos_pi(x).0 / (PI * x)
}

/// The `n`-th derivative of `sinc` at `x`.
///
/// Near the origin the Taylor series of `sinc` is differentiated term by term.
/// Elsewhere `sinc^(n)(x) = Re[(i pi)^n I_n(pi x)]` with
/// `I_n(a) = int_0^1 u^n e^{iau} du`, evaluated by the two-term recurrence
/// `ia I_k = e^{ia} - k I_{k-1}`: forward when `|a| > n`, backward otherwise.
/// Each direction only ever damps rounding errors.
pub fn sinc_derivative(n: usize, x: f64) -> Result<f64> {
    if n > MAX_ORDER {
        return Err(BoasError::UnsupportedOrder {
            order: n,
            max: MAX_ORDER,
        });
    }
    check_finite(x)?;
    Ok(sinc_derivative_unchecked(n, x))
}

pub(crate) fn sinc_derivative_unchecked(n: usize, x: f64) -> f64 {
    if n == 0 {
        return sinc_unchecked(x);
    }
    if x.abs() < 0.5 {
        taylor_derivative(n, x)
    } else {
        moment_derivative(n, x)
    }
}

fn taylor_derivative(n: usize, x: f64) -> f64 {
    // sinc(x) = sum_k (-1)^k pi^{2k} x^{2k} / (2k+1)!
    // d^n: sum over j = 2k - n >= 0 of (-1)^k pi^{n+j} x^j / ((n+j+1) j!)
    let mut j = n % 2;
    let k = (n + j) / 2;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let mut term = sign * PI.powi((n + j) as i32) * x.powi(j as i32) / (n + j + 1) as f64;
    let mut sum = term;
    let x2 = x * x;
    loop {
        let ratio = -PI * PI * x2 / ((j + 1) * (j + 2)) as f64 * (n + j + 1) as f64
            / (n + j + 3) as f64;
        term *= ratio;
        j += 2;
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-2 * sum.abs().max(f64::MIN_POSITIVE) || term == 0.0 {
            break;
        }
    }
    sum
}

fn moment_derivative(n: usize, x: f64) -> f64 {
    let a = PI * x;
    let (s, c) = sin_cos_pi(x);
    let e = Complex64::new(c, s);
    let ia = Complex64::new(0.0, a);
    let moment = if a.abs() > n as f64 {
        let mut m = (e - 1.0) / ia;
        for k in 1..=n {
            m = (e - k as f64 * m) / ia;
        }
        m
    } else {
        let top = 2 * n + 60;
        let mut m = e / (top as f64 + 1.0);
        for k in (n + 1..=top).rev() {
            m = (e - ia * m) / k as f64;
        }
        m
    };
    let i_pow = match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    (i_pow * moment).re * PI.powi(n as i32)
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(BoasError::InvalidParameter("m must be at least 1".into()));
    }
    if 2 * m > MAX_ORDER {
        return Err(BoasError::UnsupportedOrder {
            order: 2 * m,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

/// `A_{m,k} = (2m-1)!/(pi (k-1/2)^{2m}) sum_{j<m} (-1)^j (pi(k-1/2))^{2j}/(2j)!`.
pub fn coeff_a(m: usize, k: i64) -> Result<f64> {
    check_m(m)?;
    Ok(coeff_a_unchecked(m, k))
}

fn coeff_a_unchecked(m: usize, k: i64) -> f64 {
    let x = k as f64 - 0.5;
    let top = factorial(2 * m - 1);
    let mut sum = 0.0;
    for j in 0..m {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * top / factorial(2 * j)
            * PI.powi(2 * j as i32 - 1)
            * x.powi(2 * j as i32 - 2 * m as i32);
    }
    sum
}

/// `B_{m,k}` for `k != 0`, and `B_{m,0} = (-1)^{m+1} pi^{2m}/(2m+1)`.
pub fn coeff_b(m: usize, k: i64) -> Result<f64> {
    check_m(m)?;
    Ok(coeff_b_unchecked(m, k))
}

fn coeff_b_unchecked(m: usize, k: i64) -> f64 {
    if k == 0 {
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        return sign * PI.powi(2 * m as i32) / (2 * m + 1) as f64;
    }
    let x = k as f64;
    let top = factorial(2 * m);
    let mut sum = 0.0;
    for j in 0..m {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * top / factorial(2 * j + 1)
            * PI.powi(2 * j as i32)
            * x.powi(2 * j as i32 - 2 * m as i32);
    }
    sum
}

/// Constant `C` with `|A_{m,k}| <= C / k^2` for every `k != 0`.
pub fn decay_constant_a(m: usize) -> f64 {
    // |A| (k-1/2)^2 <= (2m-1)!/pi sum_j pi^{2j} 2^{2m-2-2j}/(2j)!  for |k-1/2| >= 1/2,
    // and k^2 <= 4 (k-1/2)^2 for k != 0.
    let top = factorial(2 * m - 1);
    let s: f64 = (0..m)
        .map(|j| PI.powi(2 * j as i32) * 2f64.powi(2 * m as i32 - 2 - 2 * j as i32) / factorial(2 * j))
        .sum();
    4.0 * top / PI * s
}

/// Constant `C` with `|B_{m,k}| <= C / k^2` for every `k != 0`.
pub fn decay_constant_b(m: usize) -> f64 {
    let top = factorial(2 * m);
    let s: f64 = (0..m)
        .map(|j| PI.powi(2 * j as i32 + 1) / factorial(2 * j + 1))
        .sum();
    top / PI * s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    pub k: i64,
    pub weight: f64,
    pub offset: f64,
}

/// Truncated, signed, bandwidth-scaled Boas weights for one derivative order:
/// `D^r f ~ sum_{|k|<=N} weight(k) e^{offset(k) D} f`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    order: usize,
    bandwidth: f64,
    half_width: usize,
    entries: Vec<TableEntry>,
}

impl CoefficientTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Entries ordered by `k` from `-N` to `N`.
    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    /// Sample spacing `pi / sigma`.
    pub fn step(&self) -> f64 {
        PI / self.bandwidth
    }

    /// `offset(k) = step * (k + phase)`: phase is `-1/2` for odd orders, `0` for even.
    pub fn phase(&self) -> f64 {
        if self.order % 2 == 1 {
            -0.5
        } else {
            0.0
        }
    }

    /// The full-series mass `sigma^r`.
    pub fn full_mass(&self) -> f64 {
        self.bandwidth.powi(self.order as i32)
    }

    /// `sum_{|k|>N} |weight(k)|`, obtained from the mass identity.
    pub fn tail_mass(&self) -> f64 {
        (self.full_mass() - table_mass(self)).max(0.0)
    }

    /// `(weight, offset)` pairs, optionally shifted by `t`.
    pub fn terms(&self, t: f64) -> Vec<(f64, f64)> {
        self.entries
            .iter()
            .map(|e| (e.weight, t + e.offset))
            .collect()
    }
}

/// Builds the order-`r` table at bandwidth `sigma` truncated to `|k| <= half_width`.
pub fn build_table(r: usize, sigma: f64, half_width: usize) -> Result<CoefficientTable> {
    if r == 0 {
        return Err(BoasError::InvalidParameter("order must be at least 1".into()));
    }
    if r > MAX_ORDER {
        return Err(BoasError::UnsupportedOrder {
            order: r,
            max: MAX_ORDER,
        });
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(BoasError::InvalidParameter(format!(
            "bandwidth must be positive and finite, got {sigma}"
        )));
    }
    if half_width == 0 {
        return Err(BoasError::InvalidParameter(
            "half-width must be at least 1".into(),
        ));
    }
    let scale = (sigma / PI).powi(r as i32);
    if !scale.is_finite() || scale == 0.0 || !sigma.powi(r as i32).is_finite() {
        return Err(BoasError::Range(format!(
            "(sigma/pi)^r overflows for sigma = {sigma}, r = {r}"
        )));
    }
    let step = PI / sigma;
    let n = half_width as i64;
    let odd = r % 2 == 1;
    let m = if odd { (r + 1) / 2 } else { r / 2 };
    let entries = (-n..=n)
        .map(|k| {
            let sign = if k.rem_euclid(2) == 1 { 1.0 } else { -1.0 };
            let (coeff, offset) = if odd {
                (coeff_a_unchecked(m, k), step * (k as f64 - 0.5))
            } else {
                (coeff_b_unchecked(m, k), step * k as f64)
            };
            TableEntry {
                k,
                weight: scale * sign * coeff,
                offset,
            }
        })
        .collect();
    Ok(CoefficientTable {
        order: r,
        bandwidth: sigma,
        half_width,
        entries,
    })
}

/// `sum_k |weight(k)|`, summed from the centre outwards.
pub fn table_mass(table: &CoefficientTable) -> f64 {
    let n = table.half_width;
    let e = &table.entries;
    let mut mass = e[n].weight.abs();
    for i in 1..=n {
        mass += e[n + i].weight.abs() + e[n - i].weight.abs();
    }
    mass
}
