//! The Heisenberg fields `X = d/dx - (y/2) d/dt`, `Y = d/dy + (x/2) d/dt`,
//! `T = d/dt` on R^3 as shear-translation groups, with pointwise Boas
//! derivatives of separable band-limited functions `g(x) h(y) w(t)`.

use std::cell::Cell;
use std::f64::consts::PI;

use crate::error::{BoasError, Result};
use crate::line::SincSeriesSignal;
use crate::operators::PointValue;
use crate::sinc_kernel::build_table;

/// `(x, y, t)`.
pub type HPoint = [f64; 3];

/// One factor of a separable function.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Sinc(SincSeriesSignal),
    Constant(f64),
}

impl Factor {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Factor::Sinc(f) => f.eval(s),
            Factor::Constant(c) => *c,
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match self {
            Factor::Sinc(f) => f.derivative(1, s).expect("order 1 is supported"),
            Factor::Constant(_) => 0.0,
        }
    }

    pub fn band(&self) -> f64 {
        match self {
            Factor::Sinc(f) => f.band(),
            Factor::Constant(_) => 0.0,
        }
    }

    pub fn sup_bound(&self) -> f64 {
        match self {
            Factor::Sinc(f) => f.sup_bound(),
            Factor::Constant(c) => c.abs(),
        }
    }

    /// A bound for `sup |s f(s)|`. For a sinc series with `u = band s / pi`,
    /// `s sinc(u - j) = (pi/band) (sin(pi(u - j))/pi + j sinc(u - j))`.
    pub fn moment_bound(&self) -> Option<f64> {
        match self {
            Factor::Sinc(f) => Some(
                PI / f.band()
                    * f.coefficients()
                        .map(|(j, c)| c.abs() * (1.0 / PI + j.unsigned_abs() as f64))
                        .sum::<f64>(),
            ),
            Factor::Constant(c) if *c == 0.0 => Some(0.0),
            Factor::Constant(_) => None,
        }
    }
}

/// `f(x, y, t) = g(x) h(y) w(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergFunction {
    pub g: Factor,
    pub h: Factor,
    pub w: Factor,
}

impl HeisenbergFunction {
    pub fn new(g: Factor, h: Factor, w: Factor) -> Self {
        Self { g, h, w }
    }

    pub fn eval(&self, p: &HPoint) -> f64 {
        self.g.eval(p[0]) * self.h.eval(p[1]) * self.w.eval(p[2])
    }

    pub fn sup_bound(&self) -> f64 {
        self.g.sup_bound() * self.h.sup_bound() * self.w.sup_bound()
    }

    /// Exact `(Ff)(p)` from the factor derivatives.
    pub fn field_oracle(&self, field: HField, p: &HPoint) -> f64 {
        let [x, y, t] = *p;
        let (g, h, w) = (self.g.eval(x), self.h.eval(y), self.w.eval(t));
        match field {
            HField::X => self.g.derivative(x) * h * w - 0.5 * y * g * h * self.w.derivative(t),
            HField::Y => g * self.h.derivative(y) * w + 0.5 * x * g * h * self.w.derivative(t),
            HField::T => g * h * self.w.derivative(t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HField {
    X,
    Y,
    T,
}

/// The point reached from `p` after time `tau` along the field's group.
pub fn move_point(field: HField, tau: f64, p: &HPoint) -> HPoint {
    let [x, y, t] = *p;
    match field {
        HField::X => [x + tau, y, t - 0.5 * y * tau],
        HField::Y => [x, y + tau, t + 0.5 * x * tau],
        HField::T => [x, y, t + tau],
    }
}

/// `(e^{tau F} f)(p)`.
pub fn heisenberg_action(field: HField, tau: f64, f: &HeisenbergFunction, p: &HPoint) -> f64 {
    f.eval(&move_point(field, tau, p))
}

/// Exponential type of the orbit `tau -> f(e^{tau F} p)`: the shear in `t`
/// runs at speed `|y|/2` for X and `|x|/2` for Y.
pub fn point_bandwidth(field: HField, f: &HeisenbergFunction, p: &HPoint) -> f64 {
    match field {
        HField::X => f.g.band() + 0.5 * p[1].abs() * f.w.band(),
        HField::Y => f.h.band() + 0.5 * p[0].abs() * f.w.band(),
        HField::T => f.w.band(),
    }
}

/// Order-1 table at bandwidth 1; weights scale by `sigma`, offsets by `1/sigma`.
struct UnitRule {
    terms: Vec<(f64, f64)>,
    mass: f64,
    tail: f64,
}

impl UnitRule {
    fn new(half_width: usize) -> Result<Self> {
        let table = build_table(1, 1.0, half_width)?;
        Ok(Self {
            terms: table.entries().iter().map(|e| (e.weight, e.offset)).collect(),
            mass: table.full_mass() - table.tail_mass(),
            tail: table.tail_mass(),
        })
    }

    fn apply<F: Fn(f64) -> f64>(&self, sigma: f64, orbit: F) -> f64 {
        if sigma == 0.0 {
            return 0.0;
        }
        self.terms.iter().map(|&(w, o)| sigma * w * orbit(o / sigma)).sum()
    }
}

/// Truncated order-1 Boas series along the field's orbit through `p` at the
/// per-point bandwidth. A constant orbit returns 0 exactly.
pub fn heisenberg_boas_point(field: HField, f: &HeisenbergFunction, p: &HPoint, half_width: usize) -> Result<PointValue> {
    let rule = UnitRule::new(half_width)?;
    let sigma = point_bandwidth(field, f, p);
    if !sigma.is_finite() {
        return Err(BoasError::Certificate(format!("orbit bandwidth {sigma} at {p:?}")));
    }
    Ok(PointValue {
        value: rule.apply(sigma, |tau| heisenberg_action(field, tau, f, p)),
        tail_bound: sigma * rule.tail * f.sup_bound(),
    })
}

/// Nested-Boas evaluation of `([X, Y] f)(p)` next to the exact `(T f)(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorCheck {
    pub bracket: f64,
    pub oracle: f64,
    /// Bound on `|bracket - [X, Y] f (p)|` from both truncation levels.
    pub tail_bound: f64,
}

impl CommutatorCheck {
    pub fn residual(&self) -> f64 {
        (self.bracket - self.oracle).abs()
    }
}

/// `X(Yf)(p) - Y(Xf)(p)`, each inner derivative itself a Boas series at its
/// own point and bandwidth.
///
/// The outer orbits of `Yf` and `Xf` carry a linear factor, so their sup
/// bounds need `sup |s g(s)|` and `sup |s h(s)|`; constant nonzero `g` or `h`
/// with a non-constant `w` leaves them unbounded and is rejected.
pub fn nested_commutator(f: &HeisenbergFunction, p: &HPoint, half_width: usize) -> Result<CommutatorCheck> {
    let rule = UnitRule::new(half_width)?;
    let sup_f = f.sup_bound();
    let w_sup = f.w.sup_bound();
    let w1_sup = f.w.band() * w_sup;
    let (xg, yh) = if w1_sup == 0.0 {
        (0.0, 0.0)
    } else {
        let unbounded = || BoasError::Certificate("commutator orbit is not certified bounded".into());
        (
            f.g.moment_bound().ok_or_else(unbounded)?,
            f.h.moment_bound().ok_or_else(unbounded)?,
        )
    };
    let [x, y, _] = *p;

    let inner = |field: HField, q: &HPoint| -> (f64, f64) {
        let sigma = point_bandwidth(field, f, q);
        let value = rule.apply(sigma, |tau| heisenberg_action(field, tau, f, q));
        (value, sigma * rule.tail * sup_f)
    };

    let mut total_tail = 0.0;
    let mut outer = |outer_field: HField, inner_field: HField, sup_inner: f64| -> f64 {
        let sigma = point_bandwidth(outer_field, f, p);
        let worst_inner = Cell::new(0.0f64);
        let value = rule.apply(sigma, |tau| {
            let (v, tail) = inner(inner_field, &move_point(outer_field, tau, p));
            worst_inner.set(worst_inner.get().max(tail));
            v
        });
        total_tail += sigma * rule.mass * worst_inner.get() + sigma * rule.tail * sup_inner;
        value
    };

    // along an X orbit y is fixed; along a Y orbit x is fixed
    let sup_yf = f.g.sup_bound() * f.h.derivative(y).abs() * w_sup + 0.5 * xg * f.h.eval(y).abs() * w1_sup;
    let sup_xf = f.g.derivative(x).abs() * f.h.sup_bound() * w_sup + 0.5 * f.g.eval(x).abs() * yh * w1_sup;
    let xy = outer(HField::X, HField::Y, sup_yf);
    let yx = outer(HField::Y, HField::X, sup_xf);
    Ok(CommutatorCheck {
        bracket: xy - yx,
        oracle: f.field_oracle(HField::T, p),
        tail_bound: total_tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn pulse(band: f64, coeffs: &[(i64, f64)]) -> Factor {
        let c: BTreeMap<i64, f64> = coeffs.iter().copied().collect();
        Factor::Sinc(crate::line::make_sinc_signal(band, &c).unwrap())
    }

    fn fixture() -> HeisenbergFunction {
        HeisenbergFunction::new(
            pulse(PI, &[(0, 1.0), (1, 0.5)]),
            pulse(2.0, &[(-1, 0.7), (0, 1.0)]),
            pulse(1.5, &[(0, 1.0), (2, -0.4)]),
        )
    }

    #[test]
    fn action_examples() {
        let f = fixture();
        let p = [0.3, -1.2, 0.8];
        assert_eq!(heisenberg_action(HField::X, 0.0, &f, &p), f.eval(&p));
        let flat = HeisenbergFunction::new(pulse(PI, &[(0, 1.0)]), Factor::Constant(2.0), Factor::Constant(1.0));
        assert_eq!(heisenberg_action(HField::T, 1.7, &flat, &p), flat.eval(&p));
        for field in [HField::X, HField::Y, HField::T] {
            let a = move_point(field, 0.4, &move_point(field, -1.1, &p));
            let b = move_point(field, -0.7, &p);
            for i in 0..3 {
                assert!((a[i] - b[i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn boas_matches_oracles() {
        let f = fixture();
        for p in [[0.0, 2.0, 0.0], [0.3, -1.2, 0.8], [-2.0, 0.5, 1.5]] {
            for field in [HField::X, HField::Y, HField::T] {
                let b = heisenberg_boas_point(field, &f, &p, 2000).unwrap();
                let exact = f.field_oracle(field, &p);
                assert!((b.value - exact).abs() <= b.tail_bound, "{field:?} {p:?}");
            }
        }
    }

    #[test]
    fn reduces_to_line_derivative() {
        let g = pulse(PI, &[(0, 1.0), (1, 0.5)]);
        let f = HeisenbergFunction::new(g.clone(), Factor::Constant(2.0), Factor::Constant(-1.5));
        let p = [0.4, 3.0, -2.0];
        let b = heisenberg_boas_point(HField::X, &f, &p, 4000).unwrap();
        assert!((b.value - g.derivative(0.4) * 2.0 * -1.5).abs() <= b.tail_bound);
        let flat = HeisenbergFunction::new(Factor::Constant(1.0), Factor::Constant(2.0), Factor::Constant(3.0));
        assert_eq!(heisenberg_boas_point(HField::Y, &flat, &p, 10).unwrap().value, 0.0);
    }

    #[test]
    fn bracket_is_t() {
        let f = fixture();
        let c = nested_commutator(&f, &[0.3, -0.6, 0.2], 150).unwrap();
        assert!(c.residual() <= c.tail_bound, "{c:?}");
        assert!(c.oracle.abs() > 1e-3);
        let unbounded = HeisenbergFunction::new(Factor::Constant(1.0), f.h.clone(), f.w.clone());
        assert!(nested_commutator(&unbounded, &[0.0; 3], 10).is_err());
    }

    #[test]
    fn moment_bound_holds() {
        let g = pulse(2.0, &[(-3, 0.6), (0, 1.0), (2, -0.8)]);
        let bound = g.moment_bound().unwrap();
        for i in 0..2000 {
            let s = -50.0 + 0.05 * i as f64;
            assert!((s * g.eval(s)).abs() <= bound);
        }
    }
}
