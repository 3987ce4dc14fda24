use std::collections::BTreeMap;
use std::f64::consts::PI;

use boas::circle::{riesz_derivative, TrigPolynomial};
use boas::convergence::fit_slope;
use boas::heisenberg::{heisenberg_boas_point, nested_commutator, point_bandwidth, Factor, HField, HeisenbergFunction};
use boas::line::{
    catalog_signal, line_vector, parse_signal_json, schrodinger_group, LineSignal, SupGrid, TranslationGroup,
};
use boas::operators::SMOOTHING_CONSTANT;
use boas::sinc_kernel::sinc_derivative;
use boas::sphere::{
    boas_field_point, commutator_residual, from_angles, laplace_beltrami, laplacian_rotation_residual, Expansion,
    Method, RotationField,
};
use boas::{boas_apply, build_table, modulus, smooth, BoasError, OneParameterGroup, SmoothingKernelSpec};
use serde::Serialize;
use serde_json::Value;

use crate::report::{Row, RunReport};
use crate::{
    BenchArgs, BenchMethod, CircleRieszArgs, CliError, CoeffsArgs, Command, FieldName, HeisenbergArgs, LineDiffArgs,
    SchrodingerArgs, SmoothArgs, SphereCommutatorArgs, SphereLapArgs, SphereMethod,
};

type Result<T> = std::result::Result<T, CliError>;

pub fn execute(command: &Command) -> Result<RunReport> {
    match command {
        Command::Coeffs(a) => coeffs(a),
        Command::LineDiff(a) => line_diff(a),
        Command::CircleRiesz(a) => circle_riesz(a),
        Command::SphereLap(a) => sphere_lap(a),
        Command::SphereCommutator(a) => sphere_commutator(a),
        Command::Smooth(a) => smooth_cmd(a),
        Command::Schrodinger(a) => schrodinger(a),
        Command::Heisenberg(a) => heisenberg(a),
        Command::Bench(a) => bench(a),
    }
}

fn report_for<A: Serialize>(command: &str, args: &A) -> RunReport {
    let mut r = RunReport::new(command);
    if let Ok(Value::Object(map)) = serde_json::to_value(args) {
        r.parameters = map.into_iter().collect();
    }
    r
}

fn named_signal(name: &str, seed: u64) -> Result<LineSignal> {
    catalog_signal(name, seed).map_err(|e| CliError::Usage(e.to_string()))
}

fn coeffs(a: &CoeffsArgs) -> Result<RunReport> {
    let table = build_table(a.order, a.sigma, a.half_width)?;
    let mut report = report_for("coeffs", a);
    let scale = (a.sigma / PI).powi(a.order as i32);
    let mut mass = 0.0;
    for e in table.entries() {
        mass += e.weight.abs();
        // every weight is (sigma/pi)^r sinc^(r) at the scaled offset, negated
        let oracle = scale * sinc_derivative(a.order, -e.offset * a.sigma / PI)?;
        report.rows.push(
            Row::new("k", e.weight)
                .input("k", e.k)
                .input("offset", e.offset)
                .oracle(oracle)
                .extra("mass", mass),
        );
    }
    report.param("full_mass", table.full_mass());
    report.param("tail_mass", table.tail_mass());
    Ok(report)
}

fn load_line_signal(signal: &Option<String>, file: &Option<std::path::PathBuf>, seed: u64) -> Result<LineSignal> {
    match (signal, file) {
        (Some(name), None) => named_signal(name, seed),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(LineSignal::Sinc(parse_signal_json(&text)?))
        }
        _ => Err(CliError::Usage("give exactly one of --signal and --signal-file".into())),
    }
}

/// Order-`r` Boas derivative of `signal` at each point, with the pointwise tail bound.
fn line_boas(signal: &LineSignal, r: usize, sigma: f64, n: usize, points: &[f64]) -> Result<(Vec<f64>, f64, usize)> {
    let group = TranslationGroup::default();
    let v = line_vector(signal.clone());
    let table = build_table(r, sigma, n)?;
    let out = boas_apply(&group, &v, &table)?;
    let values = points.iter().map(|&t| group.eval(&out.vector, t)).collect();
    Ok((values, table.tail_mass() * signal.sup_bound(), out.vector.terms().len()))
}

fn line_diff(a: &LineDiffArgs) -> Result<RunReport> {
    let signal = load_line_signal(&a.signal, &a.signal_file, a.seed)?;
    let mut report = report_for("line-diff", a);
    let points = a.points.clone().unwrap_or_else(|| vec![0.0]);
    let oracle = |t: f64| signal.derivative(a.order, t);
    match a.sweep {
        None => {
            let (values, tail, _) = line_boas(&signal, a.order, a.sigma, a.half_width, &points)?;
            for (&t, &v) in points.iter().zip(&values) {
                let mut row = Row::new("t", v).input("t", t).input("N", a.half_width).tail(tail);
                if let Some(o) = oracle(t) {
                    row = row.oracle(o);
                }
                report.rows.push(row);
            }
        }
        Some(sweep) => {
            let mut errors = Vec::new();
            for n in sweep.sizes() {
                let (values, tail, _) = line_boas(&signal, a.order, a.sigma, n, &points)?;
                let mut worst: Option<f64> = None;
                for (&t, &v) in points.iter().zip(&values) {
                    let mut row = Row::new("N", v).input("t", t).input("N", n).tail(tail);
                    if let Some(o) = oracle(t) {
                        row = row.oracle(o);
                        worst = Some(worst.unwrap_or(0.0).max((v - o).abs()));
                    }
                    report.rows.push(row);
                }
                let worst = worst.ok_or_else(|| {
                    BoasError::Incompatible("a sweep needs a signal with an exact derivative".into())
                })?;
                errors.push((n as f64, worst));
            }
            report.fitted_slope = Some(fit_slope(&errors)?);
        }
    }
    Ok(report)
}

fn circle_riesz(a: &CircleRieszArgs) -> Result<RunReport> {
    let p = TrigPolynomial::random(a.degree, a.seed);
    let value = riesz_derivative(&p, a.point)?;
    let mut report = report_for("circle-riesz", a);
    report.rows.push(
        Row::new("t", value)
            .input("t", a.point)
            .oracle(p.derivative().eval(a.point))
            .extra("sup_derivative", p.derivative().sup_norm()),
    );
    Ok(report)
}

fn sphere_lap(a: &SphereLapArgs) -> Result<RunReport> {
    let e = Expansion::basis(a.degree, a.l, a.m)?;
    let x = from_angles(a.point[0], a.point[1]);
    let y = e.eval(&x)?;
    let eigen = (a.l * (a.l + 1)) as f64;
    let (value, tail) = match a.method {
        SphereMethod::Riesz => (laplace_beltrami(&e, &x, Method::Riesz)?, None),
        SphereMethod::Boas => {
            let (mut v, mut t) = (0.0, 0.0);
            for field in RotationField::ALL {
                let p = boas_field_point(&e, field, &x, 2, a.degree as f64, a.half_width)?;
                v -= p.value;
                t += p.tail_bound;
            }
            (v, Some(t))
        }
    };
    let mut report = report_for("sphere-lap", a);
    let mut row = Row::new("point", value)
        .input("theta", a.point[0])
        .input("phi", a.point[1])
        .oracle(eigen * y)
        .extra("harmonic", y);
    if y != 0.0 {
        row = row.extra("eigenvalue_ratio", value / y);
    }
    if let Some(t) = tail {
        row = row.tail(t);
    }
    report.rows.push(row);
    report.param("eigenvalue", eigen);
    Ok(report)
}

fn sphere_commutator(a: &SphereCommutatorArgs) -> Result<RunReport> {
    let e = Expansion::random(a.degree, a.seed);
    let mut report = report_for("sphere-commutator", a);
    report
        .rows
        .push(Row::new("commutator", commutator_residual(&e)?).oracle(0.0));
    for field in RotationField::ALL {
        for tau in [0.3, 1.1] {
            let r = laplacian_rotation_residual(&e, field, tau)?;
            report.rows.push(
                Row::new("laplacian-rotation", r)
                    .input("field", format!("{field:?}"))
                    .input("tau", tau)
                    .oracle(0.0),
            );
        }
    }
    Ok(report)
}

fn smooth_cmd(a: &SmoothArgs) -> Result<RunReport> {
    let signal = named_signal(&a.signal, a.seed)?;
    let group = TranslationGroup::with_grid(SupGrid::new(-8.0, 8.0, 1601));
    let v = line_vector(signal.clone());
    let spec = SmoothingKernelSpec::for_tolerance(a.tol)?;
    let smoothed = smooth(&group, &v, a.sigma, &spec)?;
    let diff = group.norm(&group.add_scaled(&v, -1.0, &smoothed)?);
    let omega = modulus(&group, &v, 1.0 / a.sigma, a.probes)?;
    let bound = SMOOTHING_CONSTANT * omega;
    // truncated kernel mass and the quadrature itself
    let slack = 2.0 * spec.tail_bound() * signal.sup_bound() + 1e-9;
    let mut report = report_for("smooth", a);
    report.rows.push(
        Row::new("sigma", diff)
            .input("sigma", a.sigma)
            .tail(slack)
            .extra("modulus", omega)
            .extra("bound", bound)
            .extra("holds", if diff <= bound + slack { 1.0 } else { 0.0 }),
    );
    report.param("truncation", spec.truncation);
    report.param("nodes", spec.node_count);
    report.param("smoothing_constant", SMOOTHING_CONSTANT);
    Ok(report)
}

fn schrodinger(a: &SchrodingerArgs) -> Result<RunReport> {
    let signal = named_signal(&a.signal, a.seed)?;
    let group = schrodinger_group(a.p, a.q)?;
    let v = line_vector(signal.clone());
    let sigma = group
        .certificate(&v)
        .ok_or_else(|| {
            BoasError::Certificate(format!(
                "{} carries no Bernstein certificate for {}",
                a.signal,
                group.tag()
            ))
        })?
        .sigma;
    let mut report = report_for("schrodinger", a);
    report.param("certified_sigma", sigma);
    let table = build_table(1, sigma, a.half_width)?;
    let out = boas_apply(&group, &v, &table)?;
    let tail = table.tail_mass() * signal.sup_bound();
    for &x in &a.points {
        let b = group.eval(&out.vector, x);
        let mut row = Row::new("x", b.re).input("x", x).tail(tail).extra("im", b.im);
        // generator: p d/dx + 2 pi i q x
        let derivative = if a.p == 0.0 { Some(0.0) } else { signal.derivative(1, x) };
        if let Some(d) = derivative {
            let (ore, oim) = (a.p * d, 2.0 * PI * a.q * x * signal.eval(x));
            let err = ((b.re - ore).powi(2) + (b.im - oim).powi(2)).sqrt();
            row = row.oracle_with_error(ore, err).extra("oracle_im", oim);
            let size = (ore * ore + oim * oim).sqrt();
            row.rel_error = Some(if size > 0.0 { err / size } else { err });
        }
        if a.p == 0.0 {
            let xf = b.im / (2.0 * PI * a.q);
            row = row
                .extra("x_times_f", xf)
                .extra("x_times_f_error", (xf - x * signal.eval(x)).abs());
        }
        report.rows.push(row);
    }
    Ok(report)
}

fn factor(name: &str, seed: u64) -> Result<Factor> {
    if let Ok(c) = name.parse::<f64>() {
        return Ok(Factor::Constant(c));
    }
    match named_signal(name, seed)? {
        LineSignal::Sinc(s) => Ok(Factor::Sinc(s)),
        _ => Err(CliError::Usage(format!(
            "factor {name:?} is not a sinc series or a constant"
        ))),
    }
}

fn heisenberg(a: &HeisenbergArgs) -> Result<RunReport> {
    let f = HeisenbergFunction::new(factor(&a.g, a.seed)?, factor(&a.h, a.seed)?, factor(&a.w, a.seed)?);
    let field = match a.field {
        FieldName::X => HField::X,
        FieldName::Y => HField::Y,
        FieldName::T => HField::T,
    };
    let p = a.point;
    let b = heisenberg_boas_point(field, &f, &p, a.half_width)?;
    let mut report = report_for("heisenberg", a);
    report.rows.push(
        Row::new("field", b.value)
            .input("field", format!("{field:?}"))
            .oracle(f.field_oracle(field, &p))
            .tail(b.tail_bound)
            .extra("sigma_point", point_bandwidth(field, &f, &p)),
    );
    if let Some(n) = a.commutator {
        let c = nested_commutator(&f, &p, n)?;
        report.rows.push(
            Row::new("commutator", c.bracket)
                .input("N", n)
                .oracle(c.oracle)
                .tail(c.tail_bound),
        );
    }
    Ok(report)
}

fn bench(a: &BenchArgs) -> Result<RunReport> {
    let signal = named_signal(&a.signal, a.seed)?;
    let sigma = signal.band_type().ok_or_else(|| {
        BoasError::Certificate(format!("{} has no band certificate for translation", a.signal))
    })?;
    let oracles: Vec<f64> = a
        .points
        .iter()
        .map(|&t| signal.derivative(1, t))
        .collect::<Option<_>>()
        .ok_or_else(|| BoasError::Incompatible(format!("{} has no exact derivative", a.signal)))?;
    let group = TranslationGroup::default();
    let v = line_vector(signal.clone());
    let mut report = report_for("bench", a);
    let mut methods = a.methods.clone();
    methods.dedup();
    let mut curves: BTreeMap<BenchMethod, Vec<(f64, f64)>> = BTreeMap::new();
    for n in a.sweep.sizes() {
        let h = 1.0 / n as f64;
        for &method in &methods {
            // every method is a superposition of translates of v through the same group
            let terms: Vec<(f64, f64)> = match method {
                BenchMethod::Boas => build_table(1, sigma, n)?.terms(0.0),
                BenchMethod::Fd2 => vec![(0.5 / h, h), (-0.5 / h, -h)],
                BenchMethod::Fd4 => vec![
                    (-1.0 / (12.0 * h), 2.0 * h),
                    (8.0 / (12.0 * h), h),
                    (-8.0 / (12.0 * h), -h),
                    (1.0 / (12.0 * h), -2.0 * h),
                ],
            };
            let d = group.superpose(&terms, &v);
            let mut worst: f64 = 0.0;
            for (&t, &o) in a.points.iter().zip(&oracles) {
                let value = group.eval(&d, t);
                worst = worst.max((value - o).abs());
                report.rows.push(
                    Row::new(format!("{method:?}").to_lowercase(), value)
                        .input("N", n)
                        .input("t", t)
                        .oracle(o)
                        .extra("evaluations", d.terms().len() as f64),
                );
            }
            curves.entry(method).or_default().push((n as f64, worst));
        }
    }
    for (method, pts) in curves {
        if let Ok(s) = fit_slope(&pts) {
            report.method_slopes.insert(format!("{method:?}").to_lowercase(), s);
        }
    }
    Ok(report)
}
