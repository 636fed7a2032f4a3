//! Verification suites: every checked identity as one report item.
//!
//! Each item has a base tolerance at the nominal level 1e-6; a requested
//! tolerance tau scales the base tolerances of numerical identities by tau/1e-6.
//! Structural thresholds (fitted slopes, trend ratios) are not scaled.

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{
    eigen_relation, eigenfunction_coefficients, eigenfunction_eval, ell2_divergence_probe, hill_alternating_sum_exact,
    hill_sequence, latent_parameter_from_eigenvalue, LatentParameter,
};
use crate::mehler_fock::{
    general_mu_transform_eval, kernel_identity_residual, mf_forward, round_trip, transform_representation_residual,
    ForwardRoute, PhiZ,
};
use crate::quadrature::{integrate, integrate_unit_split, IntegrationRequest, Interval, QuadOptions};
use crate::report::{ReportItem, ResidualReport};
use crate::series::PowerSeries;
use crate::special::{conical_p, gamma, gauss_2f1, legendre_p, ConicalOrder, HypergeometricParams};
use crate::spectral::{
    gelfand_map_eval, gelfand_norm_ratio, multiplier_identity_residual, orthogonality_summary, pushforward_moment,
    spectral_measure_density, spectrum_report, SpectralMeasure, TruncationSchedule, WeightKind,
    DEFAULT_ORTHOGONALITY_T_MAX, MULTIPLIER_TOL,
};

pub const NOMINAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Special,
    Quadrature,
    Hilbert,
    MehlerFock,
    Spectral,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["special", "quadrature", "hilbert", "mehler-fock", "spectral", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Special => "special",
            Suite::Quadrature => "quadrature",
            Suite::Hilbert => "hilbert",
            Suite::MehlerFock => "mehler-fock",
            Suite::Spectral => "spectral",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "special" => Suite::Special,
            "quadrature" => Suite::Quadrature,
            "hilbert" => Suite::Hilbert,
            "mehler-fock" | "mehler_fock" => Suite::MehlerFock,
            "spectral" => Suite::Spectral,
            "all" => Suite::All,
            _ => {
                return Err(Error::InvalidParameter {
                    name: "suite",
                    detail: format!("unknown suite `{s}`; expected one of {}", Suite::NAMES.join(", ")),
                })
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    /// Worker threads; 1 runs items in order on the calling thread.
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol: NOMINAL_TOL,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

type Measured = (f64, Vec<(String, f64)>);
type Evaluated = (ReportItem, Vec<(String, f64)>);
type Job = Box<dyn Fn() -> Result<Measured> + Send + Sync>;

struct Check {
    name: String,
    anchor: &'static str,
    tol: f64,
    scaled: bool,
    run: Job,
}

fn check<F>(name: impl Into<String>, anchor: &'static str, tol: f64, run: F) -> Check
where
    F: Fn() -> Result<f64> + Send + Sync + 'static,
{
    Check {
        name: name.into(),
        anchor,
        tol,
        scaled: true,
        run: Box::new(move || run().map(|r| (r, Vec::new()))),
    }
}

fn check_measured<F>(name: impl Into<String>, anchor: &'static str, tol: f64, run: F) -> Check
where
    F: Fn() -> Result<Measured> + Send + Sync + 'static,
{
    Check {
        name: name.into(),
        anchor,
        tol,
        scaled: true,
        run: Box::new(run),
    }
}

impl Check {
    fn unscaled(mut self) -> Self {
        self.scaled = false;
        self
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm().max(1.0)
}

/// Sample points in the disk shared by the transform checks.
pub const Z_GRID: [(f64, f64); 5] = [(0.0, 0.0), (0.4, 0.0), (-0.4, 0.0), (0.0, 0.5), (0.3, 0.3)];

fn fmt_z(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn special_checks() -> Vec<Check> {
    let mut v = vec![
        check("gamma(5) = 24", "gamma at integers", 1e-12, || {
            Ok((gamma(c(5.0, 0.0))? - 24.0).norm() / 24.0)
        }),
        check("gamma(1/2) = sqrt(pi)", "gamma at half integers", 1e-12, || {
            Ok((gamma(c(0.5, 0.0))? - PI.sqrt()).norm())
        }),
        check(
            "gamma(z) gamma(1-z) = pi / sin(pi z) at z = 0.3+0.7i",
            "gamma reflection",
            1e-12,
            || {
                let z = c(0.3, 0.7);
                Ok(rel(gamma(z)? * gamma(1.0 - z)?, PI / (PI * z).sin()))
            },
        ),
    ];
    for z in [c(0.5, 0.0), c(-0.9, 0.0), c(0.9, 0.3), c(-5.0, 0.0), c(0.5, 2.0)] {
        v.push(check(
            format!("2F1(1,1;2;z) = -ln(1-z)/z at z = {}", fmt_z(z)),
            "hypergeometric elementary case",
            1e-12,
            move || {
                Ok(rel(
                    gauss_2f1(HypergeometricParams::real(1.0, 1.0, 2.0)?, z)?,
                    -(1.0 - z).ln() / z,
                ))
            },
        ));
    }
    for m in [0.5, 0.99, 1.0 - 1e-12] {
        v.push(check(
            format!("(pi/2) 2F1(1/2,1/2;1;m) = K(m) by AGM at m = {m}"),
            "hypergeometric logarithmic case",
            1e-12,
            move || {
                let f = gauss_2f1(HypergeometricParams::real(0.5, 0.5, 1.0)?, c(m, 0.0))?;
                let k = PI / (2.0 * agm(1.0, (1.0 - m).sqrt()));
                Ok(rel(f * (PI / 2.0), c(k, 0.0)))
            },
        ));
    }
    v.push(check(
        "P_2(5) = (3*25-1)/2",
        "Legendre at integer degree",
        1e-12,
        || Ok(rel(legendre_p(c(2.0, 0.0), 5.0)?, c(37.0, 0.0))),
    ));
    for (t, x, want) in [
        (0.0, 2.0, 0.901_286_299_360_447_3),
        (1.0, 2.0, 0.556_413_548_935_076),
        (3.0, 50.0, 0.059_449_089_599_976_33),
    ] {
        v.push(check(
            format!("conical P_(it-1/2)({x}) at t = {t} against reference value"),
            "conical function values",
            1e-12,
            move || Ok((conical_p(ConicalOrder::new(t)?, x)? - want).abs() / want.abs()),
        ));
    }
    v.push(check(
        "conical P_(it-1/2)(1) = 1 at t = 2",
        "conical function normalization",
        1e-14,
        || Ok((conical_p(ConicalOrder::new(2.0)?, 1.0)? - 1.0).abs()),
    ));
    v
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let (x, y) = (0.5 * (a + b), (a * b).sqrt());
        a = x;
        b = y;
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
    }
    a
}

fn quadrature_checks() -> Vec<Check> {
    vec![
        check("int_0^1 x^(-1/2) dx = 2", "endpoint singularity", 1e-10, || {
            Ok((integrate_unit_split(|s: f64, _| s.powf(-0.5), &QuadOptions::default())?.value - 2.0).abs())
        }),
        check("int_0^1 ln(x) dx = -1", "endpoint singularity", 1e-10, || {
            Ok((integrate_unit_split(|s: f64, _| s.ln(), &QuadOptions::default())?.value + 1.0).abs())
        }),
        check(
            "int_1^inf x^(-2) dx = 1",
            "semi-infinite algebraic decay",
            1e-10,
            || {
                let r = integrate(&IntegrationRequest::new(
                    |x: f64| x.powi(-2),
                    Interval::FromOne { decay_exponent: 2.0 },
                ))?;
                Ok((r.require_converged()?.value - 1.0).abs())
            },
        ),
        check("int_1^inf x^(-3/2) dx = 2", "semi-infinite slow decay", 1e-9, || {
            let r = integrate(&IntegrationRequest::new(
                |x: f64| x.powf(-1.5),
                Interval::FromOne { decay_exponent: 1.5 },
            ))?;
            Ok((r.require_converged()?.value - 2.0).abs())
        }),
        check("int_0^inf exp(-x) dx = 1", "half-line exponential decay", 1e-10, || {
            let r = integrate(&IntegrationRequest::new(|x: f64| (-x).exp(), Interval::FromZero))?;
            Ok((r.require_converged()?.value - 1.0).abs())
        }),
        check(
            "int_0^inf dx / (1 + x^2) = pi/2",
            "half-line algebraic decay",
            1e-10,
            || {
                let r = integrate(&IntegrationRequest::new(
                    |x: f64| 1.0 / (1.0 + x * x),
                    Interval::FromZero,
                ))?;
                Ok((r.require_converged()?.value - PI / 2.0).abs())
            },
        ),
    ]
}

/// Latent parameters of the eigen-relation checks.
pub const EIGEN_MUS: [(f64, f64); 4] = [(0.5, 0.0), (0.3, 0.0), (0.5, 0.5), (0.5, 1.0)];
/// Sample points of the eigen-relation checks.
pub const EIGEN_ZS: [(f64, f64); 5] = [(0.0, 0.0), (0.5, 0.0), (-0.7, 0.0), (0.3, 0.4), (0.9, 0.0)];

fn hilbert_checks() -> Vec<Check> {
    let mut v = Vec::new();
    for (mr, mi) in EIGEN_MUS {
        for (zr, zi) in EIGEN_ZS {
            let (mu, z) = (c(mr, mi), c(zr, zi));
            v.push(check(
                format!(
                    "int_0^1 f_mu(s)/(1-sz) ds = M f_mu(z), mu = {}, z = {}",
                    fmt_z(mu),
                    fmt_z(z)
                ),
                "eigen-relation (integral form)",
                1e-7,
                move || {
                    let r = eigen_relation(LatentParameter::new(mu)?, z, &QuadOptions::with_tol(1e-12))?;
                    Ok(r.residual / (1.0 + (r.expected / LatentParameter::new(mu)?.eigenvalue().value()).norm()))
                },
            ));
        }
    }
    for (mr, mi) in [(0.5, 0.0), (0.3, 0.0), (0.5, 1.0)] {
        let mu = c(mr, mi);
        v.push(check(
            format!(
                "Hill alternating sum / M = Cauchy-product c_n for n <= 30, mu = {}",
                fmt_z(mu)
            ),
            "Hill sequence dual routes",
            1e-8,
            move || {
                let p = LatentParameter::new(mu)?;
                let a = eigenfunction_coefficients(p, 30);
                let b = hill_alternating_sum_exact(p, 30)?;
                Ok(a.iter()
                    .zip(&b)
                    .map(|(x, y)| (x - y).norm() / y.norm().max(f64::MIN_POSITIVE))
                    .fold(0.0, f64::max))
            },
        ));
    }
    v.push(check("x_0 = pi at mu = 1/2", "Hill sequence values", 1e-12, || {
        Ok((hill_sequence(LatentParameter::real(0.5)?, 1)?[0] - PI).norm())
    }));
    v.push(check(
        "x_1 = 3 pi / 4 at mu = 1/2",
        "Hill sequence values",
        1e-12,
        || Ok((hill_sequence(LatentParameter::real(0.5)?, 1)?[1] - 0.75 * PI).norm()),
    ));
    v.push(
        check_measured(
            "S_4N > 1.05 S_N for N in {10, 40, 160, 640} at mu = 1/2 (not square summable)",
            "eigenvector outside l2",
            0.0,
            || {
                let p = ell2_divergence_probe(LatentParameter::real(0.5)?, &[10, 40, 160, 640], 0.05)?;
                let min = p.ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                Ok(((1.05 - min).max(0.0), vec![("l2_divergence_min_ratio".into(), min)]))
            },
        )
        .unscaled(),
    );
    for (mr, mi) in [(0.3, 0.0), (0.5, 2.0), (0.2, 0.7)] {
        let mu = c(mr, mi);
        v.push(check(
            format!("mu recovered from M = pi / sin(pi mu), mu = {}", fmt_z(mu)),
            "eigenvalue to latent parameter",
            1e-10,
            move || {
                let m = LatentParameter::new(mu)?.eigenvalue().value();
                Ok((latent_parameter_from_eigenvalue(m)?.mu.mu() - mu).norm())
            },
        ));
    }
    v
}

/// Points x and real z of the round-trip checks.
pub const ROUND_TRIP_X: [f64; 3] = [1.2, 2.0, 5.0];
pub const ROUND_TRIP_Z: [f64; 3] = [0.0, 0.3, -0.5];
pub const ROUND_TRIP_T_MAX: f64 = 40.0;

fn mehler_fock_checks() -> Vec<Check> {
    let mut v = Vec::new();
    for t in [0.0, 0.5, 1.0, 2.0] {
        for y in [1.0, 2.0, 5.0] {
            v.push(check(
                format!("P(y) = (cosh(pi t)/pi) int_1^inf P(x)/(x+y) dx, t = {t}, y = {y}"),
                "conical kernel identity",
                if t >= 2.0 { 1e-6 } else { 1e-7 },
                move || Ok(kernel_identity_residual(t, y)?.residual),
            ));
        }
    }
    for t in [0.0, 0.5, 1.0, 2.0] {
        for (zr, zi) in Z_GRID {
            let z = c(zr, zi);
            v.push(check(
                format!(
                    "(cosh(pi t)/pi) (P phi_z)(t) = f_(1/2+it)(z), t = {t}, z = {}",
                    fmt_z(z)
                ),
                "eigenfunction as a Mehler-Fock transform",
                1e-6,
                move || transform_representation_residual(t, z),
            ));
        }
    }
    for mu in [0.1, 0.3, 0.5] {
        for (zr, zi) in Z_GRID {
            let z = c(zr, zi);
            v.push(check(
                format!(
                    "(sin(pi mu)/pi) int_1^inf P_(mu-1) phi_z = f_mu(z), mu = {mu}, z = {}",
                    fmt_z(z)
                ),
                "eigenfunction as a Legendre transform",
                1e-6,
                move || {
                    let p = LatentParameter::real(mu)?;
                    Ok((general_mu_transform_eval(p, z)? - eigenfunction_eval(p, z)?).norm())
                },
            ));
        }
    }
    for z in [0.0, 0.4, -0.4] {
        for t in [0.0, 1.0] {
            v.push(check(
                format!("Im (P phi_z)(t) = 0 for real z = {z}, t = {t}"),
                "forward transform of real data",
                1e-10,
                move || {
                    let phi = PhiZ::new(c(z, 0.0))?;
                    Ok(mf_forward(&phi.as_function(), t, 1e-11)?.value.im.abs())
                },
            ));
        }
    }
    for route in [ForwardRoute::Quadrature, ForwardRoute::ClosedForm] {
        let label = match route {
            ForwardRoute::Quadrature => "forward by quadrature",
            ForwardRoute::ClosedForm => "forward by kernel identity",
        };
        for z in ROUND_TRIP_Z {
            for x in ROUND_TRIP_X {
                v.push(check_measured(
                    format!("inverse(forward(phi_z))(x) = phi_z(x), {label}, z = {z}, x = {x}"),
                    "Mehler-Fock inversion",
                    1e-4,
                    move || {
                        let r = round_trip(c(z, 0.0), x, route, ROUND_TRIP_T_MAX, 1e-6)?;
                        Ok((r.residual, Vec::new()))
                    },
                ));
            }
        }
    }
    v
}

fn spectral_checks() -> Vec<Check> {
    let mut v = Vec::new();
    for k in 0..3usize {
        for t in [0.0, 0.5, 1.0] {
            let key = format!("multiplier_raw_residual_z{k}_t{t}");
            let key2 = key.clone();
            v.push(check_measured(
                format!("Phi(H z^{k})(t) = psi(t) Phi(z^{k})(t) at N -> inf (tail fit to N = 1e4), t = {t}"),
                "multiplier identity",
                MULTIPLIER_TOL,
                move || {
                    let r = multiplier_identity_residual(
                        &PowerSeries::<f64>::monomial(k),
                        t,
                        &TruncationSchedule::default(),
                    )?;
                    Ok((
                        r.extrapolated_residual,
                        vec![(key.clone(), *r.raw_residuals.last().unwrap())],
                    ))
                },
            ));
            v.push(
                check_measured(
                    format!("multiplier tail exponent = -1/2 for z^{k}, t = {t}"),
                    "multiplier identity convergence",
                    0.15,
                    move || {
                        let r = multiplier_identity_residual(
                            &PowerSeries::<f64>::monomial(k),
                            t,
                            &TruncationSchedule::default(),
                        )?;
                        Ok((
                            (r.fitted_slope + 0.5).abs(),
                            vec![(key2.replace("raw_residual", "slope"), r.fitted_slope)],
                        ))
                    },
                )
                .unscaled(),
            );
        }
    }
    for (kind, label, key) in [
        (WeightKind::Printed, "w = 2 pi tanh(pi t)/sinh(pi t)", "printed"),
        (WeightKind::DualHahn, "w = 2 pi t tanh(pi t)/cosh(pi t)", "dual_hahn"),
    ] {
        v.push(check_measured(
            format!("|I_nm| <= 1e-6 I_00 for n < m <= 10, {label}"),
            "orthogonality of c_n(t)",
            1e-6,
            move || {
                let s = orthogonality_summary(10, DEFAULT_ORTHOGONALITY_T_MAX, kind)?;
                Ok((
                    s.max_off_diagonal,
                    vec![
                        (format!("orthogonality_k_{key}"), s.k),
                        (format!("orthogonality_i00_{key}"), s.i00),
                    ],
                ))
            },
        ));
        v.push(check(
            format!("relative spread of I_nn for n <= 10, {label}"),
            "constant diagonal of the isometry",
            1e-4,
            move || Ok(orthogonality_summary(10, DEFAULT_ORTHOGONALITY_T_MAX, kind)?.diagonal_spread),
        ));
    }
    v.push(check(
        "I_00 = pi, w = 2 pi tanh(pi t)/sinh(pi t)",
        "orthogonality normalizer",
        1e-8,
        || {
            Ok(
                (crate::spectral::orthogonality_integral(0, 0, DEFAULT_ORTHOGONALITY_T_MAX, WeightKind::Printed)?
                    .value
                    - PI)
                    .abs(),
            )
        },
    ));
    v.push(check(
        "density(pi / cosh(pi)) = 2/pi",
        "spectral measure density",
        1e-14,
        || Ok((spectral_measure_density(PI / PI.cosh())? - 2.0 / PI).abs()),
    ));
    for (kind, label) in [
        (WeightKind::Printed, "(1/pi) int g(psi) 2 pi tanh(pi t)/sinh(pi t) dt"),
        (WeightKind::DualHahn, "int g(psi) 2 pi t tanh(pi t)/cosh(pi t) dt"),
    ] {
        for (k, g) in ["1", "x", "x^2"].into_iter().enumerate() {
            v.push(check(
                format!("int_0^pi g dr = {label}, g = {g}"),
                "spectral measure pushforward",
                1e-6,
                move || {
                    let lhs = SpectralMeasure.moment(|x| x.powi(k as i32))?;
                    let rhs = pushforward_moment(|x| x.powi(k as i32), kind)?;
                    Ok((lhs - rhs).abs())
                },
            ));
        }
    }
    for (k, want) in [(0, 1.0), (1, 1.0), (2, PI * PI / 6.0)] {
        v.push(check(
            format!("int_0^pi x^{k} dr = <H^{k} e_0, e_0>"),
            "spectral measure moments",
            1e-10,
            move || Ok((SpectralMeasure.moment(|x| x.powi(k))? - want).abs()),
        ));
    }
    v.push(check("(G 1)(1) = 1", "Gelfand map", 1e-15, || {
        Ok((gelfand_map_eval(|_| c(1.0, 0.0), c(1.0, 0.0))? - 1.0).norm())
    }));
    v.push(check("(G 1)(1+i) = 2/(2+i)", "Gelfand map", 1e-15, || {
        Ok((gelfand_map_eval(|_| c(1.0, 0.0), c(1.0, 1.0))? - 2.0 / c(2.0, 1.0)).norm())
    }));
    v.push(check_measured(
        "||G f||^2 / ||f||^2 equal for f = 1, z, 1 - 2z + z^2/2",
        "Gelfand map norm ratio",
        1e-9,
        || {
            let mut ratios = Vec::new();
            for a in [vec![1.0], vec![0.0, 1.0], vec![1.0, -2.0, 0.5]] {
                ratios.push(gelfand_norm_ratio(&PowerSeries::new(a)?)?);
            }
            let spread = ratios.iter().map(|r| (r - ratios[0]).abs()).fold(0.0, f64::max);
            Ok((spread, vec![("gelfand_norm_ratio".into(), ratios[0])]))
        },
    ));
    v
}

fn checks(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Special => special_checks(),
        Suite::Quadrature => quadrature_checks(),
        Suite::Hilbert => hilbert_checks(),
        Suite::MehlerFock => mehler_fock_checks(),
        Suite::Spectral => spectral_checks(),
        Suite::All => [
            Suite::Special,
            Suite::Quadrature,
            Suite::Hilbert,
            Suite::MehlerFock,
            Suite::Spectral,
        ]
        .into_iter()
        .flat_map(checks)
        .collect(),
    }
}

fn evaluate(check: &Check, scale: f64) -> Evaluated {
    let tol = if check.scaled { check.tol * scale } else { check.tol };
    match (check.run)() {
        Ok((r, m)) => (ReportItem::new(check.name.clone(), check.anchor, r, tol), m),
        Err(e) => (
            ReportItem::failed(check.name.clone(), check.anchor, tol, &e),
            Vec::new(),
        ),
    }
}

/// Runs a suite. Items keep their listed order whatever the thread count.
pub fn run_suite(suite: Suite, options: &VerifyOptions) -> Result<ResidualReport> {
    if !(options.tol > 0.0 && options.tol.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "tol",
            detail: format!("{} must be positive and finite", options.tol),
        });
    }
    let scale = options.tol / NOMINAL_TOL;
    let list = checks(suite);
    let slots: Vec<Mutex<Option<Evaluated>>> = list.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let work = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        if i >= list.len() {
            break;
        }
        let out = evaluate(&list[i], scale);
        *slots[i].lock().unwrap() = Some(out);
    };
    let threads = options.threads.clamp(1, list.len().max(1));
    if threads == 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(work);
            }
        });
    }

    let mut report = ResidualReport::new(format!("suite {}; tolerance scale {scale}", suite.name()));
    if matches!(suite, Suite::Spectral | Suite::All) {
        report.extend(spectrum_report());
    }
    for slot in slots {
        let (item, measurements) = slot.into_inner().unwrap().expect("every item evaluated");
        for (k, v) in measurements {
            report.measure(k, v);
        }
        report.push(item);
    }
    Ok(report)
}
