//! The transform Phi that diagonalizes H, the multiplier psi(t) = pi/cosh(pi t),
//! the weight on t >= 0, the Gelfand map to the half-plane and the spectral
//! measure on [0, pi].

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{eigenfunction_coefficients, latent_parameter_from_eigenvalue, LatentParameter};
use crate::quadrature::{integrate, integrate_unit_split, IntegrationRequest, Interval, QuadOptions};
use crate::report::{ReportItem, ResidualReport};
use crate::series::{apply_hilbert_series, PowerSeries, Scalar};

/// c_0(t)..c_n(t): Taylor coefficients of f_{1/2+it}, real for real t.
pub fn conical_coefficients(t: f64, n_max: usize) -> Result<Vec<f64>> {
    let mu = LatentParameter::critical(check_t(t)?)?;
    Ok(eigenfunction_coefficients(mu, n_max)
        .into_iter()
        .map(|c| c.re)
        .collect())
}

fn check_t(t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t",
            detail: format!("{t} must be finite and >= 0"),
        });
    }
    Ok(t)
}

/// (Phi f)(t) = sum_n a_n c_n(t) for a polynomial f.
pub fn phi_transform_poly<T: Scalar>(a: &PowerSeries<T>, t: f64) -> Result<Complex64> {
    let c = conical_coefficients(t, a.truncation_order())?;
    Ok(pair(a.coeffs(), &c))
}

fn pair<T: Scalar>(a: &[T], c: &[f64]) -> Complex64 {
    a.iter().zip(c).map(|(an, cn)| an.to_complex64() * *cn).sum()
}

/// psi(t) = pi / cosh(pi t)
pub fn multiplier_psi(t: f64) -> f64 {
    PI / (PI * t).cosh()
}

/// w(t) = 2 pi tanh(pi t) / sinh(pi t), equal to 2 pi at t = 0.
pub fn weight_w(t: f64) -> f64 {
    if t == 0.0 {
        return 2.0 * PI;
    }
    let x = PI * t;
    if x.abs() > 700.0 {
        return 0.0;
    }
    2.0 * PI * x.tanh() / x.sinh()
}

/// 2 pi t tanh(pi t) / cosh(pi t): the weight under which the c_n(t) are
/// orthonormal (they are continuous dual Hahn polynomials in t^2).
pub fn weight_dual_hahn(t: f64) -> f64 {
    let x = PI * t;
    if x.abs() > 700.0 {
        return 0.0;
    }
    2.0 * PI * t * x.tanh() / x.cosh()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    /// 2 pi tanh(pi t) / sinh(pi t)
    Printed,
    /// 2 pi t tanh(pi t) / cosh(pi t)
    DualHahn,
}

impl WeightKind {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            WeightKind::Printed => weight_w(t),
            WeightKind::DualHahn => weight_dual_hahn(t),
        }
    }
}

/// Samples of a function of t on a grid, with the weight at each node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralProfile {
    pub t_grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub weight: Vec<f64>,
}

impl SpectralProfile {
    pub fn new(t_grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if t_grid.len() != values.len() || t_grid.is_empty() {
            return Err(Error::InvalidParameter {
                name: "t_grid",
                detail: "grid and values must be non-empty and of equal length".into(),
            });
        }
        if t_grid[0] < 0.0 || t_grid.windows(2).any(|w| !(w[0] < w[1])) || !t_grid.iter().all(|t| t.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "t_grid",
                detail: "must be finite, increasing and >= 0".into(),
            });
        }
        let weight = t_grid.iter().map(|&t| weight_w(t)).collect();
        Ok(Self { t_grid, values, weight })
    }

    pub fn sample<F: Fn(f64) -> Result<Complex64>>(f: F, t_grid: Vec<f64>) -> Result<Self> {
        let values = t_grid.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::new(t_grid, values)
    }

    /// Phi f on a grid.
    pub fn of_polynomial<T: Scalar>(a: &PowerSeries<T>, t_grid: Vec<f64>) -> Result<Self> {
        Self::sample(|t| phi_transform_poly(a, t), t_grid)
    }

    /// Trapezoidal int |values|^2 w dt over the grid.
    pub fn weighted_norm_sq(&self) -> f64 {
        let g: Vec<f64> = self
            .values
            .iter()
            .zip(&self.weight)
            .map(|(v, w)| v.norm_sqr() * w)
            .collect();
        self.t_grid
            .windows(2)
            .zip(g.windows(2))
            .map(|(t, g)| 0.5 * (t[1] - t[0]) * (g[0] + g[1]))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationSchedule {
    pub n_min: usize,
    pub n_max: usize,
    pub points: usize,
}

impl Default for TruncationSchedule {
    fn default() -> Self {
        Self {
            n_min: 300,
            n_max: 10_000,
            points: 16,
        }
    }
}

impl TruncationSchedule {
    /// Geometrically spaced truncation orders from n_min to n_max.
    pub fn orders(&self) -> Result<Vec<usize>> {
        if !(self.points >= 8 && self.n_min >= 10 && self.n_max > self.n_min) {
            return Err(Error::InvalidParameter {
                name: "schedule",
                detail: format!("{self:?} needs >= 8 points and 10 <= n_min < n_max"),
            });
        }
        let ratio = (self.n_max as f64 / self.n_min as f64).powf(1.0 / (self.points - 1) as f64);
        let mut out: Vec<usize> = (0..self.points)
            .map(|k| (self.n_min as f64 * ratio.powi(k as i32)).round() as usize)
            .collect();
        *out.last_mut().unwrap() = self.n_max;
        out.dedup();
        Ok(out)
    }
}

/// Multiplier identity Phi(Hf)(t) = psi(t) (Phi f)(t), checked through the
/// partial sums S(N) = sum_{n<N} (Hf)_n c_n(t), whose tail decays like N^(-1/2).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierCheck {
    pub t: f64,
    /// psi(t) (Phi f)(t)
    pub target: Complex64,
    pub truncations: Vec<usize>,
    pub raw_residuals: Vec<f64>,
    /// Exponent p of the fitted tail S(N) - S_inf ~ N^p.
    pub fitted_slope: f64,
    /// S_inf from the tail fit.
    pub extrapolated: Complex64,
    pub extrapolated_residual: f64,
    /// Raw residual at the largest truncation is above `MULTIPLIER_TOL`.
    pub truncation_warning: bool,
}

pub const MULTIPLIER_TOL: f64 = 1e-4;

pub fn multiplier_identity_residual<T: Scalar>(
    a: &PowerSeries<T>,
    t: f64,
    schedule: &TruncationSchedule,
) -> Result<MultiplierCheck> {
    let orders = schedule.orders()?;
    if a.truncation_order() >= schedule.n_min {
        return Err(Error::InvalidParameter {
            name: "a",
            detail: "polynomial degree must be below the smallest truncation".into(),
        });
    }
    let n_max = schedule.n_max;
    let c = conical_coefficients(t, n_max)?;
    let target = pair(a.coeffs(), &c) * multiplier_psi(t);
    let b = apply_hilbert_series(&a.to_complex64(), n_max)?;
    let mut partial = Vec::with_capacity(orders.len());
    let mut sum = Complex64::new(0.0, 0.0);
    let mut next = 0;
    for (n, (bn, cn)) in b.coeffs().iter().zip(&c).enumerate() {
        sum += bn * cn;
        if next < orders.len() && n + 1 == orders[next] {
            partial.push(sum);
            next += 1;
        }
    }
    let raw_residuals: Vec<f64> = partial.iter().map(|s| (s - target).norm()).collect();
    let ns: Vec<f64> = orders.iter().map(|&n| n as f64).collect();
    let (fitted_slope, extrapolated) = fit_tail(&ns, &partial, t)?;
    let last = *raw_residuals.last().unwrap();
    Ok(MultiplierCheck {
        t,
        target,
        truncations: orders,
        raw_residuals,
        fitted_slope,
        extrapolated,
        extrapolated_residual: (extrapolated - target).norm(),
        truncation_warning: last > MULTIPLIER_TOL,
    })
}

/// Below this t the oscillation cos(t ln N) is replaced by its t -> 0 limit basis (1, ln N).
const SMALL_T: f64 = 1e-3;

fn tail_basis(n: f64, p: f64, t: f64) -> [f64; 5] {
    let l = n.ln();
    let (u1, u2) = if t < SMALL_T {
        (1.0, l)
    } else {
        ((t * l).cos(), (t * l).sin())
    };
    let a = n.powf(p);
    let b = n.powf(p - 1.0);
    [1.0, a * u1, a * u2, b * u1, b * u2]
}

/// Least squares for S(N) = S_inf + N^p (..) + N^(p-1) (..) at fixed p.
/// Returns the residual sum of squares and S_inf.
fn fit_fixed(ns: &[f64], s: &[Complex64], t: f64, p: f64) -> Option<(f64, Complex64)> {
    let rows = ns.len();
    let mut m = DMatrix::<f64>::zeros(rows, 5);
    for (i, &n) in ns.iter().enumerate() {
        for (j, v) in tail_basis(n, p, t).into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    // column scaling for conditioning
    let scales: Vec<f64> = (0..5).map(|j| m.column(j).norm().max(f64::MIN_POSITIVE)).collect();
    for (j, sc) in scales.iter().enumerate() {
        m.column_mut(j).unscale_mut(*sc);
    }
    let mut rhs = DMatrix::<f64>::zeros(rows, 2);
    for (i, v) in s.iter().enumerate() {
        rhs[(i, 0)] = v.re;
        rhs[(i, 1)] = v.im;
    }
    let svd = m.clone().svd(true, true);
    let coef = svd.solve(&rhs, 1e-14).ok()?;
    let resid = &m * &coef - &rhs;
    let s_inf = Complex64::new(coef[(0, 0)], coef[(0, 1)]) / scales[0];
    Some((resid.norm_squared(), s_inf))
}

/// Fits the tail exponent p by a scan followed by golden-section refinement.
fn fit_tail(ns: &[f64], s: &[Complex64], t: f64) -> Result<(f64, Complex64)> {
    let rss = |p: f64| fit_fixed(ns, s, t, p).map_or(f64::INFINITY, |r| r.0);
    let (lo, hi, step) = (-1.5, -0.05, 0.05);
    let mut best = lo;
    let mut p = lo;
    while p <= hi + 1e-12 {
        if rss(p) < rss(best) {
            best = p;
        }
        p += step;
    }
    let (mut a, mut b) = ((best - step).max(lo), (best + step).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if rss(x1) <= rss(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let p = 0.5 * (a + b);
    let (_, s_inf) = fit_fixed(ns, s, t, p).ok_or_else(|| Error::NonConvergence {
        what: "multiplier tail fit",
        detail: format!("least squares failed at p = {p}"),
    })?;
    Ok((p, s_inf))
}

pub const DEFAULT_ORTHOGONALITY_T_MAX: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityIntegral {
    pub n: usize,
    pub m: usize,
    pub weight: WeightKind,
    pub value: f64,
    pub est_error: f64,
    /// Bound on the neglected part beyond t_max.
    pub tail: f64,
}

/// I_nm = int_0^t_max c_n(t) c_m(t) weight(t) dt.
pub fn orthogonality_integral(n: usize, m: usize, t_max: f64, weight: WeightKind) -> Result<OrthogonalityIntegral> {
    if n > 20 || m > 20 {
        return Err(Error::InvalidParameter {
            name: "n, m",
            detail: format!("({n}, {m}) exceed 20"),
        });
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_max",
            detail: format!("{t_max} must be positive and finite"),
        });
    }
    let top = n.max(m);
    let integrand = |t: f64| -> f64 {
        match conical_coefficients(t, top) {
            Ok(c) => c[n] * c[m] * weight.eval(t),
            Err(_) => f64::NAN,
        }
    };
    let req = IntegrationRequest::new(integrand, Interval::Finite { a: 0.0, b: t_max }).options(QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_evals: 100_000,
    });
    let r = integrate(&req)?;
    // the weight decays like exp(-pi t) times a polynomial of lower order than
    // the drop over one unit, so the remainder is below the integrand / (pi - 1)
    let tail = integrand(t_max).abs() / (PI - 1.0);
    Ok(OrthogonalityIntegral {
        n,
        m,
        weight,
        value: r.value,
        est_error: r.est_error,
        tail,
    })
}

/// (|I_nm|, I_00) for n != m and (I_nn, I_00) on the diagonal.
pub fn orthogonality_residual(n: usize, m: usize, t_max: f64, weight: WeightKind) -> Result<(f64, f64)> {
    let i = orthogonality_integral(n, m, t_max, weight)?;
    let i00 = orthogonality_integral(0, 0, t_max, weight)?.value;
    Ok((if n == m { i.value } else { i.value.abs() }, i00))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalitySummary {
    pub weight: WeightKind,
    pub n_max: usize,
    pub i00: f64,
    /// max over n < m <= n_max of |I_nm| / I_00
    pub max_off_diagonal: f64,
    pub worst_pair: (usize, usize),
    pub diagonal: Vec<f64>,
    /// (max - min) / min over the diagonal
    pub diagonal_spread: f64,
    /// Empirical constant K in I_nm = K delta_nm (mean diagonal value).
    pub k: f64,
    pub max_tail: f64,
}

pub fn orthogonality_summary(n_max: usize, t_max: f64, weight: WeightKind) -> Result<OrthogonalitySummary> {
    let mut diagonal = Vec::with_capacity(n_max + 1);
    let mut max_tail = 0.0_f64;
    for n in 0..=n_max {
        let i = orthogonality_integral(n, n, t_max, weight)?;
        max_tail = max_tail.max(i.tail);
        diagonal.push(i.value);
    }
    let i00 = diagonal[0];
    let mut max_off_diagonal = 0.0_f64;
    let mut worst_pair = (0, 0);
    for n in 0..=n_max {
        for m in n + 1..=n_max {
            let i = orthogonality_integral(n, m, t_max, weight)?;
            max_tail = max_tail.max(i.tail);
            let r = i.value.abs() / i00;
            if r > max_off_diagonal {
                max_off_diagonal = r;
                worst_pair = (n, m);
            }
        }
    }
    let max = diagonal.iter().cloned().fold(f64::MIN, f64::max);
    let min = diagonal.iter().cloned().fold(f64::MAX, f64::min);
    let k = diagonal.iter().sum::<f64>() / diagonal.len() as f64;
    Ok(OrthogonalitySummary {
        weight,
        n_max,
        i00,
        max_off_diagonal,
        worst_pair,
        diagonal_spread: (max - min) / min,
        k,
        diagonal,
        max_tail,
    })
}

/// (G f)(w) = (2 / (1 + w)) f((w - 1)/(w + 1)) for Re w > 0.
pub fn gelfand_map_eval<F: Fn(Complex64) -> Complex64>(f: F, w: Complex64) -> Result<Complex64> {
    if !(w.re > 0.0 && w.im.is_finite()) {
        return Err(Error::Domain {
            what: "gelfand_map_eval",
            detail: format!("w = {w} needs Re w > 0"),
        });
    }
    Ok(2.0 / (1.0 + w) * f((w - 1.0) / (w + 1.0)))
}

/// ||G f||^2 / ||f||^2 with ||F||^2 = (1/2pi) int |F(iy)|^2 dy on the half-plane
/// and ||f||^2 = sum |a_n|^2 on the disk.
pub fn gelfand_norm_ratio<T: Scalar>(a: &PowerSeries<T>) -> Result<f64> {
    let disk: f64 = a.coeffs().iter().map(|c| c.to_complex64().norm_sqr()).sum();
    if disk == 0.0 {
        return Err(Error::InvalidParameter {
            name: "a",
            detail: "zero polynomial has no norm ratio".into(),
        });
    }
    let boundary = |y: f64| -> f64 {
        [y, -y]
            .iter()
            .map(|&s| 4.0 / (1.0 + s * s) * a.eval(cayley_boundary(s)).norm_sqr())
            .sum()
    };
    let r = integrate(&IntegrationRequest::new(boundary, Interval::FromZero))?.require_converged()?;
    Ok(r.value / (2.0 * PI) / disk)
}

/// (iy - 1)/(iy + 1) without overflow for large |y|.
fn cayley_boundary(y: f64) -> Complex64 {
    if y.abs() <= 1.0 {
        Complex64::new(y * y - 1.0, 2.0 * y) / (1.0 + y * y)
    } else {
        let u = 1.0 / y;
        Complex64::new(1.0 - u * u, 2.0 * u) / (1.0 + u * u)
    }
}

/// (2/pi^2) arccosh(pi / x) on (0, pi].
pub fn spectral_measure_density(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= PI) {
        return Err(Error::Domain {
            what: "spectral_measure_density",
            detail: format!("x = {x} is outside (0, pi]"),
        });
    }
    Ok(2.0 / (PI * PI) * (PI / x).acosh())
}

/// The measure dr = density(x) dx on [0, pi].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SpectralMeasure;

impl SpectralMeasure {
    pub fn support(&self) -> (f64, f64) {
        (0.0, PI)
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        spectral_measure_density(x)
    }

    /// int_0^pi g(x) dr(x), via x = pi s with the complement of s kept exact
    /// so arccosh(1/s) = ln((1 + sqrt((1-s)(1+s)))/s) stays accurate near s = 1.
    pub fn moment<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let r = integrate_unit_split(
            |s: f64, oms: f64| {
                let acosh = ((1.0 + (oms * (1.0 + s)).sqrt()) / s).ln();
                g(PI * s) * acosh * (2.0 / PI)
            },
            &QuadOptions::with_tol(1e-13),
        )?;
        Ok(r.value)
    }

    pub fn mass(&self) -> Result<f64> {
        self.moment(|_| 1.0)
    }
}

/// c int_0^inf g(psi(t)) weight(t) dt, with c = 1/pi for the printed weight
/// and c = 1 for the dual Hahn weight (the density pulled back by x = psi(t)).
pub fn pushforward_moment<G: Fn(f64) -> f64>(g: G, weight: WeightKind) -> Result<f64> {
    let c = match weight {
        WeightKind::Printed => 1.0 / PI,
        WeightKind::DualHahn => 1.0,
    };
    let r = integrate(
        &IntegrationRequest::new(|t: f64| g(multiplier_psi(t)) * weight.eval(t), Interval::FromZero)
            .options(QuadOptions::with_tol(1e-13)),
    )?
    .require_converged()?;
    Ok(c * r.value)
}

/// The spectrum [0, pi] as the closure of the range of psi, absence of point
/// spectrum through injectivity of psi, and the mass of the spectral measure.
pub fn spectrum_report() -> ResidualReport {
    let mut report = ResidualReport::new("psi on t = 0..40 step 0.01; latent check t in {0.1, 0.5, 1}");
    report.push(ReportItem::new(
        "psi(0) = pi (sup of the range)",
        "spectrum upper end",
        (multiplier_psi(0.0) - PI).abs(),
        1e-15,
    ));
    let grid: Vec<f64> = (0..=4000).map(|k| k as f64 * 0.01).collect();
    let psi: Vec<f64> = grid.iter().map(|&t| multiplier_psi(t)).collect();
    let non_decreasing = psi.windows(2).filter(|w| !(w[1] < w[0])).count();
    report.push(ReportItem::new(
        "psi strictly decreasing (injective: no point spectrum)",
        "multiplier injectivity",
        non_decreasing as f64,
        0.0,
    ));
    report.push(ReportItem::new(
        "psi(t) -> 0 as t -> inf (inf of the range, not attained)",
        "spectrum lower end",
        psi[psi.len() - 1],
        1e-50,
    ));
    let consistency = grid
        .iter()
        .map(|&t| (multiplier_psi(t) * (PI * t).cosh() - PI).abs() / PI)
        .fold(0.0, f64::max);
    report.push(ReportItem::new(
        "psi(t) cosh(pi t) = pi",
        "multiplier closed form",
        consistency,
        1e-14,
    ));
    for t in [0.1, 0.5, 1.0] {
        let r = latent_parameter_from_eigenvalue(Complex64::new(multiplier_psi(t), 0.0))
            .map(|s| (s.mu.mu() - Complex64::new(0.5, t)).norm());
        report.push(ReportItem::from_result(
            format!("latent parameter of psi({t}) = 1/2 + {t}i"),
            "eigenvalue to latent parameter",
            r,
            1e-10,
        ));
    }
    let measure = SpectralMeasure;
    report.push(ReportItem::from_result(
        "density(pi) = 0",
        "spectral measure endpoint",
        measure.density(PI).map(f64::abs),
        1e-15,
    ));
    let mass = measure.mass();
    if let Ok(m) = mass {
        report.measure("spectral_measure_mass", m);
    }
    report.push(ReportItem::from_result(
        "spectral measure mass = 1",
        "spectral measure normalization",
        mass.map(|m| (m - 1.0).abs()),
        1e-8,
    ));
    report
}
