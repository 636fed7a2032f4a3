//! Double-exponential quadrature.
//!
//! * `[0, 1]` (and any finite `[a, b]`): tanh-sinh. Abscissae cluster
//!   doubly-exponentially at the endpoints, so integrable endpoint
//!   singularities such as `(1-s)^(-0.9)` are handled without special care.
//!   The split variant hands the integrand both `s` and `1-s`, the latter
//!   computed without cancellation.
//! * `[1, inf)`: `x = cosh u`, then tanh-sinh panels on `[0, U]` where the
//!   cutoff `cosh U` makes the analytic power-law tail bound fall below
//!   `abs_tol / 10`.
//! * `[0, inf)`: exp-sinh.
//!
//! Each level halves the step and reuses the previous abscissae. The error
//! estimate is the difference between consecutive levels plus a rounding
//! floor; the level with the smallest estimate is returned.

use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Values an integrand may return.
pub trait QuadValue: Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
    fn all_finite(&self) -> bool;
    fn nan() -> Self;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
    fn nan() -> Self {
        f64::NAN
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn all_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn nan() -> Self {
        Complex64::new(f64::NAN, 0.0)
    }
}

/// Lets a fallible integrand run inside the engines: the first error is kept
/// and a NaN stops the integration, then `finish` hands the error back.
#[derive(Default)]
pub struct ErrorSlot(Cell<Option<Error>>);

impl ErrorSlot {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value<V: QuadValue>(&self, r: Result<V>) -> V {
        match r {
            Ok(v) => v,
            Err(e) => {
                let first = self.0.take().unwrap_or(e);
                self.0.set(Some(first));
                V::nan()
            }
        }
    }

    pub fn finish<R>(self, r: Result<R>) -> Result<R> {
        match self.0.take() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Unit,
    Finite {
        a: f64,
        b: f64,
    },
    /// `[1, inf)` for integrands with `|f(x)| = O(x^-decay_exponent)`, exponent > 1.
    FromOne {
        decay_exponent: f64,
    },
    FromZero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            max_evals: 100_000,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tolerance",
                detail: format!("abs_tol = {}, rel_tol = {} must be > 0", self.abs_tol, self.rel_tol),
            });
        }
        if self.max_evals < 100 {
            return Err(Error::InvalidParameter {
                name: "max_evals",
                detail: format!("{} < 100", self.max_evals),
            });
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value)
    }
}

pub struct IntegrationRequest<F> {
    pub integrand: F,
    pub interval: Interval,
    pub options: QuadOptions,
}

impl<F> IntegrationRequest<F> {
    pub fn new(integrand: F, interval: Interval) -> Self {
        Self {
            integrand,
            interval,
            options: QuadOptions::default(),
        }
    }

    pub fn abs_tol(mut self, tol: f64) -> Self {
        self.options.abs_tol = tol;
        self
    }

    pub fn rel_tol(mut self, tol: f64) -> Self {
        self.options.rel_tol = tol;
        self
    }

    pub fn max_evals(mut self, n: usize) -> Self {
        self.options.max_evals = n;
        self
    }

    pub fn options(mut self, options: QuadOptions) -> Self {
        self.options = options;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult<V> {
    pub value: V,
    pub est_error: f64,
    pub evals: usize,
    pub converged: bool,
}

impl<V> IntegrationResult<V> {
    /// Turns a did-not-converge flag into an error.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::QuadratureTolerance {
                est_error: self.est_error,
                evals: self.evals,
            })
        }
    }
}

pub fn integrate<V, F>(req: &IntegrationRequest<F>) -> Result<IntegrationResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    req.options.validate()?;
    let f = &req.integrand;
    match req.interval {
        Interval::Unit => tanh_sinh(0.0, 1.0, |x, _, _| f(x), &req.options),
        Interval::Finite { a, b } => {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::InvalidParameter {
                    name: "interval",
                    detail: format!("[{a}, {b}] is not a finite non-empty interval"),
                });
            }
            tanh_sinh(a, b, |x, _, _| f(x), &req.options)
        }
        Interval::FromOne { decay_exponent } => from_one(f, decay_exponent, &req.options),
        Interval::FromZero => exp_sinh(f, &req.options),
    }
}

/// `int_0^1 f(s, 1-s) ds` where the second argument is the exact complement.
pub fn integrate_unit_split<V, F>(f: F, options: &QuadOptions) -> Result<IntegrationResult<V>>
where
    V: QuadValue,
    F: Fn(f64, f64) -> V,
{
    options.validate()?;
    tanh_sinh(0.0, 1.0, |x, _, right| f(x, right), options)
}

/// Bound `cutoff^(1-p) / (p-1)` on `int_cutoff^inf x^-p dx`.
pub fn integrate_semiinf_tail_bound(decay_exponent: f64, cutoff: f64) -> Result<f64> {
    if !(decay_exponent > 1.0) {
        return Err(Error::Domain {
            what: "integrate_semiinf_tail_bound",
            detail: format!("decay exponent {decay_exponent} must exceed 1"),
        });
    }
    if !(cutoff > 0.0) {
        return Err(Error::Domain {
            what: "integrate_semiinf_tail_bound",
            detail: format!("cutoff {cutoff} must be positive"),
        });
    }
    Ok(cutoff.powf(1.0 - decay_exponent) / (decay_exponent - 1.0))
}

const MAX_LEVEL: u32 = 12;
const MIN_LEVEL: u32 = 4;
/// tanh-sinh abscissae stop where the smaller endpoint distance reaches ~1e-300.
const TANH_SINH_T_MAX: f64 = 6.08;
/// exp-sinh abscissae span roughly [1e-300, 1e300].
const EXP_SINH_T_MAX: f64 = 6.78;

struct Node {
    x: f64,
    left: f64,
    right: f64,
    weight: f64,
}

struct Accumulator<V> {
    sum: V,
    abs_sum: f64,
    evals: usize,
}

impl<V: QuadValue> Accumulator<V> {
    fn add<N, G>(&mut self, t: f64, node: &N, g: &G) -> Result<()>
    where
        N: Fn(f64) -> Option<Node>,
        G: Fn(&Node) -> V,
    {
        let Some(nd) = node(t) else {
            return Ok(());
        };
        if nd.weight == 0.0 {
            return Ok(());
        }
        let v = g(&nd);
        self.evals += 1;
        if !v.all_finite() {
            return Err(Error::Evaluation { abscissa: nd.x });
        }
        let term = v * nd.weight;
        self.sum = self.sum + term;
        self.abs_sum += term.magnitude();
        Ok(())
    }
}

/// Level-refinement driver shared by both double-exponential rules.
/// `node(t)` returns `None` when the abscissa degenerates.
fn refine<V, N, G>(t_max: f64, node: N, g: G, options: &QuadOptions) -> Result<IntegrationResult<V>>
where
    V: QuadValue,
    N: Fn(f64) -> Option<Node>,
    G: Fn(&Node) -> V,
{
    let mut acc = Accumulator {
        sum: V::zero(),
        abs_sum: 0.0,
        evals: 0,
    };
    let j_max = t_max.floor() as i64;
    for j in -j_max..=j_max {
        acc.add(j as f64, &node, &g)?;
    }
    let mut h = 1.0_f64;
    let mut previous = acc.sum;
    let mut best: Option<IntegrationResult<V>> = None;

    for level in 1..=MAX_LEVEL {
        h /= 2.0;
        let count = (t_max / h).floor() as i64;
        // odd multiples of h on both sides
        let new_nodes = (count as usize).div_ceil(2) * 2;
        if acc.evals + new_nodes > options.max_evals {
            break;
        }
        let mut j = 1;
        while j <= count {
            let t = j as f64 * h;
            acc.add(t, &node, &g)?;
            acc.add(-t, &node, &g)?;
            j += 2;
        }
        let current = acc.sum * h;
        let est = (current - previous).magnitude() + 4.0 * f64::EPSILON * acc.abs_sum * h;
        let converged = level >= MIN_LEVEL && est <= options.target(current.magnitude());
        if converged || best.as_ref().is_none_or(|b| est <= b.est_error) {
            best = Some(IntegrationResult {
                value: current,
                est_error: est,
                evals: 0,
                converged,
            });
        }
        previous = current;
        if converged {
            break;
        }
    }
    let mut result = best.unwrap_or(IntegrationResult {
        value: previous,
        est_error: f64::INFINITY,
        evals: 0,
        converged: false,
    });
    result.evals = acc.evals;
    Ok(result)
}

/// tanh-sinh on [a, b]; `g(x, x - a, b - x)`.
fn tanh_sinh<V, G>(a: f64, b: f64, g: G, options: &QuadOptions) -> Result<IntegrationResult<V>>
where
    V: QuadValue,
    G: Fn(f64, f64, f64) -> V,
{
    let width = b - a;
    let node = |t: f64| -> Option<Node> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        let small = e / (1.0 + e);
        let large = 1.0 / (1.0 + e);
        if small < 1e-300 {
            return None;
        }
        let (s, oms) = if t >= 0.0 { (large, small) } else { (small, large) };
        let weight = width * std::f64::consts::PI * t.cosh() * small * large;
        let (left, right) = (width * s, width * oms);
        let x = if t >= 0.0 { b - right } else { a + left };
        Some(Node { x, left, right, weight })
    };
    refine(TANH_SINH_T_MAX, node, |nd| g(nd.x, nd.left, nd.right), options)
}

fn exp_sinh<V, F>(f: &F, options: &QuadOptions) -> Result<IntegrationResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let node = |t: f64| -> Option<Node> {
        let x = (FRAC_PI_2 * t.sinh()).exp();
        if !(x > 0.0 && x.is_finite()) {
            return None;
        }
        Some(Node {
            x,
            left: x,
            right: f64::INFINITY,
            weight: FRAC_PI_2 * t.cosh() * x,
        })
    };
    refine(EXP_SINH_T_MAX, node, |nd| f(nd.x), options)
}

/// Largest stretch variable; cosh(700) is close to the f64 ceiling.
const MAX_STRETCH: f64 = 700.0;

fn from_one<V, F>(f: &F, p: f64, options: &QuadOptions) -> Result<IntegrationResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if !(p > 1.0) {
        return Err(Error::Domain {
            what: "integrate [1, inf)",
            detail: format!("decay exponent {p} must exceed 1"),
        });
    }
    let (cutoff_u, tail, probes) = choose_cutoff(f, p, options.abs_tol / 10.0)?;
    let tail_ok = tail <= options.abs_tol / 10.0;

    // panels [0,1], [1,2], [2,4], then width 4
    let mut edges = vec![0.0_f64, 1.0, 2.0];
    let mut u = 4.0;
    while u < cutoff_u {
        edges.push(u);
        u += 4.0;
    }
    edges.push(cutoff_u);
    edges.dedup();
    let panels = edges.len() - 1;
    let panel_options = QuadOptions {
        abs_tol: options.abs_tol / panels as f64,
        rel_tol: options.rel_tol,
        max_evals: (options.max_evals.saturating_sub(probes) / panels).max(100),
    };
    let mut total = IntegrationResult {
        value: V::zero(),
        est_error: tail,
        evals: probes,
        converged: tail_ok,
    };
    for w in edges.windows(2) {
        let r = tanh_sinh(
            w[0],
            w[1],
            |u, left, _| {
                // x - 1 = 2 sinh^2(u/2) keeps accuracy near x = 1
                let x = if u < 1.0 {
                    1.0 + 2.0 * (0.5 * left.max(u)).sinh().powi(2)
                } else {
                    u.cosh()
                };
                f(x) * u.sinh()
            },
            &panel_options,
        )?;
        total.value = total.value + r.value;
        total.est_error += r.est_error;
        total.evals += r.evals;
    }
    // panels stop on their share of the tolerance; the verdict is on the total
    total.converged = tail_ok && total.est_error <= options.target(total.value.magnitude());
    Ok(total)
}

/// Smallest stretch cutoff U (a multiple of 4) whose tail estimate is below
/// `goal`. The tail constant is probed just beyond cosh U with a safety factor 2.
fn choose_cutoff<V, F>(f: &F, p: f64, goal: f64) -> Result<(f64, f64, usize)>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let mut probes = 0;
    let mut u = 8.0_f64;
    loop {
        let x_cut = u.cosh();
        let mut worst = 0.0_f64;
        for factor in [1.0, 1.3, 1.7, 2.2] {
            let x = x_cut * factor;
            let v = f(x);
            probes += 1;
            if !v.all_finite() {
                return Err(Error::Evaluation { abscissa: x });
            }
            // |f(x)| x^p * x_cut^(1-p), arranged to avoid overflow
            worst = worst.max(v.magnitude() * x * factor.powf(p - 1.0));
        }
        let tail = 2.0 * worst / (p - 1.0);
        if tail <= goal || u >= MAX_STRETCH {
            return Ok((u, tail, probes));
        }
        u = (u + 4.0).min(MAX_STRETCH);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit<F: Fn(f64) -> f64>(f: F) -> IntegrationResult<f64> {
        integrate(&IntegrationRequest::new(f, Interval::Unit)).unwrap()
    }

    #[test]
    fn unit_interval_examples() {
        let r = unit(|s| 1.0 / (1.0 - s * 0.0));
        assert!((r.value - 1.0).abs() < 1e-14 && r.converged);
        let r = unit(|s| 1.0 / (1.0 - 0.5 * s));
        assert!((r.value - 2.0 * 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularities() {
        // int_0^1 (1-s)^(a-1) ds = 1/a with the exact complement
        for a in [0.5, 0.3, 0.1, 0.05] {
            let r = integrate_unit_split(|_, oms: f64| oms.powf(a - 1.0), &QuadOptions::default()).unwrap();
            assert!((r.value - 1.0 / a).abs() < 1e-9 / a, "a={a}: {}", r.value);
        }
        // log singularity at the left end
        let r = unit(|s| -s.ln());
        assert!((r.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn from_one_power_law() {
        let req = IntegrationRequest::new(|x: f64| x.powf(-1.5), Interval::FromOne { decay_exponent: 1.5 });
        let r = integrate(&req).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10 && r.converged, "{r:?}");
        let req =
            IntegrationRequest::new(|x: f64| x.powf(-1.1), Interval::FromOne { decay_exponent: 1.1 }).abs_tol(1e-8);
        let r = integrate(&req).unwrap();
        assert!((r.value - 10.0).abs() < 1e-7, "{r:?}");
        // oscillating, complex valued
        let req = IntegrationRequest::new(
            |x: f64| Complex64::from_polar(x.powf(-1.5), 2.0 * x.ln()),
            Interval::FromOne { decay_exponent: 1.5 },
        );
        let r = integrate(&req).unwrap();
        let want = 1.0 / Complex64::new(0.5, -2.0);
        assert!((r.value - want).norm() < 1e-10);
    }

    #[test]
    fn from_zero_sech() {
        let r = integrate(&IntegrationRequest::new(|u: f64| 1.0 / u.cosh(), Interval::FromZero)).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-12);
        let r = integrate(&IntegrationRequest::new(|u: f64| u.cosh().powi(-3), Interval::FromZero)).unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn tail_bound_examples() {
        assert!((integrate_semiinf_tail_bound(1.5, 100.0).unwrap() - 0.2).abs() < 1e-15);
        assert!((integrate_semiinf_tail_bound(2.0, 1000.0).unwrap() - 1e-3).abs() < 1e-15);
        assert!((integrate_semiinf_tail_bound(1.5, 1e6).unwrap() - 2e-3).abs() < 1e-15);
        assert!(integrate_semiinf_tail_bound(1.0, 10.0).is_err());
        assert!(integrate_semiinf_tail_bound(0.5, 10.0).is_err());
    }

    #[test]
    fn errors() {
        let nan = integrate(&IntegrationRequest::new(
            |s: f64| if s > 0.7 { f64::NAN } else { s },
            Interval::Unit,
        ));
        assert!(matches!(nan, Err(Error::Evaluation { abscissa }) if abscissa > 0.7));
        let bad = integrate(&IntegrationRequest::new(|s: f64| s, Interval::Unit).abs_tol(0.0));
        assert!(matches!(bad, Err(Error::InvalidParameter { .. })));
        let bad = integrate(&IntegrationRequest::new(|s: f64| s, Interval::Unit).max_evals(10));
        assert!(matches!(bad, Err(Error::InvalidParameter { .. })));
        // budget too small to reach tolerance: flagged, not an error
        let r = integrate(
            &IntegrationRequest::new(|s: f64| (40.0 * s).sin(), Interval::Unit)
                .abs_tol(1e-15)
                .max_evals(100),
        )
        .unwrap();
        assert!(!r.converged && r.evals <= 100);
        assert!(r.require_converged().is_err());
    }

    #[test]
    fn error_estimate_monotone_in_budget() {
        let f = |s: f64| (30.0 * s).cos() / (1.0 + s * s);
        let mut last = f64::INFINITY;
        for budget in [100, 200, 400, 800, 1600, 3200, 6400] {
            let r = integrate(
                &IntegrationRequest::new(f, Interval::Unit)
                    .abs_tol(1e-15)
                    .rel_tol(1e-15)
                    .max_evals(budget),
            )
            .unwrap();
            assert!(r.est_error <= last, "budget {budget}: {} > {last}", r.est_error);
            last = r.est_error;
        }
    }

    #[test]
    fn estimate_covers_actual_error() {
        // int_0^1 s^(a-1) cos(k s)-type corpus with closed forms
        let mut covered = 0;
        let mut total = 0;
        for k in 1..=20 {
            let kk = k as f64;
            let cases: [(Box<dyn Fn(f64) -> f64>, f64); 3] = [
                (Box::new(move |s: f64| (kk * s).cos()), kk.sin() / kk),
                (Box::new(move |s: f64| (kk * s).exp()), (kk.exp() - 1.0) / kk),
                (Box::new(move |s: f64| 1.0 / (1.0 + kk * s)), (1.0 + kk).ln() / kk),
            ];
            for (f, want) in cases {
                let r = integrate(&IntegrationRequest::new(f, Interval::Unit).abs_tol(1e-9).rel_tol(1e-9)).unwrap();
                total += 1;
                if (r.value - want).abs() <= r.est_error.max(4.0 * f64::EPSILON * want.abs()) {
                    covered += 1;
                }
            }
        }
        assert!(covered * 100 >= total * 95, "{covered}/{total}");
    }
}
