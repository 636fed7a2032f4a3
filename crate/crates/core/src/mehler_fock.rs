//! Mehler-Fock transform on [1, inf):
//!
//!   fhat(t) = int_1^inf f(x) P_{it-1/2}(x) dx,
//!   f(x)    = int_0^inf t tanh(pi t) P_{it-1/2}(x) fhat(t) dt,
//!
//! the kernel identity int_1^inf P_{it-1/2}(x) / (x + y) dx = pi P_{it-1/2}(y) / cosh(pi t),
//! and the resulting integral representations of the eigenfunctions f_mu.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{eigenfunction_eval, LatentParameter};
use crate::quadrature::{integrate, ErrorSlot, IntegrationRequest, IntegrationResult, Interval, QuadOptions};
use crate::special::hypergeometric::{gauss_2f1, HypergeometricParams};
use crate::special::legendre::{conical_p, conical_p_with, legendre_p, ConicalOrder, LegendreOptions};

/// Beyond this t the factor cosh(pi t) eats too many digits to certify 1e-6.
pub const DEFAULT_T_CAP: f64 = 3.0;

/// A function on [1, inf) with |f(x)| = O(x^-decay_exponent).
pub struct RealLineFunction<F> {
    eval: F,
    decay_exponent: f64,
}

impl<F: Fn(f64) -> Complex64> RealLineFunction<F> {
    pub fn new(eval: F, decay_exponent: f64) -> Result<Self> {
        if !(decay_exponent > 0.5) {
            return Err(Error::Existence { decay_exponent });
        }
        Ok(Self { eval, decay_exponent })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.eval)(x)
    }

    pub fn decay_exponent(&self) -> f64 {
        self.decay_exponent
    }
}

/// phi_z(x) = 1 / (x(1-z) + 1 + z)
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiZ {
    z: Complex64,
}

impl PhiZ {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain {
                what: "phi_z",
                detail: format!("|z| = {} is not < 1", z.norm()),
            });
        }
        Ok(Self { z })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        1.0 / (x * (1.0 - self.z) + 1.0 + self.z)
    }

    pub fn as_function(&self) -> RealLineFunction<impl Fn(f64) -> Complex64> {
        let phi = *self;
        RealLineFunction {
            eval: move |x| phi.eval(x),
            decay_exponent: 1.0,
        }
    }

    /// Its transform from the kernel identity: pi P_{it-1/2}(y) / ((1-z) cosh pi t),
    /// y = (1+z)/(1-z).
    pub fn transform_closed_form(&self, t: f64) -> Result<Complex64> {
        let y = (1.0 + self.z) / (1.0 - self.z);
        let p = if self.z.im == 0.0 {
            conical_real(t, y.re)?
        } else {
            conical_complex(t, y)?
        };
        Ok(PI * p / ((1.0 - self.z) * (PI * t).cosh()))
    }
}

/// P_{it-1/2}(y) for real y > 0; y < 1 (from real z < 0) goes straight
/// through 2F1(1/2 - it, 1/2 + it; 1; (1-y)/2).
fn conical_real(t: f64, y: f64) -> Result<Complex64> {
    if y >= 1.0 {
        return Ok(Complex64::new(conical_p(ConicalOrder::new(t)?, y)?, 0.0));
    }
    conical_complex(t, Complex64::new(y, 0.0))
}

fn conical_complex(t: f64, y: Complex64) -> Result<Complex64> {
    let nu = ConicalOrder::new(t)?.degree();
    let p = HypergeometricParams::new(-nu, nu + 1.0, Complex64::new(1.0, 0.0))?;
    gauss_2f1(p, (1.0 - y) / 2.0)
}

/// Conical kernel values keyed by (t, x). The engines reuse the same
/// abscissae for every integrand, so grids over z share evaluations.
struct KernelCache {
    map: RwLock<HashMap<(u64, u64), f64>>,
}

const KERNEL_CACHE_LIMIT: usize = 4_000_000;

/// Rounding allowed in a kernel value before it is rejected. The transforms
/// need t up to ~10 where the series cancels to about 1e-8, multiplied by
/// transform values far below that.
const KERNEL_REJECT_TOL: f64 = 1e-7;

fn kernel_cache() -> &'static KernelCache {
    static CACHE: OnceLock<KernelCache> = OnceLock::new();
    CACHE.get_or_init(|| KernelCache {
        map: RwLock::new(HashMap::new()),
    })
}

fn conical_kernel(order: ConicalOrder, x: f64) -> Result<f64> {
    let key = (order.t().to_bits(), x.to_bits());
    let cache = kernel_cache();
    if let Some(v) = cache.map.read().ok().and_then(|m| m.get(&key).copied()) {
        return Ok(v);
    }
    let v = conical_p_with(order, x, &LegendreOptions::with_tol(KERNEL_REJECT_TOL))?;
    if let Ok(mut m) = cache.map.write() {
        if m.len() >= KERNEL_CACHE_LIMIT {
            m.clear();
        }
        m.insert(key, v);
    }
    Ok(v)
}

pub fn clear_kernel_cache() {
    if let Ok(mut m) = kernel_cache().map.write() {
        m.clear();
    }
}

fn forward_options(tol: f64) -> Result<QuadOptions> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            detail: format!("{tol} must be > 0"),
        });
    }
    Ok(QuadOptions {
        abs_tol: tol,
        rel_tol: tol,
        max_evals: 400_000,
    })
}

/// int_1^inf f(x) P_{it-1/2}(x) dx. The kernel decays like x^(-1/2) (log x
/// at t = 0), so the integrand decays with exponent p + 1/2.
pub fn mf_forward<F>(f: &RealLineFunction<F>, t: f64, tol: f64) -> Result<IntegrationResult<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    let order = ConicalOrder::new(t)?;
    let decay = f.decay_exponent() + 0.5;
    if !(decay > 1.0) {
        return Err(Error::Existence {
            decay_exponent: f.decay_exponent(),
        });
    }
    let slot = ErrorSlot::new();
    let req = IntegrationRequest::new(
        |x: f64| slot.value(conical_kernel(order, x).map(|k| f.eval(x) * k)),
        Interval::FromOne { decay_exponent: decay },
    )
    .options(forward_options(tol)?);
    let r = integrate(&req);
    slot.finish(r)?.require_converged()
}

/// A transform t -> fhat(t) with memoized values, safe to share between threads.
pub struct CachedTransform<G> {
    fhat: G,
    cache: RwLock<HashMap<u64, Complex64>>,
}

impl<G: Fn(f64) -> Result<Complex64>> CachedTransform<G> {
    pub fn new(fhat: G) -> Self {
        Self {
            fhat,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn eval(&self, t: f64) -> Result<Complex64> {
        if let Some(v) = self.cache.read().ok().and_then(|m| m.get(&t.to_bits()).copied()) {
            return Ok(v);
        }
        let v = (self.fhat)(t)?;
        if let Ok(mut m) = self.cache.write() {
            m.insert(t.to_bits(), v);
        }
        Ok(v)
    }

    pub fn cached_points(&self) -> usize {
        self.cache.read().map(|m| m.len()).unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InverseResult {
    pub value: Complex64,
    pub est_error: f64,
    /// Truncation point actually used.
    pub t_end: f64,
    /// t tanh(pi t) |fhat(t)| at the truncation point.
    pub tail: f64,
}

/// int_0^inf t tanh(pi t) P_{it-1/2}(x) fhat(t) dt, truncated at the first
/// integer T <= t_max where t tanh(pi t) |fhat(t)| < tol / 10.
pub fn mf_inverse<G>(fhat: G, x: f64, t_max: f64, tol: f64) -> Result<InverseResult>
where
    G: Fn(f64) -> Result<Complex64>,
{
    if !(x >= 1.0) {
        return Err(Error::Domain {
            what: "mf_inverse",
            detail: format!("x = {x} is not >= 1"),
        });
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_max",
            detail: format!("{t_max} must be positive and finite"),
        });
    }
    let options = forward_options(tol / 10.0)?;
    let envelope = |t: f64| -> Result<f64> { Ok(t * (PI * t).tanh() * fhat(t)?.norm()) };
    let mut t_end = t_max.min(1.0);
    let mut tail = envelope(t_end)?;
    while tail >= tol / 10.0 && t_end < t_max {
        t_end = (t_end + 1.0).min(t_max);
        tail = envelope(t_end)?;
    }
    if tail >= tol / 10.0 {
        return Err(Error::TailTooLarge { t_max, tail });
    }
    let slot = ErrorSlot::new();
    let req = IntegrationRequest::new(
        |t: f64| {
            let term = ConicalOrder::new(t)
                .and_then(|o| conical_kernel(o, x))
                .and_then(|k| Ok(fhat(t)? * (k * t * (PI * t).tanh())));
            slot.value(term)
        },
        Interval::Finite { a: 0.0, b: t_end },
    )
    .options(options);
    let r = integrate(&req);
    let r = slot.finish(r)?.require_converged()?;
    Ok(InverseResult {
        value: r.value,
        // the envelope decays at least geometrically past the cutoff for the
        // families used here; the tail is folded in as a bound of one unit length
        est_error: r.est_error + tail,
        t_end,
        tail,
    })
}

fn check_t_cap(t: f64, t_cap: f64) -> Result<()> {
    if !(t <= t_cap) {
        return Err(Error::InvalidParameter {
            name: "t",
            detail: format!("t = {t} exceeds the verification cap {t_cap}"),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelIdentity {
    pub direct: f64,
    pub via_integral: f64,
    pub residual: f64,
}

/// |P_{it-1/2}(y) - (cosh(pi t)/pi) int_1^inf P_{it-1/2}(x)/(x+y) dx|
pub fn kernel_identity_residual(t: f64, y: f64) -> Result<KernelIdentity> {
    check_t_cap(t, DEFAULT_T_CAP)?;
    if !(y >= 1.0) {
        return Err(Error::Domain {
            what: "kernel_identity_residual",
            detail: format!("y = {y} is not >= 1"),
        });
    }
    let f = RealLineFunction::new(move |x: f64| Complex64::new(1.0 / (x + y), 0.0), 1.0)?;
    let integral = mf_forward(&f, t, 1e-12)?.value.re;
    let via_integral = (PI * t).cosh() / PI * integral;
    let direct = conical_p(ConicalOrder::new(t)?, y)?;
    Ok(KernelIdentity {
        direct,
        via_integral,
        residual: (direct - via_integral).abs(),
    })
}

/// (cosh(pi t)/pi) int_1^inf phi_z(x) P_{it-1/2}(x) dx, which equals f_{1/2+it}(z).
pub fn eigenfunction_via_transform(t: f64, z: Complex64) -> Result<Complex64> {
    check_t_cap(t, DEFAULT_T_CAP)?;
    let phi = PhiZ::new(z)?;
    let r = mf_forward(&phi.as_function(), t, 1e-12)?;
    Ok(r.value * ((PI * t).cosh() / PI))
}

/// (sin(pi mu)/pi) int_1^inf P_{mu-1}(x) phi_z(x) dx, which equals f_mu(z).
/// P_{mu-1} decays like x^(-Re mu), so the integrand decays with exponent 1 + Re mu.
pub fn general_mu_transform_eval(mu: LatentParameter, z: Complex64) -> Result<Complex64> {
    let phi = PhiZ::new(z)?;
    let nu = mu.mu() - 1.0;
    let decay = 1.0 + mu.mu().re;
    let slot = ErrorSlot::new();
    let req = IntegrationRequest::new(
        |x: f64| slot.value(legendre_p(nu, x).map(|p| p * phi.eval(x))),
        Interval::FromOne { decay_exponent: decay },
    )
    .options(QuadOptions {
        abs_tol: 1e-10,
        rel_tol: 1e-10,
        max_evals: 400_000,
    });
    let r = integrate(&req);
    let r = slot.finish(r)?.require_converged()?;
    let sin = crate::special::gamma::sin_pi(mu.mu());
    Ok(r.value * sin / PI)
}

/// Difference between the transform representation and the closed form.
pub fn transform_representation_residual(t: f64, z: Complex64) -> Result<f64> {
    let via = eigenfunction_via_transform(t, z)?;
    let closed = eigenfunction_eval(LatentParameter::critical(t)?, z)?;
    Ok((via - closed).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ForwardRoute {
    /// fhat from the kernel identity.
    ClosedForm,
    /// fhat by quadrature at every node of the inverse transform.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundTrip {
    pub recovered: Complex64,
    pub expected: Complex64,
    pub residual: f64,
    pub t_end: f64,
}

const FORWARD_TOL_IN_ROUND_TRIP: f64 = 1e-12;

/// Inverse transform of the transform of phi_z, evaluated at x.
pub fn round_trip(z: Complex64, x: f64, route: ForwardRoute, t_max: f64, tol: f64) -> Result<RoundTrip> {
    let phi = PhiZ::new(z)?;
    let f = phi.as_function();
    let fhat = CachedTransform::new(|t: f64| match route {
        ForwardRoute::ClosedForm => phi.transform_closed_form(t),
        // fhat decays like exp(-pi t); a coarser forward tolerance would hide
        // that decay behind quadrature noise and push the truncation point out
        ForwardRoute::Quadrature => mf_forward(&f, t, FORWARD_TOL_IN_ROUND_TRIP).map(|r| r.value),
    });
    let inv = mf_inverse(|t| fhat.eval(t), x, t_max, tol)?;
    let expected = phi.eval(x);
    Ok(RoundTrip {
        recovered: inv.value,
        expected,
        residual: (inv.value - expected).norm(),
        t_end: inv.t_end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn forward_examples() {
        let zero = RealLineFunction::new(|_| c(0.0, 0.0), 2.0).unwrap();
        assert_eq!(mf_forward(&zero, 1.0, 1e-10).unwrap().value, c(0.0, 0.0));
        let phi0 = PhiZ::new(c(0.0, 0.0)).unwrap().as_function();
        let r = mf_forward(&phi0, 0.0, 1e-11).unwrap();
        assert!((r.value - PI).norm() < 1e-9, "{r:?}");
        let r = mf_forward(&phi0, 1.0, 1e-11).unwrap();
        assert!((r.value - PI / PI.cosh()).norm() < 1e-10);
        assert!(r.value.im.abs() < 1e-10);
    }

    #[test]
    fn existence_condition() {
        assert!(matches!(
            RealLineFunction::new(|_| c(1.0, 0.0), 0.5),
            Err(Error::Existence { .. })
        ));
        let slow = RealLineFunction::new(|x: f64| c(x.powf(-0.5), 0.0), 0.5 + 1e-9);
        assert!(slow.is_ok());
    }

    #[test]
    fn kernel_integral_reference() {
        // pi P_{it-1/2}(y) / cosh(pi t), mpmath at 20 digits
        for (t, y, want) in [
            (0.5, 2.0, 1.011_338_682_796_156),
            (1.0, 5.0, 0.019_140_356_158_084_249),
            (0.0, 3.0, 2.622_057_554_292_119_8),
        ] {
            let f = RealLineFunction::new(move |x: f64| c(1.0 / (x + y), 0.0), 1.0).unwrap();
            let got = mf_forward(&f, t, 1e-12).unwrap().value.re;
            assert!((got - want).abs() < 1e-10, "t={t} y={y}: {got} vs {want}");
        }
    }

    #[test]
    fn kernel_identity_examples() {
        for (t, y, tol) in [(0.0, 1.0, 1e-7), (0.0, 5.0, 1e-7), (1.0, 2.0, 1e-6)] {
            let k = kernel_identity_residual(t, y).unwrap();
            assert!(k.residual < tol, "t={t} y={y}: {k:?}");
        }
        assert!(kernel_identity_residual(3.5, 2.0).is_err());
    }

    #[test]
    fn eigenfunction_representation() {
        let v = eigenfunction_via_transform(0.0, c(0.0, 0.0)).unwrap();
        assert!((v - 1.0).norm() < 1e-9);
        for (t, z) in [(0.0, c(0.4, 0.0)), (1.0, c(0.2, 0.3))] {
            assert!(transform_representation_residual(t, z).unwrap() < 1e-6);
        }
    }

    #[test]
    fn general_mu() {
        for (mu, z) in [
            (c(0.5, 0.0), c(0.0, 0.0)),
            (c(0.3, 0.0), c(0.5, 0.0)),
            (c(0.5, 1.0), c(0.0, 0.0)),
        ] {
            let mu = LatentParameter::new(mu).unwrap();
            let got = general_mu_transform_eval(mu, z).unwrap();
            let want = eigenfunction_eval(mu, z).unwrap();
            assert!((got - want).norm() < 1e-6, "{mu:?} {z}: {got} vs {want}");
        }
    }

    #[test]
    fn closed_form_transform_matches_quadrature() {
        for z in [c(0.3, 0.0), c(-0.5, 0.0), c(0.2, -0.4)] {
            let phi = PhiZ::new(z).unwrap();
            for t in [0.0, 0.7, 2.0] {
                let q = mf_forward(&phi.as_function(), t, 1e-12).unwrap().value;
                let cf = phi.transform_closed_form(t).unwrap();
                assert!((q - cf).norm() < 1e-9, "z={z} t={t}: {q} vs {cf}");
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let r = mf_inverse(|_| Ok(c(0.0, 0.0)), 2.0, 10.0, 1e-6).unwrap();
        assert_eq!(r.value, c(0.0, 0.0));
        let rt = round_trip(c(0.0, 0.0), 2.0, ForwardRoute::ClosedForm, 30.0, 1e-6).unwrap();
        assert!(rt.residual < 1e-4, "{rt:?}");
        assert!((rt.expected - 1.0 / 3.0).norm() < 1e-15);
        let tail = mf_inverse(|_| Ok(c(1.0, 0.0)), 2.0, 5.0, 1e-6);
        assert!(matches!(tail, Err(Error::TailTooLarge { .. })));
    }

    #[test]
    fn cached_transform_is_shared() {
        let calls = std::sync::atomic::AtomicUsize::new(0);
        let f = CachedTransform::new(|t: f64| {
            calls.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            Ok(c((-t).exp(), 0.0))
        });
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| {
                    for k in 0..50 {
                        f.eval(k as f64 * 0.1).unwrap();
                    }
                });
            }
        });
        assert_eq!(f.cached_points(), 50);
        assert!(calls.load(std::sync::atomic::Ordering::Relaxed) >= 50);
    }
}
