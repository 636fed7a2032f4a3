//! Legendre functions of the first kind P_nu(x) on x >= 1, any complex degree,
//! and the conical functions P_{it-1/2}(x).
//!
//! P_nu(x) = 2F1(-nu, nu+1; 1; (1-x)/2). The hypergeometric engine takes the
//! raw series near x = 1, the Pfaff form for moderate x and the Pfaff +
//! connection expansion in 2/(x+1) for large x, which carries the full
//! large-x asymptotic series (not just its leading term).

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use super::gamma::gamma;
use super::hypergeometric::{evaluate, Arg, HypergeometricOptions, HypergeometricParams};
use crate::error::{Error, Result};

/// Beyond this |Im nu| the gamma factors of the large-x expansion underflow.
const MAX_IMAG_DEGREE: f64 = 200.0;
const MAX_X: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConicalOrder {
    t: f64,
}

impl ConicalOrder {
    pub fn new(t: f64) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "t",
                detail: format!("conical order must be finite and >= 0, got {t}"),
            });
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// nu = it - 1/2
    pub fn degree(&self) -> Complex64 {
        Complex64::new(-0.5, self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LegendreOptions {
    pub hyper: HypergeometricOptions,
}

impl LegendreOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            hyper: HypergeometricOptions {
                tol,
                ..Default::default()
            },
        }
    }
}

pub fn legendre_p(nu: Complex64, x: f64) -> Result<Complex64> {
    legendre_p_with(nu, x, &LegendreOptions::default())
}

pub fn legendre_p_with(nu: Complex64, x: f64, opts: &LegendreOptions) -> Result<Complex64> {
    if !(x >= 1.0) {
        return Err(Error::Domain {
            what: "legendre_p",
            detail: format!("x = {x} is not >= 1"),
        });
    }
    if x > MAX_X || nu.im.abs() > MAX_IMAG_DEGREE || !(nu.re.is_finite() && nu.im.is_finite()) {
        return Err(out_of_range(nu, x, "outside |Im nu| <= 200, x <= 1e300".into()));
    }
    if x == 1.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let p = HypergeometricParams::new(-nu, nu + 1.0, Complex64::new(1.0, 0.0))?;
    // 1 - z = (1 + x)/2 exactly enough; z = (1 - x)/2
    let arg = Arg {
        z: Complex64::new((1.0 - x) / 2.0, 0.0),
        omz: Complex64::new((1.0 + x) / 2.0, 0.0),
    };
    let e = evaluate(p, arg, None, &opts.hyper).map_err(|err| match err {
        Error::OutOfRange { detail, .. } => out_of_range(nu, x, detail),
        other => other,
    })?;
    let value = e.value;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(out_of_range(nu, x, format!("overflow to {value}")));
    }
    let rounding = 32.0 * f64::EPSILON * e.scale;
    if rounding > opts.hyper.tol * value.norm().max(1.0) {
        return Err(out_of_range(
            nu,
            x,
            format!("series cancellation, rounding error ~{rounding:e}"),
        ));
    }
    Ok(value)
}

fn out_of_range(nu: Complex64, x: f64, detail: String) -> Error {
    Error::OutOfRange {
        what: "legendre_p",
        detail: format!("nu = {nu}, x = {x}: {detail}"),
    }
}

/// P_{it-1/2}(x), real for real t and x >= 1.
pub fn conical_p(order: ConicalOrder, x: f64) -> Result<f64> {
    conical_p_with(order, x, &LegendreOptions::default())
}

pub fn conical_p_with(order: ConicalOrder, x: f64, opts: &LegendreOptions) -> Result<f64> {
    Ok(legendre_p_with(order.degree(), x, opts)?.re)
}

/// Leading term of P_{it-1/2}(x) as x -> infinity. Decays like x^{-1/2}
/// (times log(8x) at t = 0). Relative error is O(1/x).
pub fn conical_leading_asymptotic(order: ConicalOrder, x: f64) -> Result<f64> {
    let t = order.t();
    if t == 0.0 {
        return Ok(SQRT_2 / (PI * x.sqrt()) * (8.0 * x).ln());
    }
    let it = Complex64::new(0.0, t);
    let amp = gamma(it)? / (PI.sqrt() * gamma(it + 0.5)?);
    let power = Complex64::new(2.0 * x, 0.0).powc(it - 0.5);
    Ok(2.0 * (amp * power).re)
}
