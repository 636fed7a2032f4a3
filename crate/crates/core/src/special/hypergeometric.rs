//! Gauss hypergeometric function 2F1(a, b; c; z).
//!
//! Four evaluation routes, picked by the modulus of the transformed argument:
//!
//! * `Series`: the defining power series in z.
//! * `Pfaff`: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1)), for z on the negative side.
//! * `Connection`: the two-term expansion in 1-z, for z near 1.
//! * `PfaffConnection`: Pfaff first, then the expansion in 1/(1-z), for large negative z.
//!
//! When c-a-b is close to an integer the connection coefficients are singular
//! (the logarithmic case). F is entire in `a`, so there the value is taken as the
//! mean of F over a small circle in `a`, which is exact up to aliasing terms of
//! order rho^N.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::gamma::{gamma, is_pole, rgamma};
use crate::error::{check_finite, Error, Result};

/// Distance from an integer below which c-a-b is treated as degenerate.
const DEGENERATE_GAP: f64 = 0.1;
const CIRCLE_RADIUS: f64 = 0.3;
const CIRCLE_POINTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypergeometricParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl HypergeometricParams {
    /// Rejects c = 0, -1, -2, ...
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        if is_pole(c) {
            return Err(Error::InvalidParameter {
                name: "c",
                detail: format!("c = {c} is zero or a negative integer"),
            });
        }
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    detail: format!("{name} = {v} is not finite"),
                });
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn real(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into())
    }

    fn polynomial_degree(&self) -> Option<usize> {
        [self.a, self.b]
            .into_iter()
            .filter(|&p| is_pole(p))
            .map(|p| (-p.re) as usize)
            .min()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricOptions {
    /// Accuracy target; results whose rounding error estimate exceeds
    /// `tol * max(1, |F|)` are rejected.
    pub tol: f64,
    pub max_terms: usize,
    /// Largest transformed-argument modulus accepted for a series.
    pub max_modulus: f64,
}

impl Default for HypergeometricOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_terms: 20_000,
            max_modulus: 0.96,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    Series,
    Pfaff,
    Connection,
    PfaffConnection,
}

/// A point together with its complement 1 - z, so callers close to z = 1
/// can hand over 1 - z without cancellation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Arg {
    pub z: Complex64,
    pub omz: Complex64,
}

impl Arg {
    pub fn new(z: Complex64) -> Self {
        Self { z, omz: 1.0 - z }
    }

    pub fn from_complement(omz: Complex64) -> Self {
        Self { z: 1.0 - omz, omz }
    }

    fn pfaff(self) -> Self {
        Self {
            z: -self.z / self.omz,
            omz: 1.0 / self.omz,
        }
    }

    fn route_moduli(self) -> [(Route, f64); 4] {
        let zn = self.z.norm();
        let on = self.omz.norm();
        [
            (Route::Series, zn),
            (Route::Pfaff, zn / on),
            (Route::Connection, on),
            (Route::PfaffConnection, 1.0 / on),
        ]
    }
}

/// A value together with the largest partial magnitude met while forming it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Evaluated {
    pub value: Complex64,
    pub scale: f64,
}

/// The route `gauss_2f1` would take for `z`, or `None` when no route converges.
pub fn select_route(z: Complex64, opts: &HypergeometricOptions) -> Option<Route> {
    pick_route(Arg::new(z), opts)
}

fn pick_route(arg: Arg, opts: &HypergeometricOptions) -> Option<Route> {
    if arg.z.norm() <= 0.5 {
        return Some(Route::Series);
    }
    arg.route_moduli()
        .into_iter()
        .filter(|(_, r)| *r <= opts.max_modulus)
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(route, _)| route)
}

pub fn gauss_2f1(p: HypergeometricParams, z: Complex64) -> Result<Complex64> {
    gauss_2f1_with(p, z, &HypergeometricOptions::default())
}

pub fn gauss_2f1_with(p: HypergeometricParams, z: Complex64, opts: &HypergeometricOptions) -> Result<Complex64> {
    check_argument(z)?;
    finish(evaluate(p, Arg::new(z), None, opts)?, opts)
}

/// 2F1 at z = 1 - `one_minus_z`, with the complement supplied exactly.
pub fn gauss_2f1_complement(
    p: HypergeometricParams,
    one_minus_z: Complex64,
    opts: &HypergeometricOptions,
) -> Result<Complex64> {
    if !(one_minus_z.re.is_finite() && one_minus_z.im.is_finite()) || (one_minus_z.im == 0.0 && one_minus_z.re <= 0.0) {
        return Err(Error::Domain {
            what: "gauss_2f1",
            detail: format!("1 - z = {one_minus_z} puts z on the branch cut [1, inf)"),
        });
    }
    finish(evaluate(p, Arg::from_complement(one_minus_z), None, opts)?, opts)
}

/// Forces one evaluation route; used to cross-check routes against each other.
pub fn gauss_2f1_route(
    p: HypergeometricParams,
    z: Complex64,
    route: Route,
    opts: &HypergeometricOptions,
) -> Result<Complex64> {
    check_argument(z)?;
    finish(evaluate(p, Arg::new(z), Some(route), opts)?, opts)
}

fn check_argument(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain {
            what: "gauss_2f1",
            detail: format!("z = {z} is not finite"),
        });
    }
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::Domain {
            what: "gauss_2f1",
            detail: format!("z = {} lies on the branch cut [1, inf)", z.re),
        });
    }
    Ok(())
}

fn finish(e: Evaluated, opts: &HypergeometricOptions) -> Result<Complex64> {
    let value = check_finite("gauss_2f1", e.value)?;
    let rounding = 32.0 * f64::EPSILON * e.scale;
    if rounding > opts.tol * value.norm().max(1.0) {
        return Err(Error::OutOfRange {
            what: "gauss_2f1",
            detail: format!(
                "cancellation: partial magnitudes reach {:e}, rounding error ~{rounding:e}",
                e.scale
            ),
        });
    }
    Ok(value)
}

pub(crate) fn evaluate(
    p: HypergeometricParams,
    arg: Arg,
    forced: Option<Route>,
    opts: &HypergeometricOptions,
) -> Result<Evaluated> {
    if arg.z == Complex64::new(0.0, 0.0) {
        return Ok(Evaluated {
            value: Complex64::new(1.0, 0.0),
            scale: 1.0,
        });
    }
    if forced.is_none() {
        if let Some(degree) = p.polynomial_degree() {
            if degree <= 200 {
                return series(p.a, p.b, p.c, arg.z, opts);
            }
        }
    }
    let route = match forced {
        Some(r) => r,
        None => pick_route(arg, opts).ok_or_else(|| Error::NonConvergence {
            what: "gauss_2f1",
            detail: format!(
                "no transformation brings z = {} below modulus {}",
                arg.z, opts.max_modulus
            ),
        })?,
    };
    match route {
        Route::Series => series(p.a, p.b, p.c, arg.z, opts),
        Route::Connection => connection(p, arg, opts),
        Route::Pfaff | Route::PfaffConnection => {
            let inner = HypergeometricParams {
                a: p.a,
                b: p.c - p.b,
                c: p.c,
            };
            let pre = arg.omz.powc(-p.a);
            let w = arg.pfaff();
            let e = if route == Route::Pfaff {
                series(inner.a, inner.b, inner.c, w.z, opts)?
            } else {
                connection(inner, w, opts)?
            };
            Ok(Evaluated {
                value: pre * e.value,
                scale: pre.norm() * e.scale,
            })
        }
    }
}

/// Raw power series. Terminates early for polynomial cases.
pub(crate) fn series(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
    opts: &HypergeometricOptions,
) -> Result<Evaluated> {
    let zn = z.norm();
    let terminating = is_pole(a) || is_pole(b);
    if zn >= 1.0 && !terminating {
        return Err(Error::NonConvergence {
            what: "gauss_2f1 series",
            detail: format!("|z| = {zn} >= 1"),
        });
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut scale = 1.0_f64;
    let mut quiet = 0;
    // tail after term n is roughly |term| * zn / (1 - zn)
    let tail_factor = if zn < 1.0 { 1.0 / (1.0 - zn) } else { 1.0 };
    for n in 0..opts.max_terms {
        let nf = n as f64;
        let num = (a + nf) * (b + nf);
        if num == Complex64::new(0.0, 0.0) {
            return Ok(Evaluated { value: sum, scale });
        }
        term *= num / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        let tn = term.norm();
        scale = scale.max(tn);
        if tn * tail_factor <= 0.25 * f64::EPSILON * sum.norm() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(Evaluated { value: sum, scale });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "gauss_2f1 series",
        detail: format!("{} terms at |z| = {zn}", opts.max_terms),
    })
}

fn distance_to_integer(s: Complex64) -> f64 {
    Complex64::new(s.re - s.re.round(), s.im).norm()
}

fn connection(p: HypergeometricParams, arg: Arg, opts: &HypergeometricOptions) -> Result<Evaluated> {
    let s = p.c - p.a - p.b;
    let gap = distance_to_integer(s);
    // the two connection terms grow like |1-z|^(-|s - m|) / |s - m| and cancel;
    // the cancellation only bites while |s - m| log|1/(1-z)| is small
    let log_size = arg.omz.norm().ln().abs().max(1.0);
    if gap >= DEGENERATE_GAP || gap * log_size >= 2.0 {
        return connection_regular(p, arg, opts);
    }
    // keeps |1-z|^(shift) bounded by e^4 and the circle at least radius/2 from the pole
    let radius = CIRCLE_RADIUS.min(4.0 / log_size);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0_f64;
    for j in 0..CIRCLE_POINTS {
        let angle = 2.0 * PI * (j as f64 + 0.5) / CIRCLE_POINTS as f64;
        let shift = Complex64::from_polar(radius, angle);
        let shifted = HypergeometricParams { a: p.a + shift, ..p };
        let e = connection_regular(shifted, arg, opts)?;
        sum += e.value;
        scale = scale.max(e.scale);
    }
    Ok(Evaluated {
        value: sum / CIRCLE_POINTS as f64,
        scale,
    })
}

fn connection_regular(p: HypergeometricParams, arg: Arg, opts: &HypergeometricOptions) -> Result<Evaluated> {
    let HypergeometricParams { a, b, c } = p;
    let s = c - a - b;
    let y = arg.omz;
    let gc = gamma(c)?;
    let coef1 = gc * gamma(s)? * rgamma(c - a) * rgamma(c - b);
    let coef2 = gc * gamma(-s)? * rgamma(a) * rgamma(b);
    let f1 = series(a, b, 1.0 - s, y, opts)?;
    let f2 = series(c - a, c - b, 1.0 + s, y, opts)?;
    let ys = y.powc(s);
    let t1 = coef1 * f1.value;
    let t2 = coef2 * ys * f2.value;
    Ok(Evaluated {
        value: t1 + t2,
        scale: (coef1.norm() * f1.scale).max((coef2 * ys).norm() * f2.scale),
    })
}
