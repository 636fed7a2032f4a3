//! Hill's latent eigensequences and eigenfunctions of the Hilbert matrix.
//!
//! For mu in the strip 0 < Re mu <= 1/2, the function
//! f_mu(z) = (1-z)^(mu-1) 2F1(mu, mu; 1; z) satisfies H f_mu = M f_mu with
//! M = pi / sin(pi mu), where H acts either on Taylor coefficients or as
//! (Hf)(z) = int_0^1 f(s) / (1 - s z) ds. Its Taylor coefficients are
//! c_n = x_n / M with Hill's sequence x_n.

use std::f64::consts::PI;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_unit_split, ErrorSlot, IntegrationResult, QuadOptions};
use crate::series::{apply_hilbert_series, exact_complex, PowerSeries, Scalar};
use crate::special::gamma::sin_pi;
use crate::special::hypergeometric::{
    gauss_2f1_complement, gauss_2f1_with, HypergeometricOptions, HypergeometricParams,
};
use crate::special::legendre::legendre_p_with;
use crate::special::LegendreOptions;

/// Largest n at which the alternating sum is used as a cross-check.
pub const HILL_CHECK_MAX_N: usize = 30;
pub const HILL_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatentParameter {
    mu: Complex64,
}

impl LatentParameter {
    /// Accepts 0 < Re mu <= 1/2. On the line Re mu = 1/2 the conjugate with
    /// Im mu >= 0 is kept, since mu and its conjugate give the same function.
    pub fn new(mu: Complex64) -> Result<Self> {
        if !(mu.re > 0.0 && mu.re <= 0.5 && mu.im.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "mu",
                detail: format!("{mu} is outside the strip 0 < Re mu <= 1/2"),
            });
        }
        let mu = if mu.re == 0.5 && mu.im < 0.0 { mu.conj() } else { mu };
        Ok(Self { mu })
    }

    pub fn real(mu: f64) -> Result<Self> {
        Self::new(Complex64::new(mu, 0.0))
    }

    /// mu = 1/2 + it
    pub fn critical(t: f64) -> Result<Self> {
        Self::new(Complex64::new(0.5, t))
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn eigenvalue(&self) -> Eigenvalue {
        Eigenvalue {
            m: PI / sin_pi(self.mu),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    m: Complex64,
}

impl Eigenvalue {
    pub fn new(m: Complex64) -> Result<Self> {
        if !(m.re > 0.0 && m.im.is_finite()) {
            return Err(Error::Domain {
                what: "eigenvalue",
                detail: format!("M = {m} needs Re M > 0"),
            });
        }
        Ok(Self { m })
    }

    pub fn value(&self) -> Complex64 {
        self.m
    }
}

/// Solution of pi / sin(pi mu) = M in the strip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatentSolution {
    pub mu: LatentParameter,
    /// Set for real M in (0, pi), where 1/2 - it solves the equation too.
    pub conjugate_pair: bool,
}

pub fn latent_parameter_from_eigenvalue(m: Complex64) -> Result<LatentSolution> {
    let m = Eigenvalue::new(m)?.value();
    if m.im == 0.0 && m.re < PI {
        let t = (PI / m.re).acosh() / PI;
        return Ok(LatentSolution {
            mu: LatentParameter::critical(t)?,
            conjugate_pair: true,
        });
    }
    let mu = strip_representative(asin_stable(PI / m) / PI);
    Ok(LatentSolution {
        mu: LatentParameter::new(mu)?,
        conjugate_pair: false,
    })
}

/// asin w = -i log(iw + sqrt(1 - w^2)); the two candidate log arguments
/// multiply to 1, so the larger one is used to avoid cancellation.
fn asin_stable(w: Complex64) -> Complex64 {
    let i = Complex64::i();
    let root = (1.0 - w * w).sqrt();
    let plus = i * w + root;
    let minus = root - i * w;
    let log = if plus.norm() >= minus.norm() {
        plus.ln()
    } else {
        -minus.ln()
    };
    -i * log
}

/// Picks mu or 1 - mu (mod 2) with real part in (0, 1/2]; both have the same sine.
fn strip_representative(mu: Complex64) -> Complex64 {
    let reduce = |z: Complex64| Complex64::new(z.re - 2.0 * ((z.re + 0.5) / 2.0).floor(), z.im);
    let a = reduce(mu);
    let b = reduce(1.0 - mu);
    let mut pick = if (a.re - 0.25).abs() <= (b.re - 0.25).abs() {
        a
    } else {
        b
    };
    // the critical line is reached only up to rounding
    if (pick.re - 0.5).abs() < 1e-12 {
        pick.re = 0.5;
    }
    pick
}

/// Taylor coefficients c_0..c_n_max of f_mu as the Cauchy product of
/// (1-z)^(mu-1) = sum (1-mu)_k/k! z^k and 2F1(mu,mu;1;z) = sum ((mu)_k/k!)^2 z^k.
pub fn taylor_coefficients<T: Scalar>(mu: T, n_max: usize) -> Vec<T> {
    let one = T::one();
    let mut binom = Vec::with_capacity(n_max + 1);
    let mut hyper = Vec::with_capacity(n_max + 1);
    let (mut b, mut a) = (one.clone(), one.clone());
    for k in 0..=n_max {
        if k > 0 {
            let km1 = T::from_ratio(k as i64 - 1, 1);
            b = (b * (km1.clone() + one.clone() - mu.clone())).div_index(k);
            a = (a * (km1 + mu.clone())).div_index(k);
        }
        binom.push(b.clone());
        hyper.push(a.clone() * a.clone());
    }
    (0..=n_max)
        .map(|n| (0..=n).fold(T::zero(), |acc, k| acc + binom[n - k].clone() * hyper[k].clone()))
        .collect()
}

/// Hill's alternating sum divided by Gamma(mu) Gamma(1-mu):
/// sum_k C(n,k) (-1)^k (mu)_k (1-mu)_k / (k!)^2. Exact in rational arithmetic,
/// catastrophically cancelling in floating point for large n.
pub fn hill_alternating_sum<T: Scalar>(mu: T, n_max: usize) -> Vec<T> {
    let lambda = mu.clone() * (T::one() - mu);
    // g_k = (mu)_k (1-mu)_k / (k!)^2, using (mu+j)(1-mu+j) = j^2 + j + lambda
    let mut g = Vec::with_capacity(n_max + 1);
    let mut gk = T::one();
    for k in 0..=n_max {
        if k > 0 {
            let j = (k - 1) as i64;
            gk = (gk * (T::from_ratio(j * j + j, 1) + lambda.clone()))
                .div_index(k)
                .div_index(k);
        }
        g.push(gk.clone());
    }
    (0..=n_max)
        .map(|n| {
            let mut binom = T::one();
            let mut acc = T::zero();
            for (k, gk) in g.iter().enumerate().take(n + 1) {
                let term = binom.clone() * gk.clone();
                acc = if k % 2 == 0 { acc + term } else { acc - term };
                binom = (binom * T::from_ratio((n - k) as i64, 1)).div_index(k + 1);
            }
            acc
        })
        .collect()
}

/// Taylor coefficients c_n(mu) of f_mu in double precision.
pub fn eigenfunction_coefficients(mu: LatentParameter, n_max: usize) -> Vec<Complex64> {
    taylor_coefficients(mu.mu(), n_max)
}

/// Hill's sequence x_n = M c_n. The Cauchy-product route is returned; for
/// n <= 30 it is checked against the alternating sum evaluated exactly at
/// the rational value of mu.
pub fn hill_sequence(mu: LatentParameter, n_max: usize) -> Result<Vec<Complex64>> {
    let m = mu.eigenvalue().value();
    let x: Vec<Complex64> = eigenfunction_coefficients(mu, n_max)
        .into_iter()
        .map(|c| m * c)
        .collect();
    let check = n_max.min(HILL_CHECK_MAX_N);
    let oracle = hill_alternating_sum_exact(mu, check)?;
    for (n, (xn, yn)) in x.iter().zip(&oracle).enumerate() {
        let yn = m * yn;
        let relative = (xn - yn).norm() / yn.norm().max(f64::MIN_POSITIVE);
        if !(relative <= HILL_CHECK_TOL) {
            return Err(Error::Cancellation {
                n,
                relative,
                tolerance: HILL_CHECK_TOL,
            });
        }
    }
    Ok(x)
}

/// The alternating sum (without the factor M) in exact arithmetic.
pub fn hill_alternating_sum_exact(mu: LatentParameter, n_max: usize) -> Result<Vec<Complex64>> {
    let exact: Complex<BigRational> = exact_complex(mu.mu())?;
    Ok(hill_alternating_sum(exact, n_max)
        .iter()
        .map(Scalar::to_complex64)
        .collect())
}

fn params(mu: LatentParameter) -> HypergeometricParams {
    HypergeometricParams {
        a: mu.mu(),
        b: mu.mu(),
        c: Complex64::new(1.0, 0.0),
    }
}

fn check_disk(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain {
            what: "eigenfunction",
            detail: format!("|z| = {} is not < 1", z.norm()),
        });
    }
    Ok(())
}

/// f_mu(z) = (1-z)^(mu-1) 2F1(mu, mu; 1; z), principal power (Re(1-z) > 0 on the disk).
pub fn eigenfunction_eval(mu: LatentParameter, z: Complex64) -> Result<Complex64> {
    eigenfunction_eval_with(mu, z, &HypergeometricOptions::default())
}

pub fn eigenfunction_eval_with(mu: LatentParameter, z: Complex64, opts: &HypergeometricOptions) -> Result<Complex64> {
    check_disk(z)?;
    let f = gauss_2f1_with(params(mu), z, opts)?;
    Ok((1.0 - z).powc(mu.mu() - 1.0) * f)
}

/// f_mu at the real point 1 - `one_minus_s`, keeping the complement exact.
pub fn eigenfunction_eval_complement(mu: LatentParameter, one_minus_s: f64) -> Result<Complex64> {
    if !(one_minus_s > 0.0 && one_minus_s <= 2.0) {
        return Err(Error::Domain {
            what: "eigenfunction",
            detail: format!("1 - s = {one_minus_s} is outside (0, 2]"),
        });
    }
    let omz = Complex64::new(one_minus_s, 0.0);
    let f = gauss_2f1_complement(params(mu), omz, &HypergeometricOptions::default())?;
    Ok(omz.powc(mu.mu() - 1.0) * f)
}

/// The same function through P_{mu-1}((1+z)/(1-z)) / (1-z), real 0 <= z < 1.
pub fn eigenfunction_legendre_eval(mu: LatentParameter, z: f64) -> Result<Complex64> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::Domain {
            what: "eigenfunction_legendre_eval",
            detail: format!("z = {z} is outside [0, 1)"),
        });
    }
    let x = (1.0 + z) / (1.0 - z);
    let p = legendre_p_with(mu.mu() - 1.0, x, &LegendreOptions::default())?;
    Ok(p / (1.0 - z))
}

/// int_0^1 f(s) / (1 - s z) ds; `f` receives s and 1 - s.
pub fn apply_hilbert_integral<F>(f: F, z: Complex64, options: &QuadOptions) -> Result<IntegrationResult<Complex64>>
where
    F: Fn(f64, f64) -> Complex64,
{
    if !(z.norm() < 1.0) {
        return Err(Error::Domain {
            what: "apply_hilbert_integral",
            detail: format!("|z| = {} is not < 1", z.norm()),
        });
    }
    integrate_unit_split(
        |s, oms| {
            // 1 - s z = (1 - s) + s (1 - z)
            f(s, oms) / (oms + s * (1.0 - z))
        },
        options,
    )
}

/// Both sides of H f_mu = M f_mu at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenRelation {
    pub integral: Complex64,
    pub expected: Complex64,
    pub residual: f64,
    pub est_error: f64,
}

pub fn eigen_relation(mu: LatentParameter, z: Complex64, options: &QuadOptions) -> Result<EigenRelation> {
    let slot = ErrorSlot::new();
    let result = apply_hilbert_integral(|_, oms| slot.value(eigenfunction_eval_complement(mu, oms)), z, options);
    let result = slot.finish(result)?;
    let expected = mu.eigenvalue().value() * eigenfunction_eval(mu, z)?;
    Ok(EigenRelation {
        integral: result.value,
        expected,
        residual: (result.value - expected).norm(),
        est_error: result.est_error,
    })
}

/// max_{n < rows} |(H x^(N))_n - M x_n| for the Hill sequence truncated at N.
/// Decays only like N^(-1/2) since x is not square summable.
pub fn truncated_eigen_residual(mu: LatentParameter, truncation: usize, rows: usize) -> Result<f64> {
    let x = hill_sequence(mu, truncation.max(rows))?;
    let m = mu.eigenvalue().value();
    let hx = apply_hilbert_series(&PowerSeries::new(x[..=truncation].to_vec())?, rows)?;
    Ok(hx
        .coeffs()
        .iter()
        .zip(&x)
        .map(|(b, xn)| (b - m * xn).norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceProbe {
    pub n: Vec<usize>,
    pub partial_sums: Vec<f64>,
    pub quadrupled_sums: Vec<f64>,
    pub ratios: Vec<f64>,
    pub delta: f64,
    pub divergent_trend: bool,
}

/// Partial sums S_N = sum_{n<=N} |x_n|^2 at each N and 4N; the trend is
/// divergent when every ratio S_4N / S_N exceeds 1 + delta.
pub fn ell2_divergence_probe(mu: LatentParameter, n_list: &[usize], delta: f64) -> Result<DivergenceProbe> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter {
            name: "n_list",
            detail: "must be a non-empty increasing list".into(),
        });
    }
    let top = 4 * n_list[n_list.len() - 1];
    let x = hill_sequence(mu, top)?;
    let mut cumulative = Vec::with_capacity(top + 1);
    let mut s = 0.0;
    for xn in &x {
        s += xn.norm_sqr();
        cumulative.push(s);
    }
    let partial_sums: Vec<f64> = n_list.iter().map(|&n| cumulative[n]).collect();
    let quadrupled_sums: Vec<f64> = n_list.iter().map(|&n| cumulative[4 * n]).collect();
    let ratios: Vec<f64> = partial_sums.iter().zip(&quadrupled_sums).map(|(a, b)| b / a).collect();
    let divergent_trend = ratios.iter().all(|r| *r > 1.0 + delta);
    Ok(DivergenceProbe {
        n: n_list.to_vec(),
        partial_sums,
        quadrupled_sums,
        ratios,
        delta,
        divergent_trend,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lp(re: f64, im: f64) -> LatentParameter {
        LatentParameter::new(c(re, im)).unwrap()
    }

    #[test]
    fn strip_and_canonical_form() {
        assert!(LatentParameter::real(0.0).is_err());
        assert!(LatentParameter::real(0.6).is_err());
        assert_eq!(lp(0.5, -1.0).mu(), c(0.5, 1.0));
        assert_eq!(lp(0.3, -1.0).mu(), c(0.3, -1.0));
        let m = lp(0.5, 1.0).eigenvalue().value();
        assert!((m - PI / PI.cosh()).norm() < 1e-15);
    }

    #[test]
    fn hill_examples() {
        let x = hill_sequence(lp(0.5, 0.0), 2).unwrap();
        assert!((x[0].re - PI).abs() < 1e-12);
        assert!((x[1].re - 0.75 * PI).abs() < 1e-12);
        let x = hill_sequence(lp(0.5, 1.0), 0).unwrap();
        assert!((x[0] - PI / PI.cosh()).norm() < 1e-14);
    }

    #[test]
    fn exact_routes_coincide() {
        // both routes are exact at a rational mu, so they must agree exactly
        let half = BigRational::from_ratio(1, 2);
        assert_eq!(taylor_coefficients(half.clone(), 30), hill_alternating_sum(half, 30));
        let mu = Complex::new(BigRational::from_ratio(1, 2), BigRational::from_ratio(3, 4));
        assert_eq!(taylor_coefficients(mu.clone(), 20), hill_alternating_sum(mu, 20));
    }

    #[test]
    fn routes_agree_in_double() {
        for mu in [lp(0.5, 0.0), lp(0.3, 0.0), lp(0.5, 1.0), lp(0.1, 2.0)] {
            let x = hill_sequence(mu, 30).unwrap();
            assert_eq!(x.len(), 31);
        }
    }

    #[test]
    fn coefficient_recurrence() {
        // c_{n+1} (n+1)^2 = ((n+1)^2 + n^2 - lambda) c_n - n^2 c_{n-1}, lambda = mu(1-mu)
        for mu in [c(0.5, 0.0), c(0.3, 0.0), c(0.5, 1.0), c(0.2, -0.7)] {
            let cn = taylor_coefficients(mu, 200);
            let lambda = mu * (1.0 - mu);
            for n in 1..200 {
                let k = n as f64;
                let lhs = cn[n + 1] * (k + 1.0).powi(2);
                let rhs = cn[n] * ((k + 1.0).powi(2) + k * k - lambda) - cn[n - 1] * k * k;
                assert!((lhs - rhs).norm() < 1e-12 * (k + 1.0).powi(2) * cn[n].norm());
            }
        }
    }

    #[test]
    fn eigenfunction_reference_values() {
        // mpmath (1-z)^(mu-1) hyp2f1(mu, mu, 1, z)
        let cases = [
            (c(0.5, 0.0), c(0.5, 0.0), c(1.669_253_683_348_146_5, 0.0)),
            (c(0.3, 0.0), c(0.5, 0.0), c(1.720_083_651_198_449_5, 0.0)),
            (
                c(0.5, 1.0),
                c(0.3, 0.3),
                c(0.972_801_800_644_850_2, -0.182_869_074_915_172_87),
            ),
            (c(0.5, 0.5), c(-0.4, 0.0), c(0.839_407_428_228_101, 0.0)),
            (c(0.5, 0.0), c(0.999, 0.0), c(97.460_154_986_349_67, 0.0)),
            (
                c(0.1, 0.0),
                c(0.0, 0.9),
                c(0.600_040_043_834_247_1, 0.473_159_598_702_638_2),
            ),
            (c(0.5, 1.0), c(0.5, 0.0), c(0.630_999_756_300_876_8, 0.0)),
        ];
        for (mu, z, want) in cases {
            let got = eigenfunction_eval(LatentParameter::new(mu).unwrap(), z).unwrap();
            assert!((got - want).norm() < 1e-12 * want.norm(), "mu={mu} z={z}: {got}");
        }
        assert_eq!(eigenfunction_eval(lp(0.3, 2.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!(eigenfunction_eval(lp(0.3, 0.0), c(0.6, 0.8)).is_err());
    }

    #[test]
    fn legendre_route() {
        for mu in [lp(0.5, 0.0), lp(0.3, 0.0), lp(0.5, 1.0), lp(0.1, 0.4)] {
            for z in [0.0, 0.1, 0.3, 0.5, 0.8, 0.95, 0.999] {
                let a = eigenfunction_eval(mu, c(z, 0.0)).unwrap();
                let b = eigenfunction_legendre_eval(mu, z).unwrap();
                assert!(
                    (a - b).norm() < 1e-9 * a.norm().max(1.0),
                    "mu={:?} z={z}: {a} vs {b}",
                    mu
                );
                let s = eigenfunction_eval_complement(mu, 1.0 - z).unwrap();
                assert!((a - s).norm() < 1e-12 * a.norm().max(1.0));
            }
        }
        let v = eigenfunction_legendre_eval(lp(0.5, 1.0), 0.5).unwrap();
        assert!(v.im.abs() < 1e-10);
        assert!(eigenfunction_legendre_eval(lp(0.5, 0.0), 1.0).is_err());
    }

    #[test]
    fn taylor_matches_hill() {
        let mu = lp(0.5, 0.0);
        let x = hill_sequence(mu, 20).unwrap();
        let cn = eigenfunction_coefficients(mu, 20);
        for n in 0..=20 {
            assert!((x[n] / PI - cn[n]).norm() < 1e-13);
        }
    }

    #[test]
    fn integral_operator() {
        let opts = QuadOptions::with_tol(1e-12);
        let r = apply_hilbert_integral(|_, _| c(1.0, 0.0), c(0.0, 0.0), &opts).unwrap();
        assert!((r.value - 1.0).norm() < 1e-14);
        let r = apply_hilbert_integral(|_, _| c(1.0, 0.0), c(0.5, 0.0), &opts).unwrap();
        assert!((r.value - 2.0 * 2f64.ln()).norm() < 1e-13);
        let e = eigen_relation(lp(0.5, 0.0), c(0.3, 0.0), &QuadOptions::with_tol(1e-10)).unwrap();
        assert!(e.residual < 1e-8, "{e:?}");
        assert!(apply_hilbert_integral(|_, _| c(1.0, 0.0), c(1.0, 0.0), &opts).is_err());
    }

    #[test]
    fn eigenvalue_inversion() {
        let s = latent_parameter_from_eigenvalue(c(PI, 0.0)).unwrap();
        assert!((s.mu.mu() - 0.5).norm() < 1e-12);
        let s = latent_parameter_from_eigenvalue(c(2.0 * PI, 0.0)).unwrap();
        assert!((s.mu.mu() - 1.0 / 6.0).norm() < 1e-12 && !s.conjugate_pair);
        let s = latent_parameter_from_eigenvalue(c(PI / PI.cosh(), 0.0)).unwrap();
        assert!((s.mu.mu() - c(0.5, 1.0)).norm() < 1e-12 && s.conjugate_pair);
        assert!(latent_parameter_from_eigenvalue(c(-1.0, 0.0)).is_err());
        assert!(latent_parameter_from_eigenvalue(c(0.0, 1.0)).is_err());
    }

    #[test]
    fn divergence_probe() {
        let p = ell2_divergence_probe(lp(0.5, 0.0), &[10, 40, 160], 0.05).unwrap();
        assert!(p.divergent_trend);
        assert!(p.partial_sums.windows(2).all(|w| w[1] > w[0]));
        let p = ell2_divergence_probe(lp(0.3, 0.0), &[0], 0.05).unwrap();
        let m = lp(0.3, 0.0).eigenvalue().value();
        assert!((p.partial_sums[0] - m.norm_sqr()).abs() < 1e-12);
        assert!(ell2_divergence_probe(lp(0.3, 0.0), &[5, 5], 0.05).is_err());
    }

    #[test]
    fn truncated_residual_shrinks() {
        let mu = lp(0.5, 0.0);
        let r1 = truncated_eigen_residual(mu, 100, 3).unwrap();
        let r2 = truncated_eigen_residual(mu, 1600, 3).unwrap();
        assert!(r2 < r1 / 2.0, "{r1} {r2}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn taylor_series_sums_to_closed_form(re in 0.05f64..=0.5, im in -2.0f64..2.0, r in 0.0f64..0.4, arg in 0.0f64..std::f64::consts::TAU) {
            let mu = LatentParameter::new(c(re, im)).unwrap();
            let z = Complex64::from_polar(r, arg);
            let cn = eigenfunction_coefficients(mu, 120);
            let sum = cn.iter().rev().fold(c(0.0, 0.0), |acc, v| acc * z + v);
            let closed = eigenfunction_eval(mu, z).unwrap();
            prop_assert!((sum - closed).norm() < 1e-10 * closed.norm().max(1.0));
        }

        #[test]
        fn eigenvalue_round_trip(re in 0.02f64..=0.5, im in -3.0f64..3.0) {
            let mu = LatentParameter::new(c(re, im)).unwrap();
            let back = latent_parameter_from_eigenvalue(mu.eigenvalue().value()).unwrap().mu;
            prop_assert!((back.mu() - mu.mu()).norm() < 1e-10, "{:?} -> {:?}", mu, back);
        }
    }
}
