use num_complex::Complex64;
use thiserror::Error;

/// Every failure mode of the library. Numerical routines never hand back a NaN;
/// they return one of these instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma function at z = {0}")]
    Pole(Complex64),

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error("{what}: argument outside the domain ({detail})")]
    Domain { what: &'static str, detail: String },

    #[error("{what}: evaluation leaves the safe range ({detail})")]
    OutOfRange { what: &'static str, detail: String },

    #[error("{what}: no convergence ({detail})")]
    NonConvergence { what: &'static str, detail: String },

    #[error("integrand returned a non-finite value at x = {abscissa}")]
    Evaluation { abscissa: f64 },

    #[error("quadrature did not reach tolerance: estimated error {est_error:e} after {evals} evaluations")]
    QuadratureTolerance { est_error: f64, evals: usize },

    #[error("hill sequence routes disagree at n = {n}: relative difference {relative:e} exceeds {tolerance:e}")]
    Cancellation { n: usize, relative: f64, tolerance: f64 },

    #[error(
        "transform does not exist: decay exponent {decay_exponent} gives an integrand decaying no faster than 1/x"
    )]
    Existence { decay_exponent: f64 },

    #[error("inverse transform tail too large: t*|fhat(t)| = {tail:e} at t_max = {t_max}")]
    TailTooLarge { t_max: f64, tail: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(what: &'static str, value: Complex64) -> Result<Complex64> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            what,
            detail: format!("result overflowed to {value}"),
        })
    }
}
