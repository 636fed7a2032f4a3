//! Latent eigenfunctions of the Hilbert matrix, Mehler-Fock transforms and
//! the spectral measure of H on [0, pi], with residual-based verification.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod hilbert;
pub mod mehler_fock;
pub mod quadrature;
pub mod report;
pub mod series;
pub mod special;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};

use num_complex::Complex64;
use num_rational::BigRational;

pub type Real = f64;
pub type Complex = Complex64;
pub type RealSeries = series::PowerSeries<f64>;
pub type ComplexSeries = series::PowerSeries<Complex64>;
pub type ExactSeries = series::PowerSeries<BigRational>;
