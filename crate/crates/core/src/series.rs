//! Truncated Taylor series on the unit disk and the Hilbert matrix acting on
//! their coefficients.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

use crate::error::{Error, Result};

/// Scalars the coefficient-space routines are generic over.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {
    /// `num / den`, exact where the type allows.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_finite_scalar(&self) -> bool;
    fn to_complex64(&self) -> Complex64;

    fn div_index(&self, k: usize) -> Self {
        self.clone() / Self::from_ratio(k as i64, 1)
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
    fn is_finite_scalar(&self) -> bool {
        self.is_finite()
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(*self as f64, 0.0)
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_finite_scalar(&self) -> bool {
        self.is_finite()
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn is_finite_scalar(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn to_complex64(&self) -> Complex64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_finite_scalar(&self) -> bool {
        true
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for Complex<BigRational> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(BigRational::from_ratio(num, den), BigRational::from_ratio(0, 1))
    }
    fn is_finite_scalar(&self) -> bool {
        true
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_complex64().re, self.im.to_complex64().re)
    }
}

/// Exact rational value of a finite double.
pub fn exact_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidParameter {
        name: "x",
        detail: format!("{x} has no rational value"),
    })
}

pub fn exact_complex(z: Complex64) -> Result<Complex<BigRational>> {
    Ok(Complex::new(exact_rational(z.re)?, exact_rational(z.im)?))
}

/// Coefficients a_0..a_N of a truncated Taylor series.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> PowerSeries<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter {
                name: "coeffs",
                detail: "a power series needs at least one coefficient".into(),
            });
        }
        if let Some(n) = coeffs.iter().position(|c| !c.is_finite_scalar()) {
            return Err(Error::InvalidParameter {
                name: "coeffs",
                detail: format!("coefficient {n} is not finite"),
            });
        }
        Ok(Self { coeffs })
    }

    /// z^k
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = T::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation at a point of the disk.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_complex64())
    }

    pub fn to_complex64(&self) -> PowerSeries<Complex64> {
        PowerSeries {
            coeffs: self.coeffs.iter().map(Scalar::to_complex64).collect(),
        }
    }
}

/// b_n = sum_m a_m / (n + m + 1) for n < out_len, summing over the stored
/// coefficients only.
pub fn apply_hilbert_series<T: Scalar>(a: &PowerSeries<T>, out_len: usize) -> Result<PowerSeries<T>> {
    if out_len == 0 {
        return Err(Error::InvalidParameter {
            name: "out_len",
            detail: "must be at least 1".into(),
        });
    }
    let coeffs = (0..out_len)
        .map(|n| {
            a.coeffs
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (m, am)| acc + am.div_index(n + m + 1))
        })
        .collect();
    Ok(PowerSeries { coeffs })
}
