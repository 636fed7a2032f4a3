//! Gamma, Gauss hypergeometric and Legendre/conical functions.

pub mod gamma;
pub mod hypergeometric;
pub mod legendre;

pub use gamma::{gamma, gamma_real, rgamma};
pub use hypergeometric::{
    gauss_2f1, gauss_2f1_complement, gauss_2f1_route, gauss_2f1_with, select_route, HypergeometricOptions,
    HypergeometricParams, Route,
};
pub use legendre::{
    conical_leading_asymptotic, conical_p, conical_p_with, legendre_p, legendre_p_with, ConicalOrder, LegendreOptions,
};
