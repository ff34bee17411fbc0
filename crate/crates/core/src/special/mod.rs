//! Special-function kernel: complex gamma and modified Bessel functions of
//! complex order at positive real argument.

pub mod bessel;
pub mod gamma;
pub mod quadrature;

pub use bessel::{bessel_i, bessel_k, bessel_k_connection, bessel_k_integral, BesselEval};
pub use gamma::{complex_gamma, gamma_ratio, recip_gamma};
