use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical kernels and the model layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    GammaPole(Complex64),

    #[error("series for I_nu did not converge (nu = {nu}, z = {z})")]
    SeriesNonConvergence { nu: Complex64, z: f64 },

    #[error("quadrature for K_nu did not converge (nu = {nu}, z = {z})")]
    QuadratureNonConvergence { nu: Complex64, z: f64 },

    #[error("order {nu} too large for argument {z}")]
    OrderTooLarge { nu: Complex64, z: f64 },

    #[error("integer order {0} is not supported for K_nu")]
    IntegerOrder(Complex64),

    #[error("argument z = {0} outside the supported range (0, 50]")]
    ArgumentOutOfRange(f64),

    #[error("invalid model parameters: {0}")]
    InvalidModel(String),

    #[error("operation not supported for this model: {0}")]
    Unsupported(&'static str),

    #[error("the delta potential has no pointwise value")]
    NotPointwise,

    #[error("division by zero at a pole of r (k = {0})")]
    AtPole(Complex64),

    #[error("Newton iteration did not converge from seed {seed} after {iterations} steps")]
    NoConvergence { seed: Complex64, iterations: usize },

    #[error("zero converged in the upper half plane (k = {0})")]
    WrongHalfPlane(Complex64),

    #[error("pole mismatch: |D(k)| residual {residual:e} exceeds tolerance")]
    PoleMismatch { residual: f64 },

    #[error("integration region too shallow: V(x_right) = {potential} but {required} required")]
    RegionNotDeep { potential: f64, required: f64 },

    #[error("flat-region condition violated at x_left: V = {potential}, limit {limit}")]
    FlatRegionViolation { potential: f64, limit: f64 },

    #[error("non-finite value during integration at x = {0}")]
    Overflow(f64),

    #[error("output failed: {0}")]
    Output(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
