//! Modified cylindrical Bessel functions I_ν(z), K_ν(z) of complex order at
//! positive real argument.
//!
//! `I_ν` comes from the ascending series. `K_ν` uses the connection formula
//! `K_ν = (π/2)(I_{-ν} - I_ν)/sin(νπ)` for small arguments and the integral
//! `K_ν(z) = ½∫ exp(-z cosh t + νt) dt` over a line `Im t = θ` otherwise.
//! Moving the line toward the saddle points of the exponent removes most of
//! the oscillation that makes the real-axis integral useless for large
//! imaginary orders, where `|K_ν| ~ e^{-π|Im ν|/2}`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::gamma::recip_gamma;
use super::quadrature::integrate_with_breaks;
use crate::error::{Error, Result};

/// Largest argument accepted by the ascending series.
pub const MAX_SERIES_ARGUMENT: f64 = 50.0;
/// Largest order modulus accepted by the ascending series.
pub const MAX_ORDER: f64 = 20.0;
/// Arguments at or below this use the connection formula for `K_ν`.
pub const CONNECTION_LIMIT: f64 = 2.0;

const MAX_TERMS: usize = 200;
const SERIES_EPS: f64 = 1e-16;
const QUAD_REL_TOL: f64 = 1e-13;
const QUAD_MAX_SEGMENTS: usize = 4000;
/// ln of the integrand drop (relative to its peak) at which the `K_ν`
/// integral is truncated; e^{-45} ≈ 3e-20.
const TRUNCATION_LOG: f64 = 45.0;

/// A function value together with its derivative in the argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub value: Complex64,
    pub derivative: Complex64,
}

impl BesselEval {
    fn scale(self, s: Complex64) -> Self {
        BesselEval { value: self.value * s, derivative: self.derivative * s }
    }
}

fn is_integer(nu: Complex64, tol: f64) -> bool {
    nu.im.abs() <= tol && (nu.re - nu.re.round()).abs() <= tol
}

/// I_ν(z) and I′_ν(z) from the ascending series
/// `Σ (z/2)^{ν+2m} / (m! Γ(ν+m+1))`, differentiated term by term.
pub fn bessel_i(nu: Complex64, z: f64) -> Result<BesselEval> {
    if !(z > 0.0 && z <= MAX_SERIES_ARGUMENT) {
        return Err(Error::ArgumentOutOfRange(z));
    }
    if nu.norm() > MAX_ORDER {
        return Err(Error::OrderTooLarge { nu, z });
    }
    // I_{-n} = I_n; keeps 1/Γ(ν+1) = 0 from killing the leading term
    let nu = if is_integer(nu, 0.0) && nu.re < 0.0 { -nu } else { nu };

    let half = 0.5 * z;
    let quarter_sq = half * half;
    let mut term = (nu * half.ln()).exp() * recip_gamma(nu + 1.0);
    let mut value = term;
    let mut derivative = term * nu / z;

    for m in 1..MAX_TERMS {
        let mf = m as f64;
        term *= quarter_sq / (mf * (nu + mf));
        let dterm = term * (nu + 2.0 * mf) / z;
        value += term;
        derivative += dterm;
        // terms only shrink for good once m exceeds both z/2 and |ν|
        let past_peak = mf > half && mf * mf > nu.norm();
        if past_peak
            && term.norm() <= SERIES_EPS * value.norm()
            && dterm.norm() <= SERIES_EPS * derivative.norm()
        {
            return Ok(BesselEval { value, derivative });
        }
    }
    Err(Error::SeriesNonConvergence { nu, z })
}

fn check_k_order(nu: Complex64, z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::ArgumentOutOfRange(z));
    }
    if is_integer(nu, 1e-10) {
        return Err(Error::IntegerOrder(nu));
    }
    if nu.re.abs() >= 1.0 && z < nu.re.abs() {
        return Err(Error::OrderTooLarge { nu, z });
    }
    Ok(())
}

/// K_ν(z) and K′_ν(z) for z > 0 and non-integer ν.
///
/// Uses [`bessel_k_connection`] for `z ≤ 2` and [`bessel_k_integral`] above.
pub fn bessel_k(nu: Complex64, z: f64) -> Result<BesselEval> {
    check_k_order(nu, z)?;
    if z <= CONNECTION_LIMIT {
        bessel_k_connection(nu, z)
    } else {
        bessel_k_integral(nu, z)
    }
}

/// K_ν from `(π/2)(I_{-ν} - I_ν)/sin(νπ)`. Loses roughly `z·log10(e)`
/// digits to cancellation, plus `π|Im ν|·log10(e)` for large imaginary orders.
pub fn bessel_k_connection(nu: Complex64, z: f64) -> Result<BesselEval> {
    check_k_order(nu, z)?;
    let plus = bessel_i(nu, z)?;
    let minus = bessel_i(-nu, z)?;
    let factor = FRAC_PI_2 / (PI * nu).sin();
    Ok(BesselEval {
        value: (minus.value - plus.value) * factor,
        derivative: (minus.derivative - plus.derivative) * factor,
    })
}

/// Plateau height `θ₀` of the integration path. Follows the imaginary part
/// of the saddle point `asinh(ν/z)` but stays clear of π/2, where the
/// integrand stops decaying.
fn contour_height(nu: Complex64, z: f64) -> f64 {
    let saddle = (nu / z).asinh().im;
    let margin = if nu.im > 0.0 { (2.0 / nu.im).clamp(0.02, 0.3) } else { 0.3 };
    saddle.clamp(0.0, FRAC_PI_2 - margin)
}

/// Integration path `t(u) = u + iθ(u)`: flat at `θ₀` between the saddle
/// points `±u_s`, then bending back toward the real axis as `θ₀ cosh u_s /
/// cosh u`, which roughly tracks the steepest-descent direction and keeps
/// the tails from oscillating.
#[derive(Debug, Clone, Copy)]
struct Path {
    theta0: f64,
    knee: f64,
    cosh_knee: f64,
}

impl Path {
    fn new(nu: Complex64, z: f64) -> Self {
        let theta0 = contour_height(nu, z);
        let knee = (nu / z).asinh().re.abs().max(0.5);
        Path { theta0, knee, cosh_knee: knee.cosh() }
    }

    /// θ(u) and θ′(u)
    fn height(&self, u: f64) -> (f64, f64) {
        if u.abs() <= self.knee {
            (self.theta0, 0.0)
        } else {
            let ratio = self.cosh_knee / u.cosh();
            (self.theta0 * ratio, -self.theta0 * ratio * u.tanh())
        }
    }
}

/// K_ν from the integral representation, evaluated on a deformed path.
pub fn bessel_k_integral(nu: Complex64, z: f64) -> Result<BesselEval> {
    check_k_order(nu, z)?;
    // K is even in ν; work with Im ν ≥ 0 so the path bends into the upper half
    let nu = if nu.im < 0.0 { -nu } else { nu };
    let path = Path::new(nu, z);

    // the constant e^{iνθ₀} is pulled out of the integral
    let log_modulus = |u: f64| {
        let (theta, _) = path.height(u);
        -z * theta.cos() * u.cosh() + nu.re * u - nu.im * (theta - path.theta0) + u.cosh().ln()
    };
    let peak = (nu.re / (z * path.theta0.cos())).asinh();
    let cutoff = log_modulus(peak).max(log_modulus(0.0)) - TRUNCATION_LOG;
    let step = 0.25;
    let mut hi = peak.max(path.knee) + step;
    while log_modulus(hi) > cutoff {
        hi += step;
    }
    let mut lo = peak.min(-path.knee) - step;
    while log_modulus(lo) > cutoff {
        lo -= step;
    }

    let integrand = |u: f64| {
        let (theta, slope) = path.height(u);
        let t = Complex64::new(u, theta);
        let cosh_t = t.cosh();
        let f =
            (-z * cosh_t + nu * Complex64::new(u, theta - path.theta0)).exp() * Complex64::new(1.0, slope);
        [f, -cosh_t * f]
    };
    let breaks = [lo, -path.knee, path.knee, hi];
    let q = integrate_with_breaks(integrand, &breaks, QUAD_REL_TOL, 0.0, QUAD_MAX_SEGMENTS);
    if !q.converged && q.error > 1e-11 * q.l1 {
        return Err(Error::QuadratureNonConvergence { nu, z });
    }
    let prefactor = 0.5 * (nu * Complex64::new(0.0, path.theta0)).exp();
    Ok(BesselEval { value: q.value[0], derivative: q.value[1] }.scale(prefactor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn half_integer_closed_forms() {
        // I_{1/2}(z) = √(2/(πz)) sinh z, K_{1/2}(z) = √(π/(2z)) e^{-z}
        for z in [0.3, 1.0, 1.9, 2.5, 7.0, 20.0] {
            let i = bessel_i(c(0.5, 0.0), z).unwrap();
            let expected = (2.0 / (PI * z)).sqrt() * z.sinh();
            assert!((i.value.re - expected).abs() < 1e-13 * expected, "I at {z}");
            let k = bessel_k(c(0.5, 0.0), z).unwrap();
            let expected = (PI / (2.0 * z)).sqrt() * (-z).exp();
            assert!((k.value - expected).norm() < 1e-12 * expected, "K at {z}");
            let dk = -expected * (1.0 + 0.5 / z);
            assert!((k.derivative - dk).norm() < 1e-12 * dk.abs(), "K' at {z}");
        }
        let i = bessel_i(c(0.5, 0.0), 1.0).unwrap();
        assert!((i.value.re - 0.937_674_888_245_488).abs() < 1e-12);
        let k = bessel_k(c(0.5, 0.0), 1.0).unwrap();
        assert!((k.value.re - 0.461_068_504_447_894_4).abs() < 1e-12);
    }

    #[test]
    fn small_argument_limit() {
        let z: f64 = 1e-8;
        for nu in [c(0.0, 0.3), c(0.25, -1.0), c(1e-6, 0.0)] {
            let leading = (nu * (0.5 * z).ln()).exp() * recip_gamma(nu + 1.0);
            let i = bessel_i(nu, z).unwrap();
            assert!((i.value - leading).norm() < 1e-8 * leading.norm());
        }
    }

    #[test]
    fn negative_integer_order() {
        let a = bessel_i(c(-2.0, 0.0), 3.0).unwrap();
        let b = bessel_i(c(2.0, 0.0), 3.0).unwrap();
        assert!((a.value - b.value).norm() < 1e-15);
    }

    #[test]
    fn imaginary_order_k_is_real() {
        for z in [0.5, 1.0, 3.0, 11.18] {
            let k = bessel_k(c(0.0, 1.0), z).unwrap();
            assert!(k.value.im.abs() < 1e-12 * k.value.norm().max(1e-300));
        }
        let k = bessel_k(c(0.0, 1.0), 1.0).unwrap();
        assert!(k.value.im.abs() < 1e-12);
    }

    #[test]
    fn wronskian_imaginary_order() {
        let nu = c(0.0, 0.3);
        let z = 2.0;
        let i = bessel_i(nu, z).unwrap();
        let k = bessel_k(nu, z).unwrap();
        let w = i.value * k.derivative - i.derivative * k.value;
        assert!((w + 1.0 / z).norm() < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(bessel_k(c(2.0, 0.0), 3.0), Err(Error::IntegerOrder(_))));
        assert!(matches!(bessel_k(c(3.5, 0.0), 2.5), Err(Error::OrderTooLarge { .. })));
        assert!(matches!(bessel_i(c(0.5, 0.0), 0.0), Err(Error::ArgumentOutOfRange(_))));
        assert!(matches!(bessel_i(c(0.5, 0.0), 60.0), Err(Error::ArgumentOutOfRange(_))));
        assert!(matches!(bessel_i(c(0.0, 25.0), 1.0), Err(Error::OrderTooLarge { .. })));
    }
}
