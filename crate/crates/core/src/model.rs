//! The three exactly solvable potentials and their closed-form reflection
//! amplitudes.
//!
//! Units are fixed to 2m = 1 and ħ = 1, so `k = √E` and `ℰ = k²`.
//!
//! Each model also exposes a pole-defining function `D(k)`: the denominator
//! of its `r(k)` formula, proportional to the incident amplitude `A` of the
//! solution that is regular on the right. Gamow resonances are the zeros of
//! `D` in the lower half of the k-plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{bessel_i, bessel_k, gamma_ratio, recip_gamma, BesselEval};

const I: Complex64 = Complex64::new(0.0, 1.0);
const POLE_FLOOR: f64 = 1e-300;

/// Natural units used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitsConvention {
    pub two_m: f64,
    pub hbar: f64,
}

impl UnitsConvention {
    pub const NATURAL: UnitsConvention = UnitsConvention { two_m: 1.0, hbar: 1.0 };

    /// Principal square root; for ℰ in the fourth quadrant this lands in
    /// the lower half plane.
    pub fn momentum(energy: Complex64) -> Complex64 {
        energy.sqrt()
    }

    pub fn energy(k: Complex64) -> Complex64 {
        k * k
    }
}

/// One of the solvable potentials with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    /// `V0 δ(x + a)` in front of a rigid wall at `x = 0`.
    DeltaWall { v0: f64, a: f64 },
    /// `V0 e^{2x/c}` on the whole line.
    ExpOnePiece { v0: f64, c: f64 },
    /// `V0 e^{2x/c}` for `x ≤ 0` and `V0 e^{2x/d}` for `x > 0`. `c = 0` is the
    /// step limit: free on the left.
    ExpTwoPiece { v0: f64, c: f64, d: f64 },
}

/// Dimensionless Bessel arguments at the junction `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleParams {
    /// `c√V0`
    pub s_c: f64,
    /// `d√V0`
    pub s_d: f64,
    /// `d/c`, absent when `c = 0`.
    pub zeta: Option<f64>,
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("{name} must be positive, got {value}")))
    }
}

impl ModelSpec {
    pub fn delta_wall(v0: f64, a: f64) -> Result<Self> {
        let spec = ModelSpec::DeltaWall { v0, a };
        spec.validate()?;
        Ok(spec)
    }

    pub fn exp_one_piece(v0: f64, c: f64) -> Result<Self> {
        let spec = ModelSpec::ExpOnePiece { v0, c };
        spec.validate()?;
        Ok(spec)
    }

    pub fn exp_two_piece(v0: f64, c: f64, d: f64) -> Result<Self> {
        let spec = ModelSpec::ExpTwoPiece { v0, c, d };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the parameter rules. A bare wall (`V0 = 0`) is allowed for the
    /// delta model.
    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::DeltaWall { v0, a } => {
                if !(v0.is_finite() && v0 >= 0.0) {
                    return Err(Error::InvalidModel(format!("v0 must be non-negative, got {v0}")));
                }
                positive("a", a)
            }
            ModelSpec::ExpOnePiece { v0, c } => {
                positive("v0", v0)?;
                positive("c", c)
            }
            ModelSpec::ExpTwoPiece { v0, c, d } => {
                positive("v0", v0)?;
                positive("d", d)?;
                if c.is_finite() && c >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidModel(format!("c must be non-negative, got {c}")))
                }
            }
        }
    }

    pub fn v0(&self) -> f64 {
        match *self {
            ModelSpec::DeltaWall { v0, .. }
            | ModelSpec::ExpOnePiece { v0, .. }
            | ModelSpec::ExpTwoPiece { v0, .. } => v0,
        }
    }

    /// Short name used on the command line and in output headers.
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::DeltaWall { .. } => "delta-wall",
            ModelSpec::ExpOnePiece { .. } => "exp1",
            ModelSpec::ExpTwoPiece { .. } => "exp2",
        }
    }

    pub fn scale_params(&self) -> Option<ScaleParams> {
        let root = self.v0().sqrt();
        match *self {
            ModelSpec::DeltaWall { .. } => None,
            ModelSpec::ExpOnePiece { c, .. } => {
                Some(ScaleParams { s_c: c * root, s_d: c * root, zeta: Some(1.0) })
            }
            ModelSpec::ExpTwoPiece { c, d, .. } => {
                Some(ScaleParams { s_c: c * root, s_d: d * root, zeta: (c > 0.0).then(|| d / c) })
            }
        }
    }
}

/// V(x). Fails for the delta model, which has no pointwise value.
pub fn potential_value(spec: &ModelSpec, x: f64) -> Result<f64> {
    match *spec {
        ModelSpec::DeltaWall { .. } => Err(Error::NotPointwise),
        ModelSpec::ExpOnePiece { v0, c } => Ok(v0 * (2.0 * x / c).exp()),
        ModelSpec::ExpTwoPiece { v0, c, d } => Ok(if x > 0.0 {
            v0 * (2.0 * x / d).exp()
        } else if c > 0.0 {
            v0 * (2.0 * x / c).exp()
        } else {
            0.0
        }),
    }
}

fn divide(num: Complex64, den: Complex64, k: Complex64) -> Result<Complex64> {
    if den.norm() < POLE_FLOOR || !den.is_finite() {
        Err(Error::AtPole(k))
    } else {
        Ok(num / den)
    }
}

/// `(s/2)^{μ}` on the principal branch; `s/2` is real and positive.
fn real_power(base: f64, mu: Complex64) -> Complex64 {
    (mu * base.ln()).exp()
}

// ---------------------------------------------------------------------------
// delta + wall

fn delta_wall_parts(v0: f64, a: f64, k: Complex64) -> (Complex64, Complex64) {
    let (s, c) = ((k * a).sin(), (k * a).cos());
    let common = v0 * s + k * c;
    (common + I * k * s, common - I * k * s)
}

/// r(k) for the delta barrier in front of a rigid wall.
pub fn reflection_delta_wall(spec: &ModelSpec, k: Complex64) -> Result<Complex64> {
    let ModelSpec::DeltaWall { v0, a } = *spec else {
        return Err(Error::Unsupported("reflection_delta_wall needs a delta-wall model"));
    };
    if k.norm() == 0.0 {
        return Err(Error::InvalidArgument("k must be non-zero".into()));
    }
    let (num, den) = delta_wall_parts(v0, a, k);
    let phase = (-2.0 * I * k * a).exp();
    divide(-phase * num, den, k)
}

// ---------------------------------------------------------------------------
// one-piece exponential

/// r(k) = -(s/2)^{-2ikc} Γ(1+ikc)/Γ(1-ikc).
pub fn reflection_exp_one_piece(spec: &ModelSpec, k: Complex64) -> Result<Complex64> {
    let ModelSpec::ExpOnePiece { c, .. } = *spec else {
        return Err(Error::Unsupported("reflection_exp_one_piece needs an exp1 model"));
    };
    let s = spec.scale_params().expect("exponential model").s_c;
    let nu = I * k * c;
    let ratio = gamma_ratio(1.0 + nu, 1.0 - nu)?;
    Ok(-real_power(0.5 * s, -2.0 * nu) * ratio)
}

/// The poles of the one-piece amplitude, `ikc = -(n+1)`, i.e. `k = i(n+1)/c`
/// on the positive imaginary axis. They carry no resonance.
pub fn false_pole_momenta(spec: &ModelSpec, count: usize) -> Result<Vec<Complex64>> {
    let ModelSpec::ExpOnePiece { c, .. } = *spec else {
        return Err(Error::Unsupported("false poles are defined for the exp1 model"));
    };
    Ok((0..count).map(|n| Complex64::new(0.0, (n + 1) as f64 / c)).collect())
}

// ---------------------------------------------------------------------------
// two-piece exponential

/// Left-hand basis function `Γ(1+μ)(s/2)^{-μ} I_μ(s e^{x/c})`, which tends to
/// `e^{±ikx}` for `μ = ±ikc` as `x → -∞`. Returns value and `d/dx`.
pub(crate) fn left_basis(mu: Complex64, s_c: f64, c: f64, x: f64) -> Result<BesselEval> {
    let scale = (x / c).exp();
    let z = s_c * scale;
    let norm = real_power(0.5 * s_c, -mu) / recip_gamma(1.0 + mu);
    let i = bessel_i(mu, z)?;
    Ok(BesselEval { value: i.value * norm, derivative: i.derivative * norm * (z / c) })
}

/// Right-hand solution `K_{ikd}(s_d e^{x/d})`, regular as `x → +∞`. Returns
/// value and `d/dx`.
pub(crate) fn right_solution(k: Complex64, s_d: f64, d: f64, x: f64) -> Result<BesselEval> {
    let z = s_d * (x / d).exp();
    let kv = bessel_k(I * k * d, z)?;
    Ok(BesselEval { value: kv.value, derivative: kv.derivative * (z / d) })
}

/// Coefficients `(A, B)` of the left solution `A φ₊ + B φ₋` that joins the
/// right solution (coefficient 1) with continuous ψ and ψ′ at `x = 0`.
/// For `c = 0` the left basis is `e^{±ikx}`.
pub fn two_piece_matching(spec: &ModelSpec, k: Complex64) -> Result<(Complex64, Complex64)> {
    let ModelSpec::ExpTwoPiece { c, d, .. } = *spec else {
        return Err(Error::Unsupported("matching needs an exp2 model"));
    };
    let sp = spec.scale_params().expect("exponential model");
    let right = right_solution(k, sp.s_d, d, 0.0)?;
    let (plus, minus) = if c > 0.0 {
        let nu = I * k * c;
        (left_basis(nu, sp.s_c, c, 0.0)?, left_basis(-nu, sp.s_c, c, 0.0)?)
    } else {
        (
            BesselEval { value: Complex64::new(1.0, 0.0), derivative: I * k },
            BesselEval { value: Complex64::new(1.0, 0.0), derivative: -I * k },
        )
    };
    // Cramer's rule on  A φ₊ + B φ₋ = K,  A φ₊′ + B φ₋′ = K′
    let w = plus.value * minus.derivative - plus.derivative * minus.value;
    let a = right.value * minus.derivative - right.derivative * minus.value;
    let b = plus.value * right.derivative - plus.derivative * right.value;
    if w.norm() < POLE_FLOOR {
        return Err(Error::AtPole(k));
    }
    Ok((a / w, b / w))
}

/// r(k) for the two-piece exponential, from continuity of ψ and ψ′ at the
/// junction. For `c > 0` this is the gamma-ratio amplitude of the one-piece
/// model times a unimodular bracket of I/K cross products.
pub fn reflection_exp_two_piece(spec: &ModelSpec, k: Complex64) -> Result<Complex64> {
    let ModelSpec::ExpTwoPiece { c, d, .. } = *spec else {
        return Err(Error::Unsupported("reflection_exp_two_piece needs an exp2 model"));
    };
    let sp = spec.scale_params().expect("exponential model");
    let right = right_solution(k, sp.s_d, d, 0.0)?;
    if c > 0.0 {
        let nu = I * k * c;
        let plus = left_basis(nu, sp.s_c, c, 0.0)?;
        let minus = left_basis(-nu, sp.s_c, c, 0.0)?;
        let num = plus.value * right.derivative - plus.derivative * right.value;
        let den = minus.value * right.derivative - minus.derivative * right.value;
        divide(-num, den, k)
    } else {
        let ik = I * k;
        let num = ik * right.value - right.derivative;
        let den = ik * right.value + right.derivative;
        divide(num, den, k)
    }
}

/// r(k) for any model.
pub fn reflection(spec: &ModelSpec, k: Complex64) -> Result<Complex64> {
    spec.validate()?;
    match spec {
        ModelSpec::DeltaWall { .. } => reflection_delta_wall(spec, k),
        ModelSpec::ExpOnePiece { .. } => reflection_exp_one_piece(spec, k),
        ModelSpec::ExpTwoPiece { .. } => reflection_exp_two_piece(spec, k),
    }
}

/// r(E) at a real positive energy.
pub fn reflection_at_energy(spec: &ModelSpec, energy: f64) -> Result<Complex64> {
    if !(energy > 0.0) {
        return Err(Error::InvalidArgument(format!("energy must be positive, got {energy}")));
    }
    reflection(spec, Complex64::new(energy.sqrt(), 0.0))
}

/// D(k), whose lower-half-plane zeros are the Gamow poles.
///
/// * delta wall: `V0 sin ka + k cos ka - ik sin ka`
/// * exp1: `(s/2)^{ikc} / Γ(1+ikc)`, zero only at the false poles `ikc = -(n+1)`
/// * exp2, `c > 0`: `φ₋ K′ - φ₋′ K` at the junction
/// * exp2, `c = 0`: `ik K + (s_d/d) K′`
pub fn pole_denominator(spec: &ModelSpec, k: Complex64) -> Result<Complex64> {
    spec.validate()?;
    match *spec {
        ModelSpec::DeltaWall { v0, a } => Ok(delta_wall_parts(v0, a, k).1),
        ModelSpec::ExpOnePiece { c, .. } => {
            let s = spec.scale_params().expect("exponential model").s_c;
            let nu = I * k * c;
            Ok(real_power(0.5 * s, nu) * recip_gamma(1.0 + nu))
        }
        ModelSpec::ExpTwoPiece { c, d, .. } => {
            let sp = spec.scale_params().expect("exponential model");
            let right = right_solution(k, sp.s_d, d, 0.0)?;
            if c > 0.0 {
                let minus = left_basis(-I * k * c, sp.s_c, c, 0.0)?;
                Ok(minus.value * right.derivative - minus.derivative * right.value)
            } else {
                Ok(I * k * right.value + right.derivative)
            }
        }
    }
}
