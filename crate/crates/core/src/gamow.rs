//! Resonant (Gamow) eigenstates at a complex pole and their decay law.
//!
//! At a pole the incident amplitude vanishes, leaving only the outgoing wave
//! `e^{-ikx}` on the exit side. With `k = α - iβ` its modulus `e^{-βx}` grows
//! without bound as `x → -∞`, the spatial counterpart of the temporal decay
//! `e^{-Γt}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{left_basis, right_solution, ModelSpec};
use crate::poles::{relative_residual, Resonance};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest relative residual `|D(k)|/|D(k+0.1)|` accepted for a pole.
pub const POLE_RESIDUAL_TOL: f64 = 1e-8;
/// Fewest samples in a profile.
pub const MIN_SAMPLES: usize = 3;

/// Samples of ψ(x) for one resonance, normalized to ψ(x_min) = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GamowProfile {
    pub model: ModelSpec,
    pub pole: Resonance,
    pub x: Vec<f64>,
    pub psi: Vec<Complex64>,
    /// dψ/dx, same normalization as `psi`.
    pub dpsi: Vec<Complex64>,
    pub abs_psi: Vec<f64>,
    /// Re k
    pub alpha: f64,
    /// -Im k, the envelope growth rate on the exit side.
    pub beta: f64,
}

impl GamowProfile {
    /// Least-squares slope of `ln|ψ|` against x over samples in `[lo, hi]`.
    pub fn envelope_slope(&self, lo: f64, hi: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .x
            .iter()
            .zip(&self.abs_psi)
            .filter(|(x, _)| **x >= lo && **x <= hi)
            .map(|(&x, &a)| (x, a.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    }
}

/// Time-decay bookkeeping of a resonance (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayLaw {
    pub gamma: f64,
    pub mean_lifetime: f64,
}

impl DecayLaw {
    pub fn new(gamma: f64) -> Self {
        DecayLaw { gamma, mean_lifetime: 1.0 / gamma }
    }

    pub fn from_resonance(res: &Resonance) -> Self {
        DecayLaw::new(res.gamma())
    }
}

/// Probability `e^{-Γt}` that the state has not yet decayed at time `t ≥ 0`.
pub fn survival_probability(law: &DecayLaw, t: f64) -> f64 {
    (-law.gamma * t).exp()
}

/// Unnormalized ψ and ψ′ of the Gamow state at `x`. The solution is built
/// outward from the closed region (wall or rising side) and joined
/// continuously to the pure outgoing wave on the left.
pub fn gamow_state(spec: &ModelSpec, k: Complex64, x: f64) -> Result<(Complex64, Complex64)> {
    match *spec {
        ModelSpec::DeltaWall { a, .. } => {
            if x >= 0.0 {
                Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)))
            } else if x > -a {
                Ok(((k * x).sin(), k * (k * x).cos()))
            } else {
                // B e^{-ikx} with B e^{ika} = -sin(ka)
                let b = -(k * a).sin() * (-I * k * a).exp();
                let wave = b * (-I * k * x).exp();
                Ok((wave, -I * k * wave))
            }
        }
        ModelSpec::ExpOnePiece { .. } => {
            Err(Error::Unsupported("the one-piece exponential has no resonances"))
        }
        ModelSpec::ExpTwoPiece { c, d, .. } => {
            let sp = spec.scale_params().expect("exponential model");
            if x > 0.0 {
                let right = right_solution(k, sp.s_d, d, x)?;
                return Ok((right.value, right.derivative));
            }
            let junction = right_solution(k, sp.s_d, d, 0.0)?.value;
            if c > 0.0 {
                let nu = -I * k * c;
                let at_zero = left_basis(nu, sp.s_c, c, 0.0)?.value;
                let b = junction / at_zero;
                let here = left_basis(nu, sp.s_c, c, x)?;
                Ok((b * here.value, b * here.derivative))
            } else {
                let wave = junction * (-I * k * x).exp();
                Ok((wave, -I * k * wave))
            }
        }
    }
}

/// ψ(x) of the resonance `pole` of `spec` on `n` evenly spaced points of
/// `[x_min, x_max]`, normalized to ψ(x_min) = 1.
pub fn gamow_wavefunction(
    spec: &ModelSpec,
    pole: &Resonance,
    x_min: f64,
    x_max: f64,
    n: usize,
) -> Result<GamowProfile> {
    spec.validate()?;
    if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
        return Err(Error::InvalidArgument(format!("need x_min < x_max, got [{x_min}, {x_max}]")));
    }
    if n < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("at least {MIN_SAMPLES} samples required, got {n}")));
    }
    if matches!(spec, ModelSpec::ExpOnePiece { .. }) {
        return Err(Error::Unsupported("the one-piece exponential has no resonances"));
    }
    let residual = relative_residual(spec, pole.k_pole)?;
    if !(residual <= POLE_RESIDUAL_TOL) {
        return Err(Error::PoleMismatch { residual });
    }

    let k = pole.k_pole;
    let step = (x_max - x_min) / (n - 1) as f64;
    let x: Vec<f64> = (0..n).map(|i| if i + 1 == n { x_max } else { x_min + step * i as f64 }).collect();
    let raw: Vec<(Complex64, Complex64)> =
        x.iter().map(|&xi| gamow_state(spec, k, xi)).collect::<Result<_>>()?;
    let norm = raw[0].0;
    if norm.norm() == 0.0 {
        return Err(Error::InvalidArgument("ψ vanishes at x_min; choose a point left of the wall".into()));
    }
    let psi: Vec<Complex64> = raw.iter().map(|(p, _)| p / norm).collect();
    let dpsi: Vec<Complex64> = raw.iter().map(|(_, d)| d / norm).collect();
    let abs_psi = psi.iter().map(|p| p.norm()).collect();
    Ok(GamowProfile {
        model: *spec,
        pole: *pole,
        x,
        psi,
        dpsi,
        abs_psi,
        alpha: pole.alpha(),
        beta: pole.beta(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poles::{refine_pole, SearchConfig};

    fn delta_pole() -> (ModelSpec, Resonance) {
        let spec = ModelSpec::delta_wall(5.0, 1.0).unwrap();
        let pole = refine_pole(&spec, Complex64::new(2.7, -0.5), &SearchConfig::default()).unwrap();
        (spec, pole)
    }

    #[test]
    fn wall_boundary_and_kink() {
        let (spec, pole) = delta_pole();
        let (psi0, _) = gamow_state(&spec, pole.k_pole, 0.0).unwrap();
        assert_eq!(psi0.norm(), 0.0);
        let (p_inside, _) = gamow_state(&spec, pole.k_pole, -1e-300).unwrap();
        assert!(p_inside.norm() < 1e-250);

        // derivative jump at x = -a equals V0 ψ(-a)
        let k = pole.k_pole;
        let psi_a = (k * -1.0).sin();
        let right = k * (k * -1.0).cos();
        let (left_val, left_der) = gamow_state(&spec, k, -1.0).unwrap();
        assert!((left_val - psi_a).norm() < 1e-12);
        let ratio = (right - left_der) / psi_a;
        assert!((ratio - 5.0).norm() < 1e-6);
    }

    #[test]
    fn envelope_grows_to_the_left() {
        let (spec, pole) = delta_pole();
        let profile = gamow_wavefunction(&spec, &pole, -8.0, 0.0, 801).unwrap();
        assert!((profile.psi[0] - 1.0).norm() < 1e-15);
        let slope = profile.envelope_slope(-8.0, -1.5).unwrap();
        assert!((slope + 0.1779).abs() < 1e-3, "slope {slope}");
        assert!((slope + profile.beta).abs() < 1e-9);
    }

    #[test]
    fn survival_law() {
        let law = DecayLaw::new(1.9296);
        assert_eq!(survival_probability(&law, 0.0), 1.0);
        let at_lifetime = survival_probability(&law, law.mean_lifetime);
        assert!((at_lifetime - (-1.0f64).exp()).abs() < 1e-15);
        assert!((law.mean_lifetime - 0.518_242_122_719_734_7).abs() < 1e-12);
    }

    #[test]
    fn rejects_foreign_pole_and_bad_grid() {
        let (spec, pole) = delta_pole();
        let wrong = Resonance::from_momentum(0, Complex64::new(3.0, -0.2)).unwrap();
        assert!(matches!(gamow_wavefunction(&spec, &wrong, -8.0, 0.0, 100), Err(Error::PoleMismatch { .. })));
        assert!(gamow_wavefunction(&spec, &pole, -8.0, 0.0, 2).is_err());
        assert!(gamow_wavefunction(&spec, &pole, 0.0, -8.0, 100).is_err());
    }
}
