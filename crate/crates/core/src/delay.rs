//! Reflection phase and Wigner time delay `τ(E) = ħ dθ/dE` (ħ = 1).
//!
//! τ is taken from the logarithmic derivative `Im[r′(E)/r(E)]`, which needs no
//! phase unwrapping. Unwrapped phases are still produced for profiles, since
//! they are what one plots.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{reflection_at_energy, ModelSpec};

/// Relative finite-difference step for `dr/dE`.
pub const RELATIVE_STEP: f64 = 1e-6;
/// Smallest grid accepted by [`delay_profile`].
pub const MIN_POINTS: usize = 16;

/// τ for an arbitrary amplitude `r(E)`, by a central difference of step
/// `1e-6·E`.
pub fn delay_of<F>(amplitude: F, energy: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if !(energy > 0.0) {
        return Err(Error::InvalidArgument(format!("energy must be positive, got {energy}")));
    }
    let h = RELATIVE_STEP * energy;
    let r = amplitude(energy)?;
    let dr = (amplitude(energy + h)? - amplitude(energy - h)?) / (2.0 * h);
    Ok((dr / r).im)
}

/// Wigner reflection time delay of a model at real energy `E`.
pub fn wigner_delay(spec: &ModelSpec, energy: f64) -> Result<f64> {
    delay_of(|e| reflection_at_energy(spec, e), energy)
}

/// The reference single-resonance delay `(Γ/2) / ((E - E₀)² + Γ²/4)`.
pub fn breit_wigner_delay(energy: f64, e0: f64, gamma: f64) -> f64 {
    let half = 0.5 * gamma;
    half / ((energy - e0).powi(2) + half * half)
}

/// The one-pole ratio `(E - E₀ - iΓ/2) / (E - E₀ + iΓ/2)`.
///
/// Its phase is *twice* `arg(E - E₀ - iΓ/2)`, so its delay is
/// `2 ·` [`breit_wigner_delay`], peaking at `4/Γ`.
pub fn breit_wigner_ratio(energy: f64, e0: f64, gamma: f64) -> Complex64 {
    let pole = Complex64::new(energy - e0, -0.5 * gamma);
    pole / pole.conj()
}

/// The unimodular single-pole factor `(E - E₀ - iΓ/2) / |E - E₀ - iΓ/2|`,
/// whose phase `arctan((Γ/2)/(E - E₀))` (taken on the continuous branch)
/// has exactly the delay [`breit_wigner_delay`], peaking at `2/Γ`.
pub fn breit_wigner_amplitude(energy: f64, e0: f64, gamma: f64) -> Complex64 {
    let pole = Complex64::new(energy - e0, -0.5 * gamma);
    pole / pole.norm()
}

/// One energy sample of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub energy: f64,
    #[serde(skip)]
    pub r: Complex64,
    /// |r|
    pub modulus: f64,
    /// arg r, unwrapped along the grid.
    pub theta: f64,
    pub tau: f64,
}

/// A refined interior maximum of τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelayPeak {
    pub energy: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeDelayProfile {
    pub model: ModelSpec,
    pub points: Vec<PhasePoint>,
    pub peaks: Vec<DelayPeak>,
}

impl TimeDelayProfile {
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.energy)
    }

    /// Grid point with the largest τ.
    pub fn argmax(&self) -> Option<&PhasePoint> {
        self.points.iter().max_by(|a, b| a.tau.total_cmp(&b.tau))
    }
}

/// Subtracts multiples of 2π so that no step between neighbours exceeds π.
pub fn unwrap_phases(raw: &mut [f64]) {
    let mut offset = 0.0;
    for i in 1..raw.len() {
        let prev = raw[i - 1];
        let mut cur = raw[i] + offset;
        while cur - prev > PI {
            cur -= 2.0 * PI;
            offset -= 2.0 * PI;
        }
        while cur - prev < -PI {
            cur += 2.0 * PI;
            offset += 2.0 * PI;
        }
        raw[i] = cur;
    }
}

/// Interior local maxima of `ys`, each refined by the vertex of the parabola
/// through its three grid neighbours.
pub fn find_peaks(xs: &[f64], ys: &[f64]) -> Vec<DelayPeak> {
    let mut peaks = Vec::new();
    for i in 1..ys.len().saturating_sub(1) {
        let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
        if !(y1 > y0 && y1 >= y2) {
            continue;
        }
        let (x0, x1, x2) = (xs[i - 1], xs[i], xs[i + 1]);
        let d0 = (y1 - y0) / (x1 - x0);
        let d1 = (y2 - y1) / (x2 - x1);
        let curvature = (d1 - d0) / (x2 - x0);
        // Newton form p(x) = y0 + d0 (x - x0) + curvature (x - x0)(x - x1)
        let (energy, height) = if curvature < 0.0 {
            let vertex = (0.5 * (x0 + x1) - d0 / (2.0 * curvature)).clamp(x0, x2);
            let height = y0 + d0 * (vertex - x0) + curvature * (vertex - x0) * (vertex - x1);
            (vertex, height.max(y1))
        } else {
            (x1, y1)
        };
        peaks.push(DelayPeak { energy, height });
    }
    peaks
}

/// τ, |r| and unwrapped θ on a uniform grid of `n_points` energies spanning
/// `[e_min, e_max]`, with refined peak positions.
pub fn delay_profile(spec: &ModelSpec, e_min: f64, e_max: f64, n_points: usize) -> Result<TimeDelayProfile> {
    if !(e_min > 0.0 && e_max > e_min && e_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "energy window must satisfy 0 < e_min < e_max, got [{e_min}, {e_max}]"
        )));
    }
    if n_points < MIN_POINTS {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_POINTS} grid points required, got {n_points}"
        )));
    }
    spec.validate()?;
    let step = (e_max - e_min) / (n_points - 1) as f64;
    let grid: Vec<f64> =
        (0..n_points).map(|i| if i + 1 == n_points { e_max } else { e_min + step * i as f64 }).collect();

    let samples: Vec<(Complex64, f64)> = grid
        .par_iter()
        .map(|&e| Ok((reflection_at_energy(spec, e)?, wigner_delay(spec, e)?)))
        .collect::<Result<_>>()?;

    let mut theta: Vec<f64> = samples.iter().map(|(r, _)| r.arg()).collect();
    unwrap_phases(&mut theta);
    let taus: Vec<f64> = samples.iter().map(|&(_, t)| t).collect();
    let peaks = find_peaks(&grid, &taus);

    let points = grid
        .iter()
        .zip(samples)
        .zip(theta)
        .map(|((&energy, (r, tau)), theta)| PhasePoint { energy, r, modulus: r.norm(), theta, tau })
        .collect();
    Ok(TimeDelayProfile { model: *spec, points, peaks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breit_wigner_shape() {
        let (e0, g) = (7.3144, 1.9296);
        assert!((breit_wigner_delay(e0, e0, g) - 2.0 / g).abs() < 1e-15);
        let half = breit_wigner_delay(e0 + g / 2.0, e0, g);
        assert!((half - 1.0 / g).abs() < 1e-15);
        let half = breit_wigner_delay(e0 - g / 2.0, e0, g);
        assert!((half - 1.0 / g).abs() < 1e-15);
        // (Γ/2)/(0.0056² + Γ²/4) against 2/Γ
        let near = breit_wigner_delay(7.32, e0, g);
        assert!((near - 2.0 / g).abs() < 1e-3 * 2.0 / g);
    }

    #[test]
    fn one_pole_delay_from_finite_difference() {
        let (e0, g) = (7.3144, 1.9296);
        let tau = delay_of(|e| Ok(breit_wigner_amplitude(e, e0, g)), e0).unwrap();
        assert!((tau - 1.036_484_245_439_469_3).abs() < 1e-9);
        // the full ratio doubles the phase
        let tau2 = delay_of(|e| Ok(breit_wigner_ratio(e, e0, g)), e0).unwrap();
        assert!((tau2 - 2.0 * 2.0 / g).abs() < 1e-9);
    }

    #[test]
    fn unwrap_removes_jumps() {
        let mut phases: Vec<f64> = (0..50).map(|i| (0.3 * i as f64 + PI) % (2.0 * PI) - PI).collect();
        unwrap_phases(&mut phases);
        for w in phases.windows(2) {
            assert!((w[1] - w[0] - 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn parabola_vertex_recovered() {
        let xs: Vec<f64> = (0..21).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - (x - 1.234f64).powi(2)).collect();
        let peaks = find_peaks(&xs, &ys);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].energy - 1.234).abs() < 1e-12);
        assert!((peaks[0].height - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_grid_and_bad_window() {
        let spec = ModelSpec::delta_wall(5.0, 1.0).unwrap();
        assert!(delay_profile(&spec, 1.0, 20.0, 3).is_err());
        assert!(delay_profile(&spec, 2.0, 1.0, 100).is_err());
        assert!(delay_profile(&spec, 0.0, 1.0, 100).is_err());
    }
}
