//! Gamow poles: complex zeros of the pole-defining function `D(k)` in the
//! lower half of the momentum plane, seeded from time-delay peaks and
//! polished by Newton's method.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::delay::{delay_profile, TimeDelayProfile};
use crate::error::{Error, Result};
use crate::model::{pole_denominator, ModelSpec, UnitsConvention};

/// Relative step of the central difference used for `D′(k)`.
const DERIVATIVE_STEP: f64 = 1e-7;
/// Newton stops once `|Δk| < STEP_TOL·|k|`.
const STEP_TOL: f64 = 1e-12;
/// Trust radius for a single Newton step in k. Adjacent poles sit about 0.6
/// apart in the usual windows; longer steps tend to hop between basins.
const MAX_STEP: f64 = 0.1;
/// Poles closer than this in k are the same pole.
const MERGE_DISTANCE: f64 = 1e-6;

/// One Gamow resonance, `ℰ = E_n - iΓ_n/2 = k²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resonance {
    pub n: usize,
    #[serde(skip)]
    pub k_pole: Complex64,
    #[serde(skip)]
    pub energy: Complex64,
    pub e_n: f64,
    /// Γ_n / 2
    pub half_width: f64,
    /// ħ/Γ_n
    pub lifetime: f64,
}

impl Resonance {
    /// Builds a resonance from a lower-half-plane momentum.
    pub fn from_momentum(n: usize, k_pole: Complex64) -> Result<Self> {
        if !(k_pole.im < 0.0) {
            return Err(Error::WrongHalfPlane(k_pole));
        }
        let energy = UnitsConvention::energy(k_pole);
        let half_width = -energy.im;
        Ok(Resonance { n, k_pole, energy, e_n: energy.re, half_width, lifetime: 0.5 / half_width })
    }

    /// Γ_n
    pub fn gamma(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn alpha(&self) -> f64 {
        self.k_pole.re
    }

    pub fn beta(&self) -> f64 {
        -self.k_pole.im
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub e_min: f64,
    pub e_max: f64,
    /// Initial guess for Γ/2 when seeding from a delay peak.
    pub seed_gamma: f64,
    /// Residual tolerance, relative to |D(k + 0.1)|.
    pub tol: f64,
    pub max_iter: usize,
    pub max_poles: usize,
    /// Grid used for the seeding delay profile.
    pub profile_points: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            e_min: 1.0,
            e_max: 30.0,
            seed_gamma: 1.0,
            tol: 1e-12,
            max_iter: 100,
            max_poles: 64,
            profile_points: 2000,
        }
    }
}

impl SearchConfig {
    pub fn window(e_min: f64, e_max: f64) -> Self {
        SearchConfig { e_min, e_max, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.e_min > 0.0 && self.e_max > self.e_min) {
            return Err(Error::InvalidArgument(format!(
                "search window must satisfy 0 < e_min < e_max, got [{}, {}]",
                self.e_min, self.e_max
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument("tol must be positive".into()));
        }
        Ok(())
    }
}

/// Result of a raw Newton run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOutcome {
    pub k: Complex64,
    pub iterations: usize,
    /// |D(k)| / |D(k + 0.1)|
    pub residual: f64,
}

/// |D(k)| relative to |D| one tenth away, the scale-free residual used to
/// accept a pole.
pub fn relative_residual(spec: &ModelSpec, k: Complex64) -> Result<f64> {
    let here = pole_denominator(spec, k)?.norm();
    let nearby = pole_denominator(spec, k + 0.1)?.norm();
    Ok(here / nearby)
}

/// `D(k) / conj(D(conj k))`. On the real axis this is `-r⁻¹` up to a
/// unimodular factor. Slowly varying factors of D that are real on the real
/// axis (exponentials in k, gamma functions) cancel, leaving the lower-half
/// zeros of D with poles at their mirror images.
pub fn balanced_denominator(spec: &ModelSpec, k: Complex64) -> Result<Complex64> {
    let d = pole_denominator(spec, k)?;
    let mirror = pole_denominator(spec, k.conj())?.conj();
    if mirror.norm() == 0.0 || !mirror.is_finite() {
        return Err(Error::AtPole(k));
    }
    Ok(d / mirror)
}

/// Newton iteration for the zeros of D, run on [`balanced_denominator`] with
/// a central-difference derivative. Steps are capped at `MAX_STEP`, and steps
/// that do not reduce the modulus are halved (up to 40 times).
pub fn newton(spec: &ModelSpec, seed: Complex64, cfg: &SearchConfig) -> Result<NewtonOutcome> {
    let f = |k: Complex64| balanced_denominator(spec, k);
    let mut k = seed;
    let mut value = f(k)?;
    for iteration in 1..=cfg.max_iter {
        if value.norm() == 0.0 {
            return finish(spec, k, iteration, cfg);
        }
        let h = DERIVATIVE_STEP * k.norm().max(1.0);
        let slope = (f(k + h)? - f(k - h)?) / (2.0 * h);
        let mut step = value / slope;
        if !step.is_finite() {
            break;
        }
        if step.norm() > MAX_STEP {
            step *= MAX_STEP / step.norm();
        }
        let mut trial = k - step;
        let mut trial_value = f(trial)?;
        let mut halvings = 0;
        while !(trial_value.norm() < value.norm()) && halvings < 40 && step.norm() > STEP_TOL * k.norm() {
            step *= 0.5;
            trial = k - step;
            trial_value = f(trial)?;
            halvings += 1;
        }
        k = trial;
        value = trial_value;
        if step.norm() < STEP_TOL * k.norm() {
            return finish(spec, k, iteration, cfg);
        }
    }
    Err(Error::NoConvergence { seed, iterations: cfg.max_iter })
}

fn finish(spec: &ModelSpec, k: Complex64, iterations: usize, cfg: &SearchConfig) -> Result<NewtonOutcome> {
    let residual = relative_residual(spec, k)?;
    if residual > cfg.tol {
        return Err(Error::PoleMismatch { residual });
    }
    Ok(NewtonOutcome { k, iterations, residual })
}

/// Polishes a momentum seed into a resonance. A zero that lands on or above
/// the real axis is reported as [`Error::WrongHalfPlane`].
pub fn refine_pole(spec: &ModelSpec, k_seed: Complex64, cfg: &SearchConfig) -> Result<Resonance> {
    let outcome = newton(spec, k_seed, cfg)?;
    let resonance = Resonance::from_momentum(0, outcome.k)?;
    if !(resonance.half_width > 0.0 && resonance.e_n > 0.0) {
        return Err(Error::WrongHalfPlane(outcome.k));
    }
    Ok(resonance)
}

/// Maps an energy seed `ε - iγ` to momentum through the principal root.
pub fn seed_momentum(peak_energy: f64, seed_gamma: f64) -> Complex64 {
    UnitsConvention::momentum(Complex64::new(peak_energy, -seed_gamma))
}

/// Outcome of a seeded search.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSearch {
    pub poles: Vec<Resonance>,
    /// The delay profile whose peaks seeded the search.
    pub profile: TimeDelayProfile,
    pub seeds: usize,
    /// Seeds whose evaluation of D(k) failed.
    pub failures: usize,
}

impl PoleSearch {
    /// True when there were seeds and every one failed numerically.
    pub fn all_seeds_failed(&self) -> bool {
        self.seeds > 0 && self.failures == self.seeds
    }
}

/// Errors from the function evaluations themselves. A seed that converges to
/// a non-resonant zero or wanders off without converging only shows there is
/// no pole near it.
fn numerical_failure(err: &Error) -> bool {
    !matches!(err, Error::WrongHalfPlane(_) | Error::NoConvergence { .. } | Error::PoleMismatch { .. })
}

/// Distinct resonances among `found`, ordered by `E_n` and numbered from zero.
fn merge(found: Vec<Resonance>, max_poles: usize) -> Vec<Resonance> {
    let mut distinct: Vec<Resonance> = Vec::new();
    for res in found {
        if distinct.iter().all(|p| (p.k_pole - res.k_pole).norm() >= MERGE_DISTANCE) {
            distinct.push(res);
        }
    }
    distinct.sort_by(|a, b| a.e_n.total_cmp(&b.e_n));
    distinct.truncate(max_poles);
    for (n, res) in distinct.iter_mut().enumerate() {
        res.n = n;
    }
    distinct
}

/// Refines each seed independently and returns the distinct resonances with
/// `E_n` inside the search window, ordered by `E_n` and numbered from zero.
/// Seeds that fail are dropped.
pub fn refine_seeds(spec: &ModelSpec, seeds: &[Complex64], cfg: &SearchConfig) -> Vec<Resonance> {
    refine_counting_failures(spec, seeds, cfg).0
}

fn refine_counting_failures(
    spec: &ModelSpec,
    seeds: &[Complex64],
    cfg: &SearchConfig,
) -> (Vec<Resonance>, usize) {
    let outcomes: Vec<Result<Resonance>> =
        seeds.par_iter().map(|&seed| refine_pole(spec, seed, cfg)).collect();
    let failures = outcomes.iter().filter(|o| matches!(o, Err(e) if numerical_failure(e))).count();
    let found = outcomes
        .into_iter()
        .filter_map(|o| o.ok())
        .filter(|p| p.e_n >= cfg.e_min && p.e_n <= cfg.e_max)
        .collect();
    (merge(found, cfg.max_poles), failures)
}

/// Energy-plane seeds `E - iγ` at the peaks of a delay profile.
pub fn peak_seeds(profile: &TimeDelayProfile, seed_gamma: f64) -> Vec<Complex64> {
    profile.peaks.iter().map(|p| seed_momentum(p.energy, seed_gamma)).collect()
}

/// Seeds Newton from the peaks of τ(E) on the search window and keeps the
/// resonances with `E_n` inside the window.
pub fn search(spec: &ModelSpec, cfg: &SearchConfig) -> Result<PoleSearch> {
    cfg.validate()?;
    let profile = delay_profile(spec, cfg.e_min, cfg.e_max, cfg.profile_points)?;
    let seeds = peak_seeds(&profile, cfg.seed_gamma);
    let (poles, failures) = refine_counting_failures(spec, &seeds, cfg);
    Ok(PoleSearch { poles, profile, seeds: seeds.len(), failures })
}

/// Resonances of `spec` in the search window. An empty list is a valid
/// answer.
pub fn find_poles(spec: &ModelSpec, cfg: &SearchConfig) -> Result<Vec<Resonance>> {
    search(spec, cfg).map(|s| s.poles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonance_bookkeeping() {
        let res = Resonance::from_momentum(0, Complex64::new(2.7103, -0.1779)).unwrap();
        assert!((res.e_n - (2.7103f64.powi(2) - 0.1779f64.powi(2))).abs() < 1e-12);
        assert!((res.half_width - 2.0 * 2.7103 * 0.1779).abs() < 1e-12);
        assert!((res.lifetime * res.gamma() - 1.0).abs() < 1e-15);
        assert!(matches!(
            Resonance::from_momentum(0, Complex64::new(1.0, 0.2)),
            Err(Error::WrongHalfPlane(_))
        ));
    }

    #[test]
    fn delta_wall_pole() {
        let spec = ModelSpec::delta_wall(5.0, 1.0).unwrap();
        let cfg = SearchConfig::default();
        let res = refine_pole(&spec, Complex64::new(2.7, -0.5), &cfg).unwrap();
        assert!((res.k_pole - Complex64::new(2.7103, -0.1779)).norm() < 5e-4);
        assert!((res.energy - Complex64::new(7.3144, -0.9648)).norm() < 5e-3);
        // tan(ka) = k/(ik - V0)
        let k = res.k_pole;
        let lhs = k.tan();
        let rhs = k / (Complex64::new(0.0, 1.0) * k - 5.0);
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn converged_seed_is_fixed_point() {
        let spec = ModelSpec::delta_wall(5.0, 1.0).unwrap();
        let cfg = SearchConfig::default();
        let first = newton(&spec, Complex64::new(2.7, -0.5), &cfg).unwrap();
        let again = newton(&spec, first.k, &cfg).unwrap();
        assert!(again.iterations <= 2);
        assert!((again.k - first.k).norm() < 1e-12);
    }

    #[test]
    fn upper_half_plane_zero_reported() {
        // exp1's D vanishes only at k = i(n+1)/c
        let spec = ModelSpec::exp_one_piece(5.0, 0.5).unwrap();
        let cfg = SearchConfig::default();
        let err = refine_pole(&spec, Complex64::new(0.1, 1.9), &cfg).unwrap_err();
        match err {
            Error::WrongHalfPlane(k) => assert!((k - Complex64::new(0.0, 2.0)).norm() < 1e-8),
            other => panic!("unexpected {other:?}"),
        }
    }
}
