//! Independent reflection amplitude from direct integration of
//! `ψ″ = (V(x) - E) ψ`.
//!
//! The solution is started deep in the classically forbidden region with the
//! decaying WKB form and carried leftward by fixed-step RK4 to a point where
//! V is negligible. There it is split into `A e^{ikx} + B e^{-ikx}` and
//! `r = B/A`. At real E the whole computation is real until that last step.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelSpec;

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Rescale ψ and ψ′ once |ψ| passes this.
const RENORM_LIMIT: f64 = 1e100;
/// Record every this many steps in the trace.
const TRACE_STRIDE: usize = 100;
/// Left edge used when the left region is exactly flat.
const FLAT_LEFT_EDGE: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    /// Where A and B are read off. Chosen from `flat_tol` when `None`.
    pub x_left: Option<f64>,
    /// Where the WKB seed is placed. Chosen from `depth_factor` when `None`.
    pub x_right: Option<f64>,
    /// Largest RK4 step.
    pub step: f64,
    /// Required `V(x_left) ≤ flat_tol·E`.
    pub flat_tol: f64,
    /// Required `V(x_right) ≥ depth_factor·E`.
    pub depth_factor: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig { x_left: None, x_right: None, step: 1e-3, flat_tol: 1e-12, depth_factor: 1e3 }
    }
}

impl IntegrationConfig {
    pub fn with_step(step: f64) -> Self {
        IntegrationConfig { step, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub x: f64,
    pub psi: f64,
    pub dpsi: f64,
    /// The unscaled solution is `psi·e^{log_scale}`.
    pub log_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolutionTrace {
    pub samples: Vec<TracePoint>,
    pub renormalizations: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub r: Complex64,
    /// Incident amplitude A.
    pub incident: Complex64,
    /// Reflected amplitude B.
    pub reflected: Complex64,
    pub x_left: f64,
    pub x_right: f64,
    pub trace: SolutionTrace,
}

/// One exponential piece `v0 e^{2x/len}` (or zero when `len == 0`).
#[derive(Debug, Clone, Copy)]
struct Piece {
    v0: f64,
    len: f64,
}

impl Piece {
    fn value(self, x: f64) -> f64 {
        if self.len > 0.0 {
            self.v0 * (2.0 * x / self.len).exp()
        } else {
            0.0
        }
    }

    fn slope(self, x: f64) -> f64 {
        if self.len > 0.0 {
            2.0 * self.value(x) / self.len
        } else {
            0.0
        }
    }

    /// x where the piece equals `level`.
    fn crossing(self, level: f64) -> f64 {
        0.5 * self.len * (level / self.v0).ln()
    }
}

/// (left piece, right piece, junction). The one-piece model has no junction.
fn pieces(spec: &ModelSpec) -> Result<(Piece, Piece, Option<f64>)> {
    match *spec {
        ModelSpec::DeltaWall { .. } => Err(Error::Unsupported("the ODE oracle needs a pointwise potential")),
        ModelSpec::ExpOnePiece { v0, c } => {
            let p = Piece { v0, len: c };
            Ok((p, p, None))
        }
        ModelSpec::ExpTwoPiece { v0, c, d } => Ok((Piece { v0, len: c }, Piece { v0, len: d }, Some(0.0))),
    }
}

/// `ψ′/ψ` of the decaying WKB solution `q^{-1/2} exp(-∫q)`, `q = √(V - E)`.
pub fn wkb_log_derivative(v: f64, dv: f64, energy: f64) -> Result<f64> {
    let q2 = v - energy;
    if !(q2 > 0.0) {
        return Err(Error::RegionNotDeep { potential: v, required: energy });
    }
    let q = q2.sqrt();
    let dq = dv / (2.0 * q);
    Ok(-q - dq / (2.0 * q))
}

/// WKB seed `(ψ, ψ′)` at `x`, with `ψ = q^{-1/2}`.
pub fn wkb_start(spec: &ModelSpec, energy: f64, x: f64) -> Result<(f64, f64)> {
    let (left, right, junction) = pieces(spec)?;
    let piece = match junction {
        Some(j) if x <= j => left,
        _ => right,
    };
    let v = piece.value(x);
    let log_der = wkb_log_derivative(v, piece.slope(x), energy)?;
    let psi = (v - energy).powf(-0.25);
    Ok((psi, log_der * psi))
}

fn resolve_bounds(spec: &ModelSpec, energy: f64, cfg: &IntegrationConfig) -> Result<(f64, f64)> {
    let (left, right, junction) = pieces(spec)?;
    let junction_x = junction.unwrap_or(f64::NEG_INFINITY);
    let required = cfg.depth_factor * energy;
    let limit = cfg.flat_tol * energy;

    let x_right = match cfg.x_right {
        Some(x) => {
            let potential = if x > junction_x { right.value(x) } else { left.value(x) };
            if !(potential >= required) {
                return Err(Error::RegionNotDeep { potential, required });
            }
            x
        }
        None => {
            let x = right.crossing(required) + 0.1 * right.len;
            if junction.is_some() {
                x.max(0.1 * right.len)
            } else {
                x
            }
        }
    };
    let x_left = match cfg.x_left {
        Some(x) => {
            let potential = if x > junction_x { right.value(x) } else { left.value(x) };
            if !(potential <= limit) {
                return Err(Error::FlatRegionViolation { potential, limit });
            }
            x
        }
        None if left.len == 0.0 => FLAT_LEFT_EDGE,
        None => {
            let x = left.crossing(limit) - 0.1 * left.len;
            if junction.is_some() {
                x.min(-0.1 * left.len)
            } else {
                x
            }
        }
    };
    if !(x_left < x_right) {
        return Err(Error::InvalidArgument(format!("need x_left < x_right, got {x_left} and {x_right}")));
    }
    Ok((x_left, x_right))
}

struct Integrator {
    energy: f64,
    psi: f64,
    dpsi: f64,
    log_scale: f64,
    trace: SolutionTrace,
}

impl Integrator {
    fn record(&mut self, x: f64) {
        self.trace.samples.push(TracePoint { x, psi: self.psi, dpsi: self.dpsi, log_scale: self.log_scale });
    }

    /// RK4 from `from` to `to` in equal steps no longer than `max_step`.
    fn run(&mut self, piece: Piece, from: f64, to: f64, max_step: f64) {
        let n = ((from - to).abs() / max_step).ceil().max(1.0) as usize;
        let h = (to - from) / n as f64;
        let e = self.energy;
        let accel = |x: f64, psi: f64| (piece.value(x) - e) * psi;
        for i in 0..n {
            let x = from + h * i as f64;
            let (y, dy) = (self.psi, self.dpsi);
            let k1 = (dy, accel(x, y));
            let k2 = (dy + 0.5 * h * k1.1, accel(x + 0.5 * h, y + 0.5 * h * k1.0));
            let k3 = (dy + 0.5 * h * k2.1, accel(x + 0.5 * h, y + 0.5 * h * k2.0));
            let k4 = (dy + h * k3.1, accel(x + h, y + h * k3.0));
            self.psi = y + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            self.dpsi = dy + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);

            let size = self.psi.abs().max(self.dpsi.abs());
            if size > RENORM_LIMIT {
                self.psi /= size;
                self.dpsi /= size;
                self.log_scale += size.ln();
                self.trace.renormalizations += 1;
            }
            self.trace.steps += 1;
            if (i + 1) % TRACE_STRIDE == 0 && i + 1 != n {
                self.record(x + h);
            }
        }
        self.record(to);
    }
}

/// Full oracle run with the solution trace.
pub fn oracle_solve(spec: &ModelSpec, energy: f64, cfg: &IntegrationConfig) -> Result<OracleSolution> {
    spec.validate()?;
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::InvalidArgument(format!("energy must be positive, got {energy}")));
    }
    if !(cfg.step > 0.0) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let (left, right, junction) = pieces(spec)?;
    let (x_left, x_right) = resolve_bounds(spec, energy, cfg)?;
    let (psi, dpsi) = wkb_start(spec, energy, x_right)?;
    let mut run = Integrator { energy, psi, dpsi, log_scale: 0.0, trace: SolutionTrace::default() };
    run.record(x_right);
    match junction {
        Some(j) if x_left < j && j < x_right => {
            run.run(right, x_right, j, cfg.step);
            run.run(left, j, x_left, cfg.step);
        }
        Some(j) if x_right <= j => run.run(left, x_right, x_left, cfg.step),
        _ => run.run(right, x_right, x_left, cfg.step),
    }

    let k = energy.sqrt();
    let ik = I * k;
    let incident = (-ik * x_left).exp() * (ik * run.psi + run.dpsi) / (2.0 * ik);
    let reflected = (ik * x_left).exp() * (ik * run.psi - run.dpsi) / (2.0 * ik);
    if incident.norm() == 0.0 {
        return Err(Error::AtPole(Complex64::new(k, 0.0)));
    }
    Ok(OracleSolution { r: reflected / incident, incident, reflected, x_left, x_right, trace: run.trace })
}

/// r(E) by direct integration.
pub fn oracle_reflection(spec: &ModelSpec, energy: f64, cfg: &IntegrationConfig) -> Result<Complex64> {
    oracle_solve(spec, energy, cfg).map(|s| s.r)
}
