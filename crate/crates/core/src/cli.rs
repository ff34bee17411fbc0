//! The `shape-res` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 pole
//! search failure, 4 requested pole not found.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::delay::{delay_profile, DelayPeak};
use crate::error::Error;
use crate::gamow::{gamow_wavefunction, DecayLaw, MIN_SAMPLES};
use crate::model::{reflection_at_energy, ModelSpec};
use crate::oracle::{oracle_reflection, IntegrationConfig};
use crate::output::{Cell, Document, Format, Table};
use crate::poles::{search, Resonance, SearchConfig};
use crate::special::bessel::MAX_ORDER;
use crate::special::{bessel_i, bessel_k};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SEARCH: i32 = 3;
pub const EXIT_MISSING_POLE: i32 = 4;

const UNITS: &str = "2m = 1, hbar = 1";
const ORACLE_THRESHOLD: f64 = 1e-6;
const WRONSKIAN_THRESHOLD: f64 = 1e-9;
const UNIMODULARITY_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "shape-res", version, about = "Shape resonances of rising one-dimensional potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complex-energy poles in an energy window.
    Resonances(ResonancesArgs),
    /// Reflection phase and Wigner time delay on an energy grid.
    Timedelay(TimedelayArgs),
    /// Spatial profile of one resonant state.
    Gamow(GamowArgs),
    /// Compare closed forms with direct integration and check identities.
    Verify(VerifyArgs),
    /// Recompute both systems of the reference table and compare.
    Table1(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    #[value(name = "delta-wall")]
    DeltaWall,
    Exp1,
    Exp2,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub v0: f64,
    /// Delta position (delta-wall).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Left decay length (exp1, exp2).
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub c: f64,
    /// Right rise length (exp2).
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub d: f64,
}

impl ModelArgs {
    pub fn spec(&self) -> crate::Result<ModelSpec> {
        match self.model {
            ModelKind::DeltaWall => ModelSpec::delta_wall(self.v0, self.a),
            ModelKind::Exp1 => ModelSpec::exp_one_piece(self.v0, self.c),
            ModelKind::Exp2 => ModelSpec::exp_two_piece(self.v0, self.c, self.d),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl OutputArgs {
    fn format(&self) -> Format {
        match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub emin: f64,
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    pub emax: f64,
    /// Energy grid size.
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ResonancesArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TimedelayArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Append the refined peak positions.
    #[arg(long)]
    pub peaks: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GamowArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, default_value_t = 0)]
    pub pole_index: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xmax: Option<f64>,
    #[arg(long, default_value_t = 801)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub emin: f64,
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    pub emax: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A failed command: exit code plus message for standard error.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::InvalidModel(_) | Error::InvalidArgument(_) | Error::Unsupported(_) => EXIT_USAGE,
            _ => EXIT_SEARCH,
        };
        Failure { code, message: err.to_string() }
    }
}

/// What a command produced: the document and the exit code to report after
/// writing it.
struct Outcome {
    doc: Document,
    code: i32,
    note: Option<String>,
}

impl Outcome {
    fn ok(doc: Document) -> Self {
        Outcome { doc, code: EXIT_OK, note: None }
    }
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `stdout` (or `--output`) and diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = err.render().to_string();
            let _ = if err.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let output = match &cli.command {
        Command::Resonances(a) => &a.output,
        Command::Timedelay(a) => &a.output,
        Command::Gamow(a) => &a.output,
        Command::Verify(a) => &a.output,
        Command::Table1(a) => a,
    }
    .clone();
    let result = match cli.command {
        Command::Resonances(a) => cmd_resonances(&a),
        Command::Timedelay(a) => cmd_timedelay(&a),
        Command::Gamow(a) => cmd_gamow(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Table1(_) => cmd_table1(),
    };
    match result {
        Ok(outcome) => {
            if let Some(note) = &outcome.note {
                let _ = writeln!(stderr, "{note}");
            }
            match emit(&outcome.doc, &output, stdout) {
                Ok(()) => outcome.code,
                Err(err) => {
                    let _ = writeln!(stderr, "error: {err}");
                    EXIT_USAGE
                }
            }
        }
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}

fn emit(doc: &Document, output: &OutputArgs, stdout: &mut dyn Write) -> crate::Result<()> {
    let text = doc.render(output.format())?;
    match &output.output {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    }
    .map_err(|e| Error::Output(e.to_string()))
}

fn header(doc: &mut Document, command: &str, spec: Option<&ModelSpec>) {
    doc.meta("tool", "shape-res").meta("version", env!("CARGO_PKG_VERSION")).meta("command", command);
    if let Some(spec) = spec {
        doc.meta("model", spec.name()).meta("v0", spec.v0());
        match *spec {
            ModelSpec::DeltaWall { a, .. } => {
                doc.meta("a", a);
            }
            ModelSpec::ExpOnePiece { c, .. } => {
                doc.meta("c", c);
            }
            ModelSpec::ExpTwoPiece { c, d, .. } => {
                doc.meta("c", c).meta("d", d);
            }
        }
    }
    doc.meta("units", UNITS);
}

fn search_config(window: &WindowArgs) -> Result<SearchConfig, Failure> {
    if !(window.emin > 0.0 && window.emax > window.emin && window.emax.is_finite()) {
        return Err(Failure::usage(format!(
            "energy window must satisfy 0 < emin < emax, got [{}, {}]",
            window.emin, window.emax
        )));
    }
    if window.points < crate::delay::MIN_POINTS {
        return Err(Failure::usage(format!(
            "--points must be at least {}, got {}",
            crate::delay::MIN_POINTS,
            window.points
        )));
    }
    Ok(SearchConfig {
        e_min: window.emin,
        e_max: window.emax,
        profile_points: window.points,
        ..Default::default()
    })
}

/// Position of the delay peak closest to `energy`.
pub fn nearest_peak(peaks: &[DelayPeak], energy: f64) -> Option<f64> {
    peaks.iter().map(|p| p.energy).min_by(|a, b| (a - energy).abs().total_cmp(&(b - energy).abs()))
}

fn cmd_resonances(args: &ResonancesArgs) -> Result<Outcome, Failure> {
    let spec = args.model.spec()?;
    let cfg = search_config(&args.window)?;
    let found = search(&spec, &cfg)?;
    if found.all_seeds_failed() {
        return Err(Failure {
            code: EXIT_SEARCH,
            message: format!("pole search failed for all {} seeds", found.seeds),
        });
    }
    let mut table = Table::new(&["n", "E_n", "Gamma_n/2", "k_re", "k_im", "epsilon_n", "lifetime"]);
    for res in &found.poles {
        table.push(vec![
            res.n.into(),
            res.e_n.into(),
            res.half_width.into(),
            res.k_pole.re.into(),
            res.k_pole.im.into(),
            nearest_peak(&found.profile.peaks, res.e_n).into(),
            res.lifetime.into(),
        ]);
    }
    let mut doc = Document::new(table);
    header(&mut doc, "resonances", Some(&spec));
    doc.meta("emin", cfg.e_min).meta("emax", cfg.e_max).meta("points", cfg.profile_points);
    doc.meta("count", found.poles.len());
    let note = found.poles.is_empty().then(|| "no resonances found".to_string());
    if let Some(n) = &note {
        doc.meta("note", n.as_str());
    }
    Ok(Outcome { doc, code: EXIT_OK, note })
}

fn cmd_timedelay(args: &TimedelayArgs) -> Result<Outcome, Failure> {
    let spec = args.model.spec()?;
    let cfg = search_config(&args.window)?;
    let profile = delay_profile(&spec, cfg.e_min, cfg.e_max, cfg.profile_points)?;
    let mut table = Table::new(&["E", "tau", "theta_unwrapped", "R"]);
    for p in &profile.points {
        table.push(vec![p.energy.into(), p.tau.into(), p.theta.into(), p.modulus.into()]);
    }
    let mut doc = Document::new(table);
    header(&mut doc, "timedelay", Some(&spec));
    doc.meta("emin", cfg.e_min).meta("emax", cfg.e_max).meta("points", cfg.profile_points);
    doc.meta("argmax_E", profile.argmax().map(|p| p.energy));
    if args.peaks {
        let mut peaks = Table::new(&["n", "epsilon_n", "tau_max"]);
        for (n, p) in profile.peaks.iter().enumerate() {
            peaks.push(vec![n.into(), p.energy.into(), p.height.into()]);
        }
        doc.sections.push(("peaks".into(), peaks));
    }
    Ok(Outcome::ok(doc))
}

/// Samples left of which the outgoing tail is free of the potential.
fn tail_end(spec: &ModelSpec) -> f64 {
    match *spec {
        ModelSpec::DeltaWall { a, .. } => -a - 0.5,
        ModelSpec::ExpTwoPiece { c, .. } if c > 0.0 => -5.0 * c,
        _ => -0.5,
    }
}

fn cmd_gamow(args: &GamowArgs) -> Result<Outcome, Failure> {
    let spec = args.model.spec()?;
    let cfg = search_config(&args.window)?;
    let (default_min, default_max) = match spec {
        ModelSpec::DeltaWall { .. } => (-8.0, 0.0),
        _ => (-10.0, 3.0),
    };
    let x_min = args.xmin.unwrap_or(default_min);
    let x_max = args.xmax.unwrap_or(default_max);
    if !(x_min < x_max) {
        return Err(Failure::usage(format!("need xmin < xmax, got {x_min} and {x_max}")));
    }
    if args.samples < MIN_SAMPLES {
        return Err(Failure::usage(format!(
            "--samples must be at least {MIN_SAMPLES}, got {}",
            args.samples
        )));
    }
    if matches!(spec, ModelSpec::ExpOnePiece { .. }) {
        return Err(Failure { code: EXIT_MISSING_POLE, message: "the exp1 model has no resonances".into() });
    }
    let found = search(&spec, &cfg)?;
    let Some(pole) = found.poles.get(args.pole_index) else {
        return Err(Failure {
            code: EXIT_MISSING_POLE,
            message: format!(
                "pole {} not found: {} resonance(s) in [{}, {}]",
                args.pole_index,
                found.poles.len(),
                cfg.e_min,
                cfg.e_max
            ),
        });
    };
    let profile = gamow_wavefunction(&spec, pole, x_min, x_max, args.samples)?;
    let mut table = Table::new(&["x", "psi_re", "psi_im", "abs_psi"]);
    for (i, &x) in profile.x.iter().enumerate() {
        let psi = profile.psi[i];
        table.push(vec![x.into(), psi.re.into(), psi.im.into(), profile.abs_psi[i].into()]);
    }
    let law = DecayLaw::from_resonance(pole);
    let mut doc = Document::new(table);
    header(&mut doc, "gamow", Some(&spec));
    doc.meta("pole_index", pole.n)
        .meta("E_n", pole.e_n)
        .meta("Gamma_n", law.gamma)
        .meta("alpha", profile.alpha)
        .meta("beta", profile.beta)
        .meta("lifetime", law.mean_lifetime)
        .meta("envelope_slope", profile.envelope_slope(x_min, tail_end(&spec)));
    Ok(Outcome::ok(doc))
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, Failure> {
    let spec = args.model.spec()?;
    if matches!(spec, ModelSpec::DeltaWall { .. }) {
        return Err(Failure::usage("verify needs a pointwise potential (exp1 or exp2)"));
    }
    if !(args.emin > 0.0 && args.emax > args.emin) || args.points < 2 {
        return Err(Failure::usage("need 0 < emin < emax and at least 2 points"));
    }
    let step = (args.emax - args.emin) / (args.points - 1) as f64;
    let grid: Vec<f64> = (0..args.points).map(|i| args.emin + step * i as f64).collect();
    let sp = spec.scale_params().expect("exponential model");
    let (c, d) = match spec {
        ModelSpec::ExpOnePiece { c, .. } => (c, c),
        ModelSpec::ExpTwoPiece { c, d, .. } => (c, d),
        ModelSpec::DeltaWall { .. } => unreachable!(),
    };

    let rows: Vec<(f64, f64, f64)> = grid
        .par_iter()
        .map(|&e| {
            let exact = reflection_at_energy(&spec, e)?;
            let oracle = oracle_reflection(&spec, e, &IntegrationConfig::default())?;
            let k = e.sqrt();
            let mut wronskian: f64 = 0.0;
            for (len, z) in [(c, sp.s_c), (d, sp.s_d)] {
                // I is only supported up to |ν| = MAX_ORDER
                if len > 0.0 && k * len <= MAX_ORDER {
                    let nu = Complex64::new(0.0, k * len);
                    let i = bessel_i(nu, z)?;
                    let kk = bessel_k(nu, z)?;
                    let w = i.value * kk.derivative - i.derivative * kk.value + 1.0 / z;
                    wronskian = wronskian.max(w.norm());
                }
            }
            Ok(((exact - oracle).norm(), wronskian, (exact.norm() - 1.0).abs()))
        })
        .collect::<crate::Result<_>>()?;

    let max_of = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let checks = [
        ("oracle_deviation", max_of(|r| r.0), ORACLE_THRESHOLD),
        ("wronskian_residual", max_of(|r| r.1), WRONSKIAN_THRESHOLD),
        ("unimodularity_residual", max_of(|r| r.2), UNIMODULARITY_THRESHOLD),
    ];
    let mut table = Table::new(&["check", "max_residual", "threshold", "pass"]);
    let mut all_pass = true;
    for (name, value, threshold) in checks {
        let pass = value < threshold;
        all_pass &= pass;
        table.push(vec![name.into(), value.into(), threshold.into(), pass.into()]);
    }
    let mut doc = Document::new(table);
    header(&mut doc, "verify", Some(&spec));
    doc.meta("emin", args.emin).meta("emax", args.emax).meta("points", args.points);
    let code = if all_pass { EXIT_OK } else { EXIT_VERIFY };
    let note = (!all_pass).then(|| "verification failed".to_string());
    Ok(Outcome { doc, code, note })
}

/// One system of the reference table: parameters, printed poles and printed
/// delay peaks.
pub struct ReferenceSystem {
    pub label: &'static str,
    pub c: f64,
    pub d: f64,
    pub poles: [(f64, f64); 5],
    pub peaks: [f64; 5],
}

/// Printed reference values, V0 = 5.
pub const REFERENCE_SYSTEMS: [ReferenceSystem; 2] = [
    ReferenceSystem {
        label: "c=0.5,d=5",
        c: 0.5,
        d: 5.0,
        poles: [(8.88, 1.50), (13.14, 1.87), (17.30, 2.17), (21.51, 2.45), (25.80, 2.70)],
        peaks: [8.89, 13.21, 17.34, 21.65, 26.05],
    },
    ReferenceSystem {
        label: "c=0,d=5",
        c: 0.0,
        d: 5.0,
        poles: [(9.42, 1.23), (13.77, 1.49), (18.01, 1.69), (22.28, 1.89), (26.62, 2.07)],
        peaks: [9.36, 13.46, 18.04, 22.14, 26.43],
    },
];

pub const POLE_TOLERANCE: f64 = 0.02;
pub const PEAK_TOLERANCE: f64 = 0.05;

/// Computed poles and delay peaks of one reference system on [1, 30].
pub fn reference_run(system: &ReferenceSystem) -> crate::Result<(Vec<Resonance>, Vec<DelayPeak>)> {
    let spec = ModelSpec::exp_two_piece(5.0, system.c, system.d)?;
    let found = search(&spec, &SearchConfig::window(1.0, 30.0))?;
    Ok((found.poles, found.profile.peaks))
}

fn cmd_table1() -> Result<Outcome, Failure> {
    let mut table =
        Table::new(&["system", "n", "quantity", "computed", "reference", "deviation", "tolerance", "pass"]);
    let mut all_pass = true;
    for system in &REFERENCE_SYSTEMS {
        let (poles, peaks) = reference_run(system)?;
        for n in 0..5 {
            let res = poles.get(n);
            let (ref_e, ref_half) = system.poles[n];
            let rows = [
                ("E_n", res.map(|r| r.e_n), ref_e, POLE_TOLERANCE),
                ("Gamma_n/2", res.map(|r| r.half_width), ref_half, POLE_TOLERANCE),
                ("epsilon_n", res.and_then(|r| nearest_peak(&peaks, r.e_n)), system.peaks[n], PEAK_TOLERANCE),
            ];
            for (quantity, computed, reference, tolerance) in rows {
                let deviation = computed.map(|v| (v - reference).abs());
                let pass = deviation.is_some_and(|d| d < tolerance);
                all_pass &= pass;
                table.push(vec![
                    system.label.into(),
                    n.into(),
                    quantity.into(),
                    Cell::from(computed),
                    reference.into(),
                    Cell::from(deviation),
                    tolerance.into(),
                    pass.into(),
                ]);
            }
        }
    }
    let mut doc = Document::new(table);
    header(&mut doc, "table1", None);
    doc.meta("model", "exp2").meta("v0", 5.0).meta("emin", 1.0).meta("emax", 30.0).meta("points", 2000usize);
    let code = if all_pass { EXIT_OK } else { EXIT_VERIFY };
    let note = (!all_pass).then(|| "some computed values fall outside the tolerances".to_string());
    Ok(Outcome { doc, code, note })
}
