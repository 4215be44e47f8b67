//! Command-line front end: `trace`, `weld`, `analyze`, `construct`,
//! `selftest` and `plot`.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::circle::CirclePoint;
use crate::constructions::composite::{EXTENSION_MODES, EXTENSION_SAMPLES};
use crate::constructions::{
    auto_shear, build_psi, build_tau, compose_f, poincare_l2_integral, psi_j_decomposition,
    BeltramiField, BetaPolicy, DomainDescriptor, HarmonicExtension, PoincareOptions, SlitMap,
};
use crate::driver::DrivingTerm;
use crate::error::{Error, Result, Side};
use crate::loewner::{trace, LoewnerConfig};
use crate::regularity::cross::wp_cross_detailed;
use crate::regularity::distortion::{mr_stability, qs_constant, DistortionEstimate};
use crate::regularity::oscillation::vmo_curve;
use crate::regularity::seminorm::h_half_seminorm_detailed;
use crate::regularity::{
    bmo_norm, lip_half_norm, loewner_energy, Normalization, OscillationOptions, QuadratureOptions,
};
use crate::welding::{extract_welding, welding_log_derivative, Welding};

pub mod io;
pub mod selftest;
pub mod svg;

pub use io::load_driver;

#[derive(Debug, Parser)]
#[command(name = "loewner-weld", version, about = "Loewner slits, their conformal weldings and regularity functionals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Driver JSON → trace CSV (`t,x,y`).
    Trace(TraceArgs),
    /// Driver JSON → welding CSV (`t,theta_plus,theta_minus`).
    Weld(WeldArgs),
    /// Welding CSV (and optionally its driver) → regularity report JSON.
    Analyze(AnalyzeArgs),
    /// Welding CSV (and optionally its driver) → constructed maps JSON.
    Construct(ConstructArgs),
    /// Run the built-in invariant checks.
    Selftest,
    /// CSV → SVG line plot.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long, default_value_t = 1e-6)]
    pub eps_hit: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub eps_alpha: f64,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long)]
    pub driver: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub flow: FlowArgs,
}

#[derive(Debug, Args)]
pub struct WeldArgs {
    #[arg(long)]
    pub driver: PathBuf,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub flow: FlowArgs,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Cells per arc at the coarsest quadrature level.
    #[arg(long, default_value_t = 128)]
    pub cells: usize,
    /// Relative agreement required between refinement levels.
    #[arg(long, default_value_t = 0.01)]
    pub quad_tol: f64,
    /// Record non-converged quadratures with a false flag instead of failing.
    #[arg(long)]
    pub allow_unconverged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Raw,
    TwoPi,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub welding: PathBuf,
    #[arg(long)]
    pub driver: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = NormArg::Raw)]
    pub normalization: NormArg,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub welding: PathBuf,
    /// Needed for the composite map `f`, which ends with the Loewner flow.
    #[arg(long)]
    pub driver: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// `auto` or a number in (-1, 1).
    #[arg(long, default_value = "auto")]
    pub beta: String,
    /// Boundary samples written per map.
    #[arg(long, default_value_t = 64)]
    pub boundary_samples: usize,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub flow: FlowArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    /// Columns `t,x,y`: the curve in the plane.
    Trace,
    /// Welding CSV: `θ⁻` against `θ⁺`.
    Welding,
    /// Welding CSV: hitting time against angle on both sides.
    Profile,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub kind: PlotKind,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Trace,
    Weld,
    Analyze,
    Construct,
    Selftest,
    Plot,
}

/// Everything a run depends on, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub driver: Option<PathBuf>,
    pub welding: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub welding_samples: usize,
    pub trace_count: usize,
    pub quadrature_cells: usize,
    pub eps_hit: f64,
    pub eps_alpha: f64,
    pub quadrature_tol: f64,
    pub normalization: Normalization,
    pub beta: Option<f64>,
    pub boundary_samples: usize,
    pub allow_unconverged: bool,
    #[serde(skip)]
    pub plot_kind: Option<PlotKind>,
}

impl RunConfig {
    fn base(command: CommandKind) -> Self {
        Self {
            command,
            driver: None,
            welding: None,
            input: None,
            output: None,
            welding_samples: 256,
            trace_count: 200,
            quadrature_cells: 128,
            eps_hit: 1e-6,
            eps_alpha: 1e-6,
            quadrature_tol: 0.01,
            normalization: Normalization::Raw,
            beta: None,
            boundary_samples: 64,
            allow_unconverged: false,
            plot_kind: None,
        }
    }

    pub fn from_command(cmd: &Command) -> Result<Self> {
        let cfg = match cmd {
            Command::Trace(a) => Self {
                driver: Some(a.driver.clone()),
                output: Some(a.out.clone()),
                trace_count: a.count,
                eps_hit: a.flow.eps_hit,
                eps_alpha: a.flow.eps_alpha,
                ..Self::base(CommandKind::Trace)
            },
            Command::Weld(a) => Self {
                driver: Some(a.driver.clone()),
                output: Some(a.out.clone()),
                welding_samples: a.samples,
                eps_hit: a.flow.eps_hit,
                eps_alpha: a.flow.eps_alpha,
                ..Self::base(CommandKind::Weld)
            },
            Command::Analyze(a) => Self {
                driver: a.driver.clone(),
                welding: Some(a.welding.clone()),
                output: Some(a.out.clone()),
                quadrature_cells: a.quad.cells,
                quadrature_tol: a.quad.quad_tol,
                allow_unconverged: a.quad.allow_unconverged,
                normalization: match a.normalization {
                    NormArg::Raw => Normalization::Raw,
                    NormArg::TwoPi => Normalization::TwoPi,
                },
                ..Self::base(CommandKind::Analyze)
            },
            Command::Construct(a) => Self {
                driver: a.driver.clone(),
                welding: Some(a.welding.clone()),
                output: Some(a.out.clone()),
                quadrature_cells: a.quad.cells,
                quadrature_tol: a.quad.quad_tol,
                allow_unconverged: a.quad.allow_unconverged,
                boundary_samples: a.boundary_samples,
                eps_hit: a.flow.eps_hit,
                eps_alpha: a.flow.eps_alpha,
                beta: match a.beta.as_str() {
                    "auto" => None,
                    s => Some(s.parse().map_err(|_| {
                        Error::Validation(format!("--beta must be `auto` or a number, got `{s}`"))
                    })?),
                },
                ..Self::base(CommandKind::Construct)
            },
            Command::Selftest => Self::base(CommandKind::Selftest),
            Command::Plot(a) => Self {
                input: Some(a.input.clone()),
                output: Some(a.out.clone()),
                plot_kind: Some(a.kind),
                ..Self::base(CommandKind::Plot)
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.welding_samples < 8 {
            return Err(Error::Validation(format!(
                "welding samples {} below the minimum of 8",
                self.welding_samples
            )));
        }
        if self.trace_count < 1 {
            return Err(Error::Validation("trace count must be at least 1".into()));
        }
        if self.quadrature_cells < 8 {
            return Err(Error::Validation(format!(
                "quadrature cells {} below the minimum of 8",
                self.quadrature_cells
            )));
        }
        if self.boundary_samples < 1 {
            return Err(Error::Validation("boundary samples must be at least 1".into()));
        }
        for (name, v) in [
            ("eps_hit", self.eps_hit),
            ("eps_alpha", self.eps_alpha),
            ("quadrature tolerance", self.quadrature_tol),
        ] {
            if !(v > 0.0) {
                return Err(Error::Validation(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(b) = self.beta {
            if !(b > -1.0 && b < 1.0) {
                return Err(Error::Validation(format!("β = {b} outside (-1, 1)")));
            }
        }
        if let Some(out) = &self.output {
            for input in [&self.driver, &self.welding, &self.input].into_iter().flatten() {
                if same_path(out, input) {
                    return Err(Error::Validation(format!(
                        "output {} would overwrite an input",
                        out.display()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn loewner(&self) -> LoewnerConfig {
        LoewnerConfig {
            eps_hit: self.eps_hit,
            eps_alpha: self.eps_alpha,
            ..LoewnerConfig::default()
        }
    }

    pub fn quadrature(&self) -> QuadratureOptions {
        QuadratureOptions {
            cells: self.quadrature_cells,
            rel_tol: self.quadrature_tol,
            ..QuadratureOptions::default()
        }
    }
}

fn same_path(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

fn required<'a>(p: &'a Option<PathBuf>, what: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::Validation(format!("missing {what} path")))
}

/// A quadrature result that may be recorded without having converged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub converged: bool,
}

fn tolerate(r: Result<f64>, allow: bool) -> Result<Estimate> {
    match r {
        Ok(value) => Ok(Estimate {
            value,
            converged: true,
        }),
        Err(Error::Accuracy { fine, .. }) if allow => Ok(Estimate {
            value: fine,
            converged: false,
        }),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RefinementFlags {
    pub seminorm_converged: bool,
    pub wp_cross_converged: bool,
    pub qs_stable: bool,
    pub mr_stable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seminorm_log_phi_prime: Estimate,
    pub bmo: f64,
    pub vmo_curve: Vec<(f64, f64)>,
    pub qs_constant: DistortionEstimate,
    pub mr_constant: DistortionEstimate,
    pub wp_cross_integral: Estimate,
    pub loewner_energy: Option<f64>,
    pub lip_half_norm: Option<f64>,
    pub normalization: Normalization,
    pub refinement_flags: RefinementFlags,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub config: RunConfig,
}

/// All regularity functionals of a welding (and its driver, if known).
pub fn analyze(w: &Welding, d: Option<&DrivingTerm>, cfg: &RunConfig) -> Result<Report> {
    let opts = cfg.quadrature();
    let logd = welding_log_derivative(w, Side::Plus)?;
    let arc = w.plus_arc();
    // The tip end of I⁺ carries the one-sided derivative; keep it apart.
    let seminorm_opts = QuadratureOptions {
        excluded_points: vec![arc.end().angle()],
        ..opts.clone()
    };
    let seminorm = tolerate(
        h_half_seminorm_detailed(&logd, &arc, &arc, cfg.normalization, &seminorm_opts).map(|r| r.0),
        cfg.allow_unconverged,
    )?;
    let osc = OscillationOptions::default();
    let tau = build_tau(w.alpha_minus(), w.alpha_plus())?;
    let wp = tolerate(wp_cross_detailed(w, &tau, &opts).map(|q| q.value), cfg.allow_unconverged)?;
    let qs = qs_constant(&w.to_homeomorphism());
    let mr = mr_stability(&w.thinned(2)?, w);
    Ok(Report {
        seminorm_log_phi_prime: seminorm,
        bmo: bmo_norm(&logd, &arc, &osc)?,
        vmo_curve: vmo_curve(&logd, &arc, &osc)?,
        qs_constant: qs,
        mr_constant: mr,
        wp_cross_integral: wp,
        loewner_energy: d.map(loewner_energy),
        lip_half_norm: d.map(lip_half_norm),
        normalization: cfg.normalization,
        refinement_flags: RefinementFlags {
            seminorm_converged: seminorm.converged,
            wp_cross_converged: wp.converged,
            qs_stable: qs.stable,
            mr_stable: mr.stable,
        },
        alpha_plus: w.plus_extent(),
        alpha_minus: -w.minus_extent(),
        config: cfg.clone(),
    })
}

fn c_json(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

/// The maps of the quasislit-disk construction as JSON.
pub fn construct(w: &Welding, d: Option<&DrivingTerm>, cfg: &RunConfig) -> Result<serde_json::Value> {
    let n = cfg.boundary_samples;
    let angles: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let tau = build_tau(w.alpha_minus(), w.alpha_plus())?;
    let psi = build_psi(w, &tau)?;

    let tau_samples: Vec<_> = angles
        .iter()
        .map(|&a| json!([a, tau.eval(CirclePoint::from_angle(a)).0.angle()]))
        .collect();
    let psi_samples = angles
        .iter()
        .map(|&a| {
            let (p, l) = psi.eval_log(a)?;
            Ok(json!([a, p.angle(), l]))
        })
        .collect::<Result<Vec<_>>>()?;
    let (j, j_converged) = match psi_j_decomposition(&psi, &cfg.quadrature()) {
        Ok(j) => (Some(j), true),
        Err(Error::Accuracy { .. }) if cfg.allow_unconverged => {
            let loose = QuadratureOptions {
                rel_tol: f64::INFINITY,
                ..cfg.quadrature()
            };
            (Some(psi_j_decomposition(&psi, &loose)?), false)
        }
        Err(e) => return Err(e),
    };

    let extension = HarmonicExtension::of_circle_map(&psi, EXTENSION_SAMPLES, EXTENSION_MODES)?;
    let (shear, beta) = match cfg.beta {
        Some(b) => (None, b),
        None => {
            let q = auto_shear(&psi, &tau, &extension)?;
            let b = q.image_of_center();
            (Some(q), b)
        }
    };
    let h = SlitMap::new(beta)?;
    let h_samples: Vec<_> = angles
        .iter()
        .map(|&a| {
            let v = h.eval(Complex64::from_polar(1.0, a));
            json!([a, v.re, v.im])
        })
        .collect();

    let mut maps = vec![
        json!({
            "kind": "tau",
            "parameters": {
                "alpha_minus": w.alpha_minus().angle(),
                "alpha_plus": w.alpha_plus().angle(),
                "rotation": tau.rotation_angle(),
                "pole": c_json(tau.pole()),
            },
            "boundary_samples": tau_samples,
        }),
        json!({
            "kind": "psi",
            "parameters": {
                "j_decomposition": j,
                "j_converged": j_converged,
            },
            "boundary_samples": psi_samples,
        }),
        json!({
            "kind": "slit_map_h",
            "parameters": { "beta": h.beta, "c": h.c, "t_slit": h.t_slit },
            "boundary_samples": h_samples,
        }),
    ];
    match shear {
        Some(q) => {
            let k = q.beltrami_bound();
            let mu = BeltramiField::new(DomainDescriptor::UnitDisk, k, q.r, move |z| q.beltrami(z))?;
            let integral = tolerate(
                poincare_l2_integral(&mu, None, &PoincareOptions::default()),
                cfg.allow_unconverged,
            )?;
            let samples: Vec<_> = angles
                .iter()
                .map(|&a| {
                    let z = Complex64::from_polar(0.5 * q.r, a);
                    json!([a, c_json(q.eval(z))])
                })
                .collect();
            maps.push(json!({
                "kind": "lemma_q",
                "parameters": {
                    "z0": c_json(q.z0),
                    "r": q.r,
                    "beta": beta,
                    "mu_bound": k,
                    "poincare_l2": integral,
                },
                "half_radius_samples": samples,
            }));
        }
        None => maps.push(json!({
            "kind": "lemma_q",
            "parameters": { "identity": true, "beta": beta },
        })),
    }
    if let Some(d) = d {
        let policy = cfg.beta.map_or(BetaPolicy::Auto, BetaPolicy::Fixed);
        let f = compose_f(d, w, policy, &cfg.loewner())?;
        let diag = f.boundary_diagnostics(50)?;
        maps.push(json!({
            "kind": "composite_f",
            "parameters": { "beta": f.beta(), "t_slit": f.slit().t_slit },
            "diagnostics": {
                "samples": diag.samples,
                "max_pair_mismatch": diag.max_pair_mismatch,
                "f_origin": c_json(diag.f_origin),
            },
        }));
    }
    Ok(json!({ "maps": maps, "config": cfg }))
}

fn plot(cfg: &RunConfig) -> Result<()> {
    let input = required(&cfg.input, "input")?;
    let (header, cols) = io::read_columns(input)?;
    let col = |name: &str| -> Result<&Vec<f64>> {
        header
            .iter()
            .position(|h| h == name)
            .map(|i| &cols[i])
            .ok_or_else(|| Error::Validation(format!("{} has no `{name}` column", input.display())))
    };
    let zip = |a: &[f64], b: &[f64]| a.iter().copied().zip(b.iter().copied()).collect::<Vec<_>>();
    let p = match cfg.plot_kind.unwrap_or(PlotKind::Trace) {
        PlotKind::Trace => svg::Plot {
            title: "Loewner trace".into(),
            x_label: "Re".into(),
            y_label: "Im".into(),
            series: vec![svg::Series {
                label: "γ(t)".into(),
                points: zip(col("x")?, col("y")?),
            }],
            equal_aspect: true,
        },
        PlotKind::Welding => svg::Plot {
            title: "Welding pairing".into(),
            x_label: "θ⁺".into(),
            y_label: "θ⁻".into(),
            series: vec![svg::Series {
                label: "φ".into(),
                points: zip(col("theta_plus")?, col("theta_minus")?),
            }],
            equal_aspect: false,
        },
        PlotKind::Profile => svg::Plot {
            title: "Hitting profile".into(),
            x_label: "angle".into(),
            y_label: "hitting time".into(),
            series: vec![
                svg::Series {
                    label: "plus side".into(),
                    points: zip(col("theta_plus")?, col("t")?),
                },
                svg::Series {
                    label: "minus side".into(),
                    points: zip(col("theta_minus")?, col("t")?),
                },
            ],
            equal_aspect: false,
        },
    };
    let text = svg::render(&p);
    io::write_atomic(required(&cfg.output, "output")?, |out| Ok(out.write_all(text.as_bytes())?))
}


/// Run one command. Returns the process exit status on success; errors map
/// to [`Error::exit_code`].
pub fn run_command(cfg: &RunConfig) -> Result<i32> {
    match cfg.command {
        CommandKind::Trace => {
            let d = load_driver(required(&cfg.driver, "driver")?)?;
            let samples = trace(&d, cfg.trace_count, &cfg.loewner())?;
            io::write_trace(required(&cfg.output, "output")?, &samples)?;
        }
        CommandKind::Weld => {
            let d = load_driver(required(&cfg.driver, "driver")?)?;
            let w = extract_welding(&d, cfg.welding_samples, &cfg.loewner())?;
            io::write_welding(required(&cfg.output, "output")?, &w)?;
        }
        CommandKind::Analyze => {
            let w = io::read_welding(required(&cfg.welding, "welding")?)?;
            let d = cfg.driver.as_deref().map(load_driver).transpose()?;
            let report = analyze(&w, d.as_ref(), cfg)?;
            io::write_json(required(&cfg.output, "output")?, &report)?;
        }
        CommandKind::Construct => {
            let w = io::read_welding(required(&cfg.welding, "welding")?)?;
            let d = cfg.driver.as_deref().map(load_driver).transpose()?;
            let maps = construct(&w, d.as_ref(), cfg)?;
            io::write_json(required(&cfg.output, "output")?, &maps)?;
        }
        CommandKind::Selftest => {
            let outcomes = selftest::run_all();
            let mut failed = 0;
            for o in &outcomes {
                println!("{} {:<28} {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                failed += usize::from(!o.passed);
            }
            println!("{} checks, {failed} failed", outcomes.len());
            return Ok(if failed == 0 { 0 } else { 1 });
        }
        CommandKind::Plot => plot(cfg)?,
    }
    Ok(0)
}

/// Parse arguments, run, and report errors on stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match RunConfig::from_command(&cli.command).and_then(|cfg| run_command(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests;
