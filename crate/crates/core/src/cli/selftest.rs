//! Quick invariant checks run by `loewner-weld selftest`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circle::{CirclePoint, MobiusCircleMap, OrientedArc};
use crate::constructions::{
    build_psi, compose_f, lemma_q_map, poincare_l2_integral, psi_j_decomposition, BeltramiField,
    BetaPolicy, DomainDescriptor, PoincareOptions, SlitMap,
};
use crate::driver::DrivingTerm;
use crate::error::Result;
use crate::loewner::{downward_flow, slit_preimage_endpoints, trace_point, upward_flow, LoewnerConfig};
use crate::regularity::{
    bmo_norm, h_half_seminorm_fn, ArcFunction, Normalization, OscillationOptions, QuadratureOptions,
};
use crate::welding::{extract_welding, radial_slit_welding};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Outcome {
    match f() {
        Ok((passed, detail)) => Outcome { name, passed, detail },
        Err(e) => Outcome {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn radial_slit() -> Result<(bool, String)> {
    let d = DrivingTerm::constant(2f64.ln())?;
    let cfg = LoewnerConfig::default();
    let tip = trace_point(&d, d.horizon(), &cfg)?.tip;
    let tip_err = (tip - (3.0 - 2.0 * SQRT_2)).norm();
    let (am, ap) = slit_preimage_endpoints(&d, &cfg)?;
    let alpha_err = (ap.angle() - FRAC_PI_2).abs().max((am.angle() + FRAC_PI_2).abs());
    let w = extract_welding(&d, 32, &cfg)?;
    let weld_err = w
        .pairs()
        .iter()
        .map(|p| (p.theta_plus + p.theta_minus).abs())
        .fold(0.0, f64::max);
    Ok((
        tip_err < 1e-3 && alpha_err < 1e-3 && weld_err < 1e-3,
        format!("tip {tip_err:.1e}, α± {alpha_err:.1e}, welding {weld_err:.1e}"),
    ))
}

fn normalizations() -> Result<(bool, String)> {
    let d = DrivingTerm::from_fn(1.0, 256, |t| 0.7 * t.sqrt())?;
    let cfg = LoewnerConfig::default();
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for t in [0.1, 0.5, 1.0] {
        let gp = (upward_flow(&d, Complex64::new(h, 0.0), t, &cfg)?
            - upward_flow(&d, Complex64::new(-h, 0.0), t, &cfg)?)
            / (2.0 * h);
        worst = worst.max((gp.norm() - (-t).exp()).abs());
    }
    let fp = (downward_flow(&d, Complex64::new(h, 0.0), 1.0, &cfg)?
        - downward_flow(&d, Complex64::new(-h, 0.0), 1.0, &cfg)?)
        / (2.0 * h);
    worst = worst.max((fp.norm() - 1f64.exp()).abs());
    Ok((worst < 1e-6, format!("largest |derivative| error {worst:.1e}")))
}

fn horizon_inverse() -> Result<(bool, String)> {
    let d = DrivingTerm::from_fn(1.0, 256, |t| 0.4 * t.sqrt())?;
    let cfg = LoewnerConfig::default();
    let mut worst: f64 = 0.0;
    for k in 0..8 {
        let z = Complex64::from_polar(0.7, 0.8 * k as f64);
        let back = upward_flow(&d, downward_flow(&d, z, 1.0, &cfg)?, 1.0, &cfg)?;
        worst = worst.max((back - z).norm());
    }
    Ok((worst < 1e-6, format!("|g(f(z)) - z| ≤ {worst:.1e}")))
}

fn fourier_seminorm() -> Result<(bool, String)> {
    let circle = OrientedArc::full_circle(CirclePoint::ONE);
    let v = h_half_seminorm_fn(f64::cos, &circle, &circle, Normalization::TwoPi, &QuadratureOptions::default())?;
    let err = (v - 0.5f64.sqrt()).abs() / 0.5f64.sqrt();
    Ok((err < 0.01, format!("cos θ: {v:.6} (relative error {err:.1e})")))
}

fn bmo_below_seminorm() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let circle = OrientedArc::full_circle(CirclePoint::ONE);
    let mut violations = 0;
    for _ in 0..5 {
        let coeffs: Vec<(f64, f64)> = (1..=4).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let u = move |a: f64| {
            coeffs
                .iter()
                .enumerate()
                .map(|(n, (c, s))| c * ((n + 1) as f64 * a).cos() + s * ((n + 1) as f64 * a).sin())
                .sum::<f64>()
        };
        let f = ArcFunction::from_fn(circle, 1024, &u)?;
        let b = bmo_norm(&f, &circle, &OscillationOptions::default())?;
        let s = h_half_seminorm_fn(&u, &circle, &circle, Normalization::Raw, &QuadratureOptions::default())?;
        violations += usize::from(b > s);
    }
    Ok((violations == 0, format!("{violations} violations in 5 polynomials")))
}

fn mobius_invariance() -> Result<(bool, String)> {
    let circle = OrientedArc::full_circle(CirclePoint::ONE);
    let u = |a: f64| (2.0 * a).sin() + 0.3 * a.cos();
    let opts = QuadratureOptions::default();
    let base = h_half_seminorm_fn(u, &circle, &circle, Normalization::Raw, &opts)?;
    let m = MobiusCircleMap::new(0.4, Complex64::new(0.3, -0.2))?;
    let moved = h_half_seminorm_fn(
        |a| u(m.eval(CirclePoint::from_angle(a)).0.angle()),
        &circle,
        &circle,
        Normalization::Raw,
        &opts,
    )?;
    let err = (moved - base).abs() / base;
    Ok((err < 0.01, format!("{base:.8} vs {moved:.8}")))
}

fn slit_map() -> Result<(bool, String)> {
    let h = SlitMap::new(0.3)?;
    let err = h
        .eval(Complex64::new(0.3, 0.0))
        .norm()
        .max((h.eval(Complex64::i()) - 1.0).norm())
        .max((h.eval(-Complex64::i()) - 1.0).norm())
        .max((h.eval(Complex64::new(1.0, 0.0)) - h.t_slit).norm());
    Ok((err < 1e-12, format!("normalization error {err:.1e}")))
}

fn sector_shear() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ok = true;
    for _ in 0..10 {
        let r = rng.gen_range(0.2..0.9);
        let z0 = Complex64::from_polar(rng.gen_range(0.0..0.9) * r, rng.gen_range(-PI..PI));
        let q = lemma_q_map(z0, r)?;
        let outside = Complex64::from_polar(r + 0.5 * (1.0 - r), rng.gen_range(-PI..PI));
        let c = q.eval(z0);
        ok &= q.eval(outside) == outside && c.im.abs() < 1e-12 && c.re.abs() < r;
    }
    Ok((ok, "identity outside r, centre on the diameter".into()))
}

fn dilatation_integral() -> Result<(bool, String)> {
    let mu = BeltramiField::new(DomainDescriptor::UnitDisk, 0.2, 0.5, |_| Complex64::new(0.2, 0.0))?;
    let v = poincare_l2_integral(&mu, None, &PoincareOptions::default())?;
    let exact = 0.04 * PI / 3.0;
    let err = (v - exact).abs() / exact;
    Ok((err < 0.02, format!("{v:.6} vs {exact:.6}")))
}

fn radial_constructions() -> Result<(bool, String)> {
    let w = radial_slit_welding(3.0 - 2.0 * SQRT_2, 128)?;
    let psi = build_psi(&w, &MobiusCircleMap::identity())?;
    let j = psi_j_decomposition(&psi, &QuadratureOptions::default())?;
    let d = DrivingTerm::constant(2f64.ln())?;
    let f = compose_f(&d, &w, BetaPolicy::Auto, &LoewnerConfig::default())?;
    let origin = f.eval(Complex64::new(0.0, 0.0))?.norm();
    let jmax = j.j.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((
        jmax < 1e-12 && origin < 1e-6,
        format!("max J {jmax:.1e}, |f(0)| {origin:.1e}"),
    ))
}

pub fn run_all() -> Vec<Outcome> {
    vec![
        check("radial slit end to end", radial_slit),
        check("flow normalizations", normalizations),
        check("horizon inverse", horizon_inverse),
        check("fourier seminorm", fourier_seminorm),
        check("bmo below seminorm", bmo_below_seminorm),
        check("mobius invariance", mobius_invariance),
        check("slit map normalization", slit_map),
        check("sector shear", sector_shear),
        check("dilatation integral", dilatation_integral),
        check("radial slit constructions", radial_constructions),
    ]
}
