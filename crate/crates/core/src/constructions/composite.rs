//! The composite map `f = g_T ∘ τ ∘ E ∘ q⁻¹ ∘ h⁻¹` from the slit disk onto
//! the complement of the Loewner curve.
//!
//! `E` is the harmonic extension of the boundary homeomorphism `ψ`, used in
//! place of a barycentric extension. It is a diffeomorphism of the disk for
//! any sense-preserving `ψ`, which is all the construction needs.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circle::{CirclePoint, MobiusCircleMap};
use crate::constructions::circle_maps::{build_psi, build_tau, PiecewiseCircleMap};
use crate::constructions::lemma_q::LemmaQ;
use crate::constructions::slit_map::SlitMap;
use crate::constructions::{DiskMapEvaluator, DomainDescriptor};
use crate::driver::DrivingTerm;
use crate::error::{Error, Result};
use crate::loewner::{upward_flow, LoewnerConfig};
use crate::welding::Welding;

/// Truncated Fourier form `E(z) = Σ_{n≥0} a_n zⁿ + Σ_{n≥1} b_n z̄ⁿ` of the
/// Poisson extension of a circle map.
#[derive(Debug, Clone)]
pub struct HarmonicExtension {
    analytic: Vec<Complex64>,
    anti: Vec<Complex64>,
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

impl HarmonicExtension {
    /// From `m` equispaced boundary values, keeping `|n| ≤ modes`.
    pub fn from_samples(values: &[Complex64], modes: usize) -> Result<Self> {
        let m = values.len();
        if m < 8 || 2 * modes >= m {
            return Err(Error::Validation(format!(
                "{modes} modes need more than {m} samples"
            )));
        }
        let coeff = |n: i64| -> Complex64 {
            values
                .iter()
                .enumerate()
                .map(|(j, &v)| v * Complex64::from_polar(1.0, -(n as f64) * TAU * j as f64 / m as f64))
                .sum::<Complex64>()
                / m as f64
        };
        let analytic = (0..=modes as i64).map(coeff).collect();
        let mut anti: Vec<Complex64> = (0..=modes as i64).map(|n| coeff(-n)).collect();
        anti[0] = Complex64::new(0.0, 0.0);
        Ok(Self { analytic, anti })
    }

    pub fn of_circle_map(psi: &PiecewiseCircleMap, samples: usize, modes: usize) -> Result<Self> {
        let values: Vec<Complex64> = (0..samples)
            .into_par_iter()
            .map(|j| {
                psi.eval(CirclePoint::from_angle(TAU * j as f64 / samples as f64))
                    .map(|p| p.to_complex())
            })
            .collect::<Result<_>>()?;
        Self::from_samples(&values, modes)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.analytic, z).0 + horner(&self.anti, z.conj()).0
    }

    /// Solve `E(z) = w` by Newton's method on `P'Δ + Q'Δ̄ = -residual`.
    pub fn inverse(&self, w: Complex64, guess: Complex64) -> Result<Complex64> {
        let mut z = guess;
        let mut res = self.eval(z) - w;
        for _ in 0..200 {
            if res.norm() < 1e-14 {
                return Ok(z);
            }
            let (_, a) = horner(&self.analytic, z);
            let (_, b) = horner(&self.anti, z.conj());
            // a Δ + b Δ̄ = -res as a real 2×2 system.
            let (m11, m12) = (a.re + b.re, -a.im + b.im);
            let (m21, m22) = (a.im + b.im, a.re - b.re);
            let det = m11 * m22 - m12 * m21;
            if det.abs() < 1e-300 {
                break;
            }
            let dx = (-res.re * m22 + res.im * m12) / det;
            let dy = (-res.im * m11 + res.re * m21) / det;
            let mut step = Complex64::new(dx, dy);
            // Damp until the residual drops and the iterate stays inside.
            let mut accepted = false;
            for _ in 0..40 {
                let cand = z + step;
                if cand.norm() < 1.0 {
                    let r = self.eval(cand) - w;
                    if r.norm() < res.norm() {
                        z = cand;
                        res = r;
                        accepted = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if res.norm() < 1e-12 {
            Ok(z)
        } else {
            Err(Error::Domain(format!(
                "harmonic extension inverse stalled at {z} (residual {:e})",
                res.norm()
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "mode", content = "beta", rename_all = "snake_case")]
pub enum BetaPolicy {
    /// `β = q(E⁻¹(τ⁻¹(0)))` with the sector shear normalizing that point.
    Auto,
    /// Use this `β` and skip the shear; then `f(0) ≠ 0` in general.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BoundaryDiagnostics {
    pub samples: usize,
    /// Largest `|g∘τ(z) - g∘τ∘ψ(z̄)|` over sampled `z ∈ ⟨1, i⟩`.
    pub max_pair_mismatch: f64,
    pub f_origin: Complex64,
}

pub struct CompositeMap {
    driver: DrivingTerm,
    cfg: LoewnerConfig,
    tau: MobiusCircleMap,
    psi: Arc<PiecewiseCircleMap>,
    extension: HarmonicExtension,
    shear: Option<LemmaQ>,
    slit: SlitMap,
    beta: f64,
}

impl std::fmt::Debug for CompositeMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CompositeMap")
            .field("beta", &self.beta)
            .field("slit", &self.slit)
            .field("shear", &self.shear)
            .finish()
    }
}

impl CompositeMap {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn slit(&self) -> &SlitMap {
        &self.slit
    }

    pub fn shear(&self) -> Option<&LemmaQ> {
        self.shear.as_ref()
    }

    pub fn tau(&self) -> &MobiusCircleMap {
        &self.tau
    }

    pub fn psi(&self) -> &PiecewiseCircleMap {
        &self.psi
    }

    pub fn extension(&self) -> &HarmonicExtension {
        &self.extension
    }

    /// Point in the disk just before `g_T` is applied.
    pub fn pre_flow(&self, w: Complex64) -> Result<Complex64> {
        if !(w.norm() < 1.0) || (w.im == 0.0 && w.re >= self.slit.t_slit) {
            return Err(Error::Domain(format!("{w} is not in the slit disk")));
        }
        let z = self.slit.inverse(w);
        let z = match &self.shear {
            Some(q) => q.inverse(z),
            None => z,
        };
        Ok(self.tau.apply(self.extension.eval(z)))
    }

    /// Radial boundary limit of `g_T` at `e^{iθ}`, extrapolated from the
    /// radii `1 - ε`, `ε ∈ {10⁻³, 5·10⁻⁴, 2.5·10⁻⁴}`.
    pub fn flow_boundary_value(&self, angle: f64) -> Result<Complex64> {
        let e = BOUNDARY_EPS;
        let mut v = [Complex64::new(0.0, 0.0); 3];
        for k in 0..3 {
            v[k] = upward_flow(
                &self.driver,
                Complex64::from_polar(1.0 - e[k], angle),
                self.driver.horizon(),
                &self.cfg,
            )?;
        }
        let w0 = e[1] * e[2] / ((e[0] - e[1]) * (e[0] - e[2]));
        let w1 = e[0] * e[2] / ((e[1] - e[0]) * (e[1] - e[2]));
        let w2 = e[0] * e[1] / ((e[2] - e[0]) * (e[2] - e[1]));
        Ok(v[0] * w0 + v[1] * w1 + v[2] * w2)
    }

    /// Check that `τ(z)` and `τ(ψ(z̄))` land on the same point of the curve
    /// for `samples` points `z ∈ ⟨1, i⟩`.
    pub fn boundary_diagnostics(&self, samples: usize) -> Result<BoundaryDiagnostics> {
        let samples = samples.max(1);
        let mismatches: Vec<f64> = (0..samples)
            .into_par_iter()
            .map(|k| -> Result<f64> {
                let s = FRAC_PI_2 * (k as f64 + 0.5) / samples as f64;
                let z = CirclePoint::from_angle(s);
                let partner = self.psi.eval(z.conjugate())?;
                let a = self.flow_boundary_value(self.tau.eval(z).0.angle())?;
                let b = self.flow_boundary_value(self.tau.eval(partner).0.angle())?;
                Ok((a - b).norm())
            })
            .collect::<Result<_>>()?;
        Ok(BoundaryDiagnostics {
            samples,
            max_pair_mismatch: mismatches.into_iter().fold(0.0, f64::max),
            f_origin: self.eval(Complex64::new(0.0, 0.0))?,
        })
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        let u = self.pre_flow(w)?;
        upward_flow(&self.driver, u, self.driver.horizon(), &self.cfg)
    }
}

impl DiskMapEvaluator for CompositeMap {
    fn domain(&self) -> DomainDescriptor {
        DomainDescriptor::SlitDisk {
            tip: self.slit.t_slit,
        }
    }

    fn codomain(&self) -> DomainDescriptor {
        DomainDescriptor::CurveComplement {
            horizon: self.driver.horizon(),
        }
    }

    fn eval(&self, z: Complex64) -> Result<Complex64> {
        CompositeMap::eval(self, z)
    }
}

const BOUNDARY_EPS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];
pub const EXTENSION_SAMPLES: usize = 1024;
pub const EXTENSION_MODES: usize = 256;

/// The sector shear moving `z₀ = E⁻¹(τ⁻¹(0))` onto the real diameter, on
/// the disk of radius `(1 + |z₀|)/2`.
pub fn auto_shear(
    psi: &PiecewiseCircleMap,
    tau: &MobiusCircleMap,
    extension: &HarmonicExtension,
) -> Result<LemmaQ> {
    let target = tau.inverse().apply(Complex64::new(0.0, 0.0));
    let guess = if target.norm() > 1e-14 {
        psi.inverse(CirclePoint::from_complex(target))?.to_complex() * target.norm()
    } else {
        target
    };
    let z0 = extension.inverse(target, guess)?;
    LemmaQ::new(z0, 0.5 * (1.0 + z0.norm()))
}

/// Assemble `f` from a driver and its extracted welding.
pub fn compose_f(
    d: &DrivingTerm,
    w: &Welding,
    policy: BetaPolicy,
    cfg: &LoewnerConfig,
) -> Result<CompositeMap> {
    let tau = build_tau(w.alpha_minus(), w.alpha_plus())?;
    let psi = Arc::new(build_psi(w, &tau)?);
    let extension = HarmonicExtension::of_circle_map(&psi, EXTENSION_SAMPLES, EXTENSION_MODES)?;
    let (shear, beta) = match policy {
        BetaPolicy::Fixed(beta) => (None, beta),
        BetaPolicy::Auto => {
            let q = auto_shear(&psi, &tau, &extension)?;
            let beta = q.image_of_center();
            (Some(q), beta)
        }
    };
    Ok(CompositeMap {
        driver: d.clone(),
        cfg: *cfg,
        tau,
        psi,
        extension,
        shear,
        slit: SlitMap::new(beta)?,
        beta,
    })
}
