//! The cross integral of the conjugated welding
//! `∫_{⟨1,i⟩} ∫_{⟨-i,1⟩} log²|(τ⁻¹∘φ∘τ)'(z₁)| / |z₁ - z₂|² |dz₁||dz₂|`.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::circle::{ccw_offset, CirclePoint, MobiusCircleMap, OrientedArc};
use crate::error::{Result, Side};
use crate::regularity::arc::ArcFunction;
use crate::regularity::seminorm::{weighted_kernel_integral, DoubleIntegral, QuadratureOptions};
use crate::welding::{welding_log_derivative, Welding};

/// `⟨1, i⟩`.
pub fn first_quarter() -> OrientedArc {
    OrientedArc::between_angles(0.0, FRAC_PI_2)
}

/// `⟨-i, 1⟩`.
pub fn fourth_quarter() -> OrientedArc {
    OrientedArc::between_angles(-FRAC_PI_2, 0.0)
}

/// `Φ = τ⁻¹∘φ∘τ` on `⟨1, i⟩`, with its log-derivative, built from a welding
/// and the Möbius map sending `⟨1, i⟩` onto `I⁺`.
#[derive(Debug, Clone)]
pub struct ConjugatedWelding {
    welding: Welding,
    tau: MobiusCircleMap,
    tau_inv: MobiusCircleMap,
    log_phi_prime: ArcFunction,
}

impl ConjugatedWelding {
    pub fn new(welding: &Welding, tau: &MobiusCircleMap) -> Result<Self> {
        Ok(Self {
            welding: welding.clone(),
            tau: *tau,
            tau_inv: tau.inverse(),
            log_phi_prime: welding_log_derivative(welding, Side::Plus)?,
        })
    }

    pub fn welding(&self) -> &Welding {
        &self.welding
    }

    pub fn tau(&self) -> &MobiusCircleMap {
        &self.tau
    }

    fn plus_offset(&self, p: CirclePoint) -> f64 {
        let a = self.welding.plus_extent();
        let off = ccw_offset(0.0, p.angle());
        if off <= a {
            off
        } else if off > TAU - 1e-9 {
            0.0
        } else {
            a
        }
    }

    /// `Φ(e^{is})` as a lifted angle in `[-π/2, 0]`, together with
    /// `log|Φ'(e^{is})|`, for `s ∈ [0, π/2]`.
    pub fn eval(&self, s: f64) -> (f64, f64) {
        let (x, dtau) = self.tau.eval(CirclePoint::from_angle(s));
        let theta_plus = self.plus_offset(x);
        let theta_minus = self.welding.partner_of_plus(theta_plus);
        let (y, dinv) = self.tau_inv.eval(CirclePoint::from_angle(theta_minus));
        let log_d = dtau.ln() + self.log_phi_prime.eval_param(theta_plus) + dinv.ln();
        // Lift into [-π/2, 0].
        let mut a = y.angle();
        if a > 1e-9 {
            a -= TAU;
        }
        (a.clamp(-FRAC_PI_2, 0.0), log_d)
    }

    /// `log|Φ'|` sampled on `⟨1, i⟩` at `n + 1` nodes.
    pub fn log_derivative(&self, n: usize) -> Result<ArcFunction> {
        ArcFunction::from_fn(first_quarter(), n, |s| self.eval(s).1)
    }
}

/// Cross integral of a given log-derivative on `⟨1, i⟩`.
pub fn cross_integral<F>(log_derivative: F, opts: &QuadratureOptions) -> Result<DoubleIntegral>
where
    F: Fn(f64) -> f64 + Sync,
{
    weighted_kernel_integral(
        |s| log_derivative(s).powi(2),
        &first_quarter(),
        &fourth_quarter(),
        opts,
    )
}

/// The cross integral for a welding, in raw normalization.
pub fn wp_cross_condition(w: &Welding, tau: &MobiusCircleMap, opts: &QuadratureOptions) -> Result<f64> {
    Ok(wp_cross_detailed(w, tau, opts)?.value)
}

pub fn wp_cross_detailed(w: &Welding, tau: &MobiusCircleMap, opts: &QuadratureOptions) -> Result<DoubleIntegral> {
    let c = ConjugatedWelding::new(w, tau)?;
    cross_integral(|s| c.eval(s).1, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::welding::{radial_slit_welding, WeldPair};
    use std::f64::consts::PI;

    /// Welding with `|Φ'(e^{is})| = 1 + a sin 4s` and `τ = id`.
    fn synthetic(a: f64, n: usize) -> Welding {
        let big_f = |s: f64| s + a * (1.0 - (4.0 * s).cos()) / 4.0;
        let pairs = (0..=n)
            .map(|k| {
                let s = FRAC_PI_2 * k as f64 / n as f64;
                WeldPair {
                    t: s,
                    theta_plus: s,
                    theta_minus: -big_f(s),
                }
            })
            .collect();
        Welding::new(pairs).unwrap()
    }

    fn oracle(a: f64) -> f64 {
        // Inner integral in closed form, outer by a fine midpoint rule.
        let m = 200_000;
        let h = FRAC_PI_2 / m as f64;
        (0..m)
            .map(|k| {
                let s = (k as f64 + 0.5) * h;
                let l = (1.0 + a * (4.0 * s).sin()).ln();
                let kern = 0.5 * (1.0 / (0.5 * s).tan() - 1.0 / (0.5 * (s + FRAC_PI_2)).tan());
                l * l * kern * h
            })
            .sum()
    }

    #[test]
    fn radial_slit_gives_zero() {
        let w = radial_slit_welding(3.0 - 2.0 * 2f64.sqrt(), 256).unwrap();
        let v = wp_cross_condition(&w, &MobiusCircleMap::identity(), &Default::default()).unwrap();
        assert!(v < 1e-4);
    }

    #[test]
    fn synthetic_welding_matches_closed_inner_integral() {
        let w = synthetic(0.3, 4096);
        let v = wp_cross_condition(&w, &MobiusCircleMap::identity(), &Default::default()).unwrap();
        let o = oracle(0.3);
        assert!((v - o).abs() < 0.01 * o, "{v} vs {o}");
        let again = wp_cross_condition(&synthetic(0.3, 8192), &MobiusCircleMap::identity(), &Default::default())
            .unwrap();
        assert!((again - v).abs() < 0.01 * v);
    }

    #[test]
    fn conjugated_map_endpoints() {
        let w = synthetic(0.2, 512);
        let c = ConjugatedWelding::new(&w, &MobiusCircleMap::identity()).unwrap();
        assert!(c.eval(0.0).0.abs() < 1e-12);
        assert!((c.eval(PI / 2.0).0 + PI / 2.0).abs() < 1e-12);
    }
}
