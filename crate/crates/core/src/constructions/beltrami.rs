//! Beltrami coefficients and their hyperbolic `L²` mass.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::constructions::{DiskMapEvaluator, DomainDescriptor};
use crate::error::{Error, Result};

type Rule = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A dilatation `μ` on a disk-like domain.
///
/// `support` is a radius `R < 1` in unit-disk coordinates outside of which
/// `μ` vanishes. For a slit domain it refers to the conformal parameter:
/// `μ` vanishes outside `φ(𝔻_R)` where `φ` is the parametrization passed to
/// [`poincare_l2_integral`].
#[derive(Clone)]
pub struct BeltramiField {
    domain: DomainDescriptor,
    rule: Rule,
    bound: f64,
    support: f64,
}

impl fmt::Debug for BeltramiField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BeltramiField")
            .field("domain", &self.domain)
            .field("bound", &self.bound)
            .field("support", &self.support)
            .finish()
    }
}

impl BeltramiField {
    pub fn new(
        domain: DomainDescriptor,
        bound: f64,
        support: f64,
        rule: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(bound >= 0.0) {
            return Err(Error::Validation(format!("bound {bound} is negative")));
        }
        if !(bound < 1.0) {
            return Err(Error::NotQuasiconformal(bound));
        }
        if !(support > 0.0 && support < 1.0) {
            return Err(Error::Validation(format!(
                "support radius {support} outside (0, 1)"
            )));
        }
        Ok(Self {
            domain,
            rule: Arc::new(rule),
            bound,
            support,
        })
    }

    pub fn zero() -> Self {
        Self {
            domain: DomainDescriptor::UnitDisk,
            rule: Arc::new(|_| Complex64::new(0.0, 0.0)),
            bound: 0.0,
            support: 0.5,
        }
    }

    pub fn domain(&self) -> DomainDescriptor {
        self.domain
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.rule)(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PoincareOptions {
    /// Radial cells at the coarse level; the fine level doubles both counts.
    pub radial_cells: usize,
    pub angular_cells: usize,
    pub rel_tol: f64,
}

impl Default for PoincareOptions {
    fn default() -> Self {
        Self {
            radial_cells: 128,
            angular_cells: 256,
            rel_tol: 0.02,
        }
    }
}

/// `∬ |μ|² ρ² dx dy` in hyperbolic polar coordinates `z = tanh(s) e^{iθ}`,
/// where the area element times `ρ_𝔻²` is `½ sinh(2s) ds dθ`.
fn disk_integral(
    density: &(dyn Fn(Complex64) -> f64 + Sync),
    support: f64,
    nr: usize,
    na: usize,
    bound: f64,
) -> Result<f64> {
    let s_max = support.atanh();
    let ds = s_max / nr as f64;
    let da = std::f64::consts::TAU / na as f64;
    let rows: Vec<Result<f64>> = (0..nr)
        .into_par_iter()
        .map(|i| {
            let s = (i as f64 + 0.5) * ds;
            let r = s.tanh();
            let weight = 0.5 * (2.0 * s).sinh();
            let mut acc = 0.0;
            for j in 0..na {
                let a = (j as f64 + 0.5) * da;
                let m2 = density(Complex64::from_polar(r, a));
                if m2 > bound * bound * (1.0 + 1e-9) + 1e-15 {
                    return Err(Error::NotQuasiconformal(m2.sqrt()));
                }
                acc += m2;
            }
            Ok(acc * weight)
        })
        .collect();
    let mut total = 0.0;
    for r in rows {
        total += r?;
    }
    Ok(total * ds * da)
}

fn refine(
    density: &(dyn Fn(Complex64) -> f64 + Sync),
    support: f64,
    bound: f64,
    opts: &PoincareOptions,
) -> Result<f64> {
    let coarse = disk_integral(density, support, opts.radial_cells, opts.angular_cells, bound)?;
    let fine = disk_integral(
        density,
        support,
        2 * opts.radial_cells,
        2 * opts.angular_cells,
        bound,
    )?;
    if (fine - coarse).abs() > opts.rel_tol * fine.abs() + 1e-14 {
        return Err(Error::Accuracy { coarse, fine });
    }
    Ok(fine)
}

/// Hyperbolic `L²` mass of `μ` on its domain.
///
/// Unit-disk fields are integrated directly. Slit-domain fields are pulled
/// back through `conf`, which must map `𝔻` conformally onto the domain; the
/// integral is invariant under this change of variables.
pub fn poincare_l2_integral(
    mu: &BeltramiField,
    conf: Option<&dyn DiskMapEvaluator>,
    opts: &PoincareOptions,
) -> Result<f64> {
    match (mu.domain, conf) {
        (DomainDescriptor::UnitDisk, _) => {
            refine(&|z| mu.eval(z).norm_sqr(), mu.support, mu.bound, opts)
        }
        (domain, Some(map)) => {
            if map.codomain() != domain {
                return Err(Error::Validation(format!(
                    "parametrization lands in {:?}, field lives on {:?}",
                    map.codomain(),
                    domain
                )));
            }
            let density = |z: Complex64| match map.eval(z) {
                Ok(w) => mu.eval(w).norm_sqr(),
                Err(_) => f64::NAN,
            };
            let v = refine(&density, mu.support, mu.bound, opts)?;
            if !v.is_finite() {
                return Err(Error::Domain("parametrization failed inside the support".into()));
            }
            Ok(v)
        }
        (domain, None) => Err(Error::Validation(format!(
            "a field on {domain:?} needs a conformal parametrization"
        ))),
    }
}

/// The same integral evaluated in the coordinates of the slit domain, with
/// `ρ_D(w) = ρ_𝔻(z)/|φ'(z)|`, `z = φ⁻¹(w)`. Uses a polar grid in `w` over
/// the disk containing `φ(𝔻_R)`.
pub fn slit_domain_l2_direct(
    mu: &BeltramiField,
    conf: &dyn DiskMapEvaluator,
    opts: &PoincareOptions,
) -> Result<f64> {
    let outer = (0..4096)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / 4096.0;
            conf.eval(Complex64::from_polar(mu.support, a)).map(|w| w.norm())
        })
        .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))?;
    let radius = (outer * 1.02).min(1.0);
    let density = |w: Complex64| -> f64 {
        let Some(Ok(z)) = conf.inverse(w) else {
            return 0.0;
        };
        if z.norm() >= mu.support {
            return 0.0;
        }
        let Some(dz) = conf.derivative(z) else {
            return f64::NAN;
        };
        let rho = 1.0 / ((1.0 - z.norm_sqr()) * dz.norm());
        mu.eval(w).norm_sqr() * rho * rho
    };
    let level = |nr: usize, na: usize| -> f64 {
        let dr = radius / nr as f64;
        let da = std::f64::consts::TAU / na as f64;
        (0..nr)
            .into_par_iter()
            .map(|i| {
                let r = (i as f64 + 0.5) * dr;
                let row: f64 = (0..na)
                    .map(|j| density(Complex64::from_polar(r, (j as f64 + 0.5) * da)))
                    .sum();
                row * r
            })
            .sum::<f64>()
            * dr
            * da
    };
    let coarse = level(2 * opts.radial_cells, opts.angular_cells);
    let fine = level(4 * opts.radial_cells, 2 * opts.angular_cells);
    if !fine.is_finite() {
        return Err(Error::Domain("parametrization has no derivative".into()));
    }
    if (fine - coarse).abs() > opts.rel_tol * fine.abs() + 1e-14 {
        return Err(Error::Accuracy { coarse, fine });
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{LemmaQ, SlitMap};

    #[test]
    fn zero_field() {
        let v = poincare_l2_integral(&BeltramiField::zero(), None, &PoincareOptions::default()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn constant_field_on_half_disk() {
        let mu = BeltramiField::new(DomainDescriptor::UnitDisk, 0.2, 0.5, |_| Complex64::new(0.2, 0.0)).unwrap();
        let v = poincare_l2_integral(&mu, None, &PoincareOptions::default()).unwrap();
        let exact = 0.04 * std::f64::consts::PI / 3.0;
        assert!((v - exact).abs() < 1e-4 * exact, "{v} vs {exact}");
    }

    #[test]
    fn bound_violation_is_reported() {
        assert!(matches!(
            BeltramiField::new(DomainDescriptor::UnitDisk, 1.0, 0.5, |_| Complex64::new(0.0, 0.0)),
            Err(Error::NotQuasiconformal(_))
        ));
        let lying = BeltramiField::new(DomainDescriptor::UnitDisk, 0.1, 0.5, |_| Complex64::new(0.5, 0.0)).unwrap();
        assert!(poincare_l2_integral(&lying, None, &PoincareOptions::default()).is_err());
    }

    #[test]
    fn pullback_matches_direct_slit_integral() {
        let q = LemmaQ::new(Complex64::new(0.15, 0.3), 0.6).unwrap();
        let h = SlitMap::new(0.25).unwrap();
        let k = q.beltrami_bound();
        let on_disk = BeltramiField::new(DomainDescriptor::UnitDisk, k, q.r, move |z| q.beltrami(z)).unwrap();
        let pushed = BeltramiField::new(h.codomain(), k, q.r, move |w| q.beltrami(h.inverse(w))).unwrap();
        let opts = PoincareOptions::default();
        let a = poincare_l2_integral(&on_disk, None, &opts).unwrap();
        let b = poincare_l2_integral(&pushed, Some(&h), &opts).unwrap();
        let c = slit_domain_l2_direct(&pushed, &h, &opts).unwrap();
        assert!(a > 0.0);
        assert!((a - b).abs() < 1e-9 * a);
        assert!((a - c).abs() < 0.02 * a, "{a} vs {c}");
    }
}
