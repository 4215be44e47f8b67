//! Quasiconformal map of the disk that is the identity near the circle and
//! moves a chosen point onto the real diameter.
//!
//! Inside `|z| < r`, `q = T⁻¹∘q̃∘T` with `T(z) = i(r+z)/(r-z)` mapping the
//! small disk onto the upper half-plane and `q̃` the angular shear fixing
//! `0` and `∞` that rotates the ray through `p = T(z₀)` onto the imaginary
//! axis. Outside, `q` is the identity.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::constructions::{DiskMapEvaluator, DomainDescriptor};
use crate::error::{Error, Result};

/// Dilatation of the sector shear determined by `p`, at `z`.
pub fn qtilde_beltrami(p: Complex64, z: Complex64) -> Result<Complex64> {
    if !(p.im > 0.0) {
        return Err(Error::Domain(format!("{p} is not in the upper half-plane")));
    }
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!(
            "{z} lies on or below the boundary rays of the shear"
        )));
    }
    let ap = p.arg();
    let az = z.arg();
    let k = if az <= ap {
        FRAC_PI_2 / ap
    } else {
        FRAC_PI_2 / (PI - ap)
    };
    Ok(Complex64::from_polar((1.0 - k) / (1.0 + k), 2.0 * az))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LemmaQ {
    pub z0: Complex64,
    pub r: f64,
    /// `T(z₀)`.
    pub p: Complex64,
}

fn clamp_arg(w: Complex64) -> f64 {
    let a = w.arg();
    if a >= 0.0 {
        a
    } else if a < -FRAC_PI_2 {
        PI
    } else {
        0.0
    }
}

impl LemmaQ {
    pub fn new(z0: Complex64, r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Validation(format!("radius {r} outside (0, 1)")));
        }
        if !(z0.norm() < r) {
            return Err(Error::Domain(format!("|z0| = {} is not below r = {r}", z0.norm())));
        }
        let mut q = Self {
            z0,
            r,
            p: Complex64::new(0.0, 0.0),
        };
        q.p = q.half_plane_of(z0);
        Ok(q)
    }

    fn half_plane_of(&self, z: Complex64) -> Complex64 {
        Complex64::i() * (self.r + z) / (self.r - z)
    }

    fn disk_of(&self, w: Complex64) -> Complex64 {
        self.r * (w - Complex64::i()) / (w + Complex64::i())
    }

    fn shear(&self, w: Complex64, forward: bool) -> Complex64 {
        let ap = self.p.arg();
        let (from, to) = if forward { (ap, FRAC_PI_2) } else { (FRAC_PI_2, ap) };
        let a = clamp_arg(w);
        let b = if a <= from {
            a * to / from
        } else {
            PI - (PI - a) * (PI - to) / (PI - from)
        };
        Complex64::from_polar(w.norm(), b)
    }

    fn conj_by_t(&self, z: Complex64, forward: bool) -> Complex64 {
        if z.norm() >= self.r {
            return z;
        }
        self.disk_of(self.shear(self.half_plane_of(z), forward))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.conj_by_t(z, true)
    }

    pub fn inverse(&self, z: Complex64) -> Complex64 {
        self.conj_by_t(z, false)
    }

    /// `q(z₀)`, a real number in `(-r, r)`.
    pub fn image_of_center(&self) -> f64 {
        self.eval(self.z0).re
    }

    /// `μ_q(z)`; zero outside `|z| < r`.
    pub fn beltrami(&self, z: Complex64) -> Complex64 {
        if z.norm() >= self.r {
            return Complex64::new(0.0, 0.0);
        }
        let w = self.half_plane_of(z);
        if !(w.im > 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        let mu = qtilde_beltrami(self.p, w).unwrap_or_default();
        // T' = 2ir/(r-z)²; μ_{q̃∘T} = μ_q̃(T z) · conj(T')/T'.
        let d = Complex64::i() * 2.0 * self.r / ((self.r - z) * (self.r - z));
        mu * d.conj() / d
    }

    /// Largest `|μ_q|`, attained in the wider of the two sectors.
    pub fn beltrami_bound(&self) -> f64 {
        let ap = self.p.arg();
        let k1 = FRAC_PI_2 / ap;
        let k2 = FRAC_PI_2 / (PI - ap);
        ((1.0 - k1) / (1.0 + k1)).abs().max(((1.0 - k2) / (1.0 + k2)).abs())
    }
}

impl DiskMapEvaluator for LemmaQ {
    fn domain(&self) -> DomainDescriptor {
        DomainDescriptor::UnitDisk
    }

    fn codomain(&self) -> DomainDescriptor {
        DomainDescriptor::UnitDisk
    }

    fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(format!("{z} is not in the unit disk")));
        }
        Ok(LemmaQ::eval(self, z))
    }
}

/// Constructor mirroring the other builders.
pub fn lemma_q_map(z0: Complex64, r: f64) -> Result<LemmaQ> {
    LemmaQ::new(z0, r)
}
