//! Closed-form conformal map from the disk onto `𝔻 ∖ [t, 1]`.
//!
//! `h` is the composition `z ↦ (1-z)/(1+z)`, `w ↦ c·√(w-i)·√(w+i)`,
//! `w ↦ (1-w)/(1+w)`. The product of principal square roots is the branch
//! of `√(w²+1)` that is continuous on the closed right half-plane.

use num_complex::Complex64;

use crate::constructions::{DiskMapEvaluator, DomainDescriptor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SlitMap {
    pub beta: f64,
    pub c: f64,
    pub t_slit: f64,
}

fn cayley(z: Complex64) -> Complex64 {
    (1.0 - z) / (1.0 + z)
}

fn branch_sqrt(w: Complex64) -> Complex64 {
    let i = Complex64::i();
    (w - i).sqrt() * (w + i).sqrt()
}

impl SlitMap {
    /// `h(β) = 0`, `h(±i) = 1`, `h(1) = t_slit`.
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > -1.0 && beta < 1.0) {
            return Err(Error::Validation(format!("β = {beta} outside (-1, 1)")));
        }
        let ratio = (1.0 - beta) / (1.0 + beta);
        let c = 1.0 / (ratio * ratio + 1.0).sqrt();
        Ok(Self {
            beta,
            c,
            t_slit: (1.0 - c) / (1.0 + c),
        })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        cayley(self.c * branch_sqrt(cayley(z)))
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let w1 = cayley(z);
        let s = branch_sqrt(w1);
        let w2 = self.c * s;
        let d1 = -2.0 / ((1.0 + z) * (1.0 + z));
        let d2 = self.c * w1 / s;
        let d3 = -2.0 / ((1.0 + w2) * (1.0 + w2));
        d3 * d2 * d1
    }

    /// `h⁻¹(w)` for `w ∈ 𝔻 ∖ [t_slit, 1]`.
    pub fn inverse(&self, w: Complex64) -> Complex64 {
        let w2 = cayley(w) / self.c;
        let w1 = (w2 * w2 - 1.0).sqrt();
        cayley(w1)
    }

    /// Angle `θ ∈ [0, π/2]` with `h(e^{±iθ}) = x` for a slit point
    /// `x ∈ [t_slit, 1]`.
    pub fn slit_preimage(&self, x: f64) -> Result<f64> {
        if !(x >= self.t_slit - 1e-12 && x <= 1.0) {
            return Err(Error::Domain(format!(
                "{x} is not on the slit [{}, 1]",
                self.t_slit
            )));
        }
        let w = (1.0 - x) / (1.0 + x) / self.c;
        Ok(2.0 * (1.0 - w * w).max(0.0).sqrt().atan())
    }
}

impl DiskMapEvaluator for SlitMap {
    fn domain(&self) -> DomainDescriptor {
        DomainDescriptor::UnitDisk
    }

    fn codomain(&self) -> DomainDescriptor {
        DomainDescriptor::SlitDisk { tip: self.t_slit }
    }

    fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(format!("{z} is not in the unit disk")));
        }
        Ok(SlitMap::eval(self, z))
    }

    fn derivative(&self, z: Complex64) -> Option<Complex64> {
        Some(SlitMap::derivative(self, z))
    }

    fn inverse(&self, w: Complex64) -> Option<Result<Complex64>> {
        if !(w.norm() < 1.0) || (w.im == 0.0 && w.re >= self.t_slit) {
            return Some(Err(Error::Domain(format!("{w} is not in the slit disk"))));
        }
        Some(Ok(SlitMap::inverse(self, w)))
    }

    fn boundary(&self, angle: f64) -> Option<Complex64> {
        Some(SlitMap::eval(self, Complex64::from_polar(1.0, angle)))
    }
}
