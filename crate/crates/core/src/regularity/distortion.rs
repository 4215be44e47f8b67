//! Sampled distortion constants of boundary homeomorphisms.

use rayon::prelude::*;

use crate::circle::chord;
use crate::regularity::arc::ArcHomeomorphism;
use crate::welding::Welding;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DistortionEstimate {
    /// Sampled maximum at the default resolution.
    pub value: f64,
    /// The same maximum with twice the resolution.
    pub refined: f64,
    /// `true` when both agree within 10% and are finite.
    pub stable: bool,
}

impl DistortionEstimate {
    fn from_pair(value: f64, refined: f64) -> Self {
        let stable = value.is_finite()
            && refined.is_finite()
            && (refined - value).abs() <= 0.1 * value.abs().max(refined.abs());
        Self {
            value,
            refined,
            stable,
        }
    }
}

/// Largest `max(r, 1/r)` with `r = |h(x)-h(y)| / |h(y)-h(z)|` over triples
/// `x, y, z` with `|x-y| = |y-z|`, centers on a grid of `2^level` cells and
/// spacings at every dyadic scale.
pub fn qs_sampled(h: &ArcHomeomorphism, level: u32) -> f64 {
    let m = 1usize << level;
    let len = h.domain().length();
    let images: Vec<f64> = (0..=m)
        .map(|k| h.range().angle_at(h.eval_param(len * k as f64 / m as f64)))
        .collect();
    (1..=level)
        .into_par_iter()
        .map(|j| {
            let k = m >> j;
            let mut worst: f64 = 1.0;
            for c in k..=m - k {
                let a = chord(images[c - k], images[c]);
                let b = chord(images[c], images[c + k]);
                let r = a / b;
                worst = worst.max(if r >= 1.0 { r } else { 1.0 / r });
            }
            worst
        })
        .reduce(|| 1.0, f64::max)
}

/// Quasisymmetry constant, sampled at `2^12` cells and checked at `2^13`.
pub fn qs_constant(h: &ArcHomeomorphism) -> DistortionEstimate {
    DistortionEstimate::from_pair(qs_sampled(h, 12), qs_sampled(h, 13))
}

/// `max(r, 1/r)` with `r = |φ(x) - 1| / |x - 1|` over the welding nodes.
pub fn mr_constant(w: &Welding) -> f64 {
    w.pairs()
        .iter()
        .skip(1)
        .map(|p| {
            let r = chord(p.theta_minus, 0.0) / chord(p.theta_plus, 0.0);
            if r >= 1.0 {
                r
            } else {
                1.0 / r
            }
        })
        .fold(1.0, f64::max)
}

/// [`mr_constant`] of `w` against that of a finer welding of the same slit.
pub fn mr_stability(w: &Welding, finer: &Welding) -> DistortionEstimate {
    DistortionEstimate::from_pair(mr_constant(w), mr_constant(finer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{MobiusCircleMap, OrientedArc};
    use crate::welding::radial_slit_welding;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn identity_and_conjugation() {
        let arc = OrientedArc::between_angles(0.0, PI / 2.0);
        assert!((qs_constant(&ArcHomeomorphism::identity(arc)).value - 1.0).abs() < 1e-9);
        let w = radial_slit_welding(3.0 - 2.0 * 2f64.sqrt(), 256).unwrap();
        let q = qs_constant(&w.to_homeomorphism());
        assert!((q.value - 1.0).abs() < 1e-9 && q.stable);
        assert!((mr_constant(&w) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mobius_constant_is_stable() {
        let m = MobiusCircleMap::new(0.0, Complex64::new(0.5, 0.0)).unwrap();
        let dom = OrientedArc::between_angles(-PI / 2.0, PI / 2.0);
        let (lo, _) = m.eval(dom.start());
        let (hi, _) = m.eval(dom.end());
        let range = OrientedArc::new(lo, hi).unwrap();
        let h = ArcHomeomorphism::from_fn(dom, range, 4096, |s| {
            let (p, _) = m.eval(dom.point_at(s));
            range.param_of(p).unwrap()
        })
        .unwrap();
        let q = qs_constant(&h);
        assert!(q.value > 1.0 && q.value.is_finite() && q.stable, "{q:?}");
    }
}
