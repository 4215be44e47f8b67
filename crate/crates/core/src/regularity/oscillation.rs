//! Mean oscillation over subarcs: BMO norm and VMO modulus.
//!
//! The arc is split into `fine_cells` equal cells and `u` is sampled at the
//! midpoints. Windows of `|I|/2^j` cells slide across every cell position;
//! on the full circle they wrap around.

use rayon::prelude::*;

use crate::circle::{ccw_offset, OrientedArc};
use crate::error::{Error, Result};
use crate::regularity::arc::ArcFunction;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OscillationOptions {
    pub fine_cells: usize,
    /// Deepest dyadic level `j` (window `|I|/2^j`).
    pub max_level: u32,
}

impl Default for OscillationOptions {
    fn default() -> Self {
        Self {
            fine_cells: 1024,
            max_level: 8,
        }
    }
}

fn samples(u: &ArcFunction, i: &OrientedArc, cells: usize) -> Result<Vec<f64>> {
    let arc = u.arc();
    let h = i.length() / cells as f64;
    (0..cells)
        .map(|k| {
            let a = i.angle_at((k as f64 + 0.5) * h);
            if arc.is_full_circle() {
                Ok(u.eval_param(ccw_offset(arc.start().angle(), a)))
            } else {
                u.eval_angle(a)
                    .ok_or_else(|| Error::Domain(format!("angle {a} is off the function's arc")))
            }
        })
        .collect()
}

/// Largest mean oscillation over windows of `width` cells.
fn window_max(v: &[f64], width: usize, periodic: bool) -> f64 {
    let m = v.len();
    let width = width.clamp(1, m);
    let starts = if width == m {
        1
    } else if periodic {
        m
    } else {
        m - width + 1
    };
    (0..starts)
        .into_par_iter()
        .map(|s| {
            let at = |k: usize| v[(s + k) % m];
            let mean = (0..width).map(at).sum::<f64>() / width as f64;
            (0..width).map(|k| (at(k) - mean).abs()).sum::<f64>() / width as f64
        })
        .reduce(|| 0.0, f64::max)
}

fn oscillation_up_to(u: &ArcFunction, i: &OrientedArc, scale: f64, opts: &OscillationOptions) -> Result<f64> {
    let m = opts.fine_cells.max(2);
    let v = samples(u, i, m)?;
    let periodic = i.is_full_circle();
    let mut best: f64 = 0.0;
    for j in 0..=opts.max_level {
        let width = m >> j;
        if width < 2 {
            break;
        }
        if i.length() / (1u64 << j) as f64 <= scale * (1.0 + 1e-12) {
            best = best.max(window_max(&v, width, periodic));
        }
    }
    // The window of exactly `scale`, rounded down to whole cells.
    let width = ((scale / i.length()) * m as f64 + 1e-9).floor() as usize;
    if width >= 2 {
        best = best.max(window_max(&v, width.min(m), periodic));
    }
    Ok(best)
}

/// `sup_J (1/|J|) ∫_J |u - u_J|` over sampled subarcs `J ⊂ I`.
pub fn bmo_norm(u: &ArcFunction, i: &OrientedArc, opts: &OscillationOptions) -> Result<f64> {
    oscillation_up_to(u, i, i.length(), opts)
}

/// Same supremum restricted to subarcs of length at most `scale`.
pub fn vmo_modulus(u: &ArcFunction, i: &OrientedArc, scale: f64, opts: &OscillationOptions) -> Result<f64> {
    if !(scale > 0.0 && scale <= i.length() * (1.0 + 1e-12)) {
        return Err(Error::Validation(format!(
            "scale {scale} outside (0, {}]",
            i.length()
        )));
    }
    oscillation_up_to(u, i, scale, opts)
}

/// `(scale, modulus)` at the dyadic scales `|I|/2^j`.
pub fn vmo_curve(u: &ArcFunction, i: &OrientedArc, opts: &OscillationOptions) -> Result<Vec<(f64, f64)>> {
    (0..=opts.max_level)
        .map(|j| {
            let s = i.length() / (1u64 << j) as f64;
            Ok((s, vmo_modulus(u, i, s, opts)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CirclePoint;
    use std::f64::consts::PI;

    #[test]
    fn constant_has_no_oscillation() {
        let c = OrientedArc::full_circle(CirclePoint::ONE);
        let u = ArcFunction::from_fn(c, 64, |_| 2.5).unwrap();
        assert_eq!(bmo_norm(&u, &c, &Default::default()).unwrap(), 0.0);
        assert_eq!(vmo_modulus(&u, &c, 0.1, &Default::default()).unwrap(), 0.0);
    }

    #[test]
    fn cosine_modulus_decreases_to_zero() {
        let c = OrientedArc::full_circle(CirclePoint::ONE);
        let u = ArcFunction::from_fn(c, 2048, f64::cos).unwrap();
        let opts = OscillationOptions::default();
        let curve = vmo_curve(&u, &c, &opts).unwrap();
        for w in curve.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-15);
        }
        assert!(curve.last().unwrap().1 < 0.01);
        // Full circle: mean oscillation of cos is 2/π.
        let bmo = bmo_norm(&u, &c, &opts).unwrap();
        assert!((bmo - 2.0 / PI).abs() < 1e-3, "{bmo}");
        assert_eq!(vmo_modulus(&u, &c, c.length(), &opts).unwrap(), bmo);
    }

    #[test]
    fn smoothed_jump_against_direct_scan() {
        // Height-one smoothed step on [0, 2]: the best window straddles the
        // jump and has oscillation close to 1/2.
        let arc = OrientedArc::from_start_length(0.0, 2.0).unwrap();
        let u = ArcFunction::from_fn(arc, 4000, |a| 0.5 * (1.0 + ((a - 1.0) / 0.01).tanh())).unwrap();
        let opts = OscillationOptions { fine_cells: 512, max_level: 6 };
        let bmo = bmo_norm(&u, &arc, &opts).unwrap();
        assert!(bmo <= 0.5 + 0.02 && bmo > 0.45, "{bmo}");
        // Direct scan at double resolution over the same dyadic windows.
        let m = 1024;
        let v: Vec<f64> = (0..m).map(|k| u.eval_param(2.0 * (k as f64 + 0.5) / m as f64)).collect();
        let mut direct: f64 = 0.0;
        for j in 0..=6 {
            let w = m >> j;
            for s in 0..=m - w {
                let mean = v[s..s + w].iter().sum::<f64>() / w as f64;
                let osc = v[s..s + w].iter().map(|x| (x - mean).abs()).sum::<f64>() / w as f64;
                direct = direct.max(osc);
            }
        }
        assert!((direct - bmo).abs() < 0.01, "{direct} vs {bmo}");
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn bmo_is_below_the_raw_seminorm(coeffs in proptest::collection::vec(-1.0f64..1.0, 2..12)) {
            use crate::regularity::seminorm::{h_half_seminorm_fn, Normalization, QuadratureOptions};
            let circle = OrientedArc::full_circle(CirclePoint::ONE);
            let u = |a: f64| {
                coeffs
                    .chunks(2)
                    .enumerate()
                    .map(|(k, c)| {
                        let n = (k + 1) as f64;
                        c[0] * (n * a).cos() + c.get(1).copied().unwrap_or(0.0) * (n * a).sin()
                    })
                    .sum::<f64>()
            };
            let f = ArcFunction::from_fn(circle, 1024, u).unwrap();
            let bmo = bmo_norm(&f, &circle, &OscillationOptions::default()).unwrap();
            let s = h_half_seminorm_fn(u, &circle, &circle, Normalization::Raw, &QuadratureOptions::default()).unwrap();
            proptest::prop_assert!(bmo <= s, "bmo {} > seminorm {}", bmo, s);
        }
    }
}
