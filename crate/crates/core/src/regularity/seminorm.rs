//! Singular double integrals over pairs of arcs.
//!
//! The Douglas-type energy `∬ |u(z₁) - u(z₂)|² / |z₁ - z₂|² |dz₁||dz₂|` is
//! approximated by the tensor midpoint rule. Cells whose arcs overlap are
//! dropped; the dropped band costs `O(h)`, which three levels of first
//! order Richardson extrapolation remove.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::circle::{ccw_offset, chord, OrientedArc};
use crate::error::{Error, Result};
use crate::regularity::arc::ArcFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Plain arc-length measures.
    Raw,
    /// Each measure divided by `2π`.
    TwoPi,
}

impl std::fmt::Display for Normalization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Normalization::Raw => "raw",
            Normalization::TwoPi => "two_pi",
        })
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct QuadratureOptions {
    /// Cells per arc at the coarsest level.
    pub cells: usize,
    /// Number of levels, each doubling the cells (at least 3).
    pub levels: usize,
    /// Relative agreement required of the last two extrapolants.
    pub rel_tol: f64,
    /// Absolute agreement that is always accepted.
    pub abs_tol: f64,
    /// Angles whose adjacent cells are left out of the sum and reported
    /// separately.
    pub excluded_points: Vec<f64>,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            cells: 128,
            levels: 3,
            rel_tol: 0.01,
            abs_tol: 1e-10,
            excluded_points: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DoubleIntegral {
    /// Extrapolated value of the integral.
    pub value: f64,
    /// Plain midpoint sums, coarse to fine.
    pub sums: Vec<f64>,
    /// Richardson extrapolants `2Q(2N) - Q(N)`.
    pub extrapolants: Vec<f64>,
    /// Contribution of the excluded endpoint cells at the finest level.
    pub excluded_share: f64,
}

/// Cell midpoints of `arc` with `n` cells, as lifted angles.
fn midpoints(arc: &OrientedArc, n: usize) -> Vec<f64> {
    let h = arc.length() / n as f64;
    (0..n).map(|k| arc.angle_at((k as f64 + 0.5) * h)).collect()
}

fn near_point(angle: f64, half_width: f64, points: &[f64]) -> bool {
    points.iter().any(|&p| {
        let d = ccw_offset(p, angle);
        d.min(TAU - d) <= half_width * (1.0 + 1e-9)
    })
}

/// Midpoint sum of `kernel(a, b)` over `I × J` with `n` cells per arc.
/// Returns (kept, excluded-endpoint) contributions.
fn midpoint_sum<K>(
    i: &OrientedArc,
    j: &OrientedArc,
    n: usize,
    excluded: &[f64],
    kernel: &K,
) -> (f64, f64)
where
    K: Fn(usize, usize, f64, f64) -> f64 + Sync,
{
    let (ai, aj) = (midpoints(i, n), midpoints(j, n));
    let (hi, hj) = (i.length() / n as f64, j.length() / n as f64);
    let band = 0.5 * (hi + hj) * (1.0 - 1e-9);
    let skip_i: Vec<bool> = ai.iter().map(|&a| near_point(a, 0.5 * hi, excluded)).collect();
    let skip_j: Vec<bool> = aj.iter().map(|&b| near_point(b, 0.5 * hj, excluded)).collect();
    let (kept, dropped) = (0..n)
        .into_par_iter()
        .map(|p| {
            let mut kept = 0.0;
            let mut dropped = 0.0;
            for q in 0..n {
                let d = ccw_offset(ai[p], aj[q]);
                if d.min(TAU - d) < band {
                    continue;
                }
                let v = kernel(p, q, ai[p], aj[q]);
                if skip_i[p] || skip_j[q] {
                    dropped += v;
                } else {
                    kept += v;
                }
            }
            (kept, dropped)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    (kept * hi * hj, dropped * hi * hj)
}

/// Refine the midpoint rule and extrapolate. `kernel_at(n)` builds the
/// kernel for `n` cells per arc (so it can precompute samples).
fn refine<B, K>(
    i: &OrientedArc,
    j: &OrientedArc,
    opts: &QuadratureOptions,
    kernel_at: B,
) -> Result<DoubleIntegral>
where
    B: Fn(usize) -> K,
    K: Fn(usize, usize, f64, f64) -> f64 + Sync,
{
    let levels = opts.levels.max(3);
    let mut sums = Vec::with_capacity(levels);
    let mut excluded_share = 0.0;
    for l in 0..levels {
        let n = opts.cells.max(4) << l;
        let kernel = kernel_at(n);
        let (kept, dropped) = midpoint_sum(i, j, n, &opts.excluded_points, &kernel);
        sums.push(kept);
        excluded_share = dropped;
    }
    let extrapolants: Vec<f64> = sums.windows(2).map(|w| 2.0 * w[1] - w[0]).collect();
    let fine = extrapolants[extrapolants.len() - 1];
    let coarse = extrapolants[extrapolants.len() - 2];
    if !fine.is_finite() || (fine - coarse).abs() > opts.rel_tol * fine.abs() + opts.abs_tol {
        return Err(Error::Accuracy { coarse, fine });
    }
    Ok(DoubleIntegral {
        value: fine.max(0.0),
        sums,
        extrapolants,
        excluded_share,
    })
}

/// `∬_{I×J} |u(a) - u(b)|² / |e^{ia} - e^{ib}|² da db` for any function of
/// the angle.
pub fn energy_integral<F>(
    u: F,
    i: &OrientedArc,
    j: &OrientedArc,
    opts: &QuadratureOptions,
) -> Result<DoubleIntegral>
where
    F: Fn(f64) -> f64 + Sync,
{
    refine(i, j, opts, |n| {
        let ui: Vec<f64> = midpoints(i, n).into_iter().map(&u).collect();
        let uj: Vec<f64> = midpoints(j, n).into_iter().map(&u).collect();
        move |p: usize, q: usize, a: f64, b: f64| {
            let du = ui[p] - uj[q];
            let c = chord(a, b);
            du * du / (c * c)
        }
    })
}

/// `∬_{I×J} w(a) / |e^{ia} - e^{ib}|² da db` for a weight depending only on
/// the first variable.
pub fn weighted_kernel_integral<F>(
    weight: F,
    i: &OrientedArc,
    j: &OrientedArc,
    opts: &QuadratureOptions,
) -> Result<DoubleIntegral>
where
    F: Fn(f64) -> f64 + Sync,
{
    refine(i, j, opts, |n| {
        let wi: Vec<f64> = midpoints(i, n).into_iter().map(&weight).collect();
        move |p: usize, _q: usize, a: f64, b: f64| {
            let c = chord(a, b);
            wi[p] / (c * c)
        }
    })
}

fn same_arc(i: &OrientedArc, j: &OrientedArc) -> bool {
    (i.length() - j.length()).abs() < 1e-12 && i.start().distance(&j.start()) < 1e-12
}

/// Scale a raw double integral to the requested normalization, taking the
/// square root on the diagonal `I = J`.
pub fn normalize(raw: f64, i: &OrientedArc, j: &OrientedArc, mode: Normalization) -> f64 {
    let v = match mode {
        Normalization::Raw => raw,
        Normalization::TwoPi => raw / (4.0 * PI * PI),
    };
    if same_arc(i, j) {
        v.sqrt()
    } else {
        v
    }
}

/// Check that `sub` lies on the arc of `u` and return the evaluator in
/// angle space.
fn restrict<'a>(u: &'a ArcFunction, sub: &OrientedArc) -> Result<impl Fn(f64) -> f64 + Sync + 'a> {
    let arc = *u.arc();
    if !arc.is_full_circle() {
        let s0 = arc.param_of(sub.start()).ok_or_else(|| {
            Error::Domain("integration arc starts outside the function's arc".into())
        })?;
        if s0 + sub.length() > arc.length() + 1e-9 {
            return Err(Error::Domain(
                "integration arc extends beyond the function's arc".into(),
            ));
        }
    }
    Ok(move |a: f64| {
        let s = ccw_offset(arc.start().angle(), a);
        // Near the start the offset may wrap to just below 2π.
        let s = if s > arc.length() { if s > TAU - 1e-9 { 0.0 } else { arc.length() } } else { s };
        u.eval_param(s)
    })
}

/// `H^{1/2}` seminorm of a sampled function over `I × J`.
pub fn h_half_seminorm(
    u: &ArcFunction,
    i: &OrientedArc,
    j: &OrientedArc,
    mode: Normalization,
    opts: &QuadratureOptions,
) -> Result<f64> {
    Ok(h_half_seminorm_detailed(u, i, j, mode, opts)?.0)
}

/// Like [`h_half_seminorm`], also returning the quadrature record of the
/// raw integral.
pub fn h_half_seminorm_detailed(
    u: &ArcFunction,
    i: &OrientedArc,
    j: &OrientedArc,
    mode: Normalization,
    opts: &QuadratureOptions,
) -> Result<(f64, DoubleIntegral)> {
    let ui = restrict(u, i)?;
    let _ = restrict(u, j)?;
    let q = energy_integral(ui, i, j, opts)?;
    Ok((normalize(q.value, i, j, mode), q))
}

/// Seminorm of a function given in closed form.
pub fn h_half_seminorm_fn<F>(
    u: F,
    i: &OrientedArc,
    j: &OrientedArc,
    mode: Normalization,
    opts: &QuadratureOptions,
) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    let q = energy_integral(u, i, j, opts)?;
    Ok(normalize(q.value, i, j, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CirclePoint;
    use proptest::prelude::*;

    fn circle() -> OrientedArc {
        OrientedArc::full_circle(CirclePoint::ONE)
    }

    #[test]
    fn constant_has_zero_seminorm() {
        let u = ArcFunction::from_fn(circle(), 64, |_| 3.0).unwrap();
        let s = h_half_seminorm(&u, &circle(), &circle(), Normalization::TwoPi, &Default::default()).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn cosine_fourier_identity() {
        let s = h_half_seminorm_fn(f64::cos, &circle(), &circle(), Normalization::TwoPi, &Default::default())
            .unwrap();
        assert!((s - 0.5f64.sqrt()).abs() < 0.01 * 0.5f64.sqrt(), "{s}");
    }

    #[test]
    fn sampled_matches_closed_form() {
        let u = ArcFunction::from_fn(circle(), 4096, |a| (2.0 * a).sin()).unwrap();
        let s = h_half_seminorm(&u, &circle(), &circle(), Normalization::TwoPi, &Default::default()).unwrap();
        // |n| |a_n|² summed over n = ±2 with |a_n| = 1/2.
        assert!((s - 1.0).abs() < 0.01, "{s}");
    }

    #[test]
    fn cross_kernel_inner_integral() {
        // ∫ dθ₂/|e^{iθ₁} - e^{iθ₂}|² over ⟨-i, 1⟩ is ½(cot(θ₁/2) - cot((θ₁+π/2)/2)).
        let i = OrientedArc::between_angles(0.0, PI / 2.0);
        let j = OrientedArc::between_angles(-PI / 2.0, 0.0);
        let w = |a: f64| (a * (PI / 2.0 - a)).powi(2);
        let q = weighted_kernel_integral(w, &i, &j, &Default::default()).unwrap();
        let m = 20000;
        let h = PI / 2.0 / m as f64;
        let oracle: f64 = (0..m)
            .map(|k| {
                let a = (k as f64 + 0.5) * h;
                w(a) * 0.5 * (1.0 / (0.5 * a).tan() - 1.0 / (0.5 * (a + PI / 2.0)).tan()) * h
            })
            .sum();
        assert!((q.value - oracle).abs() < 1e-3 * oracle, "{} vs {oracle}", q.value);
    }

    #[test]
    fn subarc_outside_domain_rejected() {
        let arc = OrientedArc::between_angles(0.0, 1.0);
        let u = ArcFunction::from_fn(arc, 8, |a| a).unwrap();
        let other = OrientedArc::between_angles(0.5, 1.5);
        assert!(matches!(
            h_half_seminorm(&u, &other, &other, Normalization::Raw, &Default::default()),
            Err(Error::Domain(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn fourier_identity_for_trig_polynomials(
            coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4)
        ) {
            // u = Σ_{n=1}^{4} (a_n cos nθ + b_n sin nθ); Σ|n||c_n|² = Σ n (a_n² + b_n²)/2.
            let u = |t: f64| coeffs.iter().enumerate().map(|(k, (a, b))| {
                let n = (k + 1) as f64;
                a * (n * t).cos() + b * (n * t).sin()
            }).sum::<f64>();
            let want: f64 = coeffs.iter().enumerate()
                .map(|(k, (a, b))| (k + 1) as f64 * (a * a + b * b) / 2.0).sum();
            prop_assume!(want > 1e-3);
            let s = h_half_seminorm_fn(u, &circle(), &circle(), Normalization::TwoPi, &Default::default()).unwrap();
            prop_assert!((s * s - want).abs() < 0.01 * want, "{} vs {}", s * s, want);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn raw_seminorm_is_mobius_invariant(
            rot in -3.0f64..3.0,
            r in 0.0f64..0.6,
            arg in -3.0f64..3.0,
            c in -1.0f64..1.0,
        ) {
            use crate::circle::MobiusCircleMap;
            use num_complex::Complex64;
            let circle = OrientedArc::full_circle(CirclePoint::ONE);
            let m = MobiusCircleMap::new(rot, Complex64::from_polar(r, arg)).unwrap();
            let u = |a: f64| (2.0 * a).sin() + c * a.cos();
            let opts = QuadratureOptions::default();
            let base = h_half_seminorm_fn(u, &circle, &circle, Normalization::Raw, &opts).unwrap();
            let moved = h_half_seminorm_fn(
                |a| u(m.eval(CirclePoint::from_angle(a)).0.angle()),
                &circle,
                &circle,
                Normalization::Raw,
                &opts,
            )
            .unwrap();
            prop_assert!((moved - base).abs() < 0.01 * base);
        }
    }
}
