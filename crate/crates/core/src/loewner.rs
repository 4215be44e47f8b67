//! Radial Loewner flows in the unit disk.
//!
//! * [`upward_flow`] integrates `∂ₜg = -g (ξ+g)/(ξ-g)`, `g₀ = id`.
//! * [`downward_flow`] integrates `∂ₜf = f (λ+f)/(λ-f)` with `λ(t) = ξ(T-t)`.
//! * Boundary points are evolved in the offset variable `u = θ - σ(t)`,
//!   which satisfies `u' = -cot(u/2) - σ'(t)`. A point hits the
//!   singularity from the `+` side when `u → 0⁺` and from the `−` side when
//!   `u → 2π⁻`.
//!
//! Each linear piece of the driver is integrated separately so the vector
//! field is smooth inside every call to the integrator.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circle::{ccw_offset, CirclePoint};
use crate::driver::{DrivingTerm, Segment};
use crate::error::{Error, Result, Side};
use crate::ode::{integrate, Flow, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoewnerConfig {
    /// A boundary trajectory within this angle of `σ(t)` has hit.
    pub eps_hit: f64,
    /// Bisection tolerance for the endpoints `α±`.
    pub eps_alpha: f64,
    /// Step cap factor: `dt ≤ c_step · Δ²`.
    pub c_step: f64,
    pub interior: Tolerances,
    pub boundary: Tolerances,
    /// Radial offsets used to extrapolate the trace tip.
    pub trace_eps: [f64; 3],
    /// Largest accepted disagreement between trace extrapolants.
    pub trace_tol: f64,
}

impl Default for LoewnerConfig {
    fn default() -> Self {
        Self {
            eps_hit: 1e-6,
            eps_alpha: 1e-6,
            c_step: 0.1,
            interior: Tolerances {
                rtol: 1e-12,
                atol: 1e-15,
                h_min: 1e-18,
            },
            boundary: Tolerances {
                rtol: 1e-12,
                atol: 1e-14,
                h_min: 1e-20,
            },
            trace_eps: [1e-2, 5e-3, 2.5e-3],
            trace_tol: 1e-3,
        }
    }
}

fn loewner_field(z: Complex64, drive: Complex64) -> Complex64 {
    z * (drive + z) / (drive - z)
}

/// Integrate an interior point over consecutive driver pieces.
/// `sign = -1` gives the upward equation, `+1` the downward one.
fn interior_flow(
    segments: &[Segment],
    z0: Complex64,
    sign: f64,
    cfg: &LoewnerConfig,
) -> Result<Complex64> {
    let mut z = z0;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    let mut h = 1e-3;
    for seg in segments {
        let drive = |t: f64| Complex64::from_polar(1.0, seg.angle_at(t));
        let mut hit_time = None;
        let end = integrate(
            |t, z: Complex64| loewner_field(z, drive(t)) * sign,
            seg.start,
            z,
            seg.end,
            h,
            &cfg.interior,
            |t, z| cfg.c_step * (drive(t) - z).norm_sqr(),
            |z| z.norm() < 1.0 + 1e-12,
            |t, z| {
                if sign > 0.0 && (drive(t) - z).norm() < cfg.eps_hit {
                    hit_time = Some(t);
                    Flow::Stop
                } else {
                    Flow::Continue
                }
            },
        )
        .map_err(|e| {
            if sign > 0.0 {
                Error::HitSingularity { time: e.time }
            } else {
                Error::IntegrationFailure {
                    time: e.time,
                    reason: e.reason,
                }
            }
        })?;
        if let Some(time) = hit_time {
            return Err(Error::HitSingularity { time });
        }
        z = end.y;
        h = end.h_next;
    }
    Ok(z)
}

fn check_interior(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!("{z} is not in the open unit disk")));
    }
    Ok(())
}

fn check_time(d: &DrivingTerm, t: f64) -> Result<()> {
    if !(t >= 0.0 && t <= d.horizon() * (1.0 + 1e-14)) {
        return Err(Error::Domain(format!(
            "time {t} outside [0, {}]",
            d.horizon()
        )));
    }
    Ok(())
}

/// `g_t(z)` for the upward equation driven by `ξ`.
pub fn upward_flow(d: &DrivingTerm, z: Complex64, t: f64, cfg: &LoewnerConfig) -> Result<Complex64> {
    check_interior(z)?;
    check_time(d, t)?;
    interior_flow(&d.forward_segments(t), z, -1.0, cfg)
}

/// `f_t(z)` for the downward equation driven by `λ(s) = ξ(T - s)`.
pub fn downward_flow(
    d: &DrivingTerm,
    z: Complex64,
    t: f64,
    cfg: &LoewnerConfig,
) -> Result<Complex64> {
    check_interior(z)?;
    check_time(d, t)?;
    interior_flow(&d.reversed_segments(t), z, 1.0, cfg)
}

/// What became of a boundary point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryFate {
    Hit { time: f64, side: Side },
    /// Still on the circle at the stopping time, at this angle.
    Survived { angle: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPath {
    pub times: Vec<f64>,
    /// Lifted angles `θ(t) = σ(t) + u(t)`.
    pub angles: Vec<f64>,
    pub fate: BoundaryFate,
}

/// Evolve a boundary point until it hits or time `until` passes.
///
/// The point is given in the frame of `frame`: `w = u` for [`Side::Plus`]
/// and `w = 2π - u` for [`Side::Minus`], so that `w' = -cot(w/2) ∓ σ'` and
/// mirrored drivers produce mirrored computations exactly.
fn evolve_offset(
    d: &DrivingTerm,
    w0: f64,
    frame: Side,
    until: f64,
    cfg: &LoewnerConfig,
    mut record: Option<&mut Vec<(f64, f64)>>,
) -> Result<BoundaryFate> {
    let gap = |w: f64| w.min(TAU - w);
    let flip = match frame {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    let side_of = |w: f64| match (w < PI, frame) {
        (true, f) => f,
        (false, Side::Plus) => Side::Minus,
        (false, Side::Minus) => Side::Plus,
    };
    if gap(w0) <= cfg.eps_hit {
        return Ok(BoundaryFate::Hit {
            time: 0.0,
            side: side_of(w0),
        });
    }
    let mut w = w0;
    let mut h = 1e-3;
    if let Some(rec) = record.as_deref_mut() {
        rec.push((0.0, w));
    }
    for seg in d.forward_segments(until) {
        let drift = flip * seg.slope;
        let mut hit: Option<(f64, f64)> = None;
        let mut diag: Option<String> = None;
        let mut prev_gap = gap(w);
        let end = integrate(
            |_t, w: f64| -1.0 / (0.5 * w).tan() - drift,
            seg.start,
            w,
            seg.end,
            h,
            &cfg.boundary,
            |_, w| cfg.c_step * gap(w) * gap(w),
            |w| w > 0.0 && w < TAU,
            |t, w| {
                if let Some(rec) = record.as_deref_mut() {
                    rec.push((t, w));
                }
                let g = gap(w);
                // Inside the capture zone the cotangent dominates the drift
                // of σ and the gap has to shrink monotonically.
                let captured = 1.0 / (0.5 * prev_gap).tan() > 2.0 * drift.abs();
                if captured && g > prev_gap * (1.0 + 1e-9) {
                    diag = Some(format!(
                        "gap grew from {prev_gap:e} to {g:e} at t = {t} inside the capture zone"
                    ));
                    return Flow::Stop;
                }
                prev_gap = g;
                if g < cfg.eps_hit {
                    hit = Some((t, w));
                    Flow::Stop
                } else {
                    Flow::Continue
                }
            },
        )
        .map_err(|e| Error::IntegrationFailure {
            time: e.time,
            reason: e.reason,
        })?;
        if let Some(msg) = diag {
            return Err(Error::Diagnostics(msg));
        }
        if let Some((t, w_hit)) = hit {
            // Remaining time from the local law Δ² ≈ 4(τ - t).
            let g = gap(w_hit);
            return Ok(BoundaryFate::Hit {
                time: t + 0.25 * g * g,
                side: side_of(w_hit),
            });
        }
        w = end.y;
        h = end.h_next;
    }
    Ok(BoundaryFate::Survived {
        angle: d.sigma_at(until) + flip * w,
    })
}

/// Frame and frame coordinate of the boundary point `e^{iθ0}`.
fn frame_of(theta0: f64) -> (f64, Side) {
    let theta = crate::circle::canonical_angle(theta0);
    if theta >= 0.0 {
        (theta, Side::Plus)
    } else {
        (-theta, Side::Minus)
    }
}

/// Boundary trajectory of `e^{iθ0}` until it hits or reaches `T`.
pub fn boundary_flow(d: &DrivingTerm, theta0: f64, cfg: &LoewnerConfig) -> Result<BoundaryPath> {
    let (w0, frame) = frame_of(theta0);
    let mut rec = Vec::new();
    let fate = evolve_offset(d, w0, frame, d.horizon(), cfg, Some(&mut rec))?;
    if rec.is_empty() {
        rec.push((0.0, w0));
    }
    let flip = match frame {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    let (times, angles) = rec
        .into_iter()
        .map(|(t, w)| (t, d.sigma_at(t) + flip * w))
        .unzip();
    Ok(BoundaryPath {
        times,
        angles,
        fate,
    })
}

/// Fate, observed up to time `until`, of the point at angular distance `v`
/// from the base point along `side`.
pub fn boundary_fate(
    d: &DrivingTerm,
    v: f64,
    side: Side,
    until: f64,
    cfg: &LoewnerConfig,
) -> Result<BoundaryFate> {
    evolve_offset(d, v, side, until, cfg, None)
}

/// Hitting time `τ(e^{iθ0})`, or `None` if the point survives to `T`.
pub fn hitting_time(d: &DrivingTerm, theta0: f64, cfg: &LoewnerConfig) -> Result<Option<f64>> {
    let (w0, frame) = frame_of(theta0);
    Ok(match evolve_offset(d, w0, frame, d.horizon(), cfg, None)? {
        BoundaryFate::Hit { time, .. } => Some(time),
        BoundaryFate::Survived { .. } => None,
    })
}

/// Does the point at distance `v` along `side` hit from `side` by time `t`?
pub(crate) fn hits_by(
    d: &DrivingTerm,
    v: f64,
    t: f64,
    side: Side,
    cfg: &LoewnerConfig,
) -> Result<bool> {
    Ok(match evolve_offset(d, v, side, t, cfg, None)? {
        BoundaryFate::Hit { time, side: s } => s == side && time <= t,
        BoundaryFate::Survived { .. } => false,
    })
}

/// Distance `v` from the base point, along `side`, of the point hitting
/// from `side` exactly at `t`. Obtained by integrating the boundary flow
/// backwards from the singularity; used as a starting bracket for
/// bisection.
pub(crate) fn backward_shot(d: &DrivingTerm, t: f64, side: Side, cfg: &LoewnerConfig) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    let flip = match side {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    let delta = (1e-12f64).min(0.5 * t);
    let mut w = 2.0 * delta.sqrt();
    let gap = |w: f64| w.min(TAU - w);
    // Reverse time s = t - time; dw/ds = cot(w/2) ± σ'.
    let mut h = delta;
    let mut s_done = delta;
    for seg in d.forward_segments(t).iter().rev() {
        let (s0, s1) = (t - seg.end, t - seg.start);
        if s1 <= s_done {
            continue;
        }
        let drift = flip * seg.slope;
        let end = integrate(
            |_s, w: f64| 1.0 / (0.5 * w).tan() + drift,
            s0.max(s_done),
            w,
            s1,
            h,
            &cfg.boundary,
            |_, w| cfg.c_step * gap(w) * gap(w),
            |w| w > 0.0 && w < TAU,
            |_, _| Flow::Continue,
        )
        .map_err(|e| Error::IntegrationFailure {
            time: t - e.time,
            reason: e.reason,
        })?;
        w = end.y;
        h = end.h_next;
        s_done = s1;
    }
    Ok(w)
}

/// Bisection on the distance from the base point along `side` for the
/// boundary between points that hit from `side` before `until` and those
/// that do not.
pub(crate) fn bisect_side_boundary(
    d: &DrivingTerm,
    until: f64,
    side: Side,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    cfg: &LoewnerConfig,
) -> Result<f64> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if hits_by(d, mid, until, side, cfg)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Endpoints `α⁻, α⁺` of the arc `I = g_T⁻¹(Γ)`.
pub fn slit_preimage_endpoints(d: &DrivingTerm, cfg: &LoewnerConfig) -> Result<(CirclePoint, CirclePoint)> {
    slit_preimage_endpoints_tol(d, cfg.eps_alpha, cfg)
}

pub(crate) fn slit_preimage_endpoints_tol(
    d: &DrivingTerm,
    tol: f64,
    cfg: &LoewnerConfig,
) -> Result<(CirclePoint, CirclePoint)> {
    let horizon = d.horizon();
    if !(horizon > 0.0) {
        return Err(Error::DegenerateInput("driver has zero horizon".into()));
    }
    let lo = 0.5 * cfg.eps_hit;
    let hi = TAU - lo;
    let (plus, minus) = rayon::join(
        || bisect_side_boundary(d, horizon, Side::Plus, lo, hi, tol, cfg),
        || bisect_side_boundary(d, horizon, Side::Minus, lo, hi, tol, cfg),
    );
    Ok((CirclePoint::from_angle(-minus?), CirclePoint::from_angle(plus?)))
}

/// Hitting times sampled along one side of the base point.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HittingProfile {
    pub side: Side,
    /// `(θ, τ(θ))`, with `θ` measured from 0 (negative on the minus side).
    pub samples: Vec<(f64, f64)>,
    /// Angle of `α±` on this side.
    pub alpha: f64,
}

pub fn hitting_profile(
    d: &DrivingTerm,
    side: Side,
    count: usize,
    cfg: &LoewnerConfig,
) -> Result<HittingProfile> {
    let (am, ap) = slit_preimage_endpoints(d, cfg)?;
    let alpha = match side {
        Side::Plus => ccw_offset(0.0, ap.angle()),
        Side::Minus => -ccw_offset(am.angle(), 0.0),
    };
    let count = count.max(2);
    let samples = (1..=count)
        .into_par_iter()
        .map(|k| {
            // Stay strictly inside the arc; τ(α±) = T only in the limit.
            let theta = alpha * k as f64 / (count as f64 + 0.5);
            let tau = hitting_time(d, theta, cfg)?.ok_or_else(|| {
                Error::Diagnostics(format!("point {theta} inside I did not hit"))
            })?;
            Ok((theta, tau))
        })
        .collect::<Result<Vec<_>>>()?;
    for w in samples.windows(2) {
        if w[1].1 <= w[0].1 {
            return Err(Error::Diagnostics(format!(
                "hitting times not increasing on the {side} side near θ = {}",
                w[1].0
            )));
        }
    }
    Ok(HittingProfile {
        side,
        samples,
        alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TraceSample {
    pub t: f64,
    pub tip: Complex64,
}

/// Tip `γ(t)` of the slit grown by the downward flow up to time `t`.
///
/// `γ(t)` is the image of `ξ(T-t)` under the upward flow of the shifted
/// driver `s ↦ ξ(T-t+s)` run for time `t`. The boundary limit is taken by
/// starting at radius `1-ε` and extrapolating the three offsets in
/// `cfg.trace_eps` to `ε = 0` with a polynomial in `ε` (terms `ε`, `ε²`).
pub fn trace_point(d: &DrivingTerm, t: f64, cfg: &LoewnerConfig) -> Result<TraceSample> {
    let horizon = d.horizon();
    if !(t > 0.0 && t <= horizon * (1.0 + 1e-14)) {
        return Err(Error::Domain(format!("trace time {t} outside (0, {horizon}]")));
    }
    let t = t.min(horizon);
    let (window, base) = d.tail_from(horizon - t)?;
    let mut vals = [Complex64::new(0.0, 0.0); 3];
    for (k, &eps) in cfg.trace_eps.iter().enumerate() {
        vals[k] = interior_flow(
            &window.forward_segments(window.horizon()),
            Complex64::new(1.0 - eps, 0.0),
            -1.0,
            cfg,
        )?;
    }
    let e = cfg.trace_eps;
    // Lagrange extrapolation to ε = 0 through all three points.
    let w0 = e[1] * e[2] / ((e[0] - e[1]) * (e[0] - e[2]));
    let w1 = e[0] * e[2] / ((e[1] - e[0]) * (e[1] - e[2]));
    let w2 = e[0] * e[1] / ((e[2] - e[0]) * (e[2] - e[1]));
    let quadratic = vals[0] * w0 + vals[1] * w1 + vals[2] * w2;
    // First-order Richardson from the two finest offsets.
    let linear = (vals[2] * e[1] - vals[1] * e[2]) / (e[1] - e[2]);
    let residual = (quadratic - linear).norm();
    if !(residual <= cfg.trace_tol) {
        return Err(Error::TraceFailure { time: t, residual });
    }
    let tip = quadratic * Complex64::from_polar(1.0, base);
    if !(tip.norm() < 1.0) {
        return Err(Error::TraceFailure { time: t, residual });
    }
    Ok(TraceSample { t, tip })
}

/// Trace at `count` equally spaced times in `(0, T]`.
pub fn trace(d: &DrivingTerm, count: usize, cfg: &LoewnerConfig) -> Result<Vec<TraceSample>> {
    let horizon = d.horizon();
    (1..=count.max(1))
        .into_par_iter()
        .map(|k| trace_point(d, horizon * k as f64 / count.max(1) as f64, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_log2() -> DrivingTerm {
        DrivingTerm::constant(2f64.ln()).unwrap()
    }

    /// For `σ ≡ 0`, `cos(θ/2) = cos(θ0/2) e^{t/2}` until `θ = 0`.
    fn constant_driver_hitting_time(theta: f64) -> f64 {
        -2.0 * (0.5 * theta).cos().ln()
    }

    /// Tip `x` of the radial slit with conformal radius `e^{-t}`:
    /// `4x/(1+x)² = e^{-t}`.
    fn radial_tip(t: f64) -> f64 {
        let r = (-t).exp();
        // r(1+x)² = 4x  ⇒  r x² + (2r-4) x + r = 0, smaller root.
        let b = 2.0 * r - 4.0;
        (-b - (b * b - 4.0 * r * r).sqrt()) / (2.0 * r)
    }

    #[test]
    fn flows_start_at_identity() {
        let d = DrivingTerm::from_fn(1.0, 64, |t| 0.4 * t.sqrt()).unwrap();
        let cfg = LoewnerConfig::default();
        let z = Complex64::new(0.3, -0.2);
        assert_eq!(upward_flow(&d, z, 0.0, &cfg).unwrap(), z);
        assert_eq!(downward_flow(&d, z, 0.0, &cfg).unwrap(), z);
        assert_eq!(
            upward_flow(&d, Complex64::new(0.0, 0.0), 1.0, &cfg).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn constant_driver_keeps_negative_reals_real() {
        let d = constant_log2();
        let cfg = LoewnerConfig::default();
        let f = downward_flow(&d, Complex64::new(-0.4, 0.0), 0.5, &cfg).unwrap();
        assert!(f.im.abs() < 1e-14 && f.re < 0.0);
    }

    #[test]
    fn downward_derivative_at_origin() {
        let d = DrivingTerm::from_fn(1.0, 128, |t| 0.5 * t.sqrt() + 0.3 * (3.0 * t).sin())
            .unwrap();
        let cfg = LoewnerConfig::default();
        let h = 1e-4;
        for &t in &[0.1, 0.5, 1.0] {
            let fp = downward_flow(&d, Complex64::new(h, 0.0), t, &cfg).unwrap();
            let fm = downward_flow(&d, Complex64::new(-h, 0.0), t, &cfg).unwrap();
            let deriv = (fp - fm) / (2.0 * h);
            assert!((deriv - t.exp()).norm() < 1e-6, "t = {t}: {deriv}");
        }
    }

    #[test]
    fn round_trip_at_horizon() {
        let d = DrivingTerm::from_fn(1.0, 256, |t| 0.4 * t.sqrt()).unwrap();
        let cfg = LoewnerConfig::default();
        for &z in &[
            Complex64::new(0.1, 0.2),
            Complex64::new(-0.5, 0.4),
            Complex64::new(0.3, -0.6),
        ] {
            let f = downward_flow(&d, z, 1.0, &cfg).unwrap();
            let back = upward_flow(&d, f, 1.0, &cfg).unwrap();
            assert!((back - z).norm() < 1e-6);
        }
    }

    #[test]
    fn base_point_hits_immediately() {
        let cfg = LoewnerConfig::default();
        assert_eq!(hitting_time(&constant_log2(), 0.0, &cfg).unwrap(), Some(0.0));
    }

    #[test]
    fn antipode_is_stationary() {
        let cfg = LoewnerConfig::default();
        let d = DrivingTerm::constant(0.1).unwrap();
        assert_eq!(hitting_time(&d, PI, &cfg).unwrap(), None);
        let path = boundary_flow(&d, PI, &cfg).unwrap();
        match path.fate {
            BoundaryFate::Survived { angle } => assert!((angle - PI).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_driver_hitting_times_match_closed_form() {
        let cfg = LoewnerConfig::default();
        let d = constant_log2();
        for &theta in &[0.05, 0.3, 0.8, 1.2, 1.5] {
            let want = constant_driver_hitting_time(theta);
            let got = hitting_time(&d, theta, &cfg).unwrap().unwrap();
            assert!((got - want).abs() < 1e-9, "θ = {theta}: {got} vs {want}");
            let mirror = hitting_time(&d, -theta, &cfg).unwrap().unwrap();
            assert!((mirror - got).abs() < 1e-12);
        }
    }

    #[test]
    fn mirror_trajectories() {
        let cfg = LoewnerConfig::default();
        let d = constant_log2();
        let a = boundary_flow(&d, 0.9, &cfg).unwrap();
        let b = boundary_flow(&d, -0.9, &cfg).unwrap();
        match (a.fate, b.fate) {
            (
                BoundaryFate::Hit { time: ta, side: Side::Plus },
                BoundaryFate::Hit { time: tb, side: Side::Minus },
            ) => assert!((ta - tb).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(a.angles.len(), b.angles.len());
        for (x, y) in a.angles.iter().zip(&b.angles) {
            assert!((x + y).abs() < 1e-12);
        }
    }

    #[test]
    fn hitting_times_increase_along_side() {
        let cfg = LoewnerConfig::default();
        let d = constant_log2();
        let mut last = 0.0;
        for k in 1..20 {
            let tau = hitting_time(&d, 1.5 * k as f64 / 20.0, &cfg).unwrap().unwrap();
            assert!(tau > last);
            last = tau;
        }
    }

    #[test]
    fn constant_driver_endpoints() {
        let cfg = LoewnerConfig::default();
        let (am, ap) = slit_preimage_endpoints(&constant_log2(), &cfg).unwrap();
        assert!((ap.angle() - PI / 2.0).abs() < 1e-5);
        assert!((am.angle() + PI / 2.0).abs() < 1e-5);
        assert!((am.angle() + ap.angle()).abs() < 1e-5);

        let (am, ap) = slit_preimage_endpoints(&DrivingTerm::constant(1e-6).unwrap(), &cfg).unwrap();
        assert!(ap.angle() < 5e-3 && am.angle() > -5e-3);
    }

    #[test]
    fn constant_driver_trace_matches_conformal_radius() {
        let cfg = LoewnerConfig::default();
        let d = constant_log2();
        let tip = trace_point(&d, d.horizon(), &cfg).unwrap().tip;
        assert!((tip.re - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-4);
        assert!(tip.im.abs() < 1e-12);
        for &t in &[0.05, 0.3] {
            let tip = trace_point(&d, t, &cfg).unwrap().tip;
            assert!((tip.re - radial_tip(t)).abs() < 1e-4);
            assert!(tip.im.abs() < 1e-12 && tip.re > 0.0 && tip.re < 1.0);
        }
        let early = trace_point(&d, 1e-4, &cfg).unwrap().tip;
        assert!((early - 1.0).norm() < 0.05);
    }

    #[test]
    fn conjugation_equivariance() {
        let cfg = LoewnerConfig::default();
        let d = DrivingTerm::from_fn(0.8, 64, |t| 0.6 * t - 0.3 * t * t).unwrap();
        let m = d.negated();
        let z = Complex64::new(0.2, 0.35);
        let a = upward_flow(&d, z, 0.8, &cfg).unwrap();
        let b = upward_flow(&m, z.conj(), 0.8, &cfg).unwrap();
        assert!((a - b.conj()).norm() < 1e-9);
        let ta = trace_point(&d, 0.5, &cfg).unwrap().tip;
        let tb = trace_point(&m, 0.5, &cfg).unwrap().tip;
        assert!((ta - tb.conj()).norm() < 1e-9);
        let ha = hitting_time(&d, 0.7, &cfg).unwrap().unwrap();
        let hb = hitting_time(&m, -0.7, &cfg).unwrap().unwrap();
        assert!((ha - hb).abs() < 1e-9);
    }

    #[test]
    fn backward_shot_inverts_hitting_time() {
        let cfg = LoewnerConfig::default();
        let d = DrivingTerm::from_fn(1.0, 128, |t| 0.4 * t.sqrt()).unwrap();
        for side in [Side::Plus, Side::Minus] {
            let v = backward_shot(&d, 0.6, side, &cfg).unwrap();
            match boundary_fate(&d, v, side, 1.0, &cfg).unwrap() {
                BoundaryFate::Hit { time, side: s } => {
                    assert_eq!(s, side);
                    assert!((time - 0.6).abs() < 1e-7, "{time}");
                }
                other => panic!("{other:?}"),
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(16))]
        #[test]
        fn negated_driver_conjugates_flows(
            a in -1.5f64..1.5,
            b in -1.0f64..1.0,
            r in 0.0f64..0.9,
            arg in -3.1f64..3.1,
        ) {
            let d = DrivingTerm::from_fn(0.5, 64, |t| a * t.sqrt() + b * t).unwrap();
            let m = d.negated();
            let cfg = LoewnerConfig::default();
            let z = Complex64::from_polar(r, arg);
            let up = upward_flow(&d, z, 0.5, &cfg).unwrap();
            let up_m = upward_flow(&m, z.conj(), 0.5, &cfg).unwrap();
            proptest::prop_assert!((up.conj() - up_m).norm() < 1e-9);
            let down = downward_flow(&d, z, 0.5, &cfg).unwrap();
            let down_m = downward_flow(&m, z.conj(), 0.5, &cfg).unwrap();
            proptest::prop_assert!((down.conj() - down_m).norm() < 1e-9);
        }
    }
}
