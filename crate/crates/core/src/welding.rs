//! Conformal welding of a slit generated by a driving term.
//!
//! Boundary points hitting the singularity at the same time are glued to
//! the same point of the slit. The welding is stored as triples
//! `(t, θ⁺, θ⁻)` on a grid of hitting times, with lifted angles
//! `0 ≤ θ⁺ ≤ a⁺` and `-a⁻ ≤ θ⁻ ≤ 0`, and evaluated by linear interpolation.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circle::{ccw_offset, CirclePoint, OrientedArc};
use crate::driver::DrivingTerm;
use crate::error::{Error, Result, Side};
use crate::loewner::{backward_shot, hits_by, slit_preimage_endpoints_tol, LoewnerConfig};
use crate::regularity::arc::{interpolate, nodal_derivative, ArcFunction, ArcHomeomorphism};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct WeldPair {
    pub t: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Welding {
    pairs: Vec<WeldPair>,
    /// `θ⁺` and `-θ⁻` as plain arrays for interpolation.
    plus: Vec<f64>,
    minus_neg: Vec<f64>,
}

impl Welding {
    /// Validates a pairing. The first pair must be `(0, 0, 0)`; the last one
    /// holds the endpoints `α⁺, α⁻`.
    pub fn new(pairs: Vec<WeldPair>) -> Result<Self> {
        if pairs.len() < 2 {
            return Err(Error::Validation("a welding needs at least two pairs".into()));
        }
        let first = pairs[0];
        if first.t.abs() > 1e-12 || first.theta_plus.abs() > 1e-12 || first.theta_minus.abs() > 1e-12 {
            return Err(Error::Validation(
                "the first welding pair must be (0, 0, 0)".into(),
            ));
        }
        for (i, p) in pairs.iter().enumerate() {
            if !(p.t.is_finite() && p.theta_plus.is_finite() && p.theta_minus.is_finite()) {
                return Err(Error::Validation(format!("pair {i} is not finite")));
            }
            if i == 0 {
                continue;
            }
            let q = pairs[i - 1];
            if p.t <= q.t {
                return Err(Error::Validation(format!(
                    "hitting times not increasing at pair {i}"
                )));
            }
            if p.theta_plus <= q.theta_plus {
                return Err(Error::Validation(format!(
                    "theta_plus not increasing at pair {i}"
                )));
            }
            if p.theta_minus >= q.theta_minus {
                return Err(Error::Validation(format!(
                    "theta_minus not decreasing at pair {i}"
                )));
            }
        }
        let last = pairs[pairs.len() - 1];
        if last.theta_plus - last.theta_minus >= TAU {
            return Err(Error::Validation(
                "the welded arc covers the whole circle".into(),
            ));
        }
        let mut pairs = pairs;
        pairs[0] = WeldPair {
            t: 0.0,
            theta_plus: 0.0,
            theta_minus: 0.0,
        };
        let plus = pairs.iter().map(|p| p.theta_plus).collect();
        let minus_neg = pairs.iter().map(|p| -p.theta_minus).collect();
        Ok(Self {
            pairs,
            plus,
            minus_neg,
        })
    }

    pub fn pairs(&self) -> &[WeldPair] {
        &self.pairs
    }

    pub fn horizon(&self) -> f64 {
        self.last().t
    }

    fn last(&self) -> WeldPair {
        self.pairs[self.pairs.len() - 1]
    }

    /// Lifted angle `a⁺ > 0` of `α⁺`.
    pub fn plus_extent(&self) -> f64 {
        self.last().theta_plus
    }

    /// Clockwise extent `a⁻ > 0` of `α⁻`.
    pub fn minus_extent(&self) -> f64 {
        -self.last().theta_minus
    }

    pub fn alpha_plus(&self) -> CirclePoint {
        CirclePoint::from_angle(self.plus_extent())
    }

    pub fn alpha_minus(&self) -> CirclePoint {
        CirclePoint::from_angle(-self.minus_extent())
    }

    /// `I⁺ = ⟨1, α⁺⟩`.
    pub fn plus_arc(&self) -> OrientedArc {
        OrientedArc::from_start_length(0.0, self.plus_extent()).expect("positive extent")
    }

    /// `I⁻ = ⟨α⁻, 1⟩`.
    pub fn minus_arc(&self) -> OrientedArc {
        OrientedArc::from_start_length(-self.minus_extent(), self.minus_extent())
            .expect("positive extent")
    }

    /// `I = ⟨α⁻, α⁺⟩`.
    pub fn arc(&self) -> OrientedArc {
        OrientedArc::from_start_length(-self.minus_extent(), self.minus_extent() + self.plus_extent())
            .expect("proper arc")
    }

    /// Partner `θ⁻ ∈ [-a⁻, 0]` of the lifted angle `θ⁺ ∈ [0, a⁺]`.
    pub fn partner_of_plus(&self, theta_plus: f64) -> f64 {
        -interpolate(&self.plus, &self.minus_neg, theta_plus)
    }

    /// Partner `θ⁺ ∈ [0, a⁺]` of the lifted angle `θ⁻ ∈ [-a⁻, 0]`.
    pub fn partner_of_minus(&self, theta_minus: f64) -> f64 {
        interpolate(&self.minus_neg, &self.plus, -theta_minus)
    }

    /// Hitting time of the plus-side point `θ⁺`.
    pub fn time_of_plus(&self, theta_plus: f64) -> f64 {
        let times: Vec<f64> = self.pairs.iter().map(|p| p.t).collect();
        interpolate(&self.plus, &times, theta_plus)
    }

    /// `φ` restricted to `I⁺ → I⁻` as a sense-reversing arc map.
    pub fn to_homeomorphism(&self) -> ArcHomeomorphism {
        let a = self.minus_extent();
        ArcHomeomorphism::new(
            self.plus_arc(),
            self.minus_arc(),
            self.plus.clone(),
            self.minus_neg.iter().map(|m| a - m).collect(),
        )
        .expect("validated welding")
    }

    /// A copy keeping every `step`-th pair (and always the last one).
    pub fn thinned(&self, step: usize) -> Result<Self> {
        let step = step.max(1);
        let n = self.pairs.len();
        let pairs = self
            .pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| i % step == 0 || *i == n - 1)
            .map(|(_, p)| *p)
            .collect();
        Self::new(pairs)
    }
}

/// Locate the point on `side` that hits exactly at time `t`.
fn solve_side(d: &DrivingTerm, t: f64, side: Side, tol: f64, cfg: &LoewnerConfig) -> Result<f64> {
    let fail = |reason: String| Error::Extraction { side, time: t, reason };
    let guess = backward_shot(d, t, side, cfg).map_err(|e| fail(format!("backward shot: {e}")))?;
    let mut delta = (1e-7f64).max(guess * 1e-6);
    for _ in 0..12 {
        let lo = (guess - delta).max(0.0);
        let hi = (guess + delta).min(TAU);
        let lo_hits = lo == 0.0 || hits_by(d, lo, t, side, cfg)?;
        let hi_hits = hits_by(d, hi, t, side, cfg)?;
        if lo_hits && !hi_hits {
            let (mut lo, mut hi) = (lo, hi);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if hits_by(d, mid, t, side, cfg)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        if lo == 0.0 && hi == TAU {
            break;
        }
        delta *= 8.0;
    }
    Err(fail(
        "no bracket with an early hit below and a late hit above; hitting times are not monotone"
            .into(),
    ))
}

/// Welding sampled at the hitting times `t_k = kT/n`, `k = 0..=n`.
pub fn extract_welding(d: &DrivingTerm, n: usize, cfg: &LoewnerConfig) -> Result<Welding> {
    if n < 8 {
        return Err(Error::Validation(format!(
            "welding needs at least 8 samples, got {n}"
        )));
    }
    let horizon = d.horizon();
    let tol = 1e-11;
    let (endpoints, interior) = rayon::join(
        || slit_preimage_endpoints_tol(d, 1e-10, cfg),
        || {
            (1..n)
                .into_par_iter()
                .map(|k| {
                    let t = horizon * k as f64 / n as f64;
                    let (p, m) = rayon::join(
                        || solve_side(d, t, Side::Plus, tol, cfg),
                        || solve_side(d, t, Side::Minus, tol, cfg),
                    );
                    Ok(WeldPair {
                        t,
                        theta_plus: p?,
                        theta_minus: -m?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        },
    );
    let (am, ap) = endpoints?;
    let mut pairs = Vec::with_capacity(n + 1);
    pairs.push(WeldPair {
        t: 0.0,
        theta_plus: 0.0,
        theta_minus: 0.0,
    });
    pairs.extend(interior?);
    pairs.push(WeldPair {
        t: horizon,
        theta_plus: ccw_offset(0.0, ap.angle()),
        theta_minus: -ccw_offset(am.angle(), 0.0),
    });
    for (i, w) in pairs.windows(2).enumerate() {
        let side = if w[1].theta_plus <= w[0].theta_plus {
            Some(Side::Plus)
        } else if w[1].theta_minus >= w[0].theta_minus {
            Some(Side::Minus)
        } else {
            None
        };
        if let Some(side) = side {
            return Err(Error::Extraction {
                side,
                time: pairs[i + 1].t,
                reason: "extracted angles are not strictly monotone".into(),
            });
        }
    }
    Welding::new(pairs)
}

/// `φ(x)` for `x ∈ I`.
pub fn welding_apply(w: &Welding, x: CirclePoint) -> Result<CirclePoint> {
    const SLACK: f64 = 1e-9;
    let off = ccw_offset(0.0, x.angle());
    if off <= w.plus_extent() + SLACK {
        return Ok(CirclePoint::from_angle(
            w.partner_of_plus(off.min(w.plus_extent())),
        ));
    }
    let back = TAU - off;
    if back <= w.minus_extent() + SLACK {
        return Ok(CirclePoint::from_angle(
            w.partner_of_minus(-back.min(w.minus_extent())),
        ));
    }
    Err(Error::Domain(format!(
        "angle {} lies outside the welded arc",
        x.angle()
    )))
}

/// `log|φ'|` on `I⁺` (or on `I⁻` for [`Side::Minus`]) at the welding nodes.
/// The two end nodes use one-sided differences and are less reliable.
pub fn welding_log_derivative(w: &Welding, side: Side) -> Result<ArcFunction> {
    if w.pairs().len() < 3 {
        return Err(Error::Derivative("need at least three pairs".into()));
    }
    let xs: Vec<f64> = w.pairs().iter().map(|p| p.theta_plus).collect();
    let ys: Vec<f64> = w.pairs().iter().map(|p| p.theta_minus).collect();
    let slopes = nodal_derivative(&xs, &ys);
    if let Some(i) = slopes.iter().position(|s| !(*s < 0.0) || !s.is_finite()) {
        return Err(Error::Derivative(format!(
            "welding derivative is not negative at pair {i} (repeated angles?)"
        )));
    }
    let logs: Vec<f64> = slopes.iter().map(|s| (-s).ln()).collect();
    match side {
        Side::Plus => ArcFunction::new(w.plus_arc(), xs, logs),
        Side::Minus => {
            let a = w.minus_extent();
            let params = ys.iter().rev().map(|y| y + a).collect();
            let values = logs.iter().rev().map(|l| -l).collect();
            ArcFunction::new(w.minus_arc(), params, values)
        }
    }
}

/// Exact welding of `𝔻 ∖ [t_slit, 1]`, normalized so the conformal map
/// from the disk fixes 0.
///
/// Slit points are sampled uniformly on `(t_slit, 1]` and pulled back
/// through the closed-form slit map; the preimages are conjugate, and the
/// hitting time of `e^{iθ}` is `-2 log cos(θ/2)`.
pub fn radial_slit_welding(t_slit: f64, n: usize) -> Result<Welding> {
    if !(t_slit > 0.0 && t_slit < 1.0) {
        return Err(Error::Validation(format!(
            "slit tip {t_slit} outside (0, 1)"
        )));
    }
    let n = n.max(2);
    let c = (1.0 - t_slit) / (1.0 + t_slit);
    let s = (1.0 / (c * c) - 1.0).sqrt();
    let beta = (1.0 - s) / (1.0 + s);
    let mut pairs = vec![WeldPair {
        t: 0.0,
        theta_plus: 0.0,
        theta_minus: 0.0,
    }];
    for k in 1..=n {
        let x = if k == n {
            1.0
        } else {
            t_slit + (1.0 - t_slit) * k as f64 / n as f64
        };
        // 1 - (w/c)² with w = (1-x)/(1+x), written to avoid cancellation.
        let w = (1.0 - x) / (1.0 + x);
        let gap = 2.0 * (x - t_slit) / ((1.0 + t_slit) * (1.0 + x));
        let ratio = (gap * (c + w)).max(0.0).sqrt() / c;
        let theta_h = 2.0 * ratio.atan();
        // Undo the real automorphism sending 0 to β.
        let e = Complex64::from_polar(1.0, theta_h);
        let theta = ((e - beta) / (1.0 - beta * e)).arg();
        pairs.push(WeldPair {
            t: -2.0 * (0.5 * theta).cos().ln(),
            theta_plus: theta,
            theta_minus: -theta,
        });
    }
    Welding::new(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tip_for(t: f64) -> f64 {
        let r = (-t).exp();
        let b = 2.0 * r - 4.0;
        (-b - (b * b - 4.0 * r * r).sqrt()) / (2.0 * r)
    }

    #[test]
    fn radial_slit_is_conjugation() {
        let w = radial_slit_welding(3.0 - 2.0 * 2f64.sqrt(), 64).unwrap();
        assert!((w.plus_extent() - PI / 2.0).abs() < 1e-12);
        assert!((w.horizon() - 2f64.ln()).abs() < 1e-12);
        for k in 0..=50 {
            let x = CirclePoint::from_angle(-1.5 + 3.0 * k as f64 / 50.0);
            let y = welding_apply(&w, x).unwrap();
            assert!((y.angle() + x.angle()).abs() < 1e-12);
        }
        assert_eq!(welding_apply(&w, CirclePoint::ONE).unwrap(), CirclePoint::ONE);
        assert!((welding_apply(&w, CirclePoint::i()).unwrap().angle() + PI / 2.0).abs() < 1e-12);
        assert!(welding_apply(&w, CirclePoint::minus_one()).is_err());
        let l = welding_log_derivative(&w, Side::Plus).unwrap();
        assert!(l.values().iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn radial_slit_endpoints_match_capacity() {
        // The hitting time of α⁺ is the capacity of the slit.
        for &t in &[0.05, 0.4, 0.8] {
            let w = radial_slit_welding(tip_for(t), 16).unwrap();
            let a = w.plus_extent();
            assert!((-2.0 * (0.5 * a).cos().ln() - t).abs() < 1e-10, "{t}");
        }
    }

    #[test]
    fn involution_and_validation() {
        let w = radial_slit_welding(0.3, 40).unwrap();
        for k in 1..40 {
            let x = CirclePoint::from_angle(0.02 * k as f64);
            if w.arc().contains(x) {
                let back = welding_apply(&w, welding_apply(&w, x).unwrap()).unwrap();
                assert!(x.distance(&back) < 1e-12);
            }
        }
        let bad = vec![
            WeldPair { t: 0.0, theta_plus: 0.0, theta_minus: 0.0 },
            WeldPair { t: 0.1, theta_plus: 0.2, theta_minus: -0.2 },
            WeldPair { t: 0.2, theta_plus: 0.1, theta_minus: -0.3 },
        ];
        assert!(Welding::new(bad).is_err());
    }

    #[test]
    fn extraction_of_constant_driver() {
        let d = DrivingTerm::constant(2f64.ln()).unwrap();
        let cfg = LoewnerConfig::default();
        let w = extract_welding(&d, 32, &cfg).unwrap();
        let oracle = radial_slit_welding(3.0 - 2.0 * 2f64.sqrt(), 32).unwrap();
        for p in w.pairs() {
            assert!((p.theta_plus + p.theta_minus).abs() < 1e-9);
            // Closed form of the hitting time for σ ≡ 0.
            let want = 2.0 * (0.5 * p.t).exp().recip().acos();
            assert!((p.theta_plus - want).abs() < 1e-8, "{p:?}");
            let x = CirclePoint::from_angle(p.theta_plus);
            let y = welding_apply(&oracle, x).unwrap();
            assert!((y.angle() - p.theta_minus).abs() < 1e-6);
        }
        assert!(matches!(
            extract_welding(&d, 4, &cfg),
            Err(Error::Validation(_))
        ));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(6))]
        #[test]
        fn extracted_weldings_are_involutions(a in -1.0f64..1.0, b in -0.8f64..0.8) {
            let d = DrivingTerm::from_fn(0.6, 128, |t| a * t.sqrt() + b * t).unwrap();
            let w = extract_welding(&d, 24, &LoewnerConfig::default()).unwrap();
            proptest::prop_assert_eq!(w.pairs()[0], WeldPair { t: 0.0, theta_plus: 0.0, theta_minus: 0.0 });
            for pair in w.pairs().windows(2) {
                proptest::prop_assert!(pair[1].theta_plus > pair[0].theta_plus);
                proptest::prop_assert!(pair[1].theta_minus < pair[0].theta_minus);
            }
            for k in 0..50 {
                let x = w.plus_extent() * k as f64 / 49.0;
                let back = w.partner_of_minus(w.partner_of_plus(x));
                proptest::prop_assert!((back - x).abs() < 1e-9);
            }
        }
    }
}
