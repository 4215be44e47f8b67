//! Embedded Dormand–Prince 5(4) integrator with a caller-supplied step cap.
//!
//! The Loewner vector fields blow up like `1/Δ` where `Δ` is the distance to
//! the driving singularity, so callers pass a `max_step` closure (typically
//! `c_step · Δ²`) on top of the usual error control, and an `admissible`
//! predicate that rejects steps jumping across the singularity.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

pub trait OdeState: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
    fn is_finite(&self) -> bool;
}

impl OdeState for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl OdeState for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Smallest step accepted before reporting underflow.
    pub h_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            h_min: 1e-18,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeFailure {
    pub time: f64,
    pub reason: String,
}

/// Returned by the step observer to end the integration early.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy)]
pub struct Endpoint<S> {
    pub t: f64,
    pub y: S,
    /// Last attempted step size, a good first guess for a follow-on segment.
    pub h_next: f64,
    pub stopped: bool,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// Fifth minus fourth order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn lin<S: OdeState>(y: S, h: f64, coeffs: &[f64], ks: &[S]) -> S {
    let mut acc = y;
    for (c, k) in coeffs.iter().zip(ks) {
        if *c != 0.0 {
            acc = acc + *k * (h * c);
        }
    }
    acc
}

/// One Dormand–Prince step. Returns the fifth-order solution, the local
/// error vector and the derivative at the new point.
fn dp_step<S, F>(f: &F, t: f64, y: S, k1: S, h: f64) -> (S, S, S)
where
    S: OdeState,
    F: Fn(f64, S) -> S,
{
    let k2 = f(t + C[1] * h, lin(y, h, &A2, &[k1]));
    let k3 = f(t + C[2] * h, lin(y, h, &A3, &[k1, k2]));
    let k4 = f(t + C[3] * h, lin(y, h, &A4, &[k1, k2, k3]));
    let k5 = f(t + C[4] * h, lin(y, h, &A5, &[k1, k2, k3, k4]));
    let k6 = f(t + C[5] * h, lin(y, h, &A6, &[k1, k2, k3, k4, k5]));
    let y_new = lin(y, h, &B, &[k1, k2, k3, k4, k5, k6]);
    let k7 = f(t + h, y_new);
    let err = lin(y * 0.0, h, &E, &[k1, k2, k3, k4, k5, k6, k7]);
    (y_new, err, k7)
}

/// Integrate `y' = f(t, y)` from `t0` to `t1 > t0`.
///
/// * `max_step(t, y)` caps the step size at the current state.
/// * `admissible(y)` rejects proposed states (the step is retried at a
///   quarter of its size).
/// * `observe(t, y)` runs after each accepted step and may stop early.
#[allow(clippy::too_many_arguments)]
pub fn integrate<S, F, M, A, O>(
    f: F,
    t0: f64,
    y0: S,
    t1: f64,
    h_guess: f64,
    tol: &Tolerances,
    max_step: M,
    admissible: A,
    mut observe: O,
) -> Result<Endpoint<S>, OdeFailure>
where
    S: OdeState,
    F: Fn(f64, S) -> S,
    M: Fn(f64, S) -> f64,
    A: Fn(S) -> bool,
    O: FnMut(f64, S) -> Flow,
{
    let mut t = t0;
    let mut y = y0;
    let span = t1 - t0;
    if span <= 0.0 {
        return Ok(Endpoint {
            t,
            y,
            h_next: h_guess,
            stopped: false,
        });
    }
    let mut h = if h_guess > 0.0 { h_guess } else { span * 0.01 };
    let mut k1 = f(t, y);
    if !k1.is_finite() {
        return Err(OdeFailure {
            time: t,
            reason: "non-finite derivative at start".into(),
        });
    }
    loop {
        let remaining = t1 - t;
        if remaining <= span * 1e-15 {
            return Ok(Endpoint {
                t: t1,
                y,
                h_next: h,
                stopped: false,
            });
        }
        let cap = max_step(t, y);
        let mut step = h.min(cap).min(remaining);
        let last = step >= remaining;
        if last {
            step = remaining;
        }
        if step < tol.h_min {
            return Err(OdeFailure {
                time: t,
                reason: format!("step size underflow (h = {step:e})"),
            });
        }
        let (y_new, err, k_new) = dp_step(&f, t, y, k1, step);
        if !y_new.is_finite() || !k_new.is_finite() || !admissible(y_new) {
            h = step * 0.25;
            continue;
        }
        let scale = tol.atol + tol.rtol * y.magnitude().max(y_new.magnitude());
        let ratio = err.magnitude() / scale;
        if ratio <= 1.0 {
            t = if last { t1 } else { t + step };
            y = y_new;
            k1 = k_new;
            let grow = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = step * grow;
            if observe(t, y) == Flow::Stop {
                return Ok(Endpoint {
                    t,
                    y,
                    h_next: h,
                    stopped: true,
                });
            }
        } else {
            h = step * (0.9 * ratio.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let tol = Tolerances::default();
        let end = integrate(
            |_t, y: f64| y,
            0.0,
            1.0,
            2.0,
            0.1,
            &tol,
            |_, _| f64::INFINITY,
            |_| true,
            |_, _| Flow::Continue,
        )
        .unwrap();
        assert!((end.y - 2f64.exp()).abs() < 1e-11);
    }

    #[test]
    fn complex_rotation() {
        let tol = Tolerances::default();
        let end = integrate(
            |_t, z: Complex64| Complex64::i() * z,
            0.0,
            Complex64::new(1.0, 0.0),
            std::f64::consts::PI,
            0.1,
            &tol,
            |_, _| 0.05,
            |_| true,
            |_, _| Flow::Continue,
        )
        .unwrap();
        assert!((end.y + 1.0).norm() < 1e-12);
    }

    #[test]
    fn observer_stops() {
        let tol = Tolerances::default();
        let end = integrate(
            |_t, _y: f64| -1.0,
            0.0,
            1.0,
            10.0,
            0.1,
            &tol,
            |_, _| 0.1,
            |_| true,
            |_, y| if y < 0.5 { Flow::Stop } else { Flow::Continue },
        )
        .unwrap();
        assert!(end.stopped && end.y < 0.5 && end.t < 0.6 + 1e-9);
    }
}
