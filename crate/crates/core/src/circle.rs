//! Points, oriented arcs and disk automorphisms on the unit circle.
//!
//! Everything is kept in angle space. A [`CirclePoint`] stores its canonical
//! angle in `(-π, π]`; arcs store a start point and a counterclockwise length.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reduce an angle to its canonical representative in `(-π, π]`.
pub fn canonical_angle(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    let a = angle.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

/// Counterclockwise angular distance from `from` to `to`, in `[0, 2π)`.
pub fn ccw_offset(from: f64, to: f64) -> f64 {
    let d = (to - from).rem_euclid(TAU);
    if d >= TAU {
        0.0
    } else {
        d
    }
}

/// Chordal distance `|e^{ia} - e^{ib}|`.
pub fn chord(a: f64, b: f64) -> f64 {
    2.0 * ((a - b) * 0.5).sin().abs()
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CirclePoint {
    angle: f64,
}

impl CirclePoint {
    pub fn from_angle(angle: f64) -> Self {
        Self {
            angle: canonical_angle(angle),
        }
    }

    /// Project a nonzero complex number radially onto the circle.
    pub fn from_complex(z: Complex64) -> Self {
        Self::from_angle(z.arg())
    }

    pub const ONE: CirclePoint = CirclePoint { angle: 0.0 };

    pub fn i() -> Self {
        Self::from_angle(PI / 2.0)
    }

    pub fn minus_i() -> Self {
        Self::from_angle(-PI / 2.0)
    }

    pub fn minus_one() -> Self {
        Self::from_angle(PI)
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    /// Complex conjugation `z ↦ z̄`.
    pub fn conjugate(&self) -> Self {
        Self::from_angle(-self.angle)
    }

    /// Antipodal point `z ↦ -z`.
    pub fn negate(&self) -> Self {
        Self::from_angle(self.angle + PI)
    }

    pub fn distance(&self, other: &CirclePoint) -> f64 {
        chord(self.angle, other.angle)
    }
}

/// `ι(z) = z̄` on the circle.
pub fn conjugate_point(p: CirclePoint) -> CirclePoint {
    p.conjugate()
}

/// A closed arc traversed counterclockwise from `start`.
///
/// Proper arcs have length in `(0, 2π)`; [`OrientedArc::full_circle`] builds
/// the whole circle cut open at a chosen point, which the quadrature code
/// treats as an arc of length `2π`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OrientedArc {
    start: CirclePoint,
    length: f64,
}

impl OrientedArc {
    pub fn new(start: CirclePoint, end: CirclePoint) -> Result<Self> {
        let length = ccw_offset(start.angle, end.angle);
        if length <= 0.0 {
            return Err(Error::Validation(
                "arc endpoints coincide; use OrientedArc::full_circle".into(),
            ));
        }
        Ok(Self { start, length })
    }

    /// Arc starting at angle `start` with counterclockwise length `length`.
    pub fn from_start_length(start: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= TAU) {
            return Err(Error::Validation(format!(
                "arc length {length} outside (0, 2π]"
            )));
        }
        Ok(Self {
            start: CirclePoint::from_angle(start),
            length,
        })
    }

    pub fn full_circle(start: CirclePoint) -> Self {
        Self {
            start,
            length: TAU,
        }
    }

    /// The four quarter and half arcs used by the reflection constructions,
    /// named by their endpoints.
    pub fn between_angles(start: f64, end: f64) -> Self {
        Self::new(CirclePoint::from_angle(start), CirclePoint::from_angle(end))
            .expect("distinct endpoints")
    }

    pub fn start(&self) -> CirclePoint {
        self.start
    }

    pub fn end(&self) -> CirclePoint {
        CirclePoint::from_angle(self.start.angle + self.length)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_full_circle(&self) -> bool {
        self.length >= TAU
    }

    /// Lifted angle of the point at arc-length parameter `s ∈ [0, length]`.
    pub fn angle_at(&self, s: f64) -> f64 {
        self.start.angle + s
    }

    pub fn point_at(&self, s: f64) -> CirclePoint {
        CirclePoint::from_angle(self.angle_at(s))
    }

    /// Arc-length parameter of `p`, or `None` when `p` is off the arc.
    pub fn param_of(&self, p: CirclePoint) -> Option<f64> {
        self.param_of_angle(p.angle)
    }

    pub fn param_of_angle(&self, angle: f64) -> Option<f64> {
        const SLACK: f64 = 1e-12;
        let off = ccw_offset(self.start.angle, angle);
        if off <= self.length + SLACK {
            Some(off.min(self.length))
        } else if off >= TAU - SLACK {
            Some(0.0)
        } else {
            None
        }
    }

    pub fn contains(&self, p: CirclePoint) -> bool {
        self.param_of(p).is_some()
    }
}

/// `true` iff `p` lies on the closed arc.
pub fn arc_contains(arc: &OrientedArc, p: CirclePoint) -> bool {
    arc.contains(p)
}

/// Disk automorphism `z ↦ e^{iθ}(z - a)/(1 - āz)` with `|a| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MobiusCircleMap {
    rotation: f64,
    pole_re: f64,
    pole_im: f64,
}

type Mat2 = [[Complex64; 2]; 2];

impl MobiusCircleMap {
    pub fn new(rotation: f64, pole: Complex64) -> Result<Self> {
        if !(pole.norm() < 1.0) {
            return Err(Error::Validation(format!(
                "Möbius pole {pole} is not inside the unit disk"
            )));
        }
        Ok(Self {
            rotation: canonical_angle(rotation),
            pole_re: pole.re,
            pole_im: pole.im,
        })
    }

    pub fn identity() -> Self {
        Self {
            rotation: 0.0,
            pole_re: 0.0,
            pole_im: 0.0,
        }
    }

    pub fn rotation(delta: f64) -> Self {
        Self {
            rotation: canonical_angle(delta),
            pole_re: 0.0,
            pole_im: 0.0,
        }
    }

    pub fn rotation_angle(&self) -> f64 {
        self.rotation
    }

    pub fn pole(&self) -> Complex64 {
        Complex64::new(self.pole_re, self.pole_im)
    }

    /// Evaluate at any point of the closed disk.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        let a = self.pole();
        Complex64::from_polar(1.0, self.rotation) * (z - a) / (1.0 - a.conj() * z)
    }

    /// `|m'(z)|`.
    pub fn deriv_modulus_at(&self, z: Complex64) -> f64 {
        let a = self.pole();
        (1.0 - a.norm_sqr()) / (1.0 - a.conj() * z).norm_sqr()
    }

    /// Image angle and `|m'|` at a point of the circle.
    pub fn eval(&self, p: CirclePoint) -> (CirclePoint, f64) {
        let z = p.to_complex();
        (
            CirclePoint::from_complex(self.apply(z)),
            self.deriv_modulus_at(z),
        )
    }

    pub fn inverse(&self) -> Self {
        let a = self.pole();
        let b = -a * Complex64::from_polar(1.0, self.rotation);
        Self {
            rotation: canonical_angle(-self.rotation),
            pole_re: b.re,
            pole_im: b.im,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusCircleMap) -> Self {
        Self::from_matrix(mat_mul(&self.matrix(), &other.matrix()))
            .expect("composition of disk automorphisms")
    }

    fn matrix(&self) -> Mat2 {
        let e = Complex64::from_polar(1.0, self.rotation);
        let a = self.pole();
        [[e, -e * a], [-a.conj(), Complex64::new(1.0, 0.0)]]
    }

    fn from_matrix(m: Mat2) -> Result<Self> {
        let [[p, q], [_r, s]] = m;
        if p.norm() == 0.0 || s.norm() == 0.0 {
            return Err(Error::DegenerateTriple(
                "matrix does not represent a disk automorphism".into(),
            ));
        }
        let pole = -q / p;
        let rot = p / s;
        Self::new(rot.arg(), pole).map_err(|_| {
            Error::DegenerateTriple("resulting map does not preserve the disk".into())
        })
    }
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Matrix sending `z1, z2, z3` to `0, 1, ∞`.
fn to_zero_one_inf(z1: Complex64, z2: Complex64, z3: Complex64) -> Mat2 {
    [[z2 - z3, -z1 * (z2 - z3)], [z2 - z1, -z3 * (z2 - z1)]]
}

fn mat_inv(m: &Mat2) -> Mat2 {
    let [[p, q], [r, s]] = *m;
    [[s, -q], [-r, p]]
}

fn check_triple(points: [CirclePoint; 3], label: &str) -> Result<()> {
    const MIN_GAP: f64 = 1e-12;
    let o2 = ccw_offset(points[0].angle(), points[1].angle());
    let o3 = ccw_offset(points[0].angle(), points[2].angle());
    if o2 < MIN_GAP || o3 < MIN_GAP || (o3 - o2).abs() < MIN_GAP {
        return Err(Error::DegenerateTriple(format!(
            "{label} triple has repeated points"
        )));
    }
    if o2 > o3 {
        return Err(Error::DegenerateTriple(format!(
            "{label} triple is not in counterclockwise order"
        )));
    }
    Ok(())
}

/// Unique disk automorphism sending `a_k ↦ b_k`, `k = 1, 2, 3`.
///
/// Both triples must be distinct points in counterclockwise order.
pub fn mobius_from_triple(a: [CirclePoint; 3], b: [CirclePoint; 3]) -> Result<MobiusCircleMap> {
    check_triple(a, "source")?;
    check_triple(b, "target")?;
    let za = a.map(|p| p.to_complex());
    let zb = b.map(|p| p.to_complex());
    let ma = to_zero_one_inf(za[0], za[1], za[2]);
    let mb = to_zero_one_inf(zb[0], zb[1], zb[2]);
    MobiusCircleMap::from_matrix(mat_mul(&mat_inv(&mb), &ma))
}

/// Image point and `|m'(p)|`.
pub fn mobius_eval(m: &MobiusCircleMap, p: CirclePoint) -> (CirclePoint, f64) {
    m.eval(p)
}
