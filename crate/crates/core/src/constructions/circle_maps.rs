//! Boundary homeomorphisms assembled piece by piece from reflections,
//! Möbius maps, the conjugated welding and sampled arc maps.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use crate::circle::{ccw_offset, mobius_from_triple, CirclePoint, MobiusCircleMap, OrientedArc};
use crate::error::{Error, Result};
use crate::regularity::arc::{ArcFunction, ArcHomeomorphism};
use crate::regularity::cross::ConjugatedWelding;
use crate::regularity::seminorm::{energy_integral, QuadratureOptions};
use crate::welding::Welding;

/// One step of a piece rule, acting on a point and accumulating
/// `log|derivative|`.
#[derive(Debug, Clone)]
pub enum CircleOp {
    /// `z ↦ z̄`.
    Conjugate,
    /// `z ↦ -z`.
    Negate,
    Mobius(MobiusCircleMap),
    /// `τ⁻¹∘φ∘τ` on `⟨1, i⟩`.
    Welded(Arc<ConjugatedWelding>),
    /// A sampled arc map with its log-derivative on the domain.
    Sampled(Arc<(ArcHomeomorphism, ArcFunction)>),
}

impl CircleOp {
    pub fn sampled(h: ArcHomeomorphism) -> Result<Self> {
        let l = h.log_derivative()?;
        Ok(CircleOp::Sampled(Arc::new((h, l))))
    }

    fn apply(&self, angle: f64, log_d: f64) -> Result<(f64, f64)> {
        Ok(match self {
            CircleOp::Conjugate => (-angle, log_d),
            CircleOp::Negate => (angle + PI, log_d),
            CircleOp::Mobius(m) => {
                let (p, d) = m.eval(CirclePoint::from_angle(angle));
                (p.angle(), log_d + d.ln())
            }
            CircleOp::Welded(c) => {
                let s = OrientedArc::between_angles(0.0, FRAC_PI_2)
                    .param_of_angle(angle)
                    .ok_or_else(|| Error::Domain(format!("angle {angle} is off ⟨1, i⟩")))?;
                let (a, l) = c.eval(s);
                (a, log_d + l)
            }
            CircleOp::Sampled(hl) => {
                let (h, l) = &**hl;
                let s = h
                    .domain()
                    .param_of_angle(angle)
                    .ok_or_else(|| Error::Domain(format!("angle {angle} is off the sampled arc")))?;
                (h.range().angle_at(h.eval_param(s)), log_d + l.eval_param(s))
            }
        })
    }
}

#[derive(Debug, Clone)]
pub struct Piece {
    pub arc: OrientedArc,
    /// Applied left to right.
    pub ops: Vec<CircleOp>,
}

/// Sense-preserving homeomorphism of the circle given piecewise.
#[derive(Debug, Clone)]
pub struct PiecewiseCircleMap {
    pieces: Vec<Piece>,
}

impl PiecewiseCircleMap {
    /// Pieces must be listed counterclockwise and cover the circle.
    /// Checks continuity at the junctions (1e-9) and global monotonicity.
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let total: f64 = pieces.iter().map(|p| p.arc.length()).sum();
        if (total - TAU).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "pieces cover {total} radians instead of 2π"
            )));
        }
        for (k, p) in pieces.iter().enumerate() {
            let next = &pieces[(k + 1) % pieces.len()];
            if p.arc.end().distance(&next.arc.start()) > 1e-9 {
                return Err(Error::Validation(format!("piece {k} does not end where piece {} starts", k + 1)));
            }
        }
        let map = Self { pieces };
        for (k, p) in map.pieces.iter().enumerate() {
            let next = &map.pieces[(k + 1) % map.pieces.len()];
            let junction = next.arc.start().angle();
            let (a, _) = map.eval_piece(p, p.arc.angle_at(p.arc.length()))?;
            let (b, _) = map.eval_piece(next, junction)?;
            let mismatch = a.distance(&b);
            if mismatch > 1e-9 {
                return Err(Error::Continuity {
                    angle: junction,
                    mismatch,
                });
            }
        }
        map.check_monotone(4096)?;
        Ok(map)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn eval_piece(&self, piece: &Piece, angle: f64) -> Result<(CirclePoint, f64)> {
        let (mut a, mut l) = (angle, 0.0);
        for op in &piece.ops {
            (a, l) = op.apply(a, l)?;
        }
        Ok((CirclePoint::from_angle(a), l))
    }

    /// Image of `e^{i·angle}` and `log|ψ'|` there.
    pub fn eval_log(&self, angle: f64) -> Result<(CirclePoint, f64)> {
        let piece = self
            .pieces
            .iter()
            .find(|p| p.arc.param_of_angle(angle).is_some())
            .expect("pieces cover the circle");
        self.eval_piece(piece, angle)
    }

    pub fn eval(&self, p: CirclePoint) -> Result<CirclePoint> {
        Ok(self.eval_log(p.angle())?.0)
    }

    /// `|ψ'(e^{i·angle})|`.
    pub fn deriv_modulus(&self, angle: f64) -> Result<f64> {
        Ok(self.eval_log(angle)?.1.exp())
    }

    fn check_monotone(&self, n: usize) -> Result<()> {
        let base = self.eval_log(0.0)?.0.angle();
        let mut last = 0.0;
        for k in 1..n {
            let a = TAU * k as f64 / n as f64;
            let off = ccw_offset(base, self.eval_log(a)?.0.angle());
            if off <= last {
                return Err(Error::Continuity {
                    angle: a,
                    mismatch: last - off,
                });
            }
            last = off;
        }
        Ok(())
    }

    /// `ψ⁻¹(p)` by bisection on the lifted boundary map.
    pub fn inverse(&self, p: CirclePoint) -> Result<CirclePoint> {
        let base = self.eval_log(0.0)?.0.angle();
        let target = ccw_offset(base, p.angle());
        if target == 0.0 {
            return Ok(CirclePoint::ONE);
        }
        let (mut lo, mut hi) = (0.0, TAU);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if ccw_offset(base, self.eval_log(mid)?.0.angle()) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(CirclePoint::from_angle(0.5 * (lo + hi)))
    }
}

/// Möbius map sending `-i, 1, i` to `α⁻, 1, α⁺`.
pub fn build_tau(alpha_minus: CirclePoint, alpha_plus: CirclePoint) -> Result<MobiusCircleMap> {
    mobius_from_triple(
        [CirclePoint::minus_i(), CirclePoint::ONE, CirclePoint::i()],
        [alpha_minus, CirclePoint::ONE, alpha_plus],
    )
}

fn quarter(start: f64, end: f64) -> OrientedArc {
    OrientedArc::between_angles(start, end)
}

/// Extension of the conjugated welding to the whole circle: the identity
/// on the upper half, `Φ(z̄)` on `⟨-i, 1⟩` and `-conj(Φ(-z))` on `⟨-1, -i⟩`.
pub fn build_psi(w: &Welding, tau: &MobiusCircleMap) -> Result<PiecewiseCircleMap> {
    let c = Arc::new(ConjugatedWelding::new(w, tau)?);
    let (phi_at_one, _) = c.eval(0.0);
    let (phi_at_i, _) = c.eval(FRAC_PI_2);
    if phi_at_one.abs() > 1e-9 || (phi_at_i + FRAC_PI_2).abs() > 1e-9 {
        return Err(Error::Continuity {
            angle: 0.0,
            mismatch: phi_at_one.abs().max((phi_at_i + FRAC_PI_2).abs()),
        });
    }
    PiecewiseCircleMap::new(vec![
        Piece {
            arc: quarter(0.0, PI),
            ops: vec![],
        },
        Piece {
            arc: quarter(PI, -FRAC_PI_2),
            ops: vec![
                CircleOp::Negate,
                CircleOp::Welded(c.clone()),
                CircleOp::Conjugate,
                CircleOp::Negate,
            ],
        },
        Piece {
            arc: quarter(-FRAC_PI_2, 0.0),
            ops: vec![CircleOp::Conjugate, CircleOp::Welded(c)],
        },
    ])
}

/// The six double integrals of `log|ψ'|` over the arc pairs of
/// `⟨1,-1⟩ = A`, `⟨-i,1⟩ = B`, `⟨-1,-i⟩ = C`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct JDecomposition {
    /// `AA, BB, CC, CB, BA, CA`.
    pub j: [f64; 6],
    /// `J₁ + J₂ + J₃ + 2J₄ + 2J₅ + 2J₆`.
    pub weighted_sum: f64,
    /// The full-circle double integral computed directly.
    pub full: f64,
}

pub fn psi_j_decomposition(psi: &PiecewiseCircleMap, opts: &QuadratureOptions) -> Result<JDecomposition> {
    let u = |a: f64| psi.eval_log(a).map(|(_, l)| l).unwrap_or(f64::NAN);
    let a = quarter(0.0, PI);
    let b = quarter(-FRAC_PI_2, 0.0);
    let c = quarter(PI, -FRAC_PI_2);
    // Match the cell width of the full-circle grid on every arc.
    let half = QuadratureOptions {
        cells: opts.cells.max(8) / 2,
        ..opts.clone()
    };
    let quarter_opts = QuadratureOptions {
        cells: opts.cells.max(8) / 4,
        ..opts.clone()
    };
    let pick = |x: &OrientedArc| if x.length() > 2.0 { &half } else { &quarter_opts };
    let pairs = [(a, a), (b, b), (c, c), (c, b), (b, a), (c, a)];
    let mut j = [0.0; 6];
    for (k, (x, y)) in pairs.iter().enumerate() {
        // Equal counts per arc are required, so integrate the longer arc
        // as two halves when lengths differ.
        j[k] = if (x.length() - y.length()).abs() < 1e-12 {
            energy_integral(u, x, y, pick(x))?.value
        } else {
            let (long, short) = if x.length() > y.length() { (x, y) } else { (y, x) };
            let first = OrientedArc::from_start_length(long.start().angle(), long.length() / 2.0)?;
            let second = OrientedArc::from_start_length(long.start().angle() + long.length() / 2.0, long.length() / 2.0)?;
            energy_integral(u, &first, short, &quarter_opts)?.value
                + energy_integral(u, &second, short, &quarter_opts)?.value
        };
    }
    let circle = OrientedArc::full_circle(CirclePoint::ONE);
    let full = energy_integral(u, &circle, &circle, opts)?.value;
    let weighted_sum = j[0] + j[1] + j[2] + 2.0 * (j[3] + j[4] + j[5]);
    Ok(JDecomposition {
        j,
        weighted_sum,
        full,
    })
}

/// Extend a homeomorphism of `⟨-i, i⟩` fixing `±i` to the circle by
/// `z ↦ -conj(ψ(-z̄))` on `⟨i, -i⟩`.
pub fn reflect_half_extension(psi_half: &ArcHomeomorphism) -> Result<PiecewiseCircleMap> {
    let right = quarter(-FRAC_PI_2, FRAC_PI_2);
    let same = |x: &OrientedArc| {
        (x.length() - right.length()).abs() < 1e-12 && x.start().distance(&right.start()) < 1e-12
    };
    if !same(psi_half.domain()) || !same(psi_half.range()) || !psi_half.is_increasing() {
        return Err(Error::Validation(
            "half map must send ⟨-i, i⟩ onto itself fixing ±i".into(),
        ));
    }
    let op = CircleOp::sampled(psi_half.clone())?;
    PiecewiseCircleMap::new(vec![
        Piece {
            arc: right,
            ops: vec![op.clone()],
        },
        Piece {
            arc: quarter(FRAC_PI_2, -FRAC_PI_2),
            ops: vec![
                CircleOp::Conjugate,
                CircleOp::Negate,
                op,
                CircleOp::Conjugate,
                CircleOp::Negate,
            ],
        },
    ])
}

/// Extend a homeomorphism of `⟨1, i⟩` onto itself to the circle by the four
/// reflections across the coordinate axes.
pub fn build_capital_psi(inner: &ArcHomeomorphism) -> Result<PiecewiseCircleMap> {
    let q1 = quarter(0.0, FRAC_PI_2);
    let same = |x: &OrientedArc| {
        (x.length() - q1.length()).abs() < 1e-12 && x.start().distance(&q1.start()) < 1e-12
    };
    if !same(inner.domain()) || !same(inner.range()) || !inner.is_increasing() {
        return Err(Error::Validation(
            "inner map must send ⟨1, i⟩ onto itself fixing 1 and i".into(),
        ));
    }
    let op = CircleOp::sampled(inner.clone())?;
    use CircleOp::{Conjugate, Negate};
    PiecewiseCircleMap::new(vec![
        Piece {
            arc: q1,
            ops: vec![op.clone()],
        },
        Piece {
            arc: quarter(FRAC_PI_2, PI),
            ops: vec![Conjugate, Negate, op.clone(), Conjugate, Negate],
        },
        Piece {
            arc: quarter(PI, -FRAC_PI_2),
            ops: vec![Negate, op.clone(), Negate],
        },
        Piece {
            arc: quarter(-FRAC_PI_2, 0.0),
            ops: vec![Conjugate, op, Conjugate],
        },
    ])
}
