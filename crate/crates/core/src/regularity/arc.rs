//! Sampled functions and monotone maps on oriented arcs.

use crate::circle::OrientedArc;
use crate::error::{Error, Result};

/// Piecewise-linear real function on an arc, indexed by arc-length
/// parameter `s ∈ [0, |arc|]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcFunction {
    arc: OrientedArc,
    params: Vec<f64>,
    values: Vec<f64>,
}

fn check_nodes(arc: &OrientedArc, params: &[f64], what: &str) -> Result<()> {
    if params.len() < 2 {
        return Err(Error::Validation(format!("{what} needs at least two nodes")));
    }
    let slack = 1e-12 * arc.length().max(1.0);
    for (i, &s) in params.iter().enumerate() {
        if !s.is_finite() || s < -slack || s > arc.length() + slack {
            return Err(Error::Validation(format!(
                "{what} node {i} at parameter {s} lies outside the arc"
            )));
        }
        if i > 0 && s <= params[i - 1] {
            return Err(Error::Validation(format!(
                "{what} nodes are not strictly increasing at index {i}"
            )));
        }
    }
    Ok(())
}

/// Linear interpolation on sorted nodes, constant outside their range.
pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let k = xs.partition_point(|&v| v <= x) - 1;
    let w = (x - xs[k]) / (xs[k + 1] - xs[k]);
    ys[k] + w * (ys[k + 1] - ys[k])
}

/// Derivative of the interpolant through `(xs, ys)` at every node: three
/// point differences on the nonuniform grid, one-sided at both ends.
pub(crate) fn nodal_derivative(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    if n == 2 {
        let s = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        return vec![s, s];
    }
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let h1 = xs[i] - xs[i - 1];
        let h2 = xs[i + 1] - xs[i];
        out[i] = -h2 / (h1 * (h1 + h2)) * ys[i - 1]
            + (h2 - h1) / (h1 * h2) * ys[i]
            + h1 / (h2 * (h1 + h2)) * ys[i + 1];
    }
    let one_sided = |x: [f64; 3], y: [f64; 3]| {
        let h1 = x[1] - x[0];
        let h2 = x[2] - x[1];
        -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1]
            - h1 / (h2 * (h1 + h2)) * y[2]
    };
    out[0] = one_sided([xs[0], xs[1], xs[2]], [ys[0], ys[1], ys[2]]);
    // Mirror the last three nodes so the same formula applies.
    out[n - 1] = -one_sided(
        [-xs[n - 1], -xs[n - 2], -xs[n - 3]],
        [ys[n - 1], ys[n - 2], ys[n - 3]],
    );
    out
}

impl ArcFunction {
    pub fn new(arc: OrientedArc, params: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if params.len() != values.len() {
            return Err(Error::Validation(format!(
                "{} nodes but {} values",
                params.len(),
                values.len()
            )));
        }
        check_nodes(&arc, &params, "arc function")?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("value {i} is not finite")));
        }
        Ok(Self {
            arc,
            params,
            values,
        })
    }

    /// Samples `f(angle)` at `n + 1` equally spaced nodes including both ends.
    pub fn from_fn(arc: OrientedArc, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = n.max(1);
        let params: Vec<f64> = (0..=n)
            .map(|k| arc.length() * k as f64 / n as f64)
            .collect();
        let values = params.iter().map(|&s| f(arc.angle_at(s))).collect();
        Self::new(arc, params, values)
    }

    pub fn arc(&self) -> &OrientedArc {
        &self.arc
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval_param(&self, s: f64) -> f64 {
        interpolate(&self.params, &self.values, s)
    }

    /// Value at the point with angle `angle`, `None` off the arc.
    pub fn eval_angle(&self, angle: f64) -> Option<f64> {
        self.arc.param_of_angle(angle).map(|s| self.eval_param(s))
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.arc,
            self.params.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }
}

/// Monotone piecewise-linear map between two arcs, stored as pairs of
/// arc-length parameters. Sense-preserving maps start at the start of the
/// range; sense-reversing ones start at its end.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcHomeomorphism {
    domain: OrientedArc,
    range: OrientedArc,
    params: Vec<f64>,
    images: Vec<f64>,
}

impl ArcHomeomorphism {
    pub fn new(
        domain: OrientedArc,
        range: OrientedArc,
        params: Vec<f64>,
        images: Vec<f64>,
    ) -> Result<Self> {
        if params.len() != images.len() {
            return Err(Error::Validation(format!(
                "{} nodes but {} images",
                params.len(),
                images.len()
            )));
        }
        check_nodes(&domain, &params, "homeomorphism domain")?;
        let increasing = images[images.len() - 1] > images[0];
        let mut sorted = images.clone();
        if !increasing {
            sorted.reverse();
        }
        check_nodes(&range, &sorted, "homeomorphism image")?;
        let tol = 1e-9 * range.length().max(1.0);
        let (first, last) = (images[0], images[images.len() - 1]);
        let (want_first, want_last) = if increasing {
            (0.0, range.length())
        } else {
            (range.length(), 0.0)
        };
        let dl = domain.length();
        if params[0].abs() > tol
            || (params[params.len() - 1] - dl).abs() > tol
            || (first - want_first).abs() > tol
            || (last - want_last).abs() > tol
        {
            return Err(Error::Validation(
                "homeomorphism does not map endpoints to endpoints".into(),
            ));
        }
        Ok(Self {
            domain,
            range,
            params,
            images,
        })
    }

    /// Samples `f` (domain parameter to range parameter) at `n + 1` nodes.
    pub fn from_fn(
        domain: OrientedArc,
        range: OrientedArc,
        n: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let n = n.max(1);
        let params: Vec<f64> = (0..=n)
            .map(|k| domain.length() * k as f64 / n as f64)
            .collect();
        let images = params.iter().map(|&s| f(s)).collect();
        Self::new(domain, range, params, images)
    }

    pub fn identity(arc: OrientedArc) -> Self {
        Self {
            domain: arc,
            range: arc,
            params: vec![0.0, arc.length()],
            images: vec![0.0, arc.length()],
        }
    }

    pub fn domain(&self) -> &OrientedArc {
        &self.domain
    }

    pub fn range(&self) -> &OrientedArc {
        &self.range
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn images(&self) -> &[f64] {
        &self.images
    }

    pub fn is_increasing(&self) -> bool {
        self.images[self.images.len() - 1] > self.images[0]
    }

    pub fn eval_param(&self, s: f64) -> f64 {
        interpolate(&self.params, &self.images, s)
    }

    /// Lifted image angle of the point with angle `angle`.
    pub fn eval_angle(&self, angle: f64) -> Option<f64> {
        self.domain
            .param_of_angle(angle)
            .map(|s| self.range.angle_at(self.eval_param(s)))
    }

    pub fn inverse(&self) -> Self {
        let (mut params, mut images) = (self.images.clone(), self.params.clone());
        if !self.is_increasing() {
            params.reverse();
            images.reverse();
        }
        Self {
            domain: self.range,
            range: self.domain,
            params,
            images,
        }
    }

    /// `log|h'|` at the nodes, from centered nonuniform differences.
    pub fn log_derivative(&self) -> Result<ArcFunction> {
        let slopes = nodal_derivative(&self.params, &self.images);
        if let Some(i) = slopes.iter().position(|d| !(d.abs() > 0.0) || !d.is_finite()) {
            return Err(Error::Derivative(format!(
                "derivative vanishes or is undefined at node {i}"
            )));
        }
        ArcFunction::new(
            self.domain,
            self.params.clone(),
            slopes.iter().map(|d| d.abs().ln()).collect(),
        )
    }
}
