//! Sampled driving terms `ξ(t) = exp(iσ(t))` with piecewise-linear angle.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Continuous driving term on `[0, T]`, stored as angle samples.
///
/// Always normalized so that `σ(0) = 0`, i.e. `ξ(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivingTerm {
    grid: Vec<f64>,
    sigma: Vec<f64>,
}

/// One linear piece of the angle function, expressed in flow time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    /// Angle at `start`.
    pub angle: f64,
    /// Angle derivative on the piece.
    pub slope: f64,
}

impl Segment {
    pub fn angle_at(&self, t: f64) -> f64 {
        self.angle + self.slope * (t - self.start)
    }
}

impl DrivingTerm {
    pub fn new(grid: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        if grid.len() != sigma.len() {
            return Err(Error::Validation(format!(
                "grid has {} entries but sigma has {}",
                grid.len(),
                sigma.len()
            )));
        }
        if grid.len() < 2 {
            return Err(Error::Validation(
                "a driver needs at least two grid nodes".into(),
            ));
        }
        for (i, (&t, &s)) in grid.iter().zip(&sigma).enumerate() {
            if !t.is_finite() {
                return Err(Error::Validation(format!("grid[{i}] is not finite")));
            }
            if !s.is_finite() {
                return Err(Error::Validation(format!("sigma[{i}] is not finite")));
            }
        }
        if grid[0] != 0.0 {
            return Err(Error::Validation(format!(
                "grid[0] = {} but the driver must start at time 0",
                grid[0]
            )));
        }
        if sigma[0] != 0.0 {
            return Err(Error::Validation(format!(
                "sigma[0] = {} but drivers are normalized so that ξ(0) = 1 (sigma[0] = 0)",
                sigma[0]
            )));
        }
        for i in 1..grid.len() {
            if grid[i] <= grid[i - 1] {
                return Err(Error::Validation(format!(
                    "grid is not strictly increasing at index {i}"
                )));
            }
        }
        Ok(Self { grid, sigma })
    }

    /// Like [`DrivingTerm::new`], additionally checking the declared horizon.
    pub fn with_horizon(horizon: f64, grid: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::DegenerateInput(format!(
                "horizon T = {horizon} generates no slit"
            )));
        }
        let d = Self::new(grid, sigma)?;
        let last = d.horizon();
        if (last - horizon).abs() > 1e-12 * horizon.max(1.0) {
            return Err(Error::Validation(format!(
                "T = {horizon} does not match the last grid node {last}"
            )));
        }
        Ok(d)
    }

    /// `σ ≡ 0` on `[0, T]`; generates the radial slit `[x, 1]`.
    pub fn constant(horizon: f64) -> Result<Self> {
        Self::with_horizon(horizon, vec![0.0, horizon], vec![0.0, 0.0])
    }

    /// Sample `f` on a uniform grid with `cells` intervals.
    pub fn from_fn(horizon: f64, cells: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::DegenerateInput(format!(
                "horizon T = {horizon} generates no slit"
            )));
        }
        let cells = cells.max(1);
        let grid: Vec<f64> = (0..=cells)
            .map(|k| {
                if k == cells {
                    horizon
                } else {
                    horizon * k as f64 / cells as f64
                }
            })
            .collect();
        let sigma = grid.iter().map(|&t| f(t)).collect();
        Self::new(grid, sigma)
    }

    pub fn horizon(&self) -> f64 {
        *self.grid.last().expect("non-empty grid")
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Index `k` of the cell `[t_k, t_{k+1}]` containing `t` (clamped).
    fn cell_index(&self, t: f64) -> usize {
        let n = self.grid.len() - 1;
        match self.grid.partition_point(|&g| g <= t) {
            0 => 0,
            p => (p - 1).min(n - 1),
        }
    }

    pub fn sigma_at(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.horizon());
        let k = self.cell_index(t);
        let (t0, t1) = (self.grid[k], self.grid[k + 1]);
        let w = (t - t0) / (t1 - t0);
        self.sigma[k] + w * (self.sigma[k + 1] - self.sigma[k])
    }

    pub fn xi(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.sigma_at(t))
    }

    /// Downward driver `λ(t) = ξ(T - t)`.
    pub fn lambda(&self, t: f64) -> Complex64 {
        self.xi(self.horizon() - t)
    }

    /// Mirror image `σ ↦ -σ`; all outputs conjugate.
    pub fn negated(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            sigma: self.sigma.iter().map(|s| -s).collect(),
        }
    }

    /// Linear pieces of `σ` covering `[0, until]`, in increasing time.
    pub fn forward_segments(&self, until: f64) -> Vec<Segment> {
        let until = until.min(self.horizon());
        let mut out = Vec::new();
        for k in 0..self.grid.len() - 1 {
            let (t0, t1) = (self.grid[k], self.grid[k + 1]);
            if t0 >= until {
                break;
            }
            let slope = (self.sigma[k + 1] - self.sigma[k]) / (t1 - t0);
            out.push(Segment {
                start: t0,
                end: t1.min(until),
                angle: self.sigma[k],
                slope,
            });
        }
        out
    }

    /// Linear pieces of `s ↦ σ(T - s)` covering flow time `[0, until]`.
    pub fn reversed_segments(&self, until: f64) -> Vec<Segment> {
        let horizon = self.horizon();
        let until = until.min(horizon);
        let mut out = Vec::new();
        for k in (0..self.grid.len() - 1).rev() {
            let (t0, t1) = (self.grid[k], self.grid[k + 1]);
            let (s0, s1) = (horizon - t1, horizon - t0);
            if s0 >= until {
                break;
            }
            let slope = -(self.sigma[k + 1] - self.sigma[k]) / (t1 - t0);
            out.push(Segment {
                start: s0.max(0.0),
                end: s1.min(until),
                angle: self.sigma[k + 1],
                slope,
            });
        }
        out
    }

    /// The driver restricted to `[t0, T]`, shifted to start at time 0 with
    /// angle 0, together with the removed rotation `σ(t0)`.
    pub fn tail_from(&self, t0: f64) -> Result<(DrivingTerm, f64)> {
        let horizon = self.horizon();
        if !(t0 >= 0.0 && t0 < horizon) {
            return Err(Error::Domain(format!(
                "window start {t0} outside [0, {horizon})"
            )));
        }
        let base = self.sigma_at(t0);
        let mut grid = vec![0.0];
        let mut sigma = vec![0.0];
        for (&t, &s) in self.grid.iter().zip(&self.sigma) {
            if t > t0 {
                let dt = t - t0;
                // Drop nodes that would create a degenerate cell.
                if dt > 1e-14 * horizon {
                    grid.push(dt);
                    sigma.push(s - base);
                }
            }
        }
        if grid.len() < 2 {
            grid.push(horizon - t0);
            sigma.push(self.sigma_at(horizon) - base);
        }
        Ok((DrivingTerm::new(grid, sigma)?, base))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_errors() {
        assert!(matches!(
            DrivingTerm::new(vec![0.0, 0.5, 0.4], vec![0.0, 0.1, 0.2]),
            Err(Error::Validation(m)) if m.contains("index 2")
        ));
        assert!(matches!(
            DrivingTerm::new(vec![0.0, 1.0], vec![0.1, 0.0]),
            Err(Error::Validation(m)) if m.contains("ξ(0) = 1")
        ));
        assert!(matches!(
            DrivingTerm::constant(0.0),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn interpolation_and_reversal() {
        let d = DrivingTerm::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, -1.0]).unwrap();
        assert_eq!(d.sigma_at(0.5), 0.5);
        assert_eq!(d.sigma_at(1.5), 0.0);
        assert_eq!(d.sigma_at(2.0), -1.0);
        let rev = d.reversed_segments(2.0);
        assert_eq!(rev.len(), 2);
        for s in [0.0, 0.3, 0.9, 1.2, 2.0] {
            let seg = rev.iter().find(|g| s >= g.start && s <= g.end).unwrap();
            assert!((seg.angle_at(s) - d.sigma_at(2.0 - s)).abs() < 1e-15);
        }
    }

    #[test]
    fn tail_window() {
        let d = DrivingTerm::from_fn(1.0, 10, |t| t * t).unwrap();
        let (w, base) = d.tail_from(0.35).unwrap();
        assert!((base - d.sigma_at(0.35)).abs() < 1e-15);
        assert!((w.horizon() - 0.65).abs() < 1e-14);
        for s in [0.0, 0.1, 0.4, 0.65] {
            assert!((w.sigma_at(s) + base - d.sigma_at(0.35 + s)).abs() < 1e-14);
        }
    }
}
