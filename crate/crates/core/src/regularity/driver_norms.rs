//! Norms of the driving term itself.

use crate::circle::chord;
use crate::driver::DrivingTerm;

/// `½ ∫ σ'(t)² dt` for the piecewise-linear angle function.
pub fn loewner_energy(d: &DrivingTerm) -> f64 {
    let (g, s) = (d.grid(), d.sigma());
    0.5 * g
        .windows(2)
        .zip(s.windows(2))
        .map(|(t, a)| (a[1] - a[0]).powi(2) / (t[1] - t[0]))
        .sum::<f64>()
}

/// `max |ξ(s) - ξ(t)| / √|s - t|` over grid pairs whose index gap is a power
/// of two not exceeding `max_gap`.
pub fn lip_half_norm_with_gap(d: &DrivingTerm, max_gap: usize) -> f64 {
    let (g, s) = (d.grid(), d.sigma());
    let n = g.len();
    let mut best: f64 = 0.0;
    let mut gap = 1;
    while gap < n && gap <= max_gap {
        for i in 0..n - gap {
            let j = i + gap;
            best = best.max(chord(s[i], s[j]) / (g[j] - g[i]).sqrt());
        }
        gap *= 2;
    }
    best
}

/// Chordal `Lip(1/2)` norm sampled over all dyadic index gaps.
pub fn lip_half_norm(d: &DrivingTerm) -> f64 {
    lip_half_norm_with_gap(d, usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_closed_forms() {
        assert_eq!(loewner_energy(&DrivingTerm::constant(1.0).unwrap()), 0.0);
        let d = DrivingTerm::from_fn(2.0, 50, |t| 0.7 * t).unwrap();
        assert!((loewner_energy(&d) - 0.49).abs() < 1e-12);
        let f = |t: f64| (3.0 * t).sin();
        let coarse = loewner_energy(&DrivingTerm::from_fn(1.0, 200, f).unwrap());
        let fine = loewner_energy(&DrivingTerm::from_fn(1.0, 400, f).unwrap());
        assert!((coarse - fine).abs() < 0.01 * fine);
    }

    #[test]
    fn square_root_driver() {
        assert_eq!(lip_half_norm(&DrivingTerm::constant(1.0).unwrap()), 0.0);
        let a = 0.1;
        let d = DrivingTerm::from_fn(1.0, 1024, |t| a * t.sqrt()).unwrap();
        let n = lip_half_norm(&d);
        assert!((n - a).abs() < 0.05 * a, "{n}");
        let mut last = 0.0;
        for gap in [1, 2, 8, 64, 1024] {
            let v = lip_half_norm_with_gap(&d, gap);
            assert!(v >= last);
            last = v;
        }
    }
}
