//! Extract the welding of the slit driven by `σ(t) = 0.4√t` and check that
//! welded pairs land on the same point of the slit.

use std::time::Instant;

use loewner_welding::driver::DrivingTerm;
use loewner_welding::loewner::{upward_flow, LoewnerConfig};
use loewner_welding::welding::extract_welding;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(128);
    let d = DrivingTerm::from_fn(1.0, 1024, |t| 0.4 * t.sqrt())?;
    let cfg = LoewnerConfig::default();

    let start = Instant::now();
    let w = extract_welding(&d, n, &cfg)?;
    println!("{} pairs in {:.2?}", w.pairs().len(), start.elapsed());
    println!(
        "alpha- = {:.6}, alpha+ = {:.6}",
        w.alpha_minus().angle(),
        w.alpha_plus().angle()
    );

    let radius = 1.0 - 1e-4;
    let mut worst: f64 = 0.0;
    for p in w.pairs().iter().step_by((n / 16).max(1)) {
        let a = upward_flow(&d, Complex64::from_polar(radius, p.theta_plus), 1.0, &cfg)?;
        let b = upward_flow(&d, Complex64::from_polar(radius, p.theta_minus), 1.0, &cfg)?;
        worst = worst.max((a - b).norm());
        println!(
            "t = {:.4}  θ+ = {:+.6}  θ- = {:+.6}  |g(x) - g(y)| = {:.2e}",
            p.t,
            p.theta_plus,
            p.theta_minus,
            (a - b).norm()
        );
    }
    println!("largest mismatch on the slit: {worst:.2e}");
    Ok(())
}
