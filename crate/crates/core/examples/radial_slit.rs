//! The constant driver grows a radial slit; every output has a closed form.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use loewner_welding::driver::DrivingTerm;
use loewner_welding::loewner::{hitting_time, slit_preimage_endpoints, trace_point, LoewnerConfig};
use loewner_welding::welding::{extract_welding, radial_slit_welding};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = DrivingTerm::constant(2f64.ln())?;
    let cfg = LoewnerConfig::default();

    let tip = trace_point(&d, d.horizon(), &cfg)?.tip;
    println!("tip      {:.12}  (exact {:.12})", tip, 3.0 - 2.0 * SQRT_2);

    let (am, ap) = slit_preimage_endpoints(&d, &cfg)?;
    println!("alpha+   {:+.10}  alpha- {:+.10}  (exact ±{FRAC_PI_2:.10})", ap.angle(), am.angle());

    println!("\n{:>8} {:>14} {:>14}", "theta", "hit time", "exact");
    for theta in [0.2, 0.6, 1.0, 1.4] {
        let tau = hitting_time(&d, theta, &cfg)?.expect("inside the arc");
        let exact = -2.0 * (0.5 * theta).cos().ln();
        println!("{theta:8.3} {tau:14.10} {exact:14.10}");
    }

    let w = extract_welding(&d, 16, &cfg)?;
    let exact = radial_slit_welding(3.0 - 2.0 * SQRT_2, 16)?;
    let worst = w.pairs().iter().map(|p| (p.theta_plus + p.theta_minus).abs()).fold(0.0, f64::max);
    println!("\nwelding symmetric to {worst:.2e}");
    println!("closed-form welding has {} pairs, alpha+ = {:.10}", exact.pairs().len(), exact.alpha_plus().angle());
    Ok(())
}
