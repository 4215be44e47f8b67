//! Hitting times on both sides of the base point for `σ(t) = a sin(ωt)`.
//!
//! Usage: `cargo run --release --example hitting_times [a] [omega]`

use loewner_welding::driver::DrivingTerm;
use loewner_welding::error::Side;
use loewner_welding::loewner::{boundary_fate, hitting_profile, BoundaryFate, LoewnerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let a: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let omega: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(3.0);
    let d = DrivingTerm::from_fn(1.0, 512, |t| a * (omega * t).sin())?;
    let cfg = LoewnerConfig::default();

    for side in [Side::Plus, Side::Minus] {
        let p = hitting_profile(&d, side, 12, &cfg)?;
        println!("{side} side, alpha = {:+.8}", p.alpha);
        for (theta, tau) in &p.samples {
            println!("  {theta:+.6}  {tau:.8}");
        }
    }

    // Points beyond the preimage arc never reach the slit.
    match boundary_fate(&d, 3.0, Side::Plus, d.horizon(), &cfg)? {
        BoundaryFate::Survived { angle } => println!("θ = 3 survives at angle {angle:.8}"),
        BoundaryFate::Hit { time, side } => println!("θ = 3 hit at {time} on the {side} side"),
    }
    Ok(())
}
