//! Trace of a slit whose driver rotates at constant speed, written as CSV.
//!
//! Usage: `cargo run --release --example trace_spiral [speed] > spiral.csv`

use loewner_welding::driver::DrivingTerm;
use loewner_welding::loewner::{trace, LoewnerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let speed: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4.0);
    let d = DrivingTerm::from_fn(1.5, 64, |t| speed * t)?;
    let samples = trace(&d, 120, &LoewnerConfig::default())?;
    println!("t,x,y,radius");
    for s in &samples {
        println!("{:.6},{:.12},{:.12},{:.12}", s.t, s.tip.re, s.tip.im, s.tip.norm());
    }
    let tip = samples.last().expect("non-empty trace").tip;
    eprintln!("tip at {tip:.6}, conformal radius e^-T = {:.6}", (-d.horizon()).exp());
    Ok(())
}
