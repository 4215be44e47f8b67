//! The two-sector shear that moves an interior point onto the real diameter
//! while fixing everything outside a disk.
//!
//! Usage: `cargo run --release --example lemma_q [re] [im] [r]`

use std::f64::consts::PI;

use loewner_welding::constructions::lemma_q_map;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<f64>());
    let re = args.next().transpose()?.unwrap_or(0.2);
    let im = args.next().transpose()?.unwrap_or(0.35);
    let r = args.next().transpose()?.unwrap_or(0.7);

    let q = lemma_q_map(Complex64::new(re, im), r)?;
    println!("z0 = {:.4}, r = {r}", q.z0);
    println!("q(z0) = {:.12} (real diameter point {:.12})", q.eval(q.z0), q.image_of_center());
    println!("sup |mu| = {:.6}", q.beltrami_bound());

    println!("\n{:>8} {:>24} {:>12} {:>12}", "angle", "q(r/2 e^ia)", "|mu|", "round trip");
    for k in 0..8 {
        let a = -PI + 2.0 * PI * (k as f64 + 0.5) / 8.0;
        let z = Complex64::from_polar(0.5 * r, a);
        let w = q.eval(z);
        println!(
            "{a:8.3} {:>24} {:12.6} {:12.2e}",
            format!("{w:.6}"),
            q.beltrami(z).norm(),
            (q.inverse(w) - z).norm()
        );
    }

    let outside = Complex64::from_polar(0.5 * (1.0 + r), 1.0);
    println!("\nfixed outside: q({outside:.4}) - z = {:.1e}", (q.eval(outside) - outside).norm());
    Ok(())
}
