//! The `H^{1/2}` energy of trigonometric polynomials matches `Σ n|c_n|²`.
//!
//! With the two-pi normalization the seminorm of `cos nθ` is `√(n/2)`.

use loewner_welding::circle::{CirclePoint, OrientedArc};
use loewner_welding::regularity::{h_half_seminorm_fn, Normalization, QuadratureOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let circle = OrientedArc::full_circle(CirclePoint::ONE);
    let opts = QuadratureOptions::default();
    println!("{:>3} {:>12} {:>12} {:>10}", "n", "computed", "exact", "rel err");
    for n in 1..=6 {
        let nf = n as f64;
        let v = h_half_seminorm_fn(|a| (nf * a).cos(), &circle, &circle, Normalization::TwoPi, &opts)?;
        let exact = (0.5 * nf).sqrt();
        println!("{n:3} {v:12.8} {exact:12.8} {:10.2e}", (v - exact).abs() / exact);
    }

    // Mixed modes add in quadrature.
    let v = h_half_seminorm_fn(
        |a| a.cos() + 0.5 * (3.0 * a).sin(),
        &circle,
        &circle,
        Normalization::TwoPi,
        &opts,
    )?;
    println!("cos θ + ½ sin 3θ   {v:.8}  exact {:.8}", (0.5 + 0.25 * 1.5f64).sqrt());
    Ok(())
}
