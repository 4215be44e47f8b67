//! The raw `H^{1/2}` seminorm is invariant under Möbius changes of variable
//! but not under other reparametrizations of the circle.

use loewner_welding::circle::{CirclePoint, MobiusCircleMap, OrientedArc};
use loewner_welding::regularity::{h_half_seminorm_fn, Normalization, QuadratureOptions};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let circle = OrientedArc::full_circle(CirclePoint::ONE);
    let opts = QuadratureOptions::default();
    let u = |a: f64| (2.0 * a).sin() + 0.3 * (3.0 * a).cos();
    let base = h_half_seminorm_fn(u, &circle, &circle, Normalization::Raw, &opts)?;
    println!("u:                 {base:.12}");
    for pole in [Complex64::new(0.3, 0.0), Complex64::new(-0.2, 0.5), Complex64::new(0.0, 0.8)] {
        let m = MobiusCircleMap::new(0.7, pole)?;
        let v = h_half_seminorm_fn(
            |a| u(m.eval(CirclePoint::from_angle(a)).0.angle()),
            &circle,
            &circle,
            Normalization::Raw,
            &opts,
        )?;
        println!("u∘m, pole {pole:.1}: {v:.12}");
    }
    for eps in [0.1, 0.3] {
        let v = h_half_seminorm_fn(|a| u(a + eps * a.sin()), &circle, &circle, Normalization::Raw, &opts)?;
        println!("u(θ + {eps} sin θ):  {v:.12}");
    }
    Ok(())
}
