//! Assemble the quasiconformal map `f` from the slit disk onto the
//! complement of a Loewner curve and check it on the boundary.

use std::time::Instant;

use loewner_welding::constructions::{compose_f, BetaPolicy};
use loewner_welding::driver::DrivingTerm;
use loewner_welding::loewner::LoewnerConfig;
use loewner_welding::welding::extract_welding;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = DrivingTerm::from_fn(1.0, 1024, |t| 0.4 * t.sqrt())?;
    let cfg = LoewnerConfig::default();
    let w = extract_welding(&d, 256, &cfg)?;

    let start = Instant::now();
    let f = compose_f(&d, &w, BetaPolicy::Auto, &cfg)?;
    println!("built in {:.2?}", start.elapsed());
    println!("beta = {:.8}, slit tip t = {:.8}", f.beta(), f.slit().t_slit);
    if let Some(q) = f.shear() {
        println!("shear radius r = {:.6}, sup |mu_q| = {:.6}", q.r, q.beltrami_bound());
    }

    let diag = f.boundary_diagnostics(50)?;
    println!("f(0) = {:.3e}", diag.f_origin);
    println!("welded pair mismatch over {} samples: {:.3e}", diag.samples, diag.max_pair_mismatch);

    for z in [Complex64::new(0.3, 0.4), Complex64::new(-0.6, 0.0), Complex64::new(0.5, -0.1)] {
        println!("f({z:.2}) = {:.6}", f.eval(z)?);
    }
    Ok(())
}
