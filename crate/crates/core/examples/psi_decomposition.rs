//! Build the circle homeomorphism ψ from an extracted welding and split its
//! log-derivative energy over the three arcs where ψ has different rules.

use loewner_welding::constructions::{build_psi, build_tau, psi_j_decomposition};
use loewner_welding::driver::DrivingTerm;
use loewner_welding::loewner::LoewnerConfig;
use loewner_welding::regularity::QuadratureOptions;
use loewner_welding::welding::extract_welding;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sqrt_driver = std::env::args().any(|a| a == "--sqrt");
    let d = if sqrt_driver {
        DrivingTerm::from_fn(1.0, 1024, |t| 0.4 * t.sqrt())?
    } else {
        DrivingTerm::from_fn(1.0, 1024, |t| 0.6 * t - 0.3 * t * t)?
    };
    let cfg = LoewnerConfig::default();
    let w = extract_welding(&d, 256, &cfg)?;
    let tau = build_tau(w.alpha_minus(), w.alpha_plus())?;
    let psi = build_psi(&w, &tau)?;

    for cells in [64, 128, 256] {
        let opts = QuadratureOptions { cells, ..Default::default() };
        match psi_j_decomposition(&psi, &opts) {
            Ok(j) => {
                println!("cells {cells}: J = {:?}", j.j);
                println!(
                    "  weighted sum {:.6e}, full circle {:.6e}, ratio {:.6}",
                    j.weighted_sum,
                    j.full,
                    j.weighted_sum / j.full
                );
            }
            Err(e) => println!("cells {cells}: {e}"),
        }
    }
    Ok(())
}
