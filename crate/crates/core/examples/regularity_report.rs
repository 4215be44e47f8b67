//! Regularity functionals of the welding generated by `σ(t) = a√t`.
//!
//! Usage: `cargo run --release --example regularity_report [a] [samples]`

use loewner_welding::circle::{mobius_from_triple, CirclePoint};
use loewner_welding::driver::DrivingTerm;
use loewner_welding::error::Side;
use loewner_welding::loewner::LoewnerConfig;
use loewner_welding::regularity::cross::wp_cross_detailed;
use loewner_welding::regularity::distortion::{mr_constant, qs_constant};
use loewner_welding::regularity::{
    bmo_norm, h_half_seminorm, lip_half_norm, loewner_energy, Normalization, OscillationOptions,
    QuadratureOptions,
};
use loewner_welding::welding::{extract_welding, welding_log_derivative};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let a: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.4);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(256);

    let d = DrivingTerm::from_fn(1.0, 4096, |t| a * t.sqrt())?;
    let cfg = LoewnerConfig::default();
    println!("driver a = {a}: energy {:.4}, Lip(1/2) {:.4}", loewner_energy(&d), lip_half_norm(&d));

    let w = extract_welding(&d, n, &cfg)?;
    let tau = mobius_from_triple(
        [CirclePoint::minus_i(), CirclePoint::ONE, CirclePoint::i()],
        [w.alpha_minus(), CirclePoint::ONE, w.alpha_plus()],
    )?;

    let qs = qs_constant(&w.to_homeomorphism());
    println!("qs constant   {:.5} (refined {:.5}, stable {})", qs.value, qs.refined, qs.stable);
    println!("MR constant   {:.5}", mr_constant(&w));

    let logd = welding_log_derivative(&w, Side::Plus)?;
    println!("log|φ'| at 1  {:+.5}", logd.values()[0]);
    let arc = w.plus_arc();
    let opts = QuadratureOptions {
        excluded_points: vec![arc.end().angle()],
        ..Default::default()
    };
    match h_half_seminorm(&logd, &arc, &arc, Normalization::Raw, &opts) {
        Ok(v) => println!("seminorm      {v:.5}"),
        Err(e) => println!("seminorm      {e}"),
    }
    println!("BMO           {:.5}", bmo_norm(&logd, &arc, &OscillationOptions::default())?);

    for cells in [64, 128, 256, 512] {
        let opts = QuadratureOptions {
            cells,
            rel_tol: f64::INFINITY,
            ..Default::default()
        };
        let q = wp_cross_detailed(&w, &tau, &opts)?;
        println!(
            "cross integral, {cells:>4} base cells: {:.5}  (sums {:?})",
            q.value, q.sums
        );
    }
    Ok(())
}
