//! Hyperbolic L² norms of Beltrami coefficients, on the disk and pushed to
//! a slit disk.

use std::f64::consts::PI;

use loewner_welding::constructions::{
    lemma_q_map, poincare_l2_integral, slit_domain_l2_direct, BeltramiField, DiskMapEvaluator,
    DomainDescriptor, PoincareOptions, SlitMap,
};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = PoincareOptions::default();

    // Constant 0.2 on |z| < 1/2 has norm² 0.04·π/3 against the density 1/(1-|z|²)².
    let flat = BeltramiField::new(DomainDescriptor::UnitDisk, 0.2, 0.5, |_| Complex64::new(0.2, 0.0))?;
    let v = poincare_l2_integral(&flat, None, &opts)?;
    println!("constant disk field  {v:.8}  exact {:.8}", 0.04 * PI / 3.0);

    let q = lemma_q_map(Complex64::new(0.15, 0.3), 0.6)?;
    let h = SlitMap::new(0.25)?;
    let k = q.beltrami_bound();
    let on_disk = BeltramiField::new(DomainDescriptor::UnitDisk, k, q.r, move |z| q.beltrami(z))?;
    let pushed = BeltramiField::new(h.codomain(), k, q.r, move |w| q.beltrami(h.inverse(w)))?;

    let a = poincare_l2_integral(&on_disk, None, &opts)?;
    let b = poincare_l2_integral(&pushed, Some(&h), &opts)?;
    let c = slit_domain_l2_direct(&pushed, &h, &opts)?;
    println!("shear on the disk    {a:.8}");
    println!("pulled back          {b:.8}");
    println!("slit-domain grid     {c:.8}  ({:.2e} relative)", (a - c).abs() / a);

    // A coefficient that reaches modulus 1 is rejected.
    let bad = BeltramiField::new(DomainDescriptor::UnitDisk, 0.5, 0.5, |z| Complex64::new(0.2 + 2.0 * z.norm(), 0.0))?;
    println!("bound violation      {}", poincare_l2_integral(&bad, None, &opts).unwrap_err());
    Ok(())
}
