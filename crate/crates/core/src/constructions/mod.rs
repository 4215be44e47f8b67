//! Explicit maps of the quasislit-disk construction: the normalizing
//! Möbius map, piecewise circle homeomorphisms built from a welding, the
//! slit-disk map, the sector-shear correction and the composite map `f`.

use num_complex::Complex64;

use crate::error::Result;

pub mod beltrami;
pub mod circle_maps;
pub mod composite;
pub mod lemma_q;
pub mod slit_map;

pub use beltrami::{poincare_l2_integral, slit_domain_l2_direct, BeltramiField, PoincareOptions};
pub use circle_maps::{
    build_capital_psi, build_psi, build_tau, psi_j_decomposition, reflect_half_extension,
    CircleOp, JDecomposition, Piece, PiecewiseCircleMap,
};
pub use composite::{auto_shear, compose_f, BetaPolicy, BoundaryDiagnostics, CompositeMap, HarmonicExtension};
pub use lemma_q::{lemma_q_map, qtilde_beltrami, LemmaQ};
pub use slit_map::SlitMap;

/// Where a map's inputs or outputs live.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainDescriptor {
    UnitDisk,
    /// `𝔻 ∖ [tip, 1]`.
    SlitDisk { tip: f64 },
    /// `𝔻 ∖ Γ` for the curve grown up to `horizon`.
    CurveComplement { horizon: f64 },
}

/// A map defined on a disk-like domain.
pub trait DiskMapEvaluator: Send + Sync {
    fn domain(&self) -> DomainDescriptor;
    fn codomain(&self) -> DomainDescriptor;
    fn eval(&self, z: Complex64) -> Result<Complex64>;

    fn derivative(&self, _z: Complex64) -> Option<Complex64> {
        None
    }

    fn inverse(&self, _w: Complex64) -> Option<Result<Complex64>> {
        None
    }

    /// Boundary value at `e^{iθ}`, when the map extends continuously.
    fn boundary(&self, _angle: f64) -> Option<Complex64> {
        None
    }
}
