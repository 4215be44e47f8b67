//! Regularity functionals of boundary maps and driving terms.

pub mod arc;
pub mod cross;
pub mod distortion;
pub mod driver_norms;
pub mod oscillation;
pub mod seminorm;

pub use arc::{ArcFunction, ArcHomeomorphism};
pub use cross::{wp_cross_condition, ConjugatedWelding};
pub use distortion::{mr_constant, qs_constant, DistortionEstimate};
pub use driver_norms::{lip_half_norm, loewner_energy};
pub use oscillation::{bmo_norm, vmo_modulus, OscillationOptions};
pub use seminorm::{h_half_seminorm, h_half_seminorm_fn, DoubleIntegral, Normalization, QuadratureOptions};
