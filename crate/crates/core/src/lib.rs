// `!(x < y)` is used on purpose so NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circle;
pub mod cli;
pub mod constructions;
pub mod driver;
pub mod error;
pub mod loewner;
pub mod ode;
pub mod regularity;
pub mod welding;
