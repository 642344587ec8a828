//! Arbitrary-precision complex arithmetic and the dilogarithm family.

mod complex;
mod dilog;

pub use complex::{float_to_decimal, pi, pi_i, two_pi_i, ComplexAP, Precision};
pub use dilog::{l_hat, li2, log_principal, rogers, FlattenedSimplex};
