//! Exact rationals, residues mod 1, (Laurent) polynomials, resultants and roots.

mod laurent;
mod poly;
mod rational;
mod roots;

pub use laurent::{bareiss_det, resultant, LaurentPoly, Var};
pub use poly::{chebyshev_s, UniPoly};
pub use rational::{ext_gcd_pair, qmodz_add, qmodz_scale, QmodZ};
pub use roots::{cluster_tolerance, relative_residual, roots, Root};

pub use rug::{Integer, Rational};
