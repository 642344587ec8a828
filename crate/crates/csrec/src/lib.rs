//! Chern-Simons invariants of closed 3-manifolds by saddle-point potentials,
//! exact Seifert formulas and the extended-Bloch-group pairing, together with
//! the check that 24 times their sum over the character variety is an integer.

pub mod algebra;
pub mod data;
pub mod error;
pub mod homology;
pub mod manifest;
pub mod numeric;
pub mod repvar;
pub mod saddle;
pub mod seifert;
pub mod serde_ap;
pub mod sl2;
pub mod verify;

pub use error::{Error, Result};
