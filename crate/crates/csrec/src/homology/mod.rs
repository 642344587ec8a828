//! Group homology of the fundamental group and the pairing with the extended
//! Bloch group: Fox calculus for `∂₂`, the chain map `c` into the bar complex of
//! `SL(2, ℂ)`, and `2CS(ρ)` from the cone over the image of the fundamental class.

pub mod chain;
pub mod fox;
pub mod pairing;
pub mod word;

pub use chain::{
    build_c3, c1_of_d2, chain_c1, chain_c2, check_commutativity, check_d2_d3, two_cycle, TupleChain, VertexPool,
};
pub use fox::{boundary2, evaluate, fox_derivative, CellStructure, GroupRingElem};
pub use pairing::{
    cs_doubled, hopf, hopf_distinct, lambda_hat, pairing_2cs, reduce_real_mod1, seed_from_env, PairingOptions,
    PairingOutcome,
};
pub use word::{
    format_word, free_reduce, inverse, parse_word, twist_presentation, twist_relator, Presentation, Word, WordEvaluator,
};
