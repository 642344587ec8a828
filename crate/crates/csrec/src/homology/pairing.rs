use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::chain::{build_c3, random_apexes, two_cycle, TupleChain, VertexPool};
use super::fox::CellStructure;
use super::word::WordEvaluator;
use crate::error::{Error, Result};
use crate::numeric::{l_hat, log_principal, pi, pi_i, ComplexAP, FlattenedSimplex, Precision};
use crate::sl2::SL2Matrix;

/// Flattening parameters must lie this close to an integer.
pub const FLATTENING_TOL: f64 = 1e-6;

/// Default seed for the conjugation and apex draws; `CSREC_SEED` overrides it.
pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn seed_from_env() -> u64 {
    std::env::var("CSREC_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// The point `g · ∞` of `CP¹`, as the first column of `g`.
pub fn hopf(g: &SL2Matrix) -> (ComplexAP, ComplexAP) {
    (g.a.clone(), g.c.clone())
}

fn det2(u: &(ComplexAP, ComplexAP), v: &(ComplexAP, ComplexAP)) -> ComplexAP {
    &(&u.0 * &v.1) - &(&v.0 * &u.1)
}

fn col_norm(u: &(ComplexAP, ComplexAP)) -> f64 {
    u.0.abs_f64().max(u.1.abs_f64())
}

/// True when `g·∞` and `h·∞` differ by more than `tol` in the projective sense.
pub fn hopf_distinct(g: &SL2Matrix, h: &SL2Matrix, tol: f64) -> bool {
    let (u, v) = (hopf(g), hopf(h));
    det2(&u, &v).abs_f64() > tol * col_norm(&u) * col_norm(&v)
}

fn nearest_int(x: &Float) -> Result<i64> {
    let r = Float::with_val(x.prec(), x.round_ref());
    let off = Float::with_val(x.prec(), x - &r).to_f64().abs();
    if off > FLATTENING_TOL {
        return Err(Error::NonIntegerFlattening {
            value: x.to_f64(),
            offset: off,
        });
    }
    Ok(r.to_f64() as i64)
}

fn nearest_int_complex(x: &ComplexAP) -> Result<i64> {
    let n = nearest_int(x.re())?;
    let im = x.im_f64().abs();
    if im > FLATTENING_TOL {
        return Err(Error::NonIntegerFlattening {
            value: x.re_f64(),
            offset: im,
        });
    }
    Ok(n)
}

/// The flattened simplex of a 4-tuple: with `c_ij = det(g_i e_1, g_j e_1)`,
/// `z = c_03 c_12 / (c_02 c_13)` and integers `p, q` read off the logarithms.
pub fn lambda_hat(ms: [&SL2Matrix; 4], coeff: i64, tol: f64) -> Result<FlattenedSimplex> {
    let v: Vec<_> = ms.iter().map(|m| hopf(m)).collect();
    let prec = ms.iter().map(|m| m.prec()).max().unwrap_or_default();
    let mut c = [
        [
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
        ],
        [
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
        ],
        [
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
        ],
        [
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
            ComplexAP::zero(prec),
        ],
    ];
    for i in 0..4 {
        for j in i + 1..4 {
            let d = det2(&v[i], &v[j]);
            if d.abs_f64() <= tol * col_norm(&v[i]) * col_norm(&v[j]) {
                return Err(Error::Degenerate(format!(
                    "vertices {i} and {j} share a point at infinity"
                )));
            }
            c[i][j] = d;
        }
    }
    let l = |i: usize, j: usize| log_principal(&c[i][j]);
    let z = (&c[0][3] * &c[1][2]).checked_div(&(&c[0][2] * &c[1][3]))?;
    let w0 = &(&l(0, 3)? + &l(1, 2)?) - &(&l(0, 2)? + &l(1, 3)?);
    let w1 = &(&l(0, 2)? + &l(1, 3)?) - &(&l(0, 1)? + &l(2, 3)?);
    let one = ComplexAP::one(prec);
    let lz = log_principal(&z)?;
    let l1 = log_principal(&(&one - &z))?;
    let pii = pi_i(prec);
    let p = nearest_int_complex(&(&w0 - &lz).checked_div(&pii)?)?;
    let q = nearest_int_complex(&(&w1 + &l1).checked_div(&pii)?)?;
    FlattenedSimplex::new(z, p, q, coeff, tol)
}

/// Real part moved into `[0, 1)`.
pub fn reduce_real_mod1(x: &ComplexAP) -> ComplexAP {
    let re = x.re();
    let fl = Float::with_val(re.prec(), re.floor_ref());
    ComplexAP::from_floats(Float::with_val(re.prec(), re - &fl), x.im().clone())
}

/// `-(1/2π²) Σ n L̂(λ̂(t))` over a 3-chain, unreduced.
pub fn pairing_2cs(c3: &TupleChain, pool: &VertexPool, tol: f64) -> Result<ComplexAP> {
    let terms: Vec<(&Vec<usize>, i64)> = c3.terms().map(|(t, c)| (t, *c)).collect();
    if let Some((t, _)) = terms.iter().find(|(t, _)| t.len() != 4) {
        return Err(Error::InvalidInput(format!(
            "pairing needs 4-tuples, got length {}",
            t.len()
        )));
    }
    let vals: Vec<ComplexAP> = terms
        .par_iter()
        .map(|(t, c)| {
            let s = lambda_hat(
                [pool.get(t[0]), pool.get(t[1]), pool.get(t[2]), pool.get(t[3])],
                *c,
                tol,
            )?;
            Ok(l_hat(&s)?.mul_int(s.coeff))
        })
        .collect::<Result<_>>()?;
    let prec = (0..pool.len()).map(|i| pool.get(i).prec()).max().unwrap_or_default();
    let mut total = ComplexAP::zero(prec);
    for v in vals {
        total += v;
    }
    let pif = pi(prec);
    let two_pi2 = Float::with_val(prec.bits(), pif.square_ref()) * 2u32;
    let inv = Float::with_val(prec.bits(), -1) / two_pi2;
    Ok(total.scale(&inv))
}

#[derive(Debug, Clone)]
pub struct PairingOptions {
    pub seed: u64,
    /// Fresh conjugations tried after a degenerate tuple.
    pub retries: usize,
    /// Conjugate `ρ` by a random element on the first attempt as well.
    pub conjugate_first: bool,
    pub v0: Option<SL2Matrix>,
    /// Relative threshold for two vertices to count as the same point of `CP¹`.
    pub degeneracy_tol: f64,
    pub prec: Precision,
}

impl Default for PairingOptions {
    fn default() -> Self {
        PairingOptions {
            seed: seed_from_env(),
            retries: 10,
            conjugate_first: true,
            v0: None,
            degeneracy_tol: 1e-12,
            prec: Precision::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingOutcome {
    /// `2CS(ρ)` with the real part in `[0, 1)`.
    #[serde(with = "crate::serde_ap")]
    pub value: ComplexAP,
    pub attempts: usize,
    pub two_cycle_terms: usize,
    pub three_chain_terms: usize,
}

/// `2CS(ρ) = ⟨[ρ], λ̂⟩` via the cone over `c_2(∂₃ O)`.
pub fn cs_doubled(cells: &CellStructure, gens: &[SL2Matrix], opts: &PairingOptions) -> Result<PairingOutcome> {
    if gens.len() != cells.presentation.generators {
        return Err(Error::InvalidInput(format!(
            "{} matrices for {} generators",
            gens.len(),
            cells.presentation.generators
        )));
    }
    let prec = gens.iter().map(|g| g.prec()).fold(opts.prec, |a, b| a.max(b));
    let gens: Vec<SL2Matrix> = gens.iter().map(|g| g.with_prec(prec)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut last = None;
    for attempt in 0..=opts.retries {
        let rho_gens: Vec<SL2Matrix> = if attempt > 0 || opts.conjugate_first {
            let p = SL2Matrix::random(&mut rng, prec);
            gens.iter().map(|g| g.conjugate_by(&p)).collect()
        } else {
            gens.clone()
        };
        let rho = WordEvaluator::new(&rho_gens);
        let apexes = random_apexes(&mut rng, cells.presentation.relators.len(), prec);
        let mut pool = VertexPool::for_precision(prec);
        let cycle = two_cycle(cells, &rho, Some(&apexes), &mut pool);
        let v0 = match &opts.v0 {
            Some(v) => v.with_prec(prec),
            None => SL2Matrix::random(&mut rng, prec),
        };
        let iv = pool.push_fresh(v0);
        let c3 = build_c3(&cycle, iv)?;
        match pairing_2cs(&c3, &pool, opts.degeneracy_tol) {
            Ok(v) => {
                return Ok(PairingOutcome {
                    value: reduce_real_mod1(&v),
                    attempts: attempt + 1,
                    two_cycle_terms: cycle.len(),
                    three_chain_terms: c3.len(),
                })
            }
            Err(e @ Error::Degenerate(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    match last {
        Some(_) => Err(Error::DegenerateAfterRetries(opts.retries)),
        None => unreachable!("loop runs at least once"),
    }
}
