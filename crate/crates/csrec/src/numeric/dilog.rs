use rug::Float;
use serde::{Deserialize, Serialize};

use super::complex::{pi, pi_i, ComplexAP, Precision};
use crate::error::{Error, Result};

const GUARD_BITS: u32 = 32;

/// `log|z| + i arg z` with `arg ∈ (-π, π]`.
pub fn log_principal(z: &ComplexAP) -> Result<ComplexAP> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p = z.prec().bits();
    let re = Float::with_val(p, z.re().hypot_ref(z.im())).ln();
    Ok(ComplexAP::from_floats(re, z.arg()))
}

fn zeta2(prec: Precision) -> Float {
    let pi = pi(prec);
    Float::with_val(prec.bits(), pi.square_ref()) / 6u32
}

/// Principal branch of the dilogarithm.
pub fn li2(z: &ComplexAP) -> ComplexAP {
    let out = z.prec();
    let w = Precision::new(out.bits() + GUARD_BITS).expect("precision grows");
    li2_work(&z.with_prec(w)).with_prec(out)
}

fn li2_work(z: &ComplexAP) -> ComplexAP {
    let prec = z.prec();
    if z.is_zero() {
        return ComplexAP::zero(prec);
    }
    let one = ComplexAP::one(prec);
    if z == &one {
        return ComplexAP::from_real(zeta2(prec));
    }
    let abs2 = z.norm_sqr();
    if abs2 > 1u32 {
        // Li2(z) = -π²/6 - log²(-z)/2 - Li2(1/z)
        let inv = z.recip().expect("nonzero");
        let l = log_principal(&-z).expect("nonzero");
        let mut v = ComplexAP::from_real(-zeta2(prec));
        v -= (&l * &l).scale(&Float::with_val(prec.bits(), 0.5));
        return v - li2_work(&inv);
    }
    if *z.re() > 0.5 {
        // Li2(z) = π²/6 - log z log(1-z) - Li2(1-z)
        let omz = &one - z;
        let lz = log_principal(z).expect("nonzero");
        let l1 = log_principal(&omz).expect("z != 1");
        let mut v = ComplexAP::from_real(zeta2(prec));
        v -= &lz * &l1;
        return v - li2_work(&omz);
    }
    bernoulli_series(z)
}

/// `Σ B_n u^{n+1}/(n+1)!` with `u = -log(1 - z)`; here `|u| < 1.7`, well inside
/// the radius `2π`.
fn bernoulli_series(z: &ComplexAP) -> ComplexAP {
    let prec = z.prec();
    let p = prec.bits();
    let one = ComplexAP::one(prec);
    let u = -log_principal(&(&one - z)).expect("|z| <= 1, Re z <= 1/2");
    let two_pi = pi(prec) * 2u32;
    let v = u.scale(&Float::with_val(p, two_pi.recip_ref()));
    let v2 = &v * &v;
    let u2 = &u * &u;
    let mut sum = &u - &u2.scale(&Float::with_val(p, 0.25));
    let tol = Float::with_val(p, Float::i_exp(1, -(p as i32)));
    // B_{2k}/(2k+1)! = (-1)^{k+1} 2 ζ(2k) / ((2k+1) (2π)^{2k})
    let mut pow = u.clone();
    for k in 1u32.. {
        pow = &pow * &v2;
        let zeta = Float::with_val(p, Float::zeta_u(2 * k));
        let mut c = Float::with_val(p, zeta * 2u32) / (2 * k + 1);
        if k % 2 == 0 {
            c = -c;
        }
        let term = pow.scale(&c);
        let size = term.abs();
        sum += &term;
        if size < Float::with_val(p, &tol * Float::with_val(p, sum.abs().max(&Float::with_val(p, 1)))) {
            break;
        }
        assert!(k < 100_000, "dilogarithm series stalled");
    }
    sum
}

/// `R(z) = Li2(z) + log z log(1-z)/2 - π²/6`.
pub fn rogers(z: &ComplexAP) -> Result<ComplexAP> {
    let prec = z.prec();
    let one = ComplexAP::one(prec);
    let omz = &one - z;
    if z.is_zero() || omz.is_zero() {
        return Err(Error::Degenerate("Rogers dilogarithm at 0 or 1".into()));
    }
    let w = Precision::new(prec.bits() + GUARD_BITS).expect("precision grows");
    let zw = z.with_prec(w);
    let lz = log_principal(&zw)?;
    let l1 = log_principal(&(&one.with_prec(w) - &zw))?;
    let mut v = li2_work(&zw);
    v += (&lz * &l1).scale(&Float::with_val(w.bits(), 0.5));
    v -= ComplexAP::from_real(zeta2(w));
    Ok(v.with_prec(prec))
}

/// A flattened ideal simplex `[z; p, q]` with an integer multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlattenedSimplex {
    #[serde(with = "crate::serde_ap")]
    pub z: ComplexAP,
    pub p: i64,
    pub q: i64,
    pub coeff: i64,
}

impl FlattenedSimplex {
    /// Rejects `z` within `tol` of 0 or 1.
    pub fn new(z: ComplexAP, p: i64, q: i64, coeff: i64, tol: f64) -> Result<Self> {
        let one = ComplexAP::one(z.prec());
        if z.abs_f64() < tol || (&one - &z).abs_f64() < tol {
            return Err(Error::Degenerate(format!("cross-ratio {z} too close to 0 or 1")));
        }
        Ok(FlattenedSimplex { z, p, q, coeff })
    }
}

/// `L̂(z; p, q) = R(z) + (πi/2)(q log z + p log(1-z))`.
pub fn l_hat(s: &FlattenedSimplex) -> Result<ComplexAP> {
    let prec = s.z.prec();
    let r = rogers(&s.z)?;
    let lz = log_principal(&s.z)?;
    let l1 = log_principal(&(&ComplexAP::one(prec) - &s.z))?;
    let corr = &lz.mul_int(s.q) + &l1.mul_int(s.p);
    let half_pi_i = pi_i(prec).scale(&Float::with_val(prec.bits(), 0.5));
    Ok(r + &half_pi_i * &corr)
}
