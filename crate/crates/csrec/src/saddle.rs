//! Figure-eight surgeries `M_{p/1}` through critical values of the potential
//! `Ṽ(z, w) = -Li2(zw) + Li2(z/w) + (p/4) log²z - log z log w`.

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::algebra::{relative_residual, roots, LaurentPoly, UniPoly, Var};
use crate::error::{Error, Result};
use crate::numeric::{li2, log_principal, pi, two_pi_i, ComplexAP, Precision};

/// Allowed distance of `c`, `d` from integers before rounding.
pub const FLATTENING_TOL: f64 = 1e-6;

/// A critical point with its flattening and `T = Ṽ + 2πi (c log z + d log w)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SaddlePoint {
    #[serde(with = "crate::serde_ap")]
    pub z: ComplexAP,
    #[serde(with = "crate::serde_ap")]
    pub w: ComplexAP,
    pub c: i64,
    pub d: i64,
    #[serde(rename = "T", with = "crate::serde_ap")]
    pub t: ComplexAP,
    /// Stationarity residuals after substituting the integers.
    pub residual: (f64, f64),
}

fn check_p(p: i64) -> Result<()> {
    if p % 2 != 0 || p.abs() < 6 {
        return Err(Error::InvalidInput(format!("p = {p}: need p even and |p| >= 6")));
    }
    Ok(())
}

pub fn potential(z: &ComplexAP, w: &ComplexAP, p: i64) -> Result<ComplexAP> {
    if z.is_zero() || w.is_zero() {
        return Err(Error::ZeroInput);
    }
    let prec = z.prec().max(w.prec());
    let lz = log_principal(z)?;
    let lw = log_principal(w)?;
    let quarter_p = Float::with_val(prec.bits(), p) / 4u32;
    let mut v = li2(&z.checked_div(w)?) - li2(&(z * w));
    v += (&lz * &lz).scale(&quarter_p);
    v -= &lz * &lw;
    Ok(v)
}

/// `(∂Ṽ/∂z, ∂Ṽ/∂w)`.
pub fn grad_potential(z: &ComplexAP, w: &ComplexAP, p: i64) -> Result<(ComplexAP, ComplexAP)> {
    let prec = z.prec().max(w.prec());
    let one = ComplexAP::one(prec);
    let zw = z * w;
    let zow = z.checked_div(w)?;
    if (&one - &zw).is_zero() || (&one - &zow).is_zero() {
        return Err(Error::Degenerate("gradient on zw = 1 or z/w = 1".into()));
    }
    let l1 = log_principal(&(&one - &zw))?;
    let l2 = log_principal(&(&one - &zow))?;
    let lz = log_principal(z)?;
    let lw = log_principal(w)?;
    let half_p = Float::with_val(prec.bits(), p) / 2u32;
    let dz = (&(&l1 - &l2) + &(&lz.scale(&half_p) - &lw)).checked_div(z)?;
    let dw = (&(&l1 + &l2) - &lz).checked_div(w)?;
    Ok((dz, dw))
}

/// `N = z + z^{p/2}` and `D = z^{p/2+1} + 1`, both multiplied by `z^{max(0, -p/2)}`
/// so they are ordinary polynomials with `w = N/D`.
pub fn numerator_denominator(p: i64) -> (UniPoly, UniPoly) {
    let k = p / 2;
    let one = rug::Rational::from(1);
    let n = &LaurentPoly::z() + &LaurentPoly::monomial(one.clone(), 0, k);
    let d = &LaurentPoly::monomial(one.clone(), 0, k + 1) + &LaurentPoly::one();
    let s = (-k).max(0);
    let n = n.shift(0, s).to_uni(Var::Z).expect("univariate");
    let d = d.shift(0, s).to_uni(Var::Z).expect("univariate");
    (n, d)
}

/// `z² N D - z (N² + N D + D²) + N D`, i.e. the second equation times `N D`.
pub fn cleared_polynomial(p: i64) -> UniPoly {
    let (n, d) = numerator_denominator(p);
    let nd = &n * &d;
    let z = UniPoly::x();
    let inner = &(&(&n * &n) + &nd) + &(&d * &d);
    &(&nd.shift(2) - &(&z * &inner)) + &nd
}

fn second_equation(z: &ComplexAP, w: &ComplexAP) -> Result<ComplexAP> {
    let one = ComplexAP::one(z.prec());
    let s = &(w + &one) + &w.recip()?;
    Ok(&(&(z * z) - &(&s * z)) + &one)
}

/// All solutions `(z, w)` of the displayed system.
///
/// At a common zero of `N` and `D` (which happens at `z = -1` when `4 | p`) the
/// quotient `w = N/D` is undetermined; there the second equation is solved as a
/// quadratic `w² - (z + 1/z - 1) w + 1 = 0`, which contributes two solutions.
pub fn solve_system(p: i64, prec: Precision) -> Result<Vec<(ComplexAP, ComplexAP)>> {
    check_p(p)?;
    let (n, d) = numerator_denominator(p);
    let poly = cleared_polynomial(p);
    let tol = prec.epsilon(prec.bits() / 2);
    let mut out = Vec::new();
    for root in roots(&poly, prec)? {
        let z = root.value;
        if z.abs_f64() < tol {
            continue;
        }
        let nv = n.eval(&z);
        let dv = d.eval(&z);
        let n_small = nv.abs_f64() < tol * n.eval_abs(&z);
        let d_small = dv.abs_f64() < tol * d.eval_abs(&z);
        match (n_small, d_small) {
            (true, true) => {
                let one = ComplexAP::one(prec);
                let b = &(&z + &z.recip()?) - &one;
                let disc = (&(&b * &b) - &ComplexAP::from_int(prec, 4)).sqrt();
                let half = Float::with_val(prec.bits(), 0.5);
                for w in [(&b + &disc).scale(&half), (&b - &disc).scale(&half)] {
                    out.push((z.clone(), w));
                }
            }
            (_, true) => continue,
            _ => {
                let w = nv.checked_div(&dv)?;
                if w.is_zero() {
                    continue;
                }
                out.push((z, w));
            }
        }
    }
    out.sort_by(|a, b| order_key(&a.0, &a.1).partial_cmp(&order_key(&b.0, &b.1)).unwrap());
    Ok(out)
}

fn order_key(z: &ComplexAP, w: &ComplexAP) -> (f64, f64, f64, f64) {
    (z.re_f64(), z.im_f64(), w.re_f64(), w.im_f64())
}

/// Residuals of the two displayed equations, `|w D - N|` and the second equation,
/// each relative to its natural scale.
pub fn system_residuals(p: i64, z: &ComplexAP, w: &ComplexAP) -> Result<(f64, f64)> {
    let (n, d) = numerator_denominator(p);
    let first = (&(w * &d.eval(z)) - &n.eval(z)).abs_f64();
    let first_scale = w.abs_f64() * d.eval_abs(z) + n.eval_abs(z);
    let second = second_equation(z, w)?.abs_f64();
    let second_scale = 1.0 + z.abs_f64() * z.abs_f64() + z.abs_f64() * (1.0 + w.abs_f64() + 1.0 / w.abs_f64());
    Ok((first / first_scale.max(1e-300), second / second_scale))
}

/// `c = round(-z ∂_zṼ / 2πi)`, `d = round(-w ∂_wṼ / 2πi)`.
pub fn flattening_integers(z: &ComplexAP, w: &ComplexAP, p: i64) -> Result<(i64, i64)> {
    let (dz, dw) = grad_potential(z, w, p)?;
    let tpi = two_pi_i(z.prec());
    let cv = -(z * &dz).checked_div(&tpi)?;
    let dv = -(w * &dw).checked_div(&tpi)?;
    let round = |v: &ComplexAP| -> Result<i64> {
        let (re, im) = v.to_f64();
        let k = re.round();
        let off = ((re - k).powi(2) + im * im).sqrt();
        if off >= FLATTENING_TOL {
            return Err(Error::NonIntegerFlattening { value: re, offset: off });
        }
        Ok(k as i64)
    };
    Ok((round(&cv)?, round(&dv)?))
}

/// The full table of critical points, ordered by `(Re z, Im z)`.
pub fn cs_terms(p: i64, prec: Precision) -> Result<Vec<SaddlePoint>> {
    let sols = solve_system(p, prec)?;
    sols.into_par_iter()
        .map(|(z, w)| {
            let (c, d) = flattening_integers(&z, &w, p)?;
            let (dz, dw) = grad_potential(&z, &w, p)?;
            let tpi = two_pi_i(prec);
            let rz = (&dz + &tpi.mul_int(c).checked_div(&z)?).abs_f64();
            let rw = (&dw + &tpi.mul_int(d).checked_div(&w)?).abs_f64();
            let lz = log_principal(&z)?;
            let lw = log_principal(&w)?;
            let t = potential(&z, &w, p)? + &tpi * &(&lz.mul_int(c) + &lw.mul_int(d));
            Ok(SaddlePoint {
                z,
                w,
                c,
                d,
                t,
                residual: (rz, rw),
            })
        })
        .collect()
}

/// `(6/π²) Σ T` with its real distance to the nearest integer and `|Im|`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReciprocitySum {
    #[serde(with = "crate::serde_ap")]
    pub sum: ComplexAP,
    pub distance: f64,
    pub imag: f64,
}

pub fn scaled_sum(terms: &[SaddlePoint], prec: Precision) -> ReciprocitySum {
    let mut total = ComplexAP::zero(prec);
    for t in terms {
        total += &t.t;
    }
    let pi2 = Float::with_val(prec.bits(), pi(prec).square_ref());
    let scale = Float::with_val(prec.bits(), 6u32) / pi2;
    let sum = total.scale(&scale);
    let re = sum.re().clone();
    let nearest = Float::with_val(prec.bits(), re.round_ref());
    let distance = Float::with_val(prec.bits(), &re - &nearest).abs().to_f64();
    let imag = sum.im_f64().abs();
    ReciprocitySum { sum, distance, imag }
}

pub fn reciprocity_sum_fig8(p: i64, prec: Precision) -> Result<ReciprocitySum> {
    let terms = cs_terms(p, prec)?;
    Ok(scaled_sum(&terms, prec))
}

/// Polynomial-system residual check used by the census.
pub fn max_residual(p: i64, sols: &[(ComplexAP, ComplexAP)]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (z, w) in sols {
        let (a, b) = system_residuals(p, z, w)?;
        worst = worst.max(a).max(b);
    }
    Ok(worst)
}

/// Root residual of the cleared polynomial, for diagnostics.
pub fn polynomial_residual(p: i64, z: &ComplexAP) -> f64 {
    relative_residual(&cleared_polynomial(p), z)
}
