use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

use super::poly::UniPoly;
use crate::error::{Error, Result};
use crate::numeric::{ComplexAP, Precision};

const MAX_ITERATIONS: usize = 400;
const RESTARTS: usize = 4;
const SEED: u64 = 0x005e_ed0f_ab37;

/// A root with its multiplicity.
#[derive(Debug, Clone)]
pub struct Root {
    pub value: ComplexAP,
    pub multiplicity: usize,
}

/// Clustering tolerance for multiplicities: `1e-8` at 64 bits, tightening
/// with the square root of the extra precision.
pub fn cluster_tolerance(prec: Precision) -> f64 {
    let extra = prec.bits().saturating_sub(Precision::DEFAULT_BITS) as i32;
    1e-8 * 2f64.powi(-extra / 2)
}

/// All complex roots of `f` with multiplicities.
///
/// `f` is split into square-free factors first, so each Aberth run sees only
/// simple roots; roots of the factors are then clustered at
/// [`cluster_tolerance`] in case two factors share a numerically indistinct root.
/// Nearly-real roots of the (real) input are snapped onto the real axis.
pub fn roots(f: &UniPoly, prec: Precision) -> Result<Vec<Root>> {
    let deg = f.degree().unwrap_or(0);
    if deg == 0 {
        return Err(Error::InvalidInput("roots of a constant polynomial".into()));
    }
    let mut out: Vec<Root> = Vec::new();
    let zero_mult = f.coeffs().iter().take_while(|c| **c == 0).count();
    let core = if zero_mult > 0 {
        out.push(Root {
            value: ComplexAP::zero(prec),
            multiplicity: zero_mult,
        });
        UniPoly::new(f.coeffs()[zero_mult..].to_vec())
    } else {
        f.clone()
    };
    let tol = cluster_tolerance(prec);
    for (factor, mult) in core.square_free() {
        for z in simple_roots(&factor, prec)? {
            let scale = z.abs_f64().max(1.0);
            if let Some(r) = out.iter_mut().find(|r| r.value.dist(&z) < tol * scale) {
                r.multiplicity += mult;
            } else {
                out.push(Root {
                    value: z,
                    multiplicity: mult,
                });
            }
        }
    }
    snap_real(&mut out, tol);
    debug_assert_eq!(out.iter().map(|r| r.multiplicity).sum::<usize>(), deg);
    Ok(out)
}

/// Scaled residual `|f(x)| / Σ|a_k||x|^k`.
pub fn relative_residual(f: &UniPoly, x: &ComplexAP) -> f64 {
    let scale = f.eval_abs(x);
    if scale == 0.0 {
        return 0.0;
    }
    f.eval(x).abs_f64() / scale
}

fn snap_real(roots: &mut [Root], tol: f64) {
    let n = roots.len();
    for i in 0..n {
        let z = &roots[i].value;
        let scale = z.abs_f64().max(1.0);
        if z.im_f64().abs() >= tol * scale || z.im().is_zero() {
            continue;
        }
        let conj = z.conj();
        let paired = (0..n).any(|j| j != i && roots[j].value.dist(&conj) < tol * scale);
        if !paired {
            let re = z.re().clone();
            roots[i].value = ComplexAP::from_real(re);
        }
    }
}

/// Roots of a square-free polynomial, each simple.
fn simple_roots(f: &UniPoly, prec: Precision) -> Result<Vec<ComplexAP>> {
    let deg = f.degree().unwrap_or(0);
    if deg == 1 {
        let c = f.coeffs();
        let r = -rug::Rational::from(&c[0] / &c[1]);
        return Ok(vec![ComplexAP::from_rational(prec, &r)]);
    }
    let work = Precision::new(prec.bits() + 16)?;
    let coeffs = f.to_complex(work);
    let dcoeffs = f.derivative().to_complex(work);
    let limit = prec.epsilon(10);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ deg as u64);
    let mut starts = Vec::new();
    for attempt in 0..RESTARTS {
        let jitter = if attempt == 0 { 0.0 } else { rng.gen_range(0.0..1.0) };
        let radius = 1.0 + if attempt == 0 { 0.0 } else { rng.gen_range(-0.3..0.3) };
        starts.push(circle_guesses(f, work, radius, 0.4 + jitter));
    }
    if let Some(guess) = companion_guesses(f, work) {
        starts.push(guess);
    }
    let mut last = f64::INFINITY;
    for guess in starts {
        let zs = aberth(&coeffs, &dcoeffs, guess, work);
        let worst = zs.iter().map(|z| relative_residual(f, z)).fold(0.0, f64::max);
        last = last.min(worst);
        if worst < limit && distinct(&zs, work) {
            return Ok(zs.into_iter().map(|z| z.with_prec(prec)).collect());
        }
    }
    Err(Error::NonConvergence(format!(
        "root finder on a degree-{deg} factor (best residual {last:e})"
    )))
}

fn distinct(zs: &[ComplexAP], prec: Precision) -> bool {
    let tol = prec.epsilon(prec.bits() / 2);
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            let scale = zs[i].abs_f64().max(1.0);
            if zs[i].dist(&zs[j]) < tol * scale {
                return false;
            }
        }
    }
    true
}

fn horner(c: &[ComplexAP], x: &ComplexAP) -> ComplexAP {
    let mut acc = ComplexAP::zero(x.prec());
    for a in c.iter().rev() {
        acc = &acc * x;
        acc += a;
    }
    acc
}

/// Guesses on a circle whose radius comes from the coefficient ratio `|a_0/a_n|^{1/n}`.
fn circle_guesses(f: &UniPoly, prec: Precision, factor: f64, offset: f64) -> Vec<ComplexAP> {
    let n = f.degree().unwrap_or(0);
    let a0 = f.coeff(0).to_f64().abs();
    let an = f.lead().to_f64().abs();
    let mut r = if a0 > 0.0 && an > 0.0 && (a0 / an).is_finite() {
        (a0 / an).powf(1.0 / n as f64)
    } else {
        1.0
    };
    if !(r.is_finite() && r > 0.0) {
        r = 1.0;
    }
    r *= factor;
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + offset;
            ComplexAP::from_f64(prec, r * t.cos(), r * t.sin())
        })
        .collect()
}

/// Eigenvalues of the companion matrix in double precision.
fn companion_guesses(f: &UniPoly, prec: Precision) -> Option<Vec<ComplexAP>> {
    let n = f.degree()?;
    let lead = f.lead().to_f64();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        let c = -f.coeff(i).to_f64() / lead;
        if !c.is_finite() {
            return None;
        }
        m[(i, n - 1)] = c;
    }
    let ev = m.complex_eigenvalues();
    let guesses: Vec<ComplexAP> = ev.iter().map(|c| ComplexAP::from_f64(prec, c.re, c.im)).collect();
    guesses.iter().all(|g| g.is_finite()).then_some(guesses)
}

/// Gauss-Seidel Aberth iteration; stops once every correction is below the
/// working precision.
fn aberth(c: &[ComplexAP], dc: &[ComplexAP], mut zs: Vec<ComplexAP>, prec: Precision) -> Vec<ComplexAP> {
    let n = zs.len();
    let stop = Float::with_val(prec.bits(), Float::i_exp(1, -(prec.bits() as i32 - 8)));
    let one = ComplexAP::one(prec);
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut all = true;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let fz = horner(c, &zs[k]);
            if fz.is_zero() {
                converged[k] = true;
                continue;
            }
            let dfz = horner(dc, &zs[k]);
            let ratio = &fz / &dfz;
            let mut s = ComplexAP::zero(prec);
            for j in 0..n {
                if j != k {
                    s += (&zs[k] - &zs[j]).recip().unwrap_or_else(|_| ComplexAP::zero(prec));
                }
            }
            let denom = &one - &(&ratio * &s);
            let step = &ratio / &denom;
            if !step.is_finite() {
                // nudge a root sitting on a critical point
                zs[k] = &zs[k] + &ComplexAP::from_f64(prec, 1e-3, 1e-3);
                all = false;
                continue;
            }
            zs[k] = &zs[k] - &step;
            let scale = Float::with_val(prec.bits(), zs[k].abs().max(&Float::with_val(prec.bits(), 1)));
            if step.abs() <= Float::with_val(prec.bits(), &stop * &scale) {
                converged[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    zs
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn p64() -> Precision {
        Precision::default()
    }

    fn sorted(mut v: Vec<Root>) -> Vec<Root> {
        v.sort_by(|a, b| {
            (a.value.re_f64(), a.value.im_f64())
                .partial_cmp(&(b.value.re_f64(), b.value.im_f64()))
                .unwrap()
        });
        v
    }

    #[test]
    fn i_and_minus_i() {
        let r = sorted(roots(&UniPoly::from_ints(&[1, 0, 1]), p64()).unwrap());
        assert_eq!(r.len(), 2);
        assert!(r[0].value.dist(&ComplexAP::from_f64(p64(), 0.0, -1.0)) < 1e-18);
        assert!(r[1].value.dist(&ComplexAP::from_f64(p64(), 0.0, 1.0)) < 1e-18);
    }

    #[test]
    fn triple_root() {
        let f = UniPoly::from_ints(&[-2, 1]).pow(3);
        let r = roots(&f, p64()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert!(r[0].value.dist(&ComplexAP::from_f64(p64(), 2.0, 0.0)) < 1e-18);
        assert!(r[0].value.im().is_zero());
    }

    #[test]
    fn chebyshev_roots() {
        let f = super::super::chebyshev_s(7);
        let r = sorted(roots(&f, p64()).unwrap());
        assert_eq!(r.len(), 6);
        let mut want: Vec<f64> = (1..7)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / 7.0).cos())
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (root, w) in r.iter().zip(want) {
            assert!((root.value.re_f64() - w).abs() < 1e-14);
            assert!(root.value.im().is_zero());
        }
    }

    #[test]
    fn zero_roots_and_high_precision() {
        let f = &UniPoly::from_ints(&[0, 0, 1]) * &UniPoly::from_ints(&[-3, 0, 1]);
        let prec = Precision::new(256).unwrap();
        let r = sorted(roots(&f, prec).unwrap());
        let total: usize = r.iter().map(|x| x.multiplicity).sum();
        assert_eq!(total, 4);
        let sqrt3 = Float::with_val(256, 3).sqrt();
        let pos = r.iter().find(|x| x.value.re_f64() > 1.0).unwrap();
        assert!(pos.value.dist(&ComplexAP::from_real(sqrt3)) < 1e-70);
    }

    #[test]
    fn residuals_are_small() {
        let f = UniPoly::new(
            [3, -7, 0, 2, 11, -5, 1, 0, 4]
                .iter()
                .map(|&c| Rational::from((c, 3)))
                .collect(),
        );
        for r in roots(&f, p64()).unwrap() {
            assert!(relative_residual(&f, &r.value) < 1e-15);
        }
    }

    #[test]
    fn constant_is_an_error() {
        assert!(roots(&UniPoly::from_ints(&[5]), p64()).is_err());
    }
}
