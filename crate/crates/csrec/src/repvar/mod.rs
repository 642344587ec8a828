//! SL(2, ℂ) representation varieties of surgeries on twist knots, and Riley
//! polynomials of two-bridge knots.

mod riley;

pub use riley::{riley_polynomial, riley_roots, riley_word, TwoBridgeSpec};

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::algebra::{chebyshev_s, resultant, roots, LaurentPoly, UniPoly, Var};
use crate::error::{Error, Result};
use crate::homology::{twist_presentation, WordEvaluator};
use crate::numeric::{ComplexAP, Precision};
use crate::sl2::SL2Matrix;

/// Points are accepted when both residuals are below this.
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const NEWTON_STEPS: usize = 50;
const ORBIT_TOL: f64 = 1e-8;

fn lz(p: &UniPoly) -> LaurentPoly {
    LaurentPoly::from_uni(p, Var::Z)
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn check_n(n: i64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("twist knot needs n != 0".into()));
    }
    Ok(())
}

/// `(S_n, S_n - S_{n-1})` in `z`.
fn s_pair(n: i64) -> (UniPoly, UniPoly) {
    let sn = chebyshev_s(n);
    let d = &sn - &chebyshev_s(n - 1);
    (sn, d)
}

/// `F(m, z) = S_n(S_n - S_{n-1})(m² + m⁻²) - z S_n(S_n - S_{n-1}) + 1`.
pub fn twist_f(n: i64) -> Result<LaurentPoly> {
    check_n(n)?;
    let (sn, d) = s_pair(n);
    let s = lz(&(&sn * &d));
    let m2 = &LaurentPoly::monomial(q(1), 2, 0) + &LaurentPoly::monomial(q(1), -2, 0);
    Ok(&(&(&s * &m2) - &(&LaurentPoly::z() * &s)) + &LaurentPoly::one())
}

/// `-(z - 2)S_n² m⁴ - (z - 2)(S_n - S_{n-1}) m² + (S_n - S_{n-1})²`, term for term.
pub fn twist_e(n: i64) -> Result<LaurentPoly> {
    check_n(n)?;
    let (sn, d) = s_pair(n);
    let zm2 = &LaurentPoly::z() - &LaurentPoly::constant(q(2));
    let t1 = &(&zm2 * &lz(&(&sn * &sn))) * &LaurentPoly::monomial(q(-1), 4, 0);
    let t2 = &(&zm2 * &lz(&d)) * &LaurentPoly::monomial(q(-1), 2, 0);
    Ok(&(&t1 + &t2) + &lz(&(&d * &d)))
}

/// Eigenvalue of the longitude on the `e₁` line:
/// `-(z - 2)S_n² m⁴ - (z - 2)S_n(S_n - S_{n-1}) m² + (S_n - S_{n-1})²`.
/// Agrees with [`twist_e`] for `n = 1`.
pub fn twist_longitude(n: i64) -> Result<LaurentPoly> {
    check_n(n)?;
    let (sn, d) = s_pair(n);
    let zm2 = &LaurentPoly::z() - &LaurentPoly::constant(q(2));
    let t1 = &(&zm2 * &lz(&(&sn * &sn))) * &LaurentPoly::monomial(q(-1), 4, 0);
    let t2 = &(&zm2 * &lz(&(&sn * &d))) * &LaurentPoly::monomial(q(-1), 2, 0);
    Ok(&(&t1 + &t2) + &lz(&(&d * &d)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistSurgerySpec {
    pub n: i64,
    pub p: i64,
    pub q: i64,
    #[serde(skip, default)]
    pub prec: Precision,
    /// Odd `p` is solvable but outside the even-`p` setting.
    pub odd_p: bool,
}

impl TwistSurgerySpec {
    pub fn new(n: i64, p: i64, q: i64) -> Result<Self> {
        let s = TwistSurgerySpec::unchecked(n, p, q)?;
        if s.odd_p {
            return Err(Error::InvalidInput(format!("p = {p} is odd; use allow_odd")));
        }
        Ok(s)
    }

    /// Accepts odd `p`, recording it in [`TwistSurgerySpec::odd_p`].
    pub fn allow_odd(n: i64, p: i64, q: i64) -> Result<Self> {
        TwistSurgerySpec::unchecked(n, p, q)
    }

    fn unchecked(n: i64, p: i64, q: i64) -> Result<Self> {
        check_n(n)?;
        if Integer::from(p).gcd(&Integer::from(q)) != 1 {
            return Err(Error::InvalidInput(format!("gcd({p}, {q}) != 1")));
        }
        Ok(TwistSurgerySpec {
            n,
            p,
            q,
            prec: Precision::default(),
            odd_p: p % 2 != 0,
        })
    }

    pub fn with_prec(mut self, prec: Precision) -> Self {
        self.prec = prec;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepPoint {
    pub n: i64,
    #[serde(with = "crate::serde_ap")]
    pub m: ComplexAP,
    #[serde(with = "crate::serde_ap")]
    pub z: ComplexAP,
    /// `(|F|, |m^p E^q - 1|)`.
    pub residuals: (f64, f64),
    pub irreducible: bool,
    /// Index of the orbit of `(conj m, conj z)` in the same list.
    pub partner: Option<usize>,
}

/// `(u^{a} E^{b} = 1)` with `u = m²`, written without negative powers of `u` or `E`.
fn surgery_equation_u(e_u: &LaurentPoly, a: i64, b: i64) -> LaurentPoly {
    let side = |a: i64, b: i64| &LaurentPoly::monomial(q(1), a.max(0), 0) * &e_u.pow(b.max(0) as u32);
    &side(a, b) - &side(-a, -b)
}

/// The eliminant in `z`: resultant in `u = m²` of `F·m²` and the surgery
/// equation (squared when `p` is odd).
pub fn eliminant(spec: &TwistSurgerySpec) -> Result<UniPoly> {
    let fu = twist_f(spec.n)?.halve_m()?.shift(1, 0);
    let eu = twist_longitude(spec.n)?.halve_m()?;
    let (a, b) = if spec.p % 2 == 0 {
        (spec.p / 2, spec.q)
    } else {
        (spec.p, 2 * spec.q)
    };
    let g = surgery_equation_u(&eu, a, b);
    let r = resultant(&fu, &g, Var::M)?;
    if r.is_zero() {
        return Err(Error::PositiveDimensional(format!(
            "eliminant vanishes identically for (n, p, q) = ({}, {}, {})",
            spec.n, spec.p, spec.q
        )));
    }
    Ok(r)
}

struct System {
    f: LaurentPoly,
    h: LaurentPoly,
    fm: LaurentPoly,
    fz: LaurentPoly,
    hm: LaurentPoly,
    hz: LaurentPoly,
    e: LaurentPoly,
    p: i64,
    q: i64,
}

impl System {
    fn new(spec: &TwistSurgerySpec) -> Result<Self> {
        let f = twist_f(spec.n)?;
        let e = twist_longitude(spec.n)?;
        let mp = LaurentPoly::monomial(q(1), spec.p, 0);
        let h = if spec.q >= 0 {
            &(&mp * &e.pow(spec.q as u32)) - &LaurentPoly::one()
        } else {
            &mp - &e.pow(spec.q.unsigned_abs() as u32)
        };
        Ok(System {
            fm: f.diff(Var::M),
            fz: f.diff(Var::Z),
            hm: h.diff(Var::M),
            hz: h.diff(Var::Z),
            f,
            h,
            e,
            p: spec.p,
            q: spec.q,
        })
    }

    fn residuals(&self, m: &ComplexAP, z: &ComplexAP) -> Result<(f64, f64)> {
        let f = self.f.eval(m, z)?.abs_f64();
        let e = self.e.eval(m, z)?;
        let lhs = &m.powi(self.p)? * &e.powi(self.q)?;
        let g = (&lhs - &ComplexAP::one(m.prec())).abs_f64();
        Ok((f, g))
    }

    fn newton(&self, m0: ComplexAP, z0: ComplexAP) -> Result<(ComplexAP, ComplexAP)> {
        let (mut m, mut z) = (m0, z0);
        let eps = m.prec().epsilon(8);
        for _ in 0..NEWTON_STEPS {
            let f = self.f.eval(&m, &z)?;
            let h = self.h.eval(&m, &z)?;
            if f.abs_f64().max(h.abs_f64()) < eps {
                break;
            }
            let (a, b) = (self.fm.eval(&m, &z)?, self.fz.eval(&m, &z)?);
            let (c, d) = (self.hm.eval(&m, &z)?, self.hz.eval(&m, &z)?);
            let det = &(&a * &d) - &(&b * &c);
            if det.abs_f64() < 1e-300 {
                break;
            }
            let dm = (&(&d * &f) - &(&b * &h)).checked_div(&det)?;
            let dz = (&(&a * &h) - &(&c * &f)).checked_div(&det)?;
            m -= dm;
            z -= dz;
            if !m.is_finite() || !z.is_finite() || m.abs_f64() < 1e-12 {
                return Err(Error::NonConvergence("Newton step left the torus".into()));
            }
        }
        Ok((m, z))
    }
}

/// Orbit representative under `m ~ m⁻¹`: `|m| ≥ 1`, and `arg m ≥ 0` on the unit circle.
pub fn normalize_orbit(m: &ComplexAP) -> Result<ComplexAP> {
    let r = m.abs_f64();
    if (r - 1.0).abs() < ORBIT_TOL {
        if m.im_f64() < 0.0 {
            return m.recip();
        }
        return Ok(m.clone());
    }
    if r < 1.0 {
        m.recip()
    } else {
        Ok(m.clone())
    }
}

fn same_orbit(a: &(ComplexAP, ComplexAP), b: &(ComplexAP, ComplexAP)) -> bool {
    let s = 1.0 + a.0.abs_f64().max(a.1.abs_f64());
    a.0.dist(&b.0) < ORBIT_TOL * s && a.1.dist(&b.1) < ORBIT_TOL * s
}

fn quadratic_roots(a: &ComplexAP, b: &ComplexAP, c: &ComplexAP) -> Result<[ComplexAP; 2]> {
    let prec = a.prec();
    let disc = (&(b * b) - &(a * c).mul_int(4)).sqrt();
    let two_a = a.mul_int(2);
    // pick the larger-magnitude numerator to avoid cancellation
    let s1 = &(-b) + &disc;
    let s2 = &(-b) - &disc;
    let num = if s1.abs_f64() >= s2.abs_f64() { s1 } else { s2 };
    if num.is_zero() {
        return Ok([ComplexAP::zero(prec), ComplexAP::zero(prec)]);
    }
    let r1 = num.checked_div(&two_a)?;
    let r2 = c.mul_int(2).checked_div(&num)?;
    Ok([r1, r2])
}

/// Candidate `(m, z)` pairs over one root `z` of the eliminant.
fn candidates(n: i64, z: &ComplexAP) -> Result<Vec<(ComplexAP, ComplexAP)>> {
    let (sn, d) = s_pair(n);
    let s = (&sn * &d).eval(z);
    if s.abs_f64() < 1e-14 {
        return Ok(Vec::new());
    }
    let b = &ComplexAP::one(z.prec()) - &(z * &s);
    let mut out = Vec::new();
    for u in quadratic_roots(&s, &b, &s)? {
        if u.abs_f64() < 1e-14 {
            continue;
        }
        let m = u.sqrt();
        out.push((-&m, z.clone()));
        out.push((m, z.clone()));
    }
    Ok(out)
}

/// Every orbit of `{F = 0, m^p E^q = 1}`, tagged with irreducibility.
pub fn enumerate_variety_all(spec: &TwistSurgerySpec) -> Result<Vec<RepPoint>> {
    let prec = spec.prec;
    let work = Precision::new(prec.bits() + 32)?;
    let r = eliminant(spec)?;
    if r.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let zs = roots(&r, work)?;
    let sys = System::new(spec)?;
    let polished: Vec<(ComplexAP, ComplexAP, (f64, f64))> = zs
        .par_iter()
        .map(|root| -> Result<Vec<_>> {
            let mut out = Vec::new();
            for (m0, z0) in candidates(spec.n, &root.value)? {
                let Ok((m, z)) = sys.newton(m0, z0) else { continue };
                let Ok(res) = sys.residuals(&m, &z) else { continue };
                if res.0 < RESIDUAL_TOL && res.1 < RESIDUAL_TOL {
                    out.push((m, z, res));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut orbits: Vec<(ComplexAP, ComplexAP, (f64, f64))> = Vec::new();
    for (m, z, res) in polished {
        let m = normalize_orbit(&m)?;
        let key = (m.clone(), z.clone());
        if !orbits.iter().any(|(a, b, _)| same_orbit(&(a.clone(), b.clone()), &key)) {
            orbits.push((m, z, res));
        }
    }
    orbits.sort_by(|a, b| {
        let ka = (a.1.re_f64(), a.1.im_f64(), a.0.re_f64(), a.0.im_f64());
        let kb = (b.1.re_f64(), b.1.im_f64(), b.0.re_f64(), b.0.im_f64());
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut pts: Vec<RepPoint> = Vec::with_capacity(orbits.len());
    for (m, z, res) in orbits {
        let m = m.with_prec(prec);
        let z = z.with_prec(prec);
        let mut pt = RepPoint {
            n: spec.n,
            m,
            z,
            residuals: res,
            irreducible: false,
            partner: None,
        };
        let (a, b) = representation(&pt)?;
        pt.irreducible = is_irreducible(&a, &b);
        pts.push(pt);
    }
    link_partners(&mut pts)?;
    Ok(pts)
}

/// [`enumerate_variety_all`] without the reducible points.
pub fn enumerate_variety(spec: &TwistSurgerySpec) -> Result<Vec<RepPoint>> {
    let mut pts: Vec<RepPoint> = enumerate_variety_all(spec)?
        .into_iter()
        .filter(|p| p.irreducible)
        .collect();
    link_partners(&mut pts)?;
    Ok(pts)
}

fn link_partners(pts: &mut [RepPoint]) -> Result<()> {
    let keys: Vec<(ComplexAP, ComplexAP)> = pts.iter().map(|p| (p.m.clone(), p.z.clone())).collect();
    for p in pts.iter_mut() {
        let conj = (normalize_orbit(&p.m.conj())?, p.z.conj());
        p.partner = keys.iter().position(|k| same_orbit(k, &conj));
    }
    Ok(())
}

/// `ρ(a) = (m 1; 0 m⁻¹)`, `ρ(b) = (m 0; -z m⁻¹)`.
pub fn rep_from_point(pt: &RepPoint) -> Result<(SL2Matrix, SL2Matrix)> {
    let prec = pt.m.prec();
    let mi = pt.m.recip()?;
    let a = SL2Matrix::new(pt.m.clone(), ComplexAP::one(prec), ComplexAP::zero(prec), mi.clone());
    let b = SL2Matrix::new(pt.m.clone(), ComplexAP::zero(prec), -&pt.z, mi);
    Ok((a, b))
}

/// Residual `‖ρ(r) - I‖` of the twist-knot relator.
pub fn relator_residual(n: i64, a: &SL2Matrix, b: &SL2Matrix) -> Result<f64> {
    let pres = twist_presentation(n)?;
    let rho = WordEvaluator::new(&[a.clone(), b.clone()]);
    Ok(rho.eval(&pres.relators[0]).dist(&SL2Matrix::identity(a.prec())))
}

/// A representation of the knot group at `pt`: `ρ(a) = (m 1; 0 m⁻¹)` and
/// `ρ(b) = (m 0; t m⁻¹)`, where `t² - (2 - m² - m⁻²) t + 2 - z = 0` makes
/// `z = tr ρ(b a⁻¹ b⁻¹ a)`; the root of smaller relator residual is used.
pub fn representation(pt: &RepPoint) -> Result<(SL2Matrix, SL2Matrix)> {
    let prec = pt.m.prec();
    let one = ComplexAP::one(prec);
    let mi = pt.m.recip()?;
    let c = &(&one.mul_int(2) - &(&pt.m * &pt.m)) - &(&mi * &mi);
    let k = &one.mul_int(2) - &pt.z;
    let ts = quadratic_roots(&one, &(-&c), &k)?;
    let a = SL2Matrix::new(pt.m.clone(), one.clone(), ComplexAP::zero(prec), mi.clone());
    let mut best: Option<(f64, SL2Matrix)> = None;
    for t in ts {
        let b = SL2Matrix::new(pt.m.clone(), ComplexAP::zero(prec), t, mi.clone());
        let r = relator_residual(pt.n, &a, &b)?;
        if best.as_ref().is_none_or(|(br, _)| r < *br) {
            best = Some((r, b));
        }
    }
    let (_, b) = best.expect("two candidates");
    Ok((a, b))
}

/// Eigenvectors of a 2×2 matrix; empty for `±I`.
fn eigenvectors(a: &SL2Matrix) -> Vec<(ComplexAP, ComplexAP)> {
    let prec = a.prec();
    let tr = a.trace();
    let disc = (&(&tr * &tr) - &ComplexAP::from_int(prec, 4)).sqrt();
    let half = |x: ComplexAP| x.checked_div(&ComplexAP::from_int(prec, 2)).expect("2 != 0");
    let mut lams = vec![half(&tr + &disc)];
    if disc.abs_f64() > 1e-12 {
        lams.push(half(&tr - &disc));
    }
    let mut out = Vec::new();
    for l in lams {
        let v1 = (a.b.clone(), &l - &a.a);
        let v2 = (&l - &a.d, a.c.clone());
        let n1 = v1.0.abs_f64().max(v1.1.abs_f64());
        let n2 = v2.0.abs_f64().max(v2.1.abs_f64());
        let v = if n1 >= n2 { v1 } else { v2 };
        if v.0.abs_f64().max(v.1.abs_f64()) > 1e-14 {
            out.push(v);
        }
    }
    out
}

/// True iff `A` and `B` have no common eigenvector.
pub fn is_irreducible(a: &SL2Matrix, b: &SL2Matrix) -> bool {
    const TOL: f64 = 1e-8;
    let vs = eigenvectors(a);
    if vs.is_empty() {
        return false;
    }
    for (x, y) in vs {
        let bx = &(&b.a * &x) + &(&b.b * &y);
        let by = &(&b.c * &x) + &(&b.d * &y);
        let wedge = (&(&bx * &y) - &(&by * &x)).abs_f64();
        let nbv = bx.abs_f64().max(by.abs_f64());
        let nv = x.abs_f64().max(y.abs_f64());
        if wedge <= TOL * nbv * nv {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    fn c(re: f64, im: f64) -> ComplexAP {
        ComplexAP::from_f64(prec(), re, im)
    }

    #[test]
    fn f_for_small_n() {
        let want = &(&(&LaurentPoly::monomial(q(1), 2, 0) + &LaurentPoly::monomial(q(1), -2, 0)) - &LaurentPoly::z())
            + &LaurentPoly::one();
        assert_eq!(twist_f(1).unwrap(), want);
        // S_{-1} = -1, S_{-2} = -z, so S_n(S_n - S_{n-1}) = 1 - z
        let f = twist_f(-1).unwrap();
        assert_eq!(f.coeff(2, 0), 1);
        assert_eq!(f.coeff(2, 1), -1);
        assert_eq!(f.coeff(0, 2), 1);
        assert_eq!(f.coeff(0, 1), -1);
        assert_eq!(f.coeff(0, 0), 1);
        assert!(twist_f(0).is_err());
    }

    #[test]
    fn f_for_n2_matches_expansion() {
        // S_2 = z, S_1 = 1: S = z(z - 1) = z² - z
        let f = twist_f(2).unwrap();
        for dm in [2, -2] {
            assert_eq!(f.coeff(dm, 2), 1);
            assert_eq!(f.coeff(dm, 1), -1);
        }
        assert_eq!(f.coeff(0, 3), -1);
        assert_eq!(f.coeff(0, 2), 1);
        assert_eq!(f.coeff(0, 0), 1);
    }

    #[test]
    fn printed_e_for_n1() {
        let e = twist_e(1).unwrap();
        let v = e.eval(&c(1.0, 0.0), &c(1.0, 0.0)).unwrap();
        assert!(v.dist(&c(3.0, 0.0)) < 1e-18);
        assert_eq!(e, twist_longitude(1).unwrap());
    }

    #[test]
    fn e_for_n2_matches_expansion() {
        // S_2 = z, D = z - 1
        let e = twist_e(2).unwrap();
        assert_eq!(e.coeff(4, 3), -1);
        assert_eq!(e.coeff(4, 2), 2);
        assert_eq!(e.coeff(2, 2), -1);
        assert_eq!(e.coeff(2, 1), 3);
        assert_eq!(e.coeff(2, 0), -2);
        assert_eq!(e.coeff(0, 2), 1);
        assert_eq!(e.coeff(0, 1), -2);
        assert_eq!(e.coeff(0, 0), 1);
        let l = twist_longitude(2).unwrap();
        assert_eq!(l.coeff(2, 3), -1);
        assert_eq!(l.coeff(2, 2), 3);
        assert_eq!(l.coeff(2, 1), -2);
    }

    #[test]
    fn printed_matrices() {
        let pt = RepPoint {
            n: 1,
            m: c(1.0, 0.0),
            z: c(0.0, 0.0),
            residuals: (0.0, 0.0),
            irreducible: false,
            partner: None,
        };
        let (a, b) = rep_from_point(&pt).unwrap();
        let one = c(1.0, 0.0);
        assert!(a.det().dist(&one) < 1e-18 && b.det().dist(&one) < 1e-18);
        assert!(b.dist(&SL2Matrix::identity(prec())) < 1e-18);
        assert!(!is_irreducible(&a, &b));
        let pt = RepPoint {
            m: c(1.3, 0.2),
            z: c(0.7, -0.4),
            ..pt
        };
        let (a, b) = rep_from_point(&pt).unwrap();
        assert!(a.trace().dist(&(&pt.m + &pt.m.recip().unwrap())) < 1e-18);
        assert!(is_irreducible(&a, &b));
    }

    #[test]
    fn irreducibility_basics() {
        let id = SL2Matrix::identity(prec());
        assert!(!is_irreducible(&id, &id));
        let g = SL2Matrix::from_f64(prec(), [(2.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.5, 0.0)]);
        let h = SL2Matrix::from_f64(prec(), [(3.0, 0.0), (5.0, 0.0), (0.0, 0.0), (1.0 / 3.0, 0.0)]);
        assert!(!is_irreducible(&g, &h));
    }

    #[test]
    fn spec_validation() {
        assert!(TwistSurgerySpec::new(0, 6, 1).is_err());
        assert!(TwistSurgerySpec::new(1, 6, 3).is_err());
        assert!(TwistSurgerySpec::new(1, 7, 1).is_err());
        assert!(TwistSurgerySpec::allow_odd(1, 7, 1).unwrap().odd_p);
    }

    #[test]
    fn orbit_normalization() {
        let m = c(0.5, 0.1);
        let r = normalize_orbit(&m).unwrap();
        assert!(r.abs_f64() > 1.0);
        let u = c(0.6, -0.8);
        assert!(normalize_orbit(&u).unwrap().im_f64() > 0.0);
    }
}
