use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

use super::poly::UniPoly;
use crate::error::{Error, Result};
use crate::numeric::ComplexAP;

/// The two variables of a [`LaurentPoly`]. In the twist-knot setting the first
/// is `m` (or `u = m²` after halving) and the second is `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    M,
    Z,
}

/// A Laurent polynomial in two variables with rational coefficients, keyed by
/// `(deg_m, deg_z)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<(i64, i64), Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        LaurentPoly::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Rational::from(1))
    }

    pub fn monomial(c: Rational, dm: i64, dz: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((dm, dz), c);
        }
        LaurentPoly { terms }
    }

    pub fn m() -> Self {
        LaurentPoly::monomial(Rational::from(1), 1, 0)
    }

    pub fn z() -> Self {
        LaurentPoly::monomial(Rational::from(1), 0, 1)
    }

    /// Embeds a univariate polynomial in the chosen variable.
    pub fn from_uni(p: &UniPoly, var: Var) -> Self {
        let mut out = LaurentPoly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            let (dm, dz) = match var {
                Var::M => (k as i64, 0),
                Var::Z => (0, k as i64),
            };
            out.add_term((dm, dz), c.clone());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, dm: i64, dz: i64) -> Rational {
        self.terms.get(&(dm, dz)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (i64, i64), c: Rational) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(key).or_default();
        *e += c;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = LaurentPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, Rational::from(v * c));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplies by `m^a z^b`.
    pub fn shift(&self, a: i64, b: i64) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| ((i + a, j + b), c.clone()))
                .collect(),
        }
    }

    /// Smallest exponents of each variable, `(0, 0)` for the zero polynomial.
    pub fn min_exponents(&self) -> (i64, i64) {
        let a = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        (a, b)
    }

    pub fn max_exponents(&self) -> (i64, i64) {
        let a = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let b = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        (a, b)
    }

    /// Shifts into an ordinary polynomial; returns it with the applied shift.
    pub fn normalize(&self) -> (LaurentPoly, (i64, i64)) {
        let (a, b) = self.min_exponents();
        (self.shift(-a, -b), (-a, -b))
    }

    /// Replaces `m^{2k}` by `u^k`; fails if an odd power of `m` occurs.
    pub fn halve_m(&self) -> Result<Self> {
        let mut out = LaurentPoly::zero();
        for ((i, j), c) in &self.terms {
            if i % 2 != 0 {
                return Err(Error::InvalidInput("odd power of m".into()));
            }
            out.add_term((i / 2, *j), c.clone());
        }
        Ok(out)
    }

    /// Substitutes `m ↦ m^{-1}`.
    pub fn invert_m(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|((i, j), c)| ((-i, *j), c.clone())).collect(),
        }
    }

    pub fn eval(&self, m: &ComplexAP, z: &ComplexAP) -> Result<ComplexAP> {
        let prec = m.prec().max(z.prec());
        let mut acc = ComplexAP::zero(prec);
        let mut mcache: BTreeMap<i64, ComplexAP> = BTreeMap::new();
        let mut zcache: BTreeMap<i64, ComplexAP> = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            if !mcache.contains_key(i) {
                mcache.insert(*i, m.powi(*i)?);
            }
            if !zcache.contains_key(j) {
                zcache.insert(*j, z.powi(*j)?);
            }
            let t = &mcache[i] * &zcache[j];
            acc += t * ComplexAP::from_rational(prec, c);
        }
        Ok(acc)
    }

    /// `Σ |c| |m|^i |z|^j`, the scale against which residuals are judged.
    pub fn eval_abs(&self, m: &ComplexAP, z: &ComplexAP) -> f64 {
        let (rm, rz) = (m.abs_f64(), z.abs_f64());
        self.terms
            .iter()
            .map(|((i, j), c)| c.to_f64().abs() * rm.powi(*i as i32) * rz.powi(*j as i32))
            .sum()
    }

    /// Partial derivative.
    pub fn diff(&self, var: Var) -> Self {
        let mut out = LaurentPoly::zero();
        for ((i, j), c) in &self.terms {
            match var {
                Var::M => out.add_term((i - 1, *j), Rational::from(c * *i)),
                Var::Z => out.add_term((*i, j - 1), Rational::from(c * *j)),
            }
        }
        out
    }

    /// Coefficients in `var` as polynomials in the other variable. Both
    /// exponent ranges must be nonnegative.
    pub fn coefficients_in(&self, var: Var) -> Result<Vec<UniPoly>> {
        let (a, b) = self.min_exponents();
        if a < 0 || b < 0 {
            return Err(Error::InvalidInput("negative exponent; normalize first".into()));
        }
        let (ma, mb) = self.max_exponents();
        let (n_main, n_other) = match var {
            Var::M => (ma, mb),
            Var::Z => (mb, ma),
        };
        let mut rows = vec![vec![Rational::new(); n_other as usize + 1]; n_main as usize + 1];
        for ((i, j), c) in &self.terms {
            let (k, l) = match var {
                Var::M => (*i, *j),
                Var::Z => (*j, *i),
            };
            rows[k as usize][l as usize] = c.clone();
        }
        Ok(rows.into_iter().map(UniPoly::new).collect())
    }

    /// Restriction to a polynomial in `var` alone; fails if the other variable occurs.
    pub fn to_uni(&self, var: Var) -> Result<UniPoly> {
        let other = match var {
            Var::M => Var::Z,
            Var::Z => Var::M,
        };
        let cols = self.coefficients_in(other)?;
        if cols.len() > 1 {
            return Err(Error::InvalidInput("polynomial involves both variables".into()));
        }
        Ok(cols.into_iter().next().unwrap_or_default())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((i, j), c)| format!("{c}*m^{i}*z^{j}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, Rational::from(-c));
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &rhs.terms {
                out.add_term((i + k, j + l), Rational::from(a * b));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&Rational::from(-1))
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// Sylvester resultant of `f` and `g` with respect to `eliminate`, as a
/// polynomial in the remaining variable. Laurent inputs are first shifted into
/// ordinary polynomials, which only adds or removes factors of the variables.
pub fn resultant(f: &LaurentPoly, g: &LaurentPoly, eliminate: Var) -> Result<UniPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::InvalidInput("resultant of a zero polynomial".into()));
    }
    let fc = f.normalize().0.coefficients_in(eliminate)?;
    let gc = g.normalize().0.coefficients_in(eliminate)?;
    let (m, n) = (fc.len() - 1, gc.len() - 1);
    if m == 0 && n == 0 {
        return Err(Error::InvalidInput(
            "neither polynomial involves the eliminated variable".into(),
        ));
    }
    if m == 0 {
        return Ok(fc[0].pow(n as u32));
    }
    if n == 0 {
        return Ok(gc[0].pow(m as u32));
    }
    let size = m + n;
    let mut mat = vec![vec![UniPoly::zero(); size]; size];
    // Rows hold coefficients from the highest degree down.
    for i in 0..n {
        for (k, c) in fc.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in gc.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

/// Fraction-free determinant over ℚ[x].
pub fn bareiss_det(mut a: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = a.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut sign = false;
    let mut prev = UniPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -&det
    } else {
        det
    }
}
