use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::{roots, UniPoly};
use crate::error::{Error, Result};
use crate::homology::Word;
use crate::numeric::{ComplexAP, Precision};

/// The two-bridge knot `b(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoBridgeSpec {
    pub p: i64,
    pub q: i64,
}

impl TwoBridgeSpec {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p < 3 || p % 2 == 0 {
            return Err(Error::InvalidInput(format!("b({p}, {q}) needs odd p >= 3")));
        }
        if q <= 0 || q >= p || Integer::from(p).gcd(&Integer::from(q)) != 1 {
            return Err(Error::InvalidInput(format!("b({p}, {q}) needs 0 < q < p coprime")));
        }
        Ok(TwoBridgeSpec { p, q })
    }

    /// Parses `"p/q"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| Error::InvalidInput(format!("expected p/q, got {s:?}")))?;
        let int = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidInput(format!("bad integer {x:?}")))
        };
        TwoBridgeSpec::new(int(a)?, int(b)?)
    }
}

/// `W = x^{ε_1} y^{ε_2} x^{ε_3} ⋯` of length `p - 1`, `ε_i = (-1)^{⌊iq/p⌋}`, with `x = 1`, `y = 2`.
pub fn riley_word(spec: &TwoBridgeSpec) -> Word {
    (1..spec.p)
        .map(|i| {
            let e = if (i * spec.q / spec.p) % 2 == 0 { 1 } else { -1 };
            let g = if i % 2 == 1 { 1 } else { 2 };
            e * g
        })
        .collect()
}

type PolyMat = [UniPoly; 4];

fn pm_mul(a: &PolyMat, b: &PolyMat) -> PolyMat {
    [
        &(&a[0] * &b[0]) + &(&a[1] * &b[2]),
        &(&a[0] * &b[1]) + &(&a[1] * &b[3]),
        &(&a[2] * &b[0]) + &(&a[3] * &b[2]),
        &(&a[2] * &b[1]) + &(&a[3] * &b[3]),
    ]
}

fn letter(g: i32) -> PolyMat {
    let c = |k: i64| UniPoly::from_ints(&[k]);
    let zeta = |k: i64| UniPoly::from_ints(&[0, k]);
    match g {
        1 => [c(1), c(1), c(0), c(1)],
        -1 => [c(1), c(-1), c(0), c(1)],
        2 => [c(1), c(0), zeta(1), c(1)],
        -2 => [c(1), c(0), zeta(-1), c(1)],
        _ => unreachable!("two generators"),
    }
}

/// Riley's polynomial: the primitive gcd of the entries of `ρ(W)ρ(x) - ρ(y)ρ(W)`
/// with `ρ(x) = (1 1; 0 1)` and `ρ(y) = (1 0; ζ 1)`.
pub fn riley_polynomial(spec: &TwoBridgeSpec) -> Result<UniPoly> {
    let w = riley_word(spec);
    let one = UniPoly::one();
    let mut rw: PolyMat = [one.clone(), UniPoly::zero(), UniPoly::zero(), one];
    for &g in &w {
        rw = pm_mul(&rw, &letter(g));
    }
    let lhs = pm_mul(&rw, &letter(1));
    let rhs = pm_mul(&letter(2), &rw);
    let mut g = UniPoly::zero();
    for k in 0..4 {
        let d = &lhs[k] - &rhs[k];
        if !d.is_zero() {
            g = if g.is_zero() { d } else { UniPoly::gcd(&g, &d) };
        }
    }
    if g.degree().unwrap_or(0) == 0 {
        return Err(Error::InvalidInput(format!(
            "b({}, {}) gives no parabolic representations",
            spec.p, spec.q
        )));
    }
    Ok(g.primitive())
}

pub fn riley_roots(spec: &TwoBridgeSpec, prec: Precision) -> Result<Vec<ComplexAP>> {
    let f = riley_polynomial(spec)?;
    let mut out: Vec<ComplexAP> = roots(&f, prec)?.into_iter().map(|r| r.value).collect();
    out.sort_by(|a, b| {
        (a.re_f64(), a.im_f64())
            .partial_cmp(&(b.re_f64(), b.im_f64()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}
