//! Exact ℚ/ℤ Chern-Simons values for Seifert manifolds with three singular fibres.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::algebra::{ext_gcd_pair, QmodZ};
use crate::error::{Error, Result};

/// `M(0; (o, 0); (p_1, q_1), (p_2, q_2), (p_3, q_3))` with Bézout data `p s - q r = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertSpec {
    pub fibers: [(i64, i64); 3],
    pub bezout: [(i64, i64); 3],
}

impl SeifertSpec {
    pub fn new(fibers: [(i64, i64); 3]) -> Result<Self> {
        let mut bezout = [(0, 0); 3];
        for (k, &(p, q)) in fibers.iter().enumerate() {
            if p < 2 {
                return Err(Error::InvalidInput(format!("fibre multiplicity {p} < 2")));
            }
            bezout[k] = ext_gcd_pair(p, q)?;
        }
        Ok(SeifertSpec { fibers, bezout })
    }

    /// Uses caller-supplied `(s_k, r_k)`, which must satisfy `p s - q r = 1`.
    pub fn with_bezout(fibers: [(i64, i64); 3], bezout: [(i64, i64); 3]) -> Result<Self> {
        for (&(p, q), &(s, r)) in fibers.iter().zip(&bezout) {
            if p < 2 {
                return Err(Error::InvalidInput(format!("fibre multiplicity {p} < 2")));
            }
            if Integer::from(p) * s - Integer::from(q) * r != 1 {
                return Err(Error::InvalidInput(format!(
                    "({s}, {r}) is not a Bézout pair for ({p}, {q})"
                )));
            }
        }
        Ok(SeifertSpec { fibers, bezout })
    }

    /// Parses `"p1/q1,p2/q2,p3/q3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!("expected three fibres, got {s:?}")));
        }
        let mut fibers = [(0, 0); 3];
        for (k, part) in parts.iter().enumerate() {
            let (p, q) = part
                .split_once('/')
                .ok_or_else(|| Error::InvalidInput(format!("bad fibre {part:?}")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidInput(format!("bad integer {x:?}")))
            };
            fibers[k] = (parse(p)?, parse(q)?);
        }
        SeifertSpec::new(fibers)
    }

    pub fn r(&self, k: usize) -> i64 {
        self.bezout[k].1
    }
}

/// Parity class of the allowed `j` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// A label `(n_1, n_2, n_3, λ)` with `n_k = (j_k + 1)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertRepLabel {
    pub j: [i64; 3],
    /// `true` for the `λ = 1/2` branch.
    pub lambda_half: bool,
}

impl SeifertRepLabel {
    pub fn n(&self, k: usize) -> Rational {
        Rational::from((self.j[k] + 1, 2))
    }
}

fn parity_class(q: i64, lambda_half: bool) -> Parity {
    if lambda_half && q % 2 != 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn js(p: i64, parity: Parity) -> impl Iterator<Item = i64> {
    let start = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    (start..=p - 2).step_by(2)
}

/// Both branches of the label set, `λ = 0` first.
pub fn enumerate_labels(spec: &SeifertSpec) -> Vec<SeifertRepLabel> {
    let mut out = Vec::new();
    for lambda_half in [false, true] {
        let cls: Vec<Parity> = spec.fibers.iter().map(|&(_, q)| parity_class(q, lambda_half)).collect();
        for j1 in js(spec.fibers[0].0, cls[0]) {
            for j2 in js(spec.fibers[1].0, cls[1]) {
                for j3 in js(spec.fibers[2].0, cls[2]) {
                    out.push(SeifertRepLabel {
                        j: [j1, j2, j3],
                        lambda_half,
                    });
                }
            }
        }
    }
    out
}

/// `4 Σ r_k n_k² / p_k` as an exact rational (not reduced).
pub fn four_cs_value(label: &SeifertRepLabel, spec: &SeifertSpec) -> Rational {
    let mut acc = Rational::new();
    for k in 0..3 {
        let n = label.n(k);
        let term = Rational::from(n.square_ref()) * Integer::from(spec.r(k)) / Integer::from(spec.fibers[k].0);
        acc += term;
    }
    acc * Integer::from(4)
}

pub fn four_cs(label: &SeifertRepLabel, spec: &SeifertSpec) -> QmodZ {
    QmodZ::new(four_cs_value(label, spec))
}

/// `Σ 4CS` over all labels, unreduced.
pub fn sum_four_cs(spec: &SeifertSpec) -> Rational {
    enumerate_labels(spec)
        .iter()
        .map(|l| four_cs_value(l, spec))
        .fold(Rational::new(), |a, b| a + b)
}

/// `24 Σ CS = 6 Σ 4CS` in ℚ/ℤ.
pub fn reciprocity_sum_seifert(spec: &SeifertSpec) -> QmodZ {
    QmodZ::new(sum_four_cs(spec) * Integer::from(6))
}

/// `(4/3) ∏ (p_j - 1)/2 · Σ r_k (p_k + 1)/2`, unreduced; requires odd `p_k`, even `q_k`.
pub fn closed_form_value(spec: &SeifertSpec) -> Result<Rational> {
    if spec.fibers.iter().any(|&(p, q)| p % 2 == 0 || q % 2 != 0) {
        return Err(Error::InvalidInput(
            "closed form needs every p_k odd and every q_k even".into(),
        ));
    }
    let prod: i64 = spec.fibers.iter().map(|&(p, _)| (p - 1) / 2).product();
    let sum: i64 = (0..3).map(|k| spec.r(k) * (spec.fibers[k].0 + 1) / 2).sum();
    Ok(Rational::from((4, 3)) * Integer::from(prod) * Integer::from(sum))
}

pub fn closed_form_odd_even(spec: &SeifertSpec) -> Result<QmodZ> {
    Ok(QmodZ::new(closed_form_value(spec)?))
}

/// Every value lies in `{0, 1/2}`, so `24 Σ CS ≡ 0`.
pub fn torus_bundle_check(cs_values: &[QmodZ]) -> Result<bool> {
    let half = QmodZ::from_ratio(1, 2);
    for v in cs_values {
        if !v.is_zero() && *v != half {
            return Err(Error::InvalidInput(format!("torus-bundle value {v} not in (1/2)Z")));
        }
    }
    Ok(true)
}
