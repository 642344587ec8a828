use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::word::{concat, free_reduce, Presentation, Word, WordEvaluator};
use crate::error::{Error, Result};
use crate::sl2::SL2Matrix;

/// A finite ℤ-combination of freely reduced words.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GroupRingElem {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElem {
    pub fn zero() -> Self {
        GroupRingElem::default()
    }

    pub fn word(w: &[i32]) -> Self {
        let mut e = GroupRingElem::zero();
        e.add_term(w, 1);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, i64)>) -> Self {
        let mut e = GroupRingElem::zero();
        for (w, c) in terms {
            e.add_term(&w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: &[i32], c: i64) {
        if c == 0 {
            return;
        }
        let key = free_reduce(w);
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &i64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficients.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add(&self, o: &GroupRingElem) -> GroupRingElem {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w, *c);
        }
        out
    }

    pub fn scale(&self, k: i64) -> GroupRingElem {
        GroupRingElem::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c * k)))
    }

    pub fn mul(&self, o: &GroupRingElem) -> GroupRingElem {
        let mut out = GroupRingElem::zero();
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                out.add_term(&concat(&[u, v]), a * b);
            }
        }
        out
    }

    pub fn left_mul(&self, w: &[i32]) -> GroupRingElem {
        GroupRingElem::from_terms(self.terms.iter().map(|(u, c)| (concat(&[w, u]), *c)))
    }
}

/// `∂w/∂x_j` by the Fox rules `∂(uv) = ∂u + u ∂v`, `∂x_j = 1`, `∂x_j^{-1} = -x_j^{-1}`.
pub fn fox_derivative(word: &[i32], j: usize) -> GroupRingElem {
    let j = j as i32;
    let mut out = GroupRingElem::zero();
    let mut prefix: Word = Vec::new();
    for &g in word {
        if g == j {
            out.add_term(&prefix, 1);
        } else if g == -j {
            let mut p = prefix.clone();
            p.push(g);
            out.add_term(&p, -1);
        }
        prefix.push(g);
    }
    out
}

/// Entry `(i, j)` is `∂r_i/∂x_j` (generators 1-based, stored 0-based).
pub fn boundary2(pres: &Presentation) -> Vec<Vec<GroupRingElem>> {
    pres.relators
        .iter()
        .map(|r| (1..=pres.generators).map(|j| fox_derivative(r, j)).collect())
        .collect()
}

pub fn evaluate(e: &GroupRingElem, rho: &WordEvaluator) -> Vec<(i64, SL2Matrix)> {
    e.terms().map(|(w, c)| (*c, rho.eval(w))).collect()
}

/// The cellular chain complex of the universal cover: `∂₂` from Fox calculus and
/// `∂₃` supplied as data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStructure {
    pub presentation: Presentation,
    pub d2: Vec<Vec<GroupRingElem>>,
    pub d3: Vec<GroupRingElem>,
}

impl CellStructure {
    pub fn new(presentation: Presentation, d3: Vec<GroupRingElem>) -> Result<Self> {
        if !presentation.is_deficiency_zero() {
            return Err(Error::InvalidInput(format!(
                "{} generators but {} relators",
                presentation.generators,
                presentation.relators.len()
            )));
        }
        if d3.len() != presentation.relators.len() {
            return Err(Error::InvalidInput(format!(
                "d3 has {} entries for {} relators",
                d3.len(),
                presentation.relators.len()
            )));
        }
        let d2 = boundary2(&presentation);
        Ok(CellStructure { presentation, d2, d3 })
    }

    /// The 2-complex of a presentation of any deficiency, with no 3-cell.
    pub fn two_skeleton(presentation: Presentation) -> Self {
        let d2 = boundary2(&presentation);
        CellStructure {
            presentation,
            d2,
            d3: Vec::new(),
        }
    }

    /// `(∂₂∂₃)_j = Σ_i d3_i ∂r_i/∂x_j`, before applying any relations.
    pub fn d2_of_d3(&self) -> Vec<GroupRingElem> {
        (0..self.presentation.generators)
            .map(|j| {
                self.d3
                    .iter()
                    .zip(&self.d2)
                    .fold(GroupRingElem::zero(), |acc, (c, row)| acc.add(&c.mul(&row[j])))
            })
            .collect()
    }
}
