use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Precision;
use crate::sl2::SL2Matrix;

/// Letters are signed 1-based generator indices: `k` is `x_k`, `-k` its inverse.
pub type Word = Vec<i32>;

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &g in w {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|g| -g).collect()
}

pub fn concat(parts: &[&[i32]]) -> Word {
    let mut out = Vec::new();
    for p in parts {
        out.extend_from_slice(p);
    }
    free_reduce(&out)
}

pub fn power(w: &[i32], n: i64) -> Word {
    let base = if n < 0 { inverse(w) } else { w.to_vec() };
    let mut out = Vec::new();
    for _ in 0..n.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    free_reduce(&out)
}

/// Exponent sum of generator `gen` in `w`.
pub fn exponent_sum(w: &[i32], gen: i32) -> i64 {
    w.iter()
        .map(|&g| {
            if g == gen {
                1
            } else if g == -gen {
                -1
            } else {
                0
            }
        })
        .sum()
}

/// `⟨x_1, …, x_g | r_1, …, r_k⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if r.is_empty() {
                return Err(Error::InvalidInput("empty relator".into()));
            }
            if let Some(g) = r.iter().find(|g| **g == 0 || g.unsigned_abs() as usize > generators) {
                return Err(Error::InvalidInput(format!("letter {g} out of range")));
            }
        }
        Ok(Presentation {
            generators,
            relators: relators.iter().map(|r| free_reduce(r)).collect(),
        })
    }

    pub fn is_deficiency_zero(&self) -> bool {
        self.relators.len() == self.generators
    }
}

/// `w = b a^{-1} b^{-1} a` with `a = x_1`, `b = x_2`.
pub fn twist_w() -> Word {
    vec![2, -1, -2, 1]
}

/// The relator `w^n a w^{-n} b^{-1}` of `⟨a, b | w^n a = b w^n⟩`.
pub fn twist_relator(n: i64) -> Word {
    let wn = power(&twist_w(), n);
    concat(&[&wn, &[1], &inverse(&wn), &[-2]])
}

pub fn twist_presentation(n: i64) -> Result<Presentation> {
    if n == 0 {
        return Err(Error::InvalidInput("twist knot needs n != 0".into()));
    }
    Presentation::new(2, vec![twist_relator(n)])
}

/// Evaluates words under an assignment of matrices to generators, caching
/// inverses.
pub struct WordEvaluator {
    gens: Vec<SL2Matrix>,
    invs: Vec<SL2Matrix>,
    prec: Precision,
}

impl WordEvaluator {
    pub fn new(gens: &[SL2Matrix]) -> Self {
        let prec = gens.iter().map(|g| g.prec()).max().unwrap_or_default();
        WordEvaluator {
            gens: gens.to_vec(),
            invs: gens.iter().map(|g| g.inv()).collect(),
            prec,
        }
    }

    pub fn generators(&self) -> &[SL2Matrix] {
        &self.gens
    }

    pub fn letter(&self, g: i32) -> &SL2Matrix {
        let k = g.unsigned_abs() as usize - 1;
        if g > 0 {
            &self.gens[k]
        } else {
            &self.invs[k]
        }
    }

    pub fn eval(&self, w: &[i32]) -> SL2Matrix {
        let mut acc = SL2Matrix::identity(self.prec);
        for &g in w {
            acc = acc.mul(self.letter(g));
        }
        acc
    }

    /// All prefix products `ρ(P_0) = I, ρ(P_1), …, ρ(P_n)` of `w`, left-multiplied by `start`.
    pub fn prefixes(&self, start: &SL2Matrix, w: &[i32]) -> Vec<SL2Matrix> {
        let mut out = Vec::with_capacity(w.len() + 1);
        let mut acc = start.clone();
        out.push(acc.clone());
        for &g in w {
            acc = acc.mul(self.letter(g));
            out.push(acc.clone());
        }
        out
    }
}

/// Reads a word such as `"aBAb"` (capitals are inverses) over the alphabet `a, b, c, …`.
pub fn parse_word(s: &str) -> Result<Word> {
    s.chars()
        .map(|ch| {
            if ch.is_ascii_lowercase() {
                Ok((ch as u8 - b'a' + 1) as i32)
            } else if ch.is_ascii_uppercase() {
                Ok(-((ch as u8 - b'A' + 1) as i32))
            } else {
                Err(Error::InvalidInput(format!("bad letter {ch:?}")))
            }
        })
        .collect()
}

pub fn format_word(w: &[i32]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&g| {
            let base = b'a' + (g.unsigned_abs() as u8 - 1);
            if g > 0 {
                base as char
            } else {
                base.to_ascii_uppercase() as char
            }
        })
        .collect()
}

/// Word-keyed counts, used to compare formal sums.
pub fn tally(words: impl IntoIterator<Item = (Word, i64)>) -> BTreeMap<Word, i64> {
    let mut out = BTreeMap::new();
    for (w, c) in words {
        *out.entry(w).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}
