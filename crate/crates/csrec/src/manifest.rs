//! JSON input for the homology pairing: a deficiency-zero presentation, the
//! `∂₃` column and a list of representations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{parse_word, CellStructure, GroupRingElem, Presentation, Word, WordEvaluator};
use crate::numeric::{ComplexAP, Precision};
use crate::sl2::SL2Matrix;

/// A word as an array of signed generator indices; on input the letter form
/// `"aBAb"` is accepted too.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct JsonWord(pub Word);

impl<'de> Deserialize<'de> for JsonWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Indices(Vec<i32>),
            Letters(String),
        }
        match Repr::deserialize(d)? {
            Repr::Indices(w) => Ok(JsonWord(w)),
            Repr::Letters(s) => parse_word(&s).map(JsonWord).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordTerm {
    pub word: JsonWord,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepInput {
    pub id: String,
    /// Images of the generators, in order.
    pub matrices: Vec<SL2Matrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldInput {
    pub name: String,
    pub generators: usize,
    pub relators: Vec<JsonWord>,
    /// One group-ring element per relator.
    pub d3: Vec<Vec<WordTerm>>,
    #[serde(default)]
    pub representations: Vec<RepInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<SL2Matrix>,
}

const M6_FIG8: &str = include_str!("../data/m6_fig8.json");

impl ManifoldInput {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("manifold JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifold input serializes")
    }

    /// The 6/1 surgery on the figure-eight knot with its six irreducible
    /// representations, entries given to 42 digits.
    pub fn m6_fig8() -> Self {
        ManifoldInput::from_json(M6_FIG8).expect("bundled data parses")
    }

    pub fn presentation(&self) -> Result<Presentation> {
        Presentation::new(self.generators, self.relators.iter().map(|r| r.0.clone()).collect())
    }

    pub fn cell_structure(&self) -> Result<CellStructure> {
        let d3 = self
            .d3
            .iter()
            .map(|elem| {
                let terms = elem.iter().map(|t| (t.word.0.clone(), t.coeff));
                GroupRingElem::from_terms(terms)
            })
            .collect();
        CellStructure::new(self.presentation()?, d3)
    }

    pub fn from_cells(name: &str, cells: &CellStructure) -> Self {
        ManifoldInput {
            name: name.to_string(),
            generators: cells.presentation.generators,
            relators: cells
                .presentation
                .relators
                .iter()
                .map(|r| JsonWord(r.clone()))
                .collect(),
            d3: cells
                .d3
                .iter()
                .map(|e| {
                    e.terms()
                        .map(|(w, c)| WordTerm {
                            word: JsonWord(w.clone()),
                            coeff: *c,
                        })
                        .collect()
                })
                .collect(),
            representations: Vec::new(),
            v0: None,
        }
    }

    /// Checks every matrix has determinant one and every relator maps to the identity
    /// within `tol`, returning the largest relator residual.
    pub fn validate_representations(&self, tol: f64) -> Result<f64> {
        let pres = self.presentation()?;
        let mut worst: f64 = 0.0;
        for rep in &self.representations {
            if rep.matrices.len() != self.generators {
                return Err(Error::InvalidInput(format!(
                    "{}: {} matrices for {} generators",
                    rep.id,
                    rep.matrices.len(),
                    self.generators
                )));
            }
            for g in &rep.matrices {
                let err = (&g.det() - &ComplexAP::one(g.prec())).abs_f64();
                if err > tol {
                    return Err(Error::InvalidInput(format!("{}: det off by {err:e}", rep.id)));
                }
            }
            let res = relator_residual(&pres, &rep.matrices);
            if res > tol {
                return Err(Error::InvalidInput(format!("{}: relator residual {res:e}", rep.id)));
            }
            worst = worst.max(res);
        }
        Ok(worst)
    }

    pub fn rep_matrices(&self, prec: Precision) -> Vec<(String, Vec<SL2Matrix>)> {
        self.representations
            .iter()
            .map(|r| (r.id.clone(), r.matrices.iter().map(|m| m.with_prec(prec)).collect()))
            .collect()
    }
}

/// `max_i ‖ρ(r_i) - I‖`.
pub fn relator_residual(pres: &Presentation, gens: &[SL2Matrix]) -> f64 {
    let rho = WordEvaluator::new(gens);
    let id = SL2Matrix::identity(rho.generators()[0].prec());
    pres.relators.iter().map(|r| rho.eval(r).dist(&id)).fold(0.0, f64::max)
}
