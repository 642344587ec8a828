//! Bundled inputs: twist-knot presentations, a Seifert spec list and, through
//! [`ManifoldInput::m6_fig8`], the homology data of 6/1 surgery on the figure-eight knot.

use serde::Deserialize;

use crate::error::Result;
use crate::homology::{Presentation, Word};
use crate::seifert::SeifertSpec;

pub use crate::manifest::ManifoldInput;

const TWIST_KNOTS: &str = include_str!("../data/twist_knots.json");
const SEIFERT_SPECS: &str = include_str!("../data/seifert_specs.json");

#[derive(Debug, Clone, Deserialize)]
struct TwistEntry {
    n: i64,
    generators: usize,
    relators: Vec<Word>,
}

/// `(n, ⟨a, b | w^n a w^{-n} b^{-1}⟩)` for `n = 1, -1, 2, -2`.
pub fn twist_knots() -> Vec<(i64, Presentation)> {
    let entries: Vec<TwistEntry> = serde_json::from_str(TWIST_KNOTS).expect("bundled data parses");
    entries
        .into_iter()
        .map(|e| {
            (
                e.n,
                Presentation::new(e.generators, e.relators).expect("bundled data is valid"),
            )
        })
        .collect()
}

pub fn seifert_specs() -> Result<Vec<SeifertSpec>> {
    let raw: Vec<[(i64, i64); 3]> = serde_json::from_str(SEIFERT_SPECS).expect("bundled data parses");
    raw.into_iter().map(SeifertSpec::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::twist_presentation;

    #[test]
    fn twist_data_matches_generator() {
        let t = twist_knots();
        assert_eq!(t.len(), 4);
        for (n, p) in t {
            assert_eq!(p, twist_presentation(n).unwrap());
        }
    }

    #[test]
    fn seifert_list() {
        let s = seifert_specs().unwrap();
        assert_eq!(s.iter().filter(|x| x.fibers.iter().all(|f| f.1 == 2)).count(), 20);
    }
}
