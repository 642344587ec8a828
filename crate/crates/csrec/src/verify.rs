//! Reciprocity checks across methods, each scaled into the common `24 Σ CS mod 1` frame.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::algebra::QmodZ;
use crate::error::{Error, Result};
use crate::homology::{cs_doubled, PairingOptions};
use crate::manifest::ManifoldInput;
use crate::numeric::{pi, ComplexAP, Precision};
use crate::saddle::{cs_terms, SaddlePoint};
use crate::seifert::{enumerate_labels, four_cs, sum_four_cs, SeifertSpec};
use crate::sl2::SL2Matrix;

/// Significant digits in report strings.
pub const REPORT_DIGITS: usize = 20;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Saddle,
    Seifert,
    Homology,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: String,
    /// The method's per-representation quantity, see [`VerificationReport::quantity`].
    pub re: String,
    pub im: String,
    pub diagnostics: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub id: String,
    pub error: String,
    pub numerical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub manifold: String,
    pub method: Method,
    /// `CS`, `4CS` or `2CS`.
    pub quantity: String,
    pub rows: Vec<ReportRow>,
    pub failures: Vec<Failure>,
    pub sum_re: String,
    pub sum_im: String,
    /// The sum times the method's factor, i.e. `24 Σ CS`.
    pub scale: u32,
    pub scaled_re: String,
    pub scaled_im: String,
    /// Nearest integer to the real part of the scaled sum.
    pub residue: String,
    pub distance: f64,
    pub imag: f64,
    pub tolerance: f64,
    /// `None` for exact methods.
    pub digits: Option<u32>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("report JSON: {e}")))
    }

    pub fn has_numerical_failure(&self) -> bool {
        self.failures.iter().any(|f| f.numerical)
    }
}

fn dec(x: &Float) -> String {
    crate::numeric::float_to_decimal(x, REPORT_DIGITS)
}

/// Real distance to the nearest integer, the integer itself, and `|Im|`.
fn distance_cz(x: &ComplexAP) -> (f64, String, f64) {
    let re = x.re();
    let k = Float::with_val(re.prec(), re.round_ref());
    let d = Float::with_val(re.prec(), re - &k).abs().to_f64();
    let residue = k.to_integer().map(|i| i.to_string()).unwrap_or_else(|| "nan".into());
    (d, residue, x.im_f64().abs())
}

#[allow(clippy::too_many_arguments)]
fn numeric_report(
    manifold: String,
    method: Method,
    quantity: &str,
    rows: Vec<ReportRow>,
    failures: Vec<Failure>,
    sum: &ComplexAP,
    scale: u32,
    tol: f64,
    prec: Precision,
) -> VerificationReport {
    let scaled = sum.mul_int(scale as i64);
    let (distance, residue, imag) = distance_cz(&scaled);
    let pass = failures.is_empty() && distance < tol && imag < tol;
    VerificationReport {
        manifold,
        method,
        quantity: quantity.into(),
        rows,
        failures,
        sum_re: dec(sum.re()),
        sum_im: dec(sum.im()),
        scale,
        scaled_re: dec(scaled.re()),
        scaled_im: dec(scaled.im()),
        residue,
        distance,
        imag,
        tolerance: tol,
        digits: Some(prec.digits()),
        pass,
    }
}

fn cs_of_t(t: &ComplexAP, prec: Precision) -> ComplexAP {
    let four_pi2 = Float::with_val(prec.bits(), pi(prec).square_ref()) * 4u32;
    t.scale(&(Float::with_val(prec.bits(), 1) / four_pi2))
}

fn saddle_row(i: usize, s: &SaddlePoint, prec: Precision) -> ReportRow {
    let cs = cs_of_t(&s.t, prec);
    let mut diag = BTreeMap::new();
    diag.insert("z".into(), s.z.to_string_digits(REPORT_DIGITS));
    diag.insert("w".into(), s.w.to_string_digits(REPORT_DIGITS));
    diag.insert("c".into(), s.c.to_string());
    diag.insert("d".into(), s.d.to_string());
    diag.insert("T".into(), s.t.to_string_digits(REPORT_DIGITS));
    diag.insert("residual".into(), format!("{:.3e}", s.residual.0.max(s.residual.1)));
    ReportRow {
        id: format!("s{}", i + 1),
        re: dec(cs.re()),
        im: dec(cs.im()),
        diagnostics: diag,
    }
}

/// `24 Σ CS = (6/π²) Σ T` over the critical points for `M_{p/1}` of the figure-eight knot.
pub fn check_fig8(p: i64, prec: Precision, tol: f64) -> Result<VerificationReport> {
    let terms = cs_terms(p, prec)?;
    let rows = terms.iter().enumerate().map(|(i, s)| saddle_row(i, s, prec)).collect();
    let mut sum = ComplexAP::zero(prec);
    for s in &terms {
        sum += cs_of_t(&s.t, prec);
    }
    Ok(numeric_report(
        format!("figure-eight {p}/1 surgery"),
        Method::Saddle,
        "CS",
        rows,
        Vec::new(),
        &sum,
        24,
        tol,
        prec,
    ))
}

fn exact_report(manifold: String, rows: Vec<ReportRow>, sum: rug::Rational, scale: u32) -> VerificationReport {
    let scaled = rug::Rational::from(&sum * Integer::from(scale));
    let red = QmodZ::new(scaled.clone());
    let dist = red.distance_to_zero();
    let (floor, _) = scaled.clone().fract_floor(Integer::new());
    let residue = if red.is_zero() {
        scaled.numer().to_string()
    } else {
        floor.to_string()
    };
    VerificationReport {
        manifold,
        method: Method::Seifert,
        quantity: "4CS".into(),
        rows,
        failures: Vec::new(),
        sum_re: sum.to_string(),
        sum_im: "0".into(),
        scale,
        scaled_re: scaled.to_string(),
        scaled_im: "0".into(),
        residue,
        distance: dist.to_f64(),
        imag: 0.0,
        tolerance: 0.0,
        digits: None,
        pass: red.is_zero(),
    }
}

/// Exact `6 Σ 4CS` in ℚ/ℤ; passes only on exact zero.
pub fn check_seifert(spec: &SeifertSpec) -> VerificationReport {
    let rows = enumerate_labels(spec)
        .iter()
        .map(|l| {
            let mut diag = BTreeMap::new();
            diag.insert("j".into(), format!("{:?}", l.j));
            diag.insert("lambda".into(), if l.lambda_half { "1/2" } else { "0" }.into());
            ReportRow {
                id: format!(
                    "({}, {}, {}; {})",
                    l.j[0],
                    l.j[1],
                    l.j[2],
                    if l.lambda_half { "1/2" } else { "0" }
                ),
                re: four_cs(l, spec).to_string(),
                im: "0".into(),
                diagnostics: diag,
            }
        })
        .collect();
    let f = spec.fibers;
    let name = format!(
        "M(0; ({}, {}), ({}, {}), ({}, {}))",
        f[0].0, f[0].1, f[1].0, f[1].1, f[2].0, f[2].1
    );
    exact_report(name, rows, sum_four_cs(spec), 6)
}

/// Torus-bundle values in `½ℤ`: `24 Σ CS` vanishes exactly.
pub fn check_torus_bundle(name: &str, cs_values: &[QmodZ]) -> Result<VerificationReport> {
    crate::seifert::torus_bundle_check(cs_values)?;
    let rows = cs_values
        .iter()
        .enumerate()
        .map(|(i, v)| ReportRow {
            id: format!("r{}", i + 1),
            re: v.to_string(),
            im: "0".into(),
            diagnostics: BTreeMap::new(),
        })
        .collect();
    let sum = cs_values.iter().fold(rug::Rational::new(), |a, v| a + v.value());
    let mut r = exact_report(name.into(), rows, sum, 24);
    r.quantity = "CS".into();
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct HomologyOptions {
    pub tol: f64,
    pub prec: Precision,
    pub seed: u64,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        HomologyOptions {
            tol: DEFAULT_TOL,
            prec: Precision::default(),
            seed: crate::homology::seed_from_env(),
        }
    }
}

/// Per-representation `2CS`, in input order.
pub fn homology_values(
    input: &ManifoldInput,
    opts: &HomologyOptions,
) -> Result<Vec<(String, Result<crate::homology::PairingOutcome>)>> {
    let cells = input.cell_structure()?;
    input.validate_representations(1e-10)?;
    let pair_opts = PairingOptions {
        seed: opts.seed,
        v0: input.v0.clone(),
        prec: opts.prec,
        ..PairingOptions::default()
    };
    let reps: Vec<(String, Vec<SL2Matrix>)> = input.rep_matrices(opts.prec);
    let out: Vec<_> = reps
        .par_iter()
        .map(|(id, gens)| (id.clone(), cs_doubled(&cells, gens, &pair_opts)))
        .collect();
    for (_, r) in &out {
        if let Err(e @ Error::ChainCheck(_)) = r {
            return Err(e.clone());
        }
    }
    Ok(out)
}

/// `24 Σ CS = 12 Σ 2CS` from the extended-Bloch-group pairing.
pub fn check_homology(input: &ManifoldInput, opts: &HomologyOptions) -> Result<VerificationReport> {
    let vals = homology_values(input, opts)?;
    let prec = opts.prec;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut sum = ComplexAP::zero(prec);
    for (id, r) in vals {
        match r {
            Ok(o) => {
                let mut diag = BTreeMap::new();
                diag.insert("attempts".into(), o.attempts.to_string());
                diag.insert("two_cycle_terms".into(), o.two_cycle_terms.to_string());
                diag.insert("three_chain_terms".into(), o.three_chain_terms.to_string());
                rows.push(ReportRow {
                    id,
                    re: dec(o.value.re()),
                    im: dec(o.value.im()),
                    diagnostics: diag,
                });
                sum += o.value.with_prec(prec);
            }
            Err(e) => failures.push(Failure {
                id,
                numerical: e.is_numerical(),
                error: e.to_string(),
            }),
        }
    }
    Ok(numeric_report(
        input.name.clone(),
        Method::Homology,
        "2CS",
        rows,
        failures,
        &sum,
        12,
        opts.tol,
        prec,
    ))
}

/// One saddle point matched to one representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossPair {
    pub saddle: String,
    pub rep: String,
    /// `T/(2π²)` and `2CS`, real parts reduced into `[0, 1)`.
    pub saddle_value: String,
    pub homology_value: String,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossReport {
    pub manifold: String,
    pub p: i64,
    pub pairs: Vec<CrossPair>,
    pub unmatched_saddle: Vec<String>,
    pub unmatched_reps: Vec<String>,
    pub failures: Vec<Failure>,
    pub max_discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CrossReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `(tr ρ(a²), tr ρ(a b⁻¹))` for a representation, and the same data
/// `(z + z⁻¹, w + 1)` read off a critical point.
fn rep_key(g: &[SL2Matrix]) -> (ComplexAP, ComplexAP) {
    (g[0].mul(&g[0]).trace(), g[0].mul(&g[1].inv()).trace())
}

fn saddle_key(s: &SaddlePoint) -> Result<(ComplexAP, ComplexAP)> {
    let prec = s.z.prec();
    Ok((&s.z + &s.z.recip()?, &s.w + &ComplexAP::one(prec)))
}

fn key_close(a: &(ComplexAP, ComplexAP), b: &(ComplexAP, ComplexAP), tol: f64) -> bool {
    a.0.dist(&b.0) < tol * (1.0 + a.0.abs_f64()) && a.1.dist(&b.1) < tol * (1.0 + a.1.abs_f64())
}

/// Distance in ℂ/ℤ: `(|Re| mod 1 to the nearest integer) + |Im|`.
fn mod1_discrepancy(a: &ComplexAP, b: &ComplexAP) -> f64 {
    let d = a - b;
    let (r, _, i) = distance_cz(&d);
    r.max(i)
}

/// Matches critical points of `M_{p/1}(4₁)` to homology representations by trace
/// data and compares `T/(2π²)` with `2CS` mod ℤ.
pub fn cross_check(p: i64, input: &ManifoldInput, opts: &HomologyOptions) -> Result<CrossReport> {
    let prec = opts.prec;
    let terms = cs_terms(p, prec)?;
    let vals = homology_values(input, opts)?;
    let keys: BTreeMap<String, (ComplexAP, ComplexAP)> = input
        .rep_matrices(prec)
        .into_iter()
        .map(|(id, g)| (id, rep_key(&g)))
        .collect();
    let mut failures = Vec::new();
    let mut hom: BTreeMap<String, ComplexAP> = BTreeMap::new();
    for (id, r) in vals {
        match r {
            Ok(o) => {
                hom.insert(id, o.value);
            }
            Err(e) => failures.push(Failure {
                id,
                numerical: e.is_numerical(),
                error: e.to_string(),
            }),
        }
    }
    let two_pi2 = Float::with_val(prec.bits(), pi(prec).square_ref()) * 2u32;
    let inv = Float::with_val(prec.bits(), 1) / two_pi2;
    let mut used: Vec<String> = Vec::new();
    let mut pairs = Vec::new();
    let mut unmatched_saddle = Vec::new();
    for (i, s) in terms.iter().enumerate() {
        let sid = format!("s{}", i + 1);
        let sv = crate::homology::reduce_real_mod1(&s.t.scale(&inv));
        let sk = saddle_key(s)?;
        // BTreeMap iteration is id-ordered, so ties resolve independently of input order.
        let best = hom
            .iter()
            .filter(|(id, _)| !used.contains(id) && key_close(&keys[*id], &sk, 1e-6))
            .map(|(id, v)| (id.clone(), v, mod1_discrepancy(&sv, v)))
            .min_by(|a, b| a.2.partial_cmp(&b.2).unwrap_or(std::cmp::Ordering::Equal));
        match best {
            Some((id, v, disc)) => {
                used.push(id.clone());
                pairs.push(CrossPair {
                    saddle: sid,
                    rep: id,
                    saddle_value: sv.to_string_digits(REPORT_DIGITS),
                    homology_value: v.to_string_digits(REPORT_DIGITS),
                    discrepancy: disc,
                });
            }
            None => unmatched_saddle.push(sid),
        }
    }
    let unmatched_reps: Vec<String> = hom.keys().filter(|id| !used.contains(id)).cloned().collect();
    let max_discrepancy = pairs.iter().map(|p| p.discrepancy).fold(0.0, f64::max);
    let pass =
        failures.is_empty() && unmatched_saddle.is_empty() && unmatched_reps.is_empty() && max_discrepancy < opts.tol;
    Ok(CrossReport {
        manifold: input.name.clone(),
        p,
        pairs,
        unmatched_saddle,
        unmatched_reps,
        failures,
        max_discrepancy,
        tolerance: opts.tol,
        pass,
    })
}
