use std::collections::BTreeMap;

use rand::Rng;

use super::fox::{CellStructure, GroupRingElem};
use super::word::WordEvaluator;
use crate::error::{Error, Result};
use crate::numeric::Precision;
use crate::sl2::SL2Matrix;

/// Distinct matrices seen so far, interned up to a relative tolerance.
#[derive(Debug, Clone)]
pub struct VertexPool {
    mats: Vec<SL2Matrix>,
    approx: Vec<[f64; 8]>,
    tol: f64,
}

fn approx(m: &SL2Matrix) -> [f64; 8] {
    let e = m.entries();
    [
        e[0].re_f64(),
        e[0].im_f64(),
        e[1].re_f64(),
        e[1].im_f64(),
        e[2].re_f64(),
        e[2].im_f64(),
        e[3].re_f64(),
        e[3].im_f64(),
    ]
}

impl VertexPool {
    pub fn new(tol: f64) -> Self {
        VertexPool {
            mats: Vec::new(),
            approx: Vec::new(),
            tol,
        }
    }

    /// `2^{-(bits - 24)}`, about `1e-12` at 64 bits.
    pub fn for_precision(prec: Precision) -> Self {
        VertexPool::new(prec.epsilon(24))
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn get(&self, i: usize) -> &SL2Matrix {
        &self.mats[i]
    }

    pub fn intern(&mut self, m: SL2Matrix) -> usize {
        let a = approx(&m);
        let scale = 1.0 + m.norm();
        let coarse = (self.tol * scale).max(1e-9 * scale);
        for (i, b) in self.approx.iter().enumerate() {
            if a.iter().zip(b).all(|(x, y)| (x - y).abs() <= coarse) && self.mats[i].dist(&m) <= self.tol * scale {
                return i;
            }
        }
        self.mats.push(m);
        self.approx.push(a);
        self.mats.len() - 1
    }

    /// Appends without interning, for a cone point that must stay separate.
    pub fn push_fresh(&mut self, m: SL2Matrix) -> usize {
        self.approx.push(approx(&m));
        self.mats.push(m);
        self.mats.len() - 1
    }
}

/// A formal ℤ-combination of ordered vertex tuples of one length.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TupleChain {
    terms: BTreeMap<Vec<usize>, i64>,
}

impl TupleChain {
    pub fn zero() -> Self {
        TupleChain::default()
    }

    pub fn add_term(&mut self, t: Vec<usize>, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(t.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&t);
        }
    }

    pub fn add_chain(&mut self, o: &TupleChain, k: i64) {
        for (t, c) in &o.terms {
            self.add_term(t.clone(), c * k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &i64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `∂(g_0, …, g_n) = Σ (-1)^i (g_0, …, ĝ_i, …, g_n)`.
    pub fn boundary(&self) -> TupleChain {
        let mut out = TupleChain::zero();
        for (t, c) in &self.terms {
            for i in 0..t.len() {
                let mut face = t.clone();
                face.remove(i);
                out.add_term(face, if i % 2 == 0 { *c } else { -*c });
            }
        }
        out
    }

    /// `(v, g_0, …, g_n)` term by term.
    pub fn cone(&self, v: usize) -> TupleChain {
        let mut out = TupleChain::zero();
        for (t, c) in &self.terms {
            let mut s = Vec::with_capacity(t.len() + 1);
            s.push(v);
            s.extend_from_slice(t);
            out.add_term(s, *c);
        }
        out
    }
}

/// `c_1(A a_j) = (ρ(A), ρ(A) ρ(x_j))`, with `j` 1-based.
pub fn chain_c1(a: &SL2Matrix, j: usize, rho: &WordEvaluator, pool: &mut VertexPool) -> TupleChain {
    let mut out = TupleChain::zero();
    let u = pool.intern(a.clone());
    let v = pool.intern(a.mul(rho.letter(j as i32)));
    out.add_term(vec![u, v], 1);
    out
}

/// `c_2(A b_i)` for the relator `rel`: the fan of triangles over the loop of prefixes.
/// Without an apex the fan is centred at `ρ(A)`; otherwise at `ρ(A) q`.
pub fn chain_c2(
    a: &SL2Matrix,
    rel: &[i32],
    rho: &WordEvaluator,
    apex: Option<&SL2Matrix>,
    pool: &mut VertexPool,
) -> TupleChain {
    let mut out = TupleChain::zero();
    let ap = pool.intern(match apex {
        Some(q) => a.mul(q),
        None => a.clone(),
    });
    let pre = rho.prefixes(a, rel);
    let ids: Vec<usize> = pre.into_iter().map(|m| pool.intern(m)).collect();
    for (k, &g) in rel.iter().enumerate() {
        if g > 0 {
            out.add_term(vec![ap, ids[k], ids[k + 1]], 1);
        } else {
            out.add_term(vec![ap, ids[k + 1], ids[k]], -1);
        }
    }
    out
}

/// `c_1(∂₂(A b_i)) = Σ_j Σ_w n_w c_1(A w a_j)`.
pub fn c1_of_d2(a: &SL2Matrix, row: &[GroupRingElem], rho: &WordEvaluator, pool: &mut VertexPool) -> TupleChain {
    let mut out = TupleChain::zero();
    for (j, e) in row.iter().enumerate() {
        for (w, c) in e.terms() {
            let start = a.mul(&rho.eval(w));
            out.add_chain(&chain_c1(&start, j + 1, rho, pool), *c);
        }
    }
    out
}

/// `c_2(∂₃ O) = Σ_i Σ_h n_h c_2(h b_i)`.
pub fn two_cycle(
    cells: &CellStructure,
    rho: &WordEvaluator,
    apexes: Option<&[SL2Matrix]>,
    pool: &mut VertexPool,
) -> TupleChain {
    let mut out = TupleChain::zero();
    for (i, elem) in cells.d3.iter().enumerate() {
        let rel = &cells.presentation.relators[i];
        let apex = apexes.map(|a| &a[i]);
        for (h, c) in elem.terms() {
            let start = rho.eval(h);
            out.add_chain(&chain_c2(&start, rel, rho, apex, pool), *c);
        }
    }
    out
}

/// Checks `∂ c_2(b_i) = c_1(∂₂ b_i)` for every relator, once with the relator's
/// basepoint at the identity and once translated by `shift`.
pub fn check_commutativity(
    cells: &CellStructure,
    rho: &WordEvaluator,
    apexes: Option<&[SL2Matrix]>,
    shift: &SL2Matrix,
    pool: &mut VertexPool,
) -> Result<()> {
    let id = SL2Matrix::identity(shift.prec());
    for a in [&id, shift] {
        for (i, rel) in cells.presentation.relators.iter().enumerate() {
            let apex = apexes.map(|q| &q[i]);
            let lhs = chain_c2(a, rel, rho, apex, pool).boundary();
            let rhs = c1_of_d2(a, &cells.d2[i], rho, pool);
            if lhs != rhs {
                return Err(Error::ChainCheck(format!("d c2 != c1 d2 on relator {i}")));
            }
        }
    }
    Ok(())
}

/// Checks each word of `∂₂∂₃` is a relation under `ρ` by comparing the formal
/// sums in ℤ[SL₂] after interning.
pub fn check_d2_d3(cells: &CellStructure, rho: &WordEvaluator, pool: &mut VertexPool) -> Result<()> {
    for (j, e) in cells.d2_of_d3().iter().enumerate() {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (w, c) in e.terms() {
            *acc.entry(pool.intern(rho.eval(w))).or_insert(0) += c;
        }
        if acc.values().any(|c| *c != 0) {
            return Err(Error::ChainCheck(format!("d2 d3 != 0 in column {j}")));
        }
    }
    Ok(())
}

/// The cone `O' = Σ n (v_0, t)` with `∂O' = cycle`.
pub fn build_c3(cycle: &TupleChain, v0: usize) -> Result<TupleChain> {
    if !cycle.boundary().is_zero() {
        return Err(Error::ChainCheck("2-chain is not a cycle".into()));
    }
    let c3 = cycle.cone(v0);
    if c3.boundary() != *cycle {
        return Err(Error::ChainCheck("boundary of the cone differs from the cycle".into()));
    }
    Ok(c3)
}

/// A pseudorandom list of apexes, one per relator.
pub fn random_apexes<R: Rng + ?Sized>(rng: &mut R, n: usize, prec: Precision) -> Vec<SL2Matrix> {
    (0..n).map(|_| SL2Matrix::random(rng, prec)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::word::{parse_word, Presentation};
    use super::*;
    use crate::numeric::ComplexAP;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn boundary_squares_to_zero() {
        let mut c = TupleChain::zero();
        c.add_term(vec![0, 1, 2, 3], 2);
        c.add_term(vec![4, 1, 0, 3], -1);
        assert!(c.boundary().boundary().is_zero());
        let mut e = TupleChain::zero();
        e.add_term(vec![0, 1], 1);
        let mut want = TupleChain::zero();
        want.add_term(vec![1], 1);
        want.add_term(vec![0], -1);
        assert_eq!(e.boundary(), want);
    }

    #[test]
    fn pool_interns_nearby() {
        let mut pool = VertexPool::for_precision(prec());
        let a = SL2Matrix::identity(prec());
        let b = SL2Matrix::from_f64(prec(), [(1.0 + 1e-15, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let c = SL2Matrix::from_f64(prec(), [(1.0 + 1e-6, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(pool.intern(a), 0);
        assert_eq!(pool.intern(b), 0);
        assert_eq!(pool.intern(c), 1);
    }

    #[test]
    fn c2_boundary_matches_c1_d2() {
        // abelian image, so any commutator relator is respected
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let diag = |x: f64, y: f64| {
            let l = ComplexAP::from_f64(prec(), x, y);
            let li = l.recip().unwrap();
            SL2Matrix::new(l, ComplexAP::zero(prec()), ComplexAP::zero(prec()), li)
        };
        let gens = vec![diag(1.3, 0.4), diag(-0.2, 0.9)];
        let rho = WordEvaluator::new(&gens);
        let rels = vec![parse_word("abAB").unwrap(), parse_word("abbABB").unwrap()];
        let cells = CellStructure::new(
            Presentation::new(2, rels).unwrap(),
            vec![GroupRingElem::zero(), GroupRingElem::zero()],
        )
        .unwrap();
        let shift = SL2Matrix::random(&mut rng, prec());
        let mut pool = VertexPool::for_precision(prec());
        check_commutativity(&cells, &rho, None, &shift, &mut pool).unwrap();
        let q = random_apexes(&mut rng, 2, prec());
        check_commutativity(&cells, &rho, Some(&q), &shift, &mut pool).unwrap();
    }

    #[test]
    fn c2_boundary_fails_off_the_variety() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let gens = vec![SL2Matrix::random(&mut rng, prec()), SL2Matrix::random(&mut rng, prec())];
        let rho = WordEvaluator::new(&gens);
        let cells = CellStructure::new(
            Presentation::new(2, vec![parse_word("abAB").unwrap(), parse_word("ab").unwrap()]).unwrap(),
            vec![GroupRingElem::zero(), GroupRingElem::zero()],
        )
        .unwrap();
        let shift = SL2Matrix::identity(prec());
        let mut pool = VertexPool::for_precision(prec());
        assert!(matches!(
            check_commutativity(&cells, &rho, None, &shift, &mut pool),
            Err(Error::ChainCheck(_))
        ));
    }

    #[test]
    fn cone_over_cycle() {
        let mut cyc = TupleChain::zero();
        cyc.add_term(vec![1, 2], 1);
        cyc.add_term(vec![2, 3], 1);
        cyc.add_term(vec![3, 1], 1);
        let c = build_c3(&cyc, 0).unwrap();
        assert_eq!(c.boundary(), cyc);
        let mut open = TupleChain::zero();
        open.add_term(vec![1, 2], 1);
        assert!(build_c3(&open, 0).is_err());
    }
}
