//! 2×2 complex matrices of determinant one.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ComplexAP, Precision};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SL2Matrix {
    #[serde(with = "crate::serde_ap")]
    pub a: ComplexAP,
    #[serde(with = "crate::serde_ap")]
    pub b: ComplexAP,
    #[serde(with = "crate::serde_ap")]
    pub c: ComplexAP,
    #[serde(with = "crate::serde_ap")]
    pub d: ComplexAP,
}

impl SL2Matrix {
    /// No determinant check; see [`SL2Matrix::checked`].
    pub fn new(a: ComplexAP, b: ComplexAP, c: ComplexAP, d: ComplexAP) -> Self {
        SL2Matrix { a, b, c, d }
    }

    pub fn checked(a: ComplexAP, b: ComplexAP, c: ComplexAP, d: ComplexAP, tol: f64) -> Result<Self> {
        let m = SL2Matrix { a, b, c, d };
        let err = (&m.det() - &ComplexAP::one(m.prec())).abs_f64();
        if err >= tol {
            return Err(Error::InvalidInput(format!("determinant off from 1 by {err:e}")));
        }
        Ok(m)
    }

    pub fn identity(prec: Precision) -> Self {
        SL2Matrix {
            a: ComplexAP::one(prec),
            b: ComplexAP::zero(prec),
            c: ComplexAP::zero(prec),
            d: ComplexAP::one(prec),
        }
    }

    pub fn from_f64(prec: Precision, e: [(f64, f64); 4]) -> Self {
        let f = |(re, im): (f64, f64)| ComplexAP::from_f64(prec, re, im);
        SL2Matrix {
            a: f(e[0]),
            b: f(e[1]),
            c: f(e[2]),
            d: f(e[3]),
        }
    }

    pub fn prec(&self) -> Precision {
        self.a.prec().max(self.b.prec()).max(self.c.prec()).max(self.d.prec())
    }

    pub fn with_prec(&self, prec: Precision) -> Self {
        SL2Matrix {
            a: self.a.with_prec(prec),
            b: self.b.with_prec(prec),
            c: self.c.with_prec(prec),
            d: self.d.with_prec(prec),
        }
    }

    pub fn entries(&self) -> [&ComplexAP; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> ComplexAP {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> ComplexAP {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &SL2Matrix) -> SL2Matrix {
        SL2Matrix {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    /// Inverse through the adjugate, exact for determinant one.
    pub fn inv(&self) -> SL2Matrix {
        SL2Matrix {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// `P M P^{-1}`.
    pub fn conjugate_by(&self, p: &SL2Matrix) -> SL2Matrix {
        p.mul(self).mul(&p.inv())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> SL2Matrix {
        SL2Matrix {
            a: self.a.conj(),
            b: self.b.conj(),
            c: self.c.conj(),
            d: self.d.conj(),
        }
    }

    pub fn neg(&self) -> SL2Matrix {
        SL2Matrix {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Largest entrywise distance.
    pub fn dist(&self, o: &SL2Matrix) -> f64 {
        self.entries()
            .iter()
            .zip(o.entries())
            .map(|(x, y)| x.dist(y))
            .fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.entries().iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    /// A pseudorandom element with entries of moderate size.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, prec: Precision) -> SL2Matrix {
        loop {
            let mut draw = || ComplexAP::from_f64(prec, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (a, b, c) = (draw(), draw(), draw());
            if a.abs_f64() < 0.25 {
                continue;
            }
            let d = (&ComplexAP::one(prec) + &(&b * &c)).checked_div(&a).expect("a != 0");
            return SL2Matrix { a, b, c, d };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_elements_have_det_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let prec = Precision::default();
        for _ in 0..20 {
            let g = SL2Matrix::random(&mut rng, prec);
            assert!((&g.det() - &ComplexAP::one(prec)).abs_f64() < 1e-17);
            assert!(g.mul(&g.inv()).dist(&SL2Matrix::identity(prec)) < 1e-16);
        }
    }

    #[test]
    fn conjugation_preserves_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let prec = Precision::default();
        let g = SL2Matrix::random(&mut rng, prec);
        let p = SL2Matrix::random(&mut rng, prec);
        assert!(g.conjugate_by(&p).trace().dist(&g.trace()) < 1e-15);
    }

    #[test]
    fn checked_rejects_bad_det() {
        let prec = Precision::default();
        let e = |x: f64| ComplexAP::from_f64(prec, x, 0.0);
        assert!(SL2Matrix::checked(e(2.0), e(0.0), e(0.0), e(1.0), 1e-10).is_err());
        assert!(SL2Matrix::checked(e(2.0), e(0.0), e(0.0), e(0.5), 1e-10).is_ok());
    }
}
