use std::fmt;
use std::ops::{Add, Neg, Sub};

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact residue in ℚ/ℤ, stored as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ(Rational);

impl QmodZ {
    pub fn new(value: Rational) -> Self {
        let (fract, _) = value.fract_floor(Integer::new());
        QmodZ(fract)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        QmodZ::new(Rational::from((num, den)))
    }

    pub fn zero() -> Self {
        QmodZ(Rational::new())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }

    pub fn scale(&self, n: i64) -> Self {
        QmodZ::new(Rational::from(&self.0 * Integer::from(n)))
    }

    pub fn scale_int(&self, n: &Integer) -> Self {
        QmodZ::new(Rational::from(&self.0 * n))
    }

    /// Distance to the nearest integer, in `[0, 1/2]`.
    pub fn distance_to_zero(&self) -> Rational {
        let other = Rational::from(1) - &self.0;
        if other < self.0 {
            other
        } else {
            self.0.clone()
        }
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 1", self.0)
    }
}

impl Add for &QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: &QmodZ) -> QmodZ {
        QmodZ::new(Rational::from(&self.0 + &rhs.0))
    }
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: QmodZ) -> QmodZ {
        &self + &rhs
    }
}

impl Sub for &QmodZ {
    type Output = QmodZ;
    fn sub(self, rhs: &QmodZ) -> QmodZ {
        QmodZ::new(Rational::from(&self.0 - &rhs.0))
    }
}

impl Neg for &QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ::new(Rational::from(-&self.0))
    }
}

impl std::iter::Sum for QmodZ {
    fn sum<I: Iterator<Item = QmodZ>>(iter: I) -> QmodZ {
        iter.fold(QmodZ::zero(), |a, b| a + b)
    }
}

pub fn qmodz_add(a: &QmodZ, b: &QmodZ) -> QmodZ {
    a + b
}

pub fn qmodz_scale(a: &QmodZ, n: i64) -> QmodZ {
    a.scale(n)
}

impl Serialize for QmodZ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for QmodZ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let r = Rational::parse(&s)
            .map(Rational::from)
            .map_err(serde::de::Error::custom)?;
        Ok(QmodZ::new(r))
    }
}

/// Solves `p s - q r = 1` with the canonical `0 <= r < |p|`.
pub fn ext_gcd_pair(p: i64, q: i64) -> Result<(i64, i64)> {
    let (g, _, _) = egcd(p as i128, q as i128);
    if g.abs() != 1 {
        return Err(Error::InvalidInput(format!("gcd({p}, {q}) = {}", g.abs())));
    }
    if p == 0 {
        // q = ±1
        return Ok((0, -q));
    }
    let m = (p as i128).abs();
    // q r ≡ -1 (mod p)
    let (_, _, qinv) = egcd(m, (q as i128).rem_euclid(m));
    let r = (-qinv).rem_euclid(m) % m;
    let num = 1 + q as i128 * r;
    debug_assert_eq!(num % p as i128, 0);
    let s = num / p as i128;
    Ok((s as i64, r as i64))
}

/// Returns `(g, x, y)` with `a x + b y = g`.
fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn qmodz_examples() {
        let a = QmodZ::from_ratio(2, 3);
        assert_eq!(&a + &a, QmodZ::from_ratio(1, 3));
        assert_eq!(QmodZ::from_ratio(68, 105).scale(6), QmodZ::from_ratio(31, 35));
        assert!(a.scale(0).is_zero());
        assert_eq!(QmodZ::from_ratio(-1, 4), QmodZ::from_ratio(3, 4));
        assert_eq!(QmodZ::from_ratio(7, 2), QmodZ::from_ratio(1, 2));
    }

    #[test]
    fn distance() {
        assert_eq!(QmodZ::from_ratio(3, 4).distance_to_zero(), Rational::from((1, 4)));
        assert_eq!(QmodZ::from_ratio(1, 3).distance_to_zero(), Rational::from((1, 3)));
    }

    #[test]
    fn ext_gcd_examples() {
        assert_eq!(ext_gcd_pair(3, 2).unwrap(), (1, 1));
        assert_eq!(ext_gcd_pair(5, 2).unwrap(), (1, 2));
        assert_eq!(ext_gcd_pair(7, 2).unwrap(), (1, 3));
        assert!(ext_gcd_pair(4, 2).is_err());
        assert_eq!(ext_gcd_pair(1, 5).unwrap(), (1, 0));
    }

    #[test]
    fn serde_round_trip() {
        let a = QmodZ::from_ratio(31, 35);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "\"31/35\"");
        assert_eq!(serde_json::from_str::<QmodZ>(&s).unwrap(), a);
    }

    proptest! {
        #[test]
        fn bezout_witness(p in -1_000_000i64..=1_000_000, q in -1_000_000i64..=1_000_000) {
            prop_assume!(egcd(p as i128, q as i128).0 == 1);
            let (s, r) = ext_gcd_pair(p, q).unwrap();
            prop_assert_eq!(Integer::from(p) * s - Integer::from(q) * r, 1);
            prop_assert!(p == 0 || (0 <= r && r < p.abs()));
        }

        #[test]
        fn scale_is_well_defined_mod_one(n in -50i64..50, k in -5i64..5, num in 0i64..97) {
            let a = QmodZ::from_ratio(num, 97);
            let shifted = QmodZ(Rational::from((num + 97 * k, 97)));
            prop_assert_eq!(a.scale(n), QmodZ::new(shifted.0.clone() * Integer::from(n)));
        }
    }
}
