use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Working mantissa size in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 53;
    pub const DEFAULT_BITS: u32 = 64;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::InvalidInput(format!(
                "precision {bits} below {} bits",
                Self::MIN_BITS
            )));
        }
        Ok(Precision(bits))
    }

    /// Smallest precision holding `digits` decimal digits.
    pub fn from_digits(digits: u32) -> Result<Self> {
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32;
        Self::new(bits.max(Self::MIN_BITS))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn digits(self) -> u32 {
        (self.0 as f64 * std::f64::consts::LOG10_2).floor() as u32
    }

    pub fn doubled(self) -> Self {
        Precision(self.0 * 2)
    }

    /// `2^-(bits - slack)`, a tolerance that tracks the working precision.
    pub fn epsilon(self, slack: u32) -> f64 {
        let e = self.0.saturating_sub(slack) as i32;
        2f64.powi(-e.min(1000))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(Self::DEFAULT_BITS)
    }
}

/// A complex number with MPFR real and imaginary parts.
#[derive(Clone, PartialEq)]
pub struct ComplexAP {
    re: Float,
    im: Float,
}

impl ComplexAP {
    pub fn zero(prec: Precision) -> Self {
        ComplexAP {
            re: Float::new(prec.bits()),
            im: Float::new(prec.bits()),
        }
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: Precision) -> Self {
        Self::from_f64(prec, 0.0, 1.0)
    }

    pub fn from_f64(prec: Precision, re: f64, im: f64) -> Self {
        ComplexAP {
            re: Float::with_val(prec.bits(), re),
            im: Float::with_val(prec.bits(), im),
        }
    }

    pub fn from_int(prec: Precision, n: i64) -> Self {
        ComplexAP {
            re: Float::with_val(prec.bits(), n),
            im: Float::new(prec.bits()),
        }
    }

    pub fn from_rational(prec: Precision, q: &Rational) -> Self {
        ComplexAP {
            re: Float::with_val(prec.bits(), q),
            im: Float::new(prec.bits()),
        }
    }

    /// Builds from two floats; the result carries the larger of their precisions.
    pub fn from_floats(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec());
        ComplexAP {
            re: Float::with_val(p, re),
            im: Float::with_val(p, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let p = re.prec();
        ComplexAP { re, im: Float::new(p) }
    }

    /// Parses decimal strings for the two parts.
    pub fn parse(prec: Precision, re: &str, im: &str) -> Result<Self> {
        let parse = |s: &str| {
            Float::parse(s.trim())
                .map(|v| Float::with_val(prec.bits(), v))
                .map_err(|e| Error::InvalidInput(format!("bad decimal {s:?}: {e}")))
        };
        let z = ComplexAP {
            re: parse(re)?,
            im: parse(im)?,
        };
        if !z.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite value {re} + {im}i")));
        }
        Ok(z)
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn prec(&self) -> Precision {
        Precision(self.re.prec().max(self.im.prec()))
    }

    pub fn with_prec(&self, prec: Precision) -> Self {
        ComplexAP {
            re: Float::with_val(prec.bits(), &self.re),
            im: Float::with_val(prec.bits(), &self.im),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        ComplexAP {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec().bits();
        let mut n = Float::with_val(p, self.re.square_ref());
        n += Float::with_val(p, self.im.square_ref());
        n
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec().bits(), self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// Principal argument in (-π, π]; a signed zero imaginary part counts as +0.
    pub fn arg(&self) -> Float {
        let p = self.prec().bits();
        if self.im.is_zero() {
            if self.re.is_sign_negative() && !self.re.is_zero() {
                return Float::with_val(p, Constant::Pi);
            }
            return Float::new(p);
        }
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn dist(&self, other: &ComplexAP) -> f64 {
        (self - other).abs_f64()
    }

    pub fn scale(&self, f: &Float) -> Self {
        let p = self.prec().bits().max(f.prec());
        ComplexAP {
            re: Float::with_val(p, &self.re * f),
            im: Float::with_val(p, &self.im * f),
        }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        let p = self.prec().bits();
        ComplexAP {
            re: Float::with_val(p, &self.re * n),
            im: Float::with_val(p, &self.im * n),
        }
    }

    pub fn mul_i(&self) -> Self {
        ComplexAP {
            re: Float::with_val(self.im.prec(), -&self.im),
            im: self.re.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Degenerate("reciprocal of zero".into()));
        }
        let n = self.norm_sqr();
        let p = self.prec().bits();
        let z = ComplexAP {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -(Float::with_val(p, &self.im / &n))),
        };
        if !z.is_finite() {
            return Err(Error::NonFinite("recip"));
        }
        Ok(z)
    }

    pub fn checked_div(&self, rhs: &ComplexAP) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec().bits();
        let r = Float::with_val(p, self.re.exp_ref());
        let mut s = Float::with_val(p, &self.im);
        let mut c = Float::new(p);
        s.sin_cos_mut(&mut c);
        ComplexAP {
            re: Float::with_val(p, &r * &c),
            im: Float::with_val(p, &r * &s),
        }
    }

    /// Principal square root, cut along the negative reals.
    pub fn sqrt(&self) -> Self {
        let p = self.prec().bits();
        if self.is_zero() {
            return ComplexAP::zero(self.prec());
        }
        let r = self.abs();
        if !self.re.is_sign_negative() {
            let t = Float::with_val(p, Float::with_val(p, &r + &self.re) / 2u32).sqrt();
            let im = Float::with_val(p, &self.im / Float::with_val(p, &t * 2u32));
            ComplexAP { re: t, im }
        } else {
            let t = Float::with_val(p, Float::with_val(p, &r - &self.re) / 2u32).sqrt();
            let re = Float::with_val(p, self.im.abs_ref()) / Float::with_val(p, &t * 2u32);
            let im = if self.im.is_sign_negative() && !self.im.is_zero() {
                -t
            } else {
                t
            };
            ComplexAP { re, im }
        }
    }

    /// Integer power by repeated squaring; negative exponents go through `recip`.
    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = ComplexAP::one(self.prec());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Decimal rendering of the two parts with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (float_to_decimal(&self.re, digits), float_to_decimal(&self.im, digits))
    }

    pub fn to_string_digits(&self, digits: usize) -> String {
        let (re, im) = self.to_decimal(digits);
        match im.strip_prefix('-') {
            Some(rest) => format!("{re} - {rest}i"),
            None => format!("{re} + {im}i"),
        }
    }
}

pub fn float_to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(digits.max(1)));
    // rug renders e.g. "1.2500000e0"; strip a zero exponent for readability.
    match s.split_once('e') {
        Some((mant, "0")) => mant.to_string(),
        _ => s,
    }
}

pub fn pi(prec: Precision) -> Float {
    Float::with_val(prec.bits(), Constant::Pi)
}

/// `π i` at the given precision.
pub fn pi_i(prec: Precision) -> ComplexAP {
    ComplexAP::from_floats(Float::new(prec.bits()), pi(prec))
}

/// `2 π i` at the given precision.
pub fn two_pi_i(prec: Precision) -> ComplexAP {
    ComplexAP::from_floats(Float::new(prec.bits()), pi(prec) * 2u32)
}

impl fmt::Debug for ComplexAP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_string_digits(20))
    }
}

impl fmt::Display for ComplexAP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_string_digits(digits))
    }
}

impl<'a> Add<&'a ComplexAP> for &'a ComplexAP {
    type Output = ComplexAP;
    fn add(self, rhs: &ComplexAP) -> ComplexAP {
        let p = self.prec().bits().max(rhs.prec().bits());
        ComplexAP {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }
}

impl<'a> Sub<&'a ComplexAP> for &'a ComplexAP {
    type Output = ComplexAP;
    fn sub(self, rhs: &ComplexAP) -> ComplexAP {
        let p = self.prec().bits().max(rhs.prec().bits());
        ComplexAP {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }
}

impl<'a> Mul<&'a ComplexAP> for &'a ComplexAP {
    type Output = ComplexAP;
    fn mul(self, rhs: &ComplexAP) -> ComplexAP {
        let p = self.prec().bits().max(rhs.prec().bits());
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += Float::with_val(p, &self.im * &rhs.re);
        ComplexAP { re, im }
    }
}

impl<'a> Div<&'a ComplexAP> for &'a ComplexAP {
    type Output = ComplexAP;
    /// Unchecked; a zero divisor yields non-finite parts. Use `checked_div` where that matters.
    fn div(self, rhs: &ComplexAP) -> ComplexAP {
        let p = self.prec().bits().max(rhs.prec().bits());
        let n = rhs.norm_sqr();
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re += Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.im * &rhs.re);
        im -= Float::with_val(p, &self.re * &rhs.im);
        ComplexAP {
            re: re / &n,
            im: im / &n,
        }
    }
}

impl Neg for &ComplexAP {
    type Output = ComplexAP;
    fn neg(self) -> ComplexAP {
        ComplexAP {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }
}

impl Neg for ComplexAP {
    type Output = ComplexAP;
    fn neg(self) -> ComplexAP {
        ComplexAP {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ComplexAP> for ComplexAP {
            type Output = ComplexAP;
            fn $m(self, rhs: ComplexAP) -> ComplexAP {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ComplexAP> for ComplexAP {
            type Output = ComplexAP;
            fn $m(self, rhs: &'a ComplexAP) -> ComplexAP {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ComplexAP> for &'a ComplexAP {
            type Output = ComplexAP;
            fn $m(self, rhs: ComplexAP) -> ComplexAP {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&ComplexAP> for ComplexAP {
    fn add_assign(&mut self, rhs: &ComplexAP) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&ComplexAP> for ComplexAP {
    fn sub_assign(&mut self, rhs: &ComplexAP) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&ComplexAP> for ComplexAP {
    fn mul_assign(&mut self, rhs: &ComplexAP) {
        *self = &*self * rhs;
    }
}

impl AddAssign<ComplexAP> for ComplexAP {
    fn add_assign(&mut self, rhs: ComplexAP) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<ComplexAP> for ComplexAP {
    fn sub_assign(&mut self, rhs: ComplexAP) {
        *self = &*self - &rhs;
    }
}
