//! Serde helpers writing `ComplexAP` as a pair of decimal strings.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numeric::{ComplexAP, Precision};

#[derive(Serialize, Deserialize)]
struct Pair {
    re: String,
    im: String,
}

pub const DIGITS: usize = 40;

pub fn serialize<S: Serializer>(z: &ComplexAP, s: S) -> Result<S::Ok, S::Error> {
    let digits = z.prec().digits().max(DIGITS as u32) as usize;
    let (re, im) = z.to_decimal(digits);
    Pair { re, im }.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexAP, D::Error> {
    let pair = Pair::deserialize(d)?;
    let prec = Precision::from_digits(DIGITS as u32 + 5).map_err(D::Error::custom)?;
    ComplexAP::parse(prec, &pair.re, &pair.im).map_err(D::Error::custom)
}
