//! Exact rational scalars and their string encoding.
//!
//! Rationals cross every external boundary as strings: `"p/q"` in lowest
//! terms, or `"p"` when the denominator is one.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = parse_int(num)?;
        let d: BigInt = parse_int(den)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("malformed decimal {s:?}")));
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            parse_int(whole)?
        };
        let scale = num::pow(BigInt::from(10u32), frac.len());
        let frac_part: BigInt = parse_int(frac)?;
        let mut value = Rational::new(whole.abs() * &scale + frac_part, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    Ok(Rational::from_integer(parse_int(s)?))
}

fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed integer {s:?}")));
    }
    t.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("malformed integer {s:?}: {e}")))
}

/// Canonical string form, inverse of [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest `f64`; saturates to ±inf for out-of-range magnitudes.
pub fn to_f64(r: &Rational) -> f64 {
    if let Some(x) = r.to_f64() {
        return x;
    }
    // numerator and denominator may individually overflow f64
    let shift = r.numer().bits().max(r.denom().bits()) as i64 - 900;
    if shift <= 0 {
        return f64::NAN;
    }
    let n = (r.numer() >> shift as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift as usize).to_f64().unwrap_or(0.0);
    n / d
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite float {x}")))
}

/// Decimal rendering with 12 significant digits, for human-readable columns.
pub fn format_decimal(r: &Rational) -> String {
    format!("{:.11e}", to_f64(r))
}

pub fn pow(r: &Rational, k: usize) -> Rational {
    num::pow(r.clone(), k)
}

pub fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

/// Serde adapter: one rational as a string.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: a list of rationals as strings.
pub mod serde_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter: a list of `[x, w]` rational pairs.
pub mod serde_pairs {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(Rational, Rational)], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for (x, w) in v {
            seq.serialize_element(&[format_rational(x), format_rational(w)])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<(Rational, Rational)>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.iter()
            .map(|[x, w]| {
                Ok((
                    parse_rational(x).map_err(serde::de::Error::custom)?,
                    parse_rational(w).map_err(serde::de::Error::custom)?,
                ))
            })
            .collect()
    }
}
