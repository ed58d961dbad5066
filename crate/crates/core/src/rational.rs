//! Exact rational numbers.
//!
//! Weights, fiber masses and `ℚ`-matrix entries are [`Rational`]s. On the
//! wire they are strings of the form `"p/q"` (or `"p"`), which keeps them
//! exact through JSON.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad(s))?;
            let d: BigInt = d.trim().parse().map_err(|_| bad(s))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(s.parse().map_err(|_| bad(s))?),
    };
    Ok(parsed)
}

fn bad(s: &str) -> Error {
    Error::Parse(format!("`{s}` is not a rational of the form p/q"))
}

pub fn to_f64(r: &Rational) -> f64 {
    // BigRational::to_f64 handles huge numerators/denominators correctly.
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

pub(crate) mod serde_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse(" 2/4 ").unwrap(), ratio(1, 2));
        assert_eq!(parse("3").unwrap(), integer(3));
        assert_eq!(parse("-1/3").unwrap(), ratio(-1, 3));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(ratio(6, 8).to_string(), "3/4");
        assert_eq!(ratio(4, 2).to_string(), "2");
    }
}
