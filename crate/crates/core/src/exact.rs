//! Exact-number helpers and the `"p/q"` string encoding used by every
//! machine-readable report.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_bigint(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// `-1`, `0` or `1`.
pub fn sign(q: &BigRational) -> i8 {
    match q.cmp(&BigRational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Smallest integer `>= q`.
pub fn ceil(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

/// Renders `p/q` in lowest terms, or just `p` when the denominator is one.
pub fn format_ratio(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn abs(q: &BigRational) -> BigRational {
    q.abs()
}

/// Serde adapter: a [`BigRational`] as a `"p/q"` string.
pub mod serde_ratio {
    use super::{format_ratio, parse_ratio};
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_ratio(&s).ok_or_else(|| D::Error::custom(format!("not an exact rational: {s:?}")))
    }
}

/// Serde adapter: a list of rationals as `"p/q"` strings.
pub mod serde_ratio_vec {
    use super::{format_ratio, parse_ratio};
    use num_rational::BigRational;
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format_ratio(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_ratio(s).ok_or_else(|| D::Error::custom(format!("not an exact rational: {s:?}"))))
            .collect()
    }
}

/// Serde adapter: a [`BigInt`] as a decimal string.
pub mod serde_int {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("not an integer: {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_strings() {
        assert_eq!(format_ratio(&ratio(10, 4)), "5/2");
        assert_eq!(format_ratio(&ratio(-6, 3)), "-2");
        assert_eq!(parse_ratio("-5/2"), Some(ratio(-5, 2)));
        assert_eq!(parse_ratio("7"), Some(from_int(7)));
        assert_eq!(parse_ratio("1/0"), None);
        assert_eq!(parse_ratio("1.5"), None);
    }

    #[test]
    fn ceil_and_sign() {
        assert_eq!(ceil(&ratio(3, 2)), int(2));
        assert_eq!(ceil(&ratio(-3, 2)), int(-1));
        assert_eq!(ceil(&from_int(4)), int(4));
        assert_eq!(sign(&ratio(-1, 7)), -1);
        assert_eq!(sign(&from_int(0)), 0);
    }
}
