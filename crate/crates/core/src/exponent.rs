//! Exact rational exponents.
//!
//! Degrees, regular-variation indices and demand growth rates are compared
//! exactly, so they are kept as `Ratio<i64>` and only converted to `f64` at
//! evaluation time. In JSON they are written as strings (`"3"`, `"5/2"`);
//! plain JSON numbers are accepted on input.

use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

pub type Exponent = Ratio<i64>;

pub fn int(v: i64) -> Exponent {
    Ratio::from_integer(v)
}

pub fn to_f64(e: Exponent) -> f64 {
    e.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p"`, `"p/q"` or a decimal literal such as `"2.5"`.
pub fn parse(s: &str) -> Result<Exponent, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| format!("bad exponent `{s}`"))?;
        let d: i64 = d.trim().parse().map_err(|_| format!("bad exponent `{s}`"))?;
        if d == 0 {
            return Err(format!("zero denominator in exponent `{s}`"));
        }
        return Ok(Ratio::new(n, d));
    }
    if let Ok(v) = s.parse::<i64>() {
        return Ok(int(v));
    }
    let v: f64 = s.parse().map_err(|_| format!("bad exponent `{s}`"))?;
    from_f64(v).ok_or_else(|| format!("exponent `{s}` is not representable"))
}

pub fn from_f64(v: f64) -> Option<Exponent> {
    if !v.is_finite() {
        return None;
    }
    if v.fract() == 0.0 && v.abs() < 1e15 {
        return Some(int(v as i64));
    }
    Ratio::<i64>::approximate_float(v)
}

pub fn format(e: Exponent) -> String {
    if e.denom() == &1 || e.is_zero() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

pub fn serialize<S: Serializer>(e: &Exponent, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format(*e))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Exponent, D::Error> {
    struct ExpVisitor;

    impl Visitor<'_> for ExpVisitor {
        type Value = Exponent;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a rational exponent as a number or a \"p/q\" string")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Exponent, E> {
            parse(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exponent, E> {
            Ok(int(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exponent, E> {
            i64::try_from(v).map(int).map_err(E::custom)
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exponent, E> {
            from_f64(v).ok_or_else(|| E::custom("exponent not representable"))
        }
    }

    d.deserialize_any(ExpVisitor)
}

/// Serde adapter for `Option<Exponent>`; `None` is written as `null`.
pub mod option {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Exponent;

    pub fn serialize<S: Serializer>(e: &Option<Exponent>, s: S) -> Result<S::Ok, S::Error> {
        match e {
            Some(e) => super::serialize(e, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Exponent>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super")] Exponent);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

/// Serde adapter for `Vec<Exponent>`.
pub mod vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Exponent;

    pub fn serialize<S: Serializer>(v: &[Exponent], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for e in v {
            seq.serialize_element(&super::format(*e))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Exponent>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super")] Exponent);
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}
