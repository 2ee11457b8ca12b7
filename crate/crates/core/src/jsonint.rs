//! Serde glue for arbitrary-precision integers in JSON payloads.
//!
//! Entries are written as plain JSON numbers whenever they fit in an `i64`
//! and as decimal strings otherwise; both forms are accepted on input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Wrapper used in serde derive via `#[serde(with = "crate::jsonint")]`
/// fields or through [`JsonInt`] newtypes.
pub fn serialize<S: Serializer>(value: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
    match value.to_i64() {
        Some(v) => ser.serialize_i64(v),
        None => ser.serialize_str(&value.to_string()),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
    struct IntVisitor;

    impl<'de> Visitor<'de> for IntVisitor {
        type Value = BigInt;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an integer or a decimal string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
            Ok(BigInt::from(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
            Ok(BigInt::from(v))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
            BigInt::from_str(v).map_err(|_| E::custom(format!("not an integer: {v:?}")))
        }
    }

    de.deserialize_any(IntVisitor)
}

/// A `BigInt` that serializes as a JSON number (or decimal string when out
/// of `i64` range).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        serialize(&self.0, ser)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        deserialize(de).map(JsonInt)
    }
}

pub fn wrap_vec(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

pub fn unwrap_vec(v: Vec<JsonInt>) -> Vec<BigInt> {
    v.into_iter().map(|x| x.0).collect()
}

pub fn wrap_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<JsonInt>> {
    rows.iter().map(|r| wrap_vec(r)).collect()
}

pub fn unwrap_rows(rows: Vec<Vec<JsonInt>>) -> Vec<Vec<BigInt>> {
    rows.into_iter().map(unwrap_vec).collect()
}
