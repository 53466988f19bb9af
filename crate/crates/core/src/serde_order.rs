//! Serde helpers for group orders: a JSON number when it fits in `u64`,
//! otherwise a decimal string.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Raw {
    Small(u64),
    Large(String),
}

fn to_raw(v: u128) -> Raw {
    u64::try_from(v).map(Raw::Small).unwrap_or_else(|_| Raw::Large(v.to_string()))
}

fn from_raw<E: serde::de::Error>(raw: Raw) -> Result<u128, E> {
    match raw {
        Raw::Small(v) => Ok(v as u128),
        Raw::Large(s) => s.parse().map_err(E::custom),
    }
}

pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
    to_raw(*v).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
    from_raw(Raw::deserialize(d)?)
}

/// The same encoding for `Option<u128>`.
pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<u128>, s: S) -> Result<S::Ok, S::Error> {
        v.map(to_raw).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u128>, D::Error> {
        Option::<Raw>::deserialize(d)?.map(from_raw).transpose()
    }
}

#[cfg(test)]
mod tests {
    #[derive(serde::Serialize, serde::Deserialize, PartialEq, Debug)]
    struct T {
        #[serde(with = "super")]
        a: u128,
        #[serde(with = "super::option", default)]
        b: Option<u128>,
    }

    #[test]
    fn small_and_large() {
        let t = T { a: 6, b: Some(u128::MAX) };
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, format!("{{\"a\":6,\"b\":\"{}\"}}", u128::MAX));
        assert_eq!(serde_json::from_str::<T>(&s).unwrap(), t);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::from_value::<T>(v).unwrap(), t);
    }
}
