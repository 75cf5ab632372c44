//! Integer helpers shared by the size measures and the program encoder.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Binary length of `|v|`, i.e. `⌈log₂(|v|+1)⌉`, with a floor of one bit so
/// that zero still occupies a slot.
pub fn bit_length(v: &BigInt) -> u64 {
    if v.is_zero() {
        1
    } else {
        v.abs().bits()
    }
}

pub fn bit_length_u64(v: u64) -> u64 {
    if v == 0 {
        1
    } else {
        u64::from(64 - v.leading_zeros())
    }
}

/// Number of binary slack variables needed to absorb a gap of `g`:
/// `⌈log₂(g+1)⌉`, zero when `g == 0`.
pub fn slack_width(g: &BigInt) -> u64 {
    if g.is_zero() {
        0
    } else {
        g.bits()
    }
}

pub fn binomial2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// Serde adapter: numbers that fit in `i64` are written as JSON numbers,
/// anything larger as a decimal string. Both forms are accepted on input.
pub mod bigint_serde {
    use super::*;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(small) => s.serialize_i64(small),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(BigIntVisitor)
    }

    struct BigIntVisitor;

    impl Visitor<'_> for BigIntVisitor {
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
            v.trim().parse().map_err(|_| E::custom(format!("bad integer `{v}`")))
        }
    }

    pub mod option {
        use super::*;
        use serde::{Deserialize, Serialize};

        #[derive(Serialize, Deserialize)]
        struct Wrap(#[serde(with = "super")] BigInt);

        pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(b) => s.serialize_some(&Wrap(b.clone())),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
            Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
        }
    }
}
