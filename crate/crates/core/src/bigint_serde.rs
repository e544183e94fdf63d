//! Serde helpers: integers as JSON numbers when they fit in `i64`, decimal
//! strings otherwise.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Small(i64),
    Large(String),
}

fn to_repr(x: &BigInt) -> Repr {
    match x.to_i64() {
        Some(v) => Repr::Small(v),
        None => Repr::Large(x.to_string()),
    }
}

fn from_repr<E: serde::de::Error>(r: Repr) -> Result<BigInt, E> {
    match r {
        Repr::Small(v) => Ok(BigInt::from(v)),
        Repr::Large(s) => BigInt::from_str(&s).map_err(E::custom),
    }
}

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    to_repr(x).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    from_repr(Repr::deserialize(d)?)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(from_repr::<D::Error>)
            .collect()
    }
}

pub mod matrix {
    use super::*;
    use crate::lattice::IntMatrix;

    #[derive(Serialize, Deserialize)]
    struct Shape {
        cols: usize,
        rows: Vec<Vec<Repr>>,
    }

    pub fn serialize<S: Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
        Shape {
            cols: m.cols(),
            rows: m
                .row_iter()
                .map(|r| r.iter().map(to_repr).collect())
                .collect(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntMatrix, D::Error> {
        let shape = Shape::deserialize(d)?;
        let mut rows = Vec::with_capacity(shape.rows.len());
        for r in shape.rows {
            if r.len() != shape.cols {
                return Err(D::Error::custom("matrix row length differs from `cols`"));
            }
            rows.push(
                r.into_iter()
                    .map(from_repr::<D::Error>)
                    .collect::<Result<_, _>>()?,
            );
        }
        Ok(IntMatrix::from_rows(shape.cols, rows))
    }
}
