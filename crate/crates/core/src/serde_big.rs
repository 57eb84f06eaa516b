//! Serialization of big integers: a JSON number when it fits in `u64`, a decimal string otherwise.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serializer;

pub fn biguint<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

pub fn biguint_vec<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for n in v {
        match n.to_u64() {
            Some(x) => seq.serialize_element(&x)?,
            None => seq.serialize_element(&n.to_string())?,
        }
    }
    seq.end()
}
