//! Serializers that write floats with a fixed number of decimals, so report
//! files are byte-stable and read like the tables they reproduce.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

fn fixed<S: Serializer>(value: f64, decimals: usize, s: S) -> Result<S::Ok, S::Error> {
    if !value.is_finite() {
        return Err(S::Error::custom(format!("cannot report non-finite value {value}")));
    }
    let raw = RawValue::from_string(format!("{value:.decimals$}")).map_err(S::Error::custom)?;
    raw.serialize(s)
}

pub fn dp1<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    fixed(*v, 1, s)
}

pub fn dp2<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    fixed(*v, 2, s)
}

pub fn dp5<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    fixed(*v, 5, s)
}

pub fn dp2_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => fixed(*v, 2, s),
        None => s.serialize_none(),
    }
}
