//! JSON rendering of core values. Rationals are written as `"p/q"`.

use num_bigint::BigInt;
use serde_json::{json, Value};
use sumset_core::{fmt_rat, HalfSpace, IntVector, Rat, RationalPolynomial, SqDistance};

pub fn int(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

pub fn vector(v: &IntVector) -> Value {
    Value::Array(v.coords().iter().map(int).collect())
}

pub fn vectors<'a>(vs: impl IntoIterator<Item = &'a IntVector>) -> Value {
    Value::Array(vs.into_iter().map(vector).collect())
}

pub fn rat(r: &Rat) -> Value {
    json!(fmt_rat(r))
}

pub fn sq(d: &SqDistance) -> Value {
    rat(d.value())
}

pub fn rat_point(p: &[Rat]) -> Value {
    Value::Array(p.iter().map(rat).collect())
}

pub fn poly(p: &RationalPolynomial) -> Value {
    json!({
        "coefficients": p.coefficients().iter().map(rat).collect::<Vec<_>>(),
        "degree": p.degree(),
        "text": p.to_string(),
    })
}

pub fn halfspace(h: &HalfSpace) -> Value {
    json!({ "normal": vector(h.normal()), "offset": int(h.offset()) })
}
