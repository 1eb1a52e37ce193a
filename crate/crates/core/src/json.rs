//! JSON encodings shared by the CLI and the library.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::scalars::{Gauss, RadScalar};

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("bad rational {s:?}"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad rational {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(n, d))
}

fn rational_from_value(v: Option<&Value>) -> Result<BigRational, String> {
    match v {
        None => Ok(BigRational::zero()),
        Some(Value::String(s)) => parse_rational(s),
        Some(Value::Number(n)) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| format!("non-integer number {n}; write fractions as strings")),
        Some(other) => Err(format!("expected a rational, got {other}")),
    }
}

/// `[{"rad": r, "re": "p/q", "im": "p/q"}, …]`
pub fn scalar_to_json(a: &RadScalar) -> Value {
    Value::Array(
        a.terms()
            .iter()
            .map(|(r, c)| json!({"rad": r, "re": rational_to_string(&c.re), "im": rational_to_string(&c.im)}))
            .collect(),
    )
}

pub fn scalar_from_json(v: &Value) -> Result<RadScalar, String> {
    match v {
        Value::Number(_) | Value::String(_) => Ok(RadScalar::from_rational(rational_from_value(Some(v))?)),
        Value::Array(items) => {
            let mut terms = Vec::with_capacity(items.len());
            for it in items {
                let rad = match it.get("rad") {
                    None => 1,
                    Some(r) => r.as_u64().filter(|&r| r >= 1).ok_or_else(|| format!("bad radicand {r}"))?,
                };
                let re = rational_from_value(it.get("re"))?;
                let im = rational_from_value(it.get("im"))?;
                terms.push((rad, Gauss::new(re, im)));
            }
            Ok(RadScalar::from_terms(terms))
        }
        other => Err(format!("expected a scalar term array, got {other}")),
    }
}

pub fn vector_to_json(v: &[RadScalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn vector_from_json(v: &Value) -> Result<Vec<RadScalar>, String> {
    v.as_array()
        .ok_or_else(|| format!("expected an array of scalars, got {v}"))?
        .iter()
        .map(scalar_from_json)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::sqrt_pos_rational;

    #[test]
    fn scalar_roundtrip() {
        let a = RadScalar::from_frac(3, 4) + RadScalar::i() * sqrt_pos_rational(&BigRational::from_integer(6.into())).unwrap();
        let v = scalar_to_json(&a);
        assert_eq!(scalar_from_json(&v).unwrap(), a);
        assert_eq!(v[0]["re"], "3/4");
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(parse_rational("1/0").is_err());
        assert!(scalar_from_json(&json!([{"rad": 0, "re": "1"}])).is_err());
    }
}
