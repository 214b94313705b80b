//! JSON encoding of exact scalars.
//!
//! A rational is a string `"p/q"`. Anything else is an object
//! `{"rat": "p/q", "irr": {"sqrt:2": "1/2", "sym:alpha": "3"}}` whose keys name
//! generators declared in the problem header.

use std::collections::BTreeMap;

use multitile_core::scalar::parse_rational;
use multitile_core::{Error, ExactScalar, Generator, Rational, Result, Scalar};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Text(String),
    Parts {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rat: Option<String>,
        #[serde(default)]
        irr: BTreeMap<String, String>,
    },
}

/// Declared generators by key, with the value each key stands for.
#[derive(Debug, Clone, Default)]
pub struct Declarations {
    values: BTreeMap<String, Scalar>,
}

impl Declarations {
    pub fn insert(&mut self, key: String, value: Scalar) {
        self.values.insert(key, value);
    }

    pub fn resolve(&self, key: &str) -> Result<Scalar> {
        self.values
            .get(key)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("generator {key:?} is not declared")))
    }

    pub fn decode(&self, s: &ScalarJson) -> Result<Scalar> {
        match s {
            ScalarJson::Text(t) => Scalar::parse_with(t, |k| self.resolve(k)),
            ScalarJson::Parts { rat, irr } => {
                let mut total = match rat {
                    Some(r) => Scalar::rational(parse_rational(r)?),
                    None => Scalar::zero(),
                };
                for (key, coef) in irr {
                    total = total + self.resolve(key)?.scale(&parse_rational(coef)?);
                }
                Ok(total)
            }
        }
    }

    pub fn decode_vec(&self, v: &[ScalarJson]) -> Result<Vec<Scalar>> {
        v.iter().map(|s| self.decode(s)).collect()
    }
}

pub fn encode(x: &Scalar) -> ScalarJson {
    if x.terms().is_empty() {
        return ScalarJson::Text(x.rational_part().to_string());
    }
    let rat = (!x.rational_part().is_zero()).then(|| x.rational_part().to_string());
    let irr = x.terms().iter().map(|(g, c)| (g.key(), c.to_string())).collect();
    ScalarJson::Parts { rat, irr }
}

pub fn encode_vec(v: &[Scalar]) -> Vec<ScalarJson> {
    v.iter().map(encode).collect()
}

pub fn value(x: &Scalar) -> Value {
    serde_json::to_value(encode(x)).expect("scalars serialize")
}

pub fn vector(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(value).collect())
}

pub fn rational(r: &Rational) -> Value {
    json!(r.to_string())
}

/// Value of a declared generator key: `sqrt:<r>` or a symbolic generator.
pub fn generator_value(g: &Generator) -> Scalar {
    Scalar::generator(g.clone(), Rational::from_integer(1.into()))
}
