//! The JSON run report printed on success.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;

use semopt_core::rational::{format_ratio, to_f64, BigRational};
use semopt_core::semiring::{Interpretation, SemiringValue};

#[derive(Serialize)]
pub struct RunReport {
    pub subcommand: &'static str,
    pub input: InputInfo,
    /// Every setting that influences the result.
    pub config: BTreeMap<&'static str, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semiring: Option<String>,
    /// Exact values as `"p/q"` strings, access levels as integers.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub value: Value,
    /// Floating-point duplicate of `value`; advisory only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_float: Option<f64>,
    #[serde(skip_serializing_if = "Witness::is_empty")]
    pub witness: Witness,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<&'static str, Value>,
}

#[derive(Serialize)]
pub struct InputInfo {
    pub path: String,
    pub format: &'static str,
    pub sha256: String,
}

#[derive(Default, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpretation: Option<InterpretationMap>,
    /// Canonical proof-tree encoding: OR choices in pre-order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<bool>>,
}

impl Witness {
    fn is_empty(&self) -> bool {
        self.interpretation.is_none() && self.tree.is_none() && self.assignment.is_none()
    }
}

#[derive(Default, Serialize)]
pub struct Stats {
    pub oracle_queries: u64,
    pub trees_explored: u64,
    /// Excluded from determinism comparisons.
    pub wall_time_ms: f64,
}

/// Variable index → value, serialized as a JSON object in variable order.
pub struct InterpretationMap(Vec<(u32, Value)>);

impl From<&Interpretation> for InterpretationMap {
    fn from(pi: &Interpretation) -> Self {
        InterpretationMap(
            pi.values()
                .iter()
                .enumerate()
                .map(|(i, v)| (i as u32 + 1, semiring_value(v)))
                .collect(),
        )
    }
}

impl Serialize for InterpretationMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (var, value) in &self.0 {
            map.serialize_entry(&var.to_string(), value)?;
        }
        map.end()
    }
}

pub fn exact(value: &BigRational) -> Value {
    Value::String(format_ratio(value))
}

pub fn semiring_value(value: &SemiringValue) -> Value {
    match value {
        SemiringValue::Real(r) => exact(r),
        SemiringValue::Level(a) => Value::from(*a),
    }
}

pub fn semiring_float(value: &SemiringValue) -> f64 {
    match value {
        SemiringValue::Real(r) => to_f64(r),
        SemiringValue::Level(a) => f64::from(*a),
    }
}

/// Floats that may be infinite: JSON numbers when finite, else `"+inf"`.
pub fn extended_float(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::String(if x > 0.0 { "+inf" } else { "-inf" }.into())
    }
}
