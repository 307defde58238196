//! JSON input formats for characters and tensor products.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;

use crate::binduced::TailModuleSpec;
use crate::character::{ExpPolyCharacter, RestrictedCharacter, RootFactor};
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::tensor::TensorSpec;

/// Window values of a character of `b_m^f`; zeros are kept, since every
/// index of the window must be present.
fn window_map<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<i64, Scalar>, D::Error> {
    let raw = BTreeMap::<String, Scalar>::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| Ok((k.trim().parse::<i64>().map_err(serde::de::Error::custom)?, v)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionConfig {
    pub m: i64,
    #[serde(deserialize_with = "window_map")]
    pub window: BTreeMap<i64, Scalar>,
    #[serde(default)]
    pub z: Scalar,
}

/// `{"field", "factors": [{"lambda", "n", "p"}], "restriction"?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterConfig {
    #[serde(default)]
    pub field: Field,
    pub factors: Vec<RootFactor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<RestrictionConfig>,
}

impl CharacterConfig {
    pub fn character(&self) -> Result<ExpPolyCharacter> {
        ExpPolyCharacter::new(self.factors.clone())
    }

    pub fn roots(&self) -> Vec<(Scalar, u32)> {
        self.factors.iter().map(|f| (f.lambda.clone(), f.n)).collect()
    }

    pub fn restricted(&self) -> Result<Option<RestrictedCharacter>> {
        self.restriction
            .as_ref()
            .map(|r| RestrictedCharacter::new(r.m, &self.roots(), r.window.clone(), r.z.clone()))
            .transpose()
    }
}

/// `{"field", "factors": [...], "tail"?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorConfig {
    #[serde(default)]
    pub field: Field,
    pub factors: Vec<RootFactor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailModuleSpec>,
}

impl TensorConfig {
    pub fn spec(&self) -> Result<TensorSpec> {
        TensorSpec::new(self.factors.clone(), self.tail.clone())
    }
}

/// Whether a serialized value contains a scalar with nonzero imaginary part.
pub fn has_gaussian(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.contains_key("im") || m.values().any(has_gaussian),
        Value::Array(a) => a.iter().any(has_gaussian),
        _ => false,
    }
}

/// Parses `value` and checks that every scalar lies in `field`, or in the
/// config's own field when `field` is `None`.
pub fn parse_checked<T: serde::de::DeserializeOwned + Serialize>(value: Value, field: Option<Field>) -> Result<T> {
    let declared = value.get("field").cloned();
    let parsed: T = serde_json::from_value(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let own = match declared {
        Some(f) => serde_json::from_value(f).map_err(|e| Error::InvalidInput(e.to_string()))?,
        None => Field::Q,
    };
    let field = field.unwrap_or(own);
    let canonical = serde_json::to_value(&parsed).map_err(|e| Error::InvalidInput(e.to_string()))?;
    if field == Field::Q && has_gaussian(&canonical) {
        return Err(Error::InvalidInput("input has non-rational scalars but the field is Q".into()));
    }
    Ok(parsed)
}
