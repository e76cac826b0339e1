//! Validation against the published schema in `schema/rado.schema.json`.

use serde_json::{json, Value};

use rado_core::{Error, Result};

pub const SCHEMA: &str = include_str!("../../../schema/rado.schema.json");

/// The schema restricted to one of its `$defs`.
pub fn definition(kind: &str) -> Value {
    let root: Value = serde_json::from_str(SCHEMA).expect("bundled schema is JSON");
    assert!(root["$defs"].get(kind).is_some(), "no schema definition {kind:?}");
    json!({
        "$schema": root["$schema"],
        "$defs": root["$defs"],
        "$ref": format!("#/$defs/{kind}"),
    })
}

/// Check `value` against definition `kind`; errors carry `pointer` joined with
/// the offending instance path.
pub fn validate(kind: &str, value: &Value, pointer: &str) -> Result<()> {
    let validator = jsonschema::validator_for(&definition(kind)).expect("bundled schema compiles");
    let first = validator
        .iter_errors(value)
        .next()
        .map(|e| (e.instance_path().to_string(), e.to_string()));
    match first {
        None => Ok(()),
        Some((path, message)) => Err(Error::invalid(format!("{pointer}{path}"), format!("schema violation: {message}"))),
    }
}
