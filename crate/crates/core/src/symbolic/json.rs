//! JSON document format for symbolic trees.
//!
//! Primitives map to JSON scalars, lists to arrays and mappings to objects.
//! Typed objects carry a `"_type"` key followed by their bound fields in
//! declaration order; hyper values carry a `"_hyper"` key.

use serde_json::{Map as JsonMap, Number, Value as Json};

use super::registry::Registry;
use super::value::{Mapping, Value};
use super::{SymbolicError, HYPER_KEY, TYPE_KEY};
use crate::hyper::{Choice, HyperKind, HyperValue};

pub fn to_json(value: &Value) -> Result<Json, SymbolicError> {
    Ok(match value {
        Value::Null => Json::Null,
        Value::Bool(b) => Json::Bool(*b),
        Value::Int(i) => Json::from(*i),
        Value::Float(f) => Json::Number(float_number(*f)?),
        Value::Text(s) => Json::String(s.clone()),
        Value::List(items) => Json::Array(items.iter().map(to_json).collect::<Result<_, _>>()?),
        Value::Map(map) => {
            let mut out = JsonMap::new();
            for (k, v) in map {
                super::check_mapping_key(k)?;
                out.insert(k.clone(), to_json(v)?);
            }
            Json::Object(out)
        }
        Value::Object(object) => {
            let mut out = JsonMap::new();
            out.insert(
                TYPE_KEY.into(),
                Json::String(object.type_name().to_string()),
            );
            for (k, v) in object.fields() {
                out.insert(k.to_string(), to_json(v)?);
            }
            Json::Object(out)
        }
        Value::Hyper(hyper) => hyper_to_json(hyper)?,
    })
}

fn float_number(f: f64) -> Result<Number, SymbolicError> {
    Number::from_f64(f).ok_or(SymbolicError::NonFiniteFloat(f))
}

fn hyper_to_json(hyper: &HyperValue) -> Result<Json, SymbolicError> {
    let mut out = JsonMap::new();
    match hyper.kind() {
        HyperKind::Choice(choice) => {
            let candidates = Json::Array(
                choice
                    .candidates()
                    .iter()
                    .map(to_json)
                    .collect::<Result<_, _>>()?,
            );
            if choice.is_oneof() {
                out.insert(HYPER_KEY.into(), "oneof".into());
            } else if choice.is_permutation() {
                out.insert(HYPER_KEY.into(), "permutate".into());
            } else {
                out.insert(HYPER_KEY.into(), "manyof".into());
                out.insert("k".into(), Json::from(choice.k()));
                out.insert("distinct".into(), Json::Bool(choice.distinct()));
                out.insert("sorted".into(), Json::Bool(choice.sorted()));
            }
            out.insert("candidates".into(), candidates);
        }
        HyperKind::Int { min, max } => {
            out.insert(HYPER_KEY.into(), "intv".into());
            out.insert("min".into(), Json::from(*min));
            out.insert("max".into(), Json::from(*max));
        }
        HyperKind::Float { min, max } => {
            out.insert(HYPER_KEY.into(), "floatv".into());
            out.insert("min".into(), Json::Number(float_number(*min)?));
            out.insert("max".into(), Json::Number(float_number(*max)?));
        }
    }
    out.insert(
        "hints".into(),
        hyper
            .hints()
            .map_or(Json::Null, |h| Json::String(h.to_string())),
    );
    Ok(Json::Object(out))
}

/// Renders a tree as compact JSON text.
pub fn serialize(value: &Value) -> Result<String, SymbolicError> {
    Ok(to_json(value)?.to_string())
}

/// Parses JSON text, constructing typed objects through `registry`.
pub fn deserialize(text: &str, registry: &Registry) -> Result<Value, SymbolicError> {
    let json: Json =
        serde_json::from_str(text).map_err(|e| SymbolicError::MalformedDocument(e.to_string()))?;
    from_json(&json, registry)
}

fn malformed(msg: impl Into<String>) -> SymbolicError {
    SymbolicError::MalformedDocument(msg.into())
}

pub fn from_json(json: &Json, registry: &Registry) -> Result<Value, SymbolicError> {
    Ok(match json {
        Json::Null => Value::Null,
        Json::Bool(b) => Value::Bool(*b),
        Json::Number(n) => {
            if let Some(i) = n.as_i64() {
                Value::Int(i)
            } else if n.is_u64() {
                return Err(malformed(format!("integer {n} out of range")));
            } else {
                Value::Float(
                    n.as_f64()
                        .ok_or_else(|| malformed(format!("bad number {n}")))?,
                )
            }
        }
        Json::String(s) => Value::Text(s.clone()),
        Json::Array(items) => Value::List(
            items
                .iter()
                .map(|item| from_json(item, registry))
                .collect::<Result<_, _>>()?,
        ),
        Json::Object(map) => {
            if let Some(type_name) = map.get(TYPE_KEY) {
                let type_name = type_name
                    .as_str()
                    .ok_or_else(|| malformed("\"_type\" must be a string"))?;
                let handle = registry.lookup(type_name)?;
                let mut fields = Mapping::new();
                for (k, v) in map {
                    if k == TYPE_KEY {
                        continue;
                    }
                    if k == HYPER_KEY {
                        return Err(SymbolicError::ReservedKey(k.clone()));
                    }
                    fields.insert(k.clone(), from_json(v, registry)?);
                }
                handle.create(fields)?
            } else if let Some(kind) = map.get(HYPER_KEY) {
                let kind = kind
                    .as_str()
                    .ok_or_else(|| malformed("\"_hyper\" must be a string"))?;
                Value::Hyper(Box::new(hyper_from_json(kind, map, registry)?))
            } else {
                let mut out = Mapping::new();
                for (k, v) in map {
                    super::check_mapping_key(k)?;
                    out.insert(k.clone(), from_json(v, registry)?);
                }
                Value::Map(out)
            }
        }
    })
}

fn hyper_from_json(
    kind: &str,
    map: &JsonMap<String, Json>,
    registry: &Registry,
) -> Result<HyperValue, SymbolicError> {
    let allowed: &[&str] = match kind {
        "oneof" | "permutate" => &["candidates"],
        "manyof" => &["candidates", "k", "distinct", "sorted"],
        "intv" | "floatv" => &["min", "max"],
        other => return Err(malformed(format!("unknown hyper kind {other:?}"))),
    };
    for key in map.keys() {
        if key != HYPER_KEY && key != "hints" && !allowed.contains(&key.as_str()) {
            return Err(malformed(format!("unexpected key {key:?} in {kind}")));
        }
    }
    let hints = match map.get("hints") {
        None | Some(Json::Null) => None,
        Some(Json::String(s)) => Some(s.clone()),
        Some(_) => return Err(malformed("\"hints\" must be a string or null")),
    };
    let candidates = || -> Result<Vec<Value>, SymbolicError> {
        map.get("candidates")
            .and_then(Json::as_array)
            .ok_or_else(|| malformed(format!("{kind} needs a \"candidates\" array")))?
            .iter()
            .map(|c| from_json(c, registry))
            .collect()
    };
    let flag = |key: &str| -> Result<bool, SymbolicError> {
        match map.get(key) {
            None => Ok(false),
            Some(Json::Bool(b)) => Ok(*b),
            Some(_) => Err(malformed(format!("\"{key}\" must be a bool"))),
        }
    };
    let kind = match kind {
        "oneof" => HyperKind::Choice(Choice::new(1, candidates()?, false, false)?),
        "permutate" => {
            let candidates = candidates()?;
            HyperKind::Choice(Choice::new(candidates.len(), candidates, true, false)?)
        }
        "manyof" => {
            let k = map
                .get("k")
                .and_then(Json::as_u64)
                .ok_or_else(|| malformed("manyof needs an integer \"k\""))?;
            HyperKind::Choice(Choice::new(
                k as usize,
                candidates()?,
                flag("distinct")?,
                flag("sorted")?,
            )?)
        }
        "intv" => {
            let bound = |key: &str| {
                map.get(key)
                    .and_then(Json::as_i64)
                    .ok_or_else(|| malformed(format!("intv needs an integer \"{key}\"")))
            };
            HyperKind::int_range(bound("min")?, bound("max")?)?
        }
        _ => {
            let bound = |key: &str| {
                map.get(key)
                    .and_then(Json::as_f64)
                    .ok_or_else(|| malformed(format!("floatv needs a number \"{key}\"")))
            };
            HyperKind::float_range(bound("min")?, bound("max")?)?
        }
    };
    Ok(HyperValue::new(kind).with_hints_opt(hints))
}
