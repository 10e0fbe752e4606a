//! Symbolic trees: typed objects, schema validation, path addressing,
//! rebinding and JSON documents.

mod json;
mod path;
mod rebind;
mod registry;
mod schema;
mod value;

use thiserror::Error;

use crate::hyper::HyperError;

pub use json::{deserialize, from_json, serialize, to_json};
pub use path::{IntoKeyPath, KeyPath, Segment};
pub use rebind::{delete, insert, set, RebindDirective};
pub(crate) use registry::new_object;
pub use registry::{FunctorBody, ParamDef, RecomputeHook, Registry, TypeDef, TypeHandle};
pub use schema::{SpecKind, TextPattern, ValueSpec};
pub use value::{Mapping, Object, Value};

pub const TYPE_KEY: &str = "_type";
pub const HYPER_KEY: &str = "_hyper";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolicError {
    #[error("type {0:?} is already registered")]
    DuplicateTypeName(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("unknown type {0:?}")]
    UnknownType(String),
    #[error("value {value} at {path:?} violates {spec}")]
    ConstraintViolation {
        path: String,
        spec: String,
        value: String,
    },
    #[error("{type_name} is missing required field {field:?}")]
    MissingRequiredField { type_name: String, field: String },
    #[error("{type_name} has no field {field:?}")]
    UnknownField { type_name: String, field: String },
    #[error("path not found: {0:?}")]
    PathNotFound(String),
    #[error("invalid path: {0:?}")]
    InvalidPath(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("illegal directive at {path:?}: {reason}")]
    IllegalDirective { path: String, reason: String },
    #[error("conflicting edits at {0:?}")]
    ConflictingEdits(String),
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("reserved key {0:?}")]
    ReservedKey(String),
    #[error("mapping key {0:?} is not an identifier")]
    InvalidKey(String),
    #[error("non-finite float {0} cannot be serialized")]
    NonFiniteFloat(f64),
    #[error("argument {field:?} of {type_name} is already bound")]
    ArgumentConflict { type_name: String, field: String },
    #[error("argument {field:?} of {type_name} is unbound")]
    UnboundArgument { type_name: String, field: String },
    #[error("{0} is not callable")]
    NotCallable(String),
    #[error(transparent)]
    Hyper(#[from] HyperError),
}

pub(crate) fn check_mapping_key(key: &str) -> Result<(), SymbolicError> {
    if key == TYPE_KEY || key == HYPER_KEY {
        return Err(SymbolicError::ReservedKey(key.to_string()));
    }
    if !path::is_identifier(key) {
        return Err(SymbolicError::InvalidKey(key.to_string()));
    }
    Ok(())
}
