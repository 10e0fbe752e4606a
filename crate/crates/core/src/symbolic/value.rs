use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use regex::Regex;

use super::path::{KeyPath, Segment};
use super::registry::TypeDef;
use super::SymbolicError;
use crate::hyper::{HyperKind, HyperValue};

/// Ordered key/value children of a mapping node.
pub type Mapping = IndexMap<String, Value>;

/// A node of a symbolic tree.
///
/// Trees are plain owned values: attaching a node anywhere moves or clones it,
/// so no node can appear at two positions.
#[derive(Clone, Debug)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
    List(Vec<Value>),
    Map(Mapping),
    Object(Object),
    Hyper(Box<HyperValue>),
}

/// An instance of a registered symbolic type.
///
/// `fields` holds the bound parameters in declaration order. Only functors may
/// leave parameters unbound.
#[derive(Clone)]
pub struct Object {
    pub(crate) def: Arc<TypeDef>,
    pub(crate) fields: Mapping,
}

impl Object {
    pub fn type_name(&self) -> &str {
        self.def.name()
    }

    pub fn def(&self) -> &Arc<TypeDef> {
        &self.def
    }

    pub fn field(&self, name: &str) -> Option<&Value> {
        self.fields.get(name)
    }

    pub fn fields(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.fields.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_bound(&self, name: &str) -> bool {
        self.fields.contains_key(name)
    }

    pub fn is_instance_of(&self, type_name: &str) -> bool {
        self.def.name() == type_name
    }

    /// Rebuilds the object with `fields` reordered to declaration order.
    pub(crate) fn from_parts(def: Arc<TypeDef>, mut fields: Mapping) -> Self {
        let mut ordered = Mapping::with_capacity(fields.len());
        for param in def.params() {
            if let Some(value) = fields.shift_remove(param.name()) {
                ordered.insert(param.name().to_string(), value);
            }
        }
        debug_assert!(fields.is_empty());
        Self {
            def,
            fields: ordered,
        }
    }
}

impl fmt::Debug for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialEq for Object {
    fn eq(&self, other: &Self) -> bool {
        self.type_name() == other.type_name() && mapping_eq(&self.fields, &other.fields)
    }
}

fn mapping_eq(a: &Mapping, b: &Mapping) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b.iter())
            .all(|((ka, va), (kb, vb))| ka == kb && va == vb)
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Null, Value::Null) => true,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Int(a), Value::Int(b)) => a == b,
            // NaN equals NaN so that equality stays reflexive.
            (Value::Float(a), Value::Float(b)) => a == b || (a.is_nan() && b.is_nan()),
            (Value::Text(a), Value::Text(b)) => a == b,
            (Value::List(a), Value::List(b)) => a == b,
            (Value::Map(a), Value::Map(b)) => mapping_eq(a, b),
            (Value::Object(a), Value::Object(b)) => a == b,
            (Value::Hyper(a), Value::Hyper(b)) => a == b,
            _ => false,
        }
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<i32> for Value {
    fn from(v: i32) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(items: Vec<T>) -> Self {
        Value::List(items.into_iter().map(Into::into).collect())
    }
}

impl From<Object> for Value {
    fn from(o: Object) -> Self {
        Value::Object(o)
    }
}

impl From<HyperValue> for Value {
    fn from(h: HyperValue) -> Self {
        Value::Hyper(Box::new(h))
    }
}

impl Value {
    /// Builds a mapping node, rejecting non-identifier and reserved keys.
    pub fn mapping<K, I>(entries: I) -> Result<Value, SymbolicError>
    where
        K: Into<String>,
        I: IntoIterator<Item = (K, Value)>,
    {
        let mut map = Mapping::new();
        for (key, value) in entries {
            let key = key.into();
            super::check_mapping_key(&key)?;
            map.insert(key, value);
        }
        Ok(Value::Map(map))
    }

    pub fn as_object(&self) -> Option<&Object> {
        match self {
            Value::Object(o) => Some(o),
            _ => None,
        }
    }

    pub fn as_hyper(&self) -> Option<&HyperValue> {
        match self {
            Value::Hyper(h) => Some(h),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_float(&self) -> Option<f64> {
        match self {
            Value::Float(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn is_instance_of(&self, type_name: &str) -> bool {
        self.as_object()
            .is_some_and(|o| o.is_instance_of(type_name))
    }

    /// Structural equality; same as `==`.
    pub fn equals(&self, other: &Value) -> bool {
        self == other
    }

    /// Short kind label used in diagnostics.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Null => "null",
            Value::Bool(_) => "bool",
            Value::Int(_) => "int",
            Value::Float(_) => "float",
            Value::Text(_) => "text",
            Value::List(_) => "list",
            Value::Map(_) => "mapping",
            Value::Object(_) => "object",
            Value::Hyper(_) => "hyper value",
        }
    }

    /// Immediate children in canonical order. Categorical hyper values expose
    /// their candidates by index.
    pub fn children(&self) -> Vec<(Segment, &Value)> {
        match self {
            Value::List(items) => items
                .iter()
                .enumerate()
                .map(|(i, v)| (Segment::Index(i), v))
                .collect(),
            Value::Map(map) => map
                .iter()
                .map(|(k, v)| (Segment::Key(k.clone()), v))
                .collect(),
            Value::Object(o) => o
                .fields
                .iter()
                .map(|(k, v)| (Segment::Key(k.clone()), v))
                .collect(),
            Value::Hyper(h) => match &h.kind {
                HyperKind::Choice(c) => c
                    .candidates()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (Segment::Index(i), v))
                    .collect(),
                _ => Vec::new(),
            },
            _ => Vec::new(),
        }
    }

    pub fn child(&self, segment: &Segment) -> Option<&Value> {
        match (self, segment) {
            (Value::List(items), Segment::Index(i)) => items.get(*i),
            (Value::Map(map), Segment::Key(k)) => map.get(k),
            (Value::Object(o), Segment::Key(k)) => o.fields.get(k),
            (Value::Hyper(h), Segment::Index(i)) => match &h.kind {
                HyperKind::Choice(c) => c.candidates().get(*i),
                _ => None,
            },
            _ => None,
        }
    }

    /// Returns the sub-node at `path`.
    pub fn get(&self, path: impl super::IntoKeyPath) -> Result<&Value, SymbolicError> {
        let path = path.into_key_path()?;
        let mut node = self;
        for (depth, segment) in path.segments().iter().enumerate() {
            node = node.child(segment).ok_or_else(|| {
                SymbolicError::PathNotFound(
                    KeyPath::from_segments(path.segments()[..=depth].to_vec()).to_string(),
                )
            })?;
        }
        Ok(node)
    }

    /// Returns the parent of the node at `path`; `None` for the root.
    pub fn parent_of(
        &self,
        path: impl super::IntoKeyPath,
    ) -> Result<Option<&Value>, SymbolicError> {
        let path = path.into_key_path()?;
        self.get(&path)?;
        match path.parent() {
            Some(parent) => self.get(&parent).map(Some),
            None => Ok(None),
        }
    }

    /// Locates `node` (by identity, not equality) inside this tree.
    pub fn path_of(&self, node: &Value) -> Option<KeyPath> {
        fn visit(current: &Value, target: &Value, path: &mut KeyPath) -> bool {
            if std::ptr::eq(current, target) {
                return true;
            }
            for (segment, child) in current.children() {
                path.push(segment);
                if visit(child, target, path) {
                    return true;
                }
                path.pop();
            }
            false
        }
        let mut path = KeyPath::root();
        visit(self, node, &mut path).then_some(path)
    }

    /// Depth-first pre-order walk over every node with its path and parent.
    pub fn walk<'a>(&'a self, mut visitor: impl FnMut(&KeyPath, &'a Value, Option<&'a Value>)) {
        fn visit<'a>(
            node: &'a Value,
            parent: Option<&'a Value>,
            path: &mut KeyPath,
            visitor: &mut dyn FnMut(&KeyPath, &'a Value, Option<&'a Value>),
        ) {
            visitor(path, node, parent);
            for (segment, child) in node.children() {
                path.push(segment);
                visit(child, Some(node), path, visitor);
                path.pop();
            }
        }
        visit(self, None, &mut KeyPath::root(), &mut visitor);
    }

    /// All nodes whose rendered path fully matches `pattern`, in pre-order.
    pub fn query(&self, pattern: &str) -> Result<IndexMap<String, &Value>, SymbolicError> {
        let regex = Regex::new(&format!("^(?:{pattern})$"))
            .map_err(|e| SymbolicError::InvalidPattern(e.to_string()))?;
        Ok(self.query_where(|path, _, _| regex.is_match(&path.to_string())))
    }

    /// All nodes satisfying `predicate(path, value, parent)`, in pre-order.
    pub fn query_where(
        &self,
        mut predicate: impl FnMut(&KeyPath, &Value, Option<&Value>) -> bool,
    ) -> IndexMap<String, &Value> {
        let mut out = IndexMap::new();
        self.walk(|path, value, parent| {
            if predicate(path, value, parent) {
                out.insert(path.to_string(), value);
            }
        });
        out
    }

    /// True when the tree contains no hyper values.
    pub fn is_deterministic(&self) -> bool {
        match self {
            Value::Hyper(_) => false,
            _ => self
                .children()
                .into_iter()
                .all(|(_, c)| c.is_deterministic()),
        }
    }
}

fn write_float(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    write!(f, "{v:?}")
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => write!(f, "None"),
            Value::Bool(v) => write!(f, "{}", if *v { "True" } else { "False" }),
            Value::Int(v) => write!(f, "{v}"),
            Value::Float(v) => write_float(f, *v),
            Value::Text(v) => write!(f, "{v:?}"),
            Value::List(items) => {
                write!(f, "[")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, "]")
            }
            Value::Map(map) => {
                write!(f, "{{")?;
                for (i, (k, v)) in map.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k:?}: {v}")?;
                }
                write!(f, "}}")
            }
            Value::Object(o) => write!(f, "{o}"),
            Value::Hyper(h) => write!(f, "{h}"),
        }
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.type_name())?;
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ")")
    }
}
