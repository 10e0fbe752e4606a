use std::fmt;

use regex::Regex;

use super::path::KeyPath;
use super::value::Value;
use super::SymbolicError;
use crate::hyper::{Choice, HyperKind};

/// Largest integer range whose members are checked one by one against an enum spec.
const ENUM_RANGE_CHECK_LIMIT: i64 = 10_000;

/// A text constraint: an anchored regular expression.
#[derive(Clone)]
pub struct TextPattern {
    source: String,
    regex: Regex,
}

impl TextPattern {
    pub fn new(source: &str) -> Result<Self, SymbolicError> {
        let regex = Regex::new(&format!("^(?:{source})$"))
            .map_err(|e| SymbolicError::InvalidSpec(format!("bad pattern {source:?}: {e}")))?;
        Ok(Self {
            source: source.to_string(),
            regex,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_match(&self, text: &str) -> bool {
        self.regex.is_match(text)
    }
}

impl fmt::Debug for TextPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.source)
    }
}

#[derive(Clone, Debug)]
pub enum SpecKind {
    Bool,
    Int {
        min: Option<i64>,
        max: Option<i64>,
    },
    Float {
        min: Option<f64>,
        max: Option<f64>,
    },
    Text {
        pattern: Option<TextPattern>,
    },
    Enum(Vec<Value>),
    /// `None` accepts an object of any registered type.
    ObjectOf(Option<String>),
    ListOf {
        element: Box<ValueSpec>,
        min_len: Option<usize>,
        max_len: Option<usize>,
    },
    MapOf(Box<ValueSpec>),
    Any,
}

/// Constraint on a single field of a symbolic type.
#[derive(Clone, Debug)]
pub struct ValueSpec {
    kind: SpecKind,
    nullable: bool,
}

impl ValueSpec {
    pub fn new(kind: SpecKind) -> Self {
        Self {
            kind,
            nullable: false,
        }
    }

    pub fn bool() -> Self {
        Self::new(SpecKind::Bool)
    }

    pub fn int() -> Self {
        Self::new(SpecKind::Int {
            min: None,
            max: None,
        })
    }

    pub fn int_min(min: i64) -> Self {
        Self::new(SpecKind::Int {
            min: Some(min),
            max: None,
        })
    }

    pub fn int_range(min: i64, max: i64) -> Self {
        Self::new(SpecKind::Int {
            min: Some(min),
            max: Some(max),
        })
    }

    pub fn float() -> Self {
        Self::new(SpecKind::Float {
            min: None,
            max: None,
        })
    }

    pub fn float_min(min: f64) -> Self {
        Self::new(SpecKind::Float {
            min: Some(min),
            max: None,
        })
    }

    pub fn float_range(min: f64, max: f64) -> Self {
        Self::new(SpecKind::Float {
            min: Some(min),
            max: Some(max),
        })
    }

    pub fn text() -> Self {
        Self::new(SpecKind::Text { pattern: None })
    }

    pub fn text_matching(pattern: &str) -> Result<Self, SymbolicError> {
        Ok(Self::new(SpecKind::Text {
            pattern: Some(TextPattern::new(pattern)?),
        }))
    }

    pub fn enumeration(values: Vec<Value>) -> Self {
        Self::new(SpecKind::Enum(values))
    }

    pub fn object(type_name: &str) -> Self {
        Self::new(SpecKind::ObjectOf(Some(type_name.to_string())))
    }

    pub fn any_object() -> Self {
        Self::new(SpecKind::ObjectOf(None))
    }

    pub fn list(element: ValueSpec) -> Self {
        Self::new(SpecKind::ListOf {
            element: Box::new(element),
            min_len: None,
            max_len: None,
        })
    }

    pub fn list_with_len(
        element: ValueSpec,
        min_len: Option<usize>,
        max_len: Option<usize>,
    ) -> Self {
        Self::new(SpecKind::ListOf {
            element: Box::new(element),
            min_len,
            max_len,
        })
    }

    pub fn map(value: ValueSpec) -> Self {
        Self::new(SpecKind::MapOf(Box::new(value)))
    }

    pub fn any() -> Self {
        Self::new(SpecKind::Any)
    }

    pub fn nullable(mut self) -> Self {
        self.nullable = true;
        self
    }

    pub fn kind(&self) -> &SpecKind {
        &self.kind
    }

    pub fn is_nullable(&self) -> bool {
        self.nullable
    }

    /// Checks internal consistency of the spec itself.
    pub fn validate_definition(&self) -> Result<(), SymbolicError> {
        let bad = |msg: String| Err(SymbolicError::InvalidSpec(msg));
        match &self.kind {
            SpecKind::Int {
                min: Some(lo),
                max: Some(hi),
            } if lo > hi => bad(format!("int min {lo} > max {hi}")),
            SpecKind::Float { min, max } => {
                if min.is_some_and(f64::is_nan) || max.is_some_and(f64::is_nan) {
                    return bad("float bound is NaN".into());
                }
                match (min, max) {
                    (Some(lo), Some(hi)) if lo > hi => bad(format!("float min {lo} > max {hi}")),
                    _ => Ok(()),
                }
            }
            SpecKind::Enum(values) if values.is_empty() => bad("enum has no values".into()),
            SpecKind::ListOf {
                element,
                min_len,
                max_len,
            } => {
                if let (Some(lo), Some(hi)) = (min_len, max_len) {
                    if lo > hi {
                        return bad(format!("list min_len {lo} > max_len {hi}"));
                    }
                }
                element.validate_definition()
            }
            SpecKind::MapOf(value) => value.validate_definition(),
            _ => Ok(()),
        }
    }

    /// Validates `value` located at `path`.
    ///
    /// Hyper values are accepted only if every possible materialization would be.
    pub fn check(&self, value: &Value, path: &KeyPath) -> Result<(), SymbolicError> {
        if self.accepts(value, path)? {
            Ok(())
        } else {
            Err(self.violation(value, path))
        }
    }

    fn violation(&self, value: &Value, path: &KeyPath) -> SymbolicError {
        SymbolicError::ConstraintViolation {
            path: path.to_string(),
            spec: self.to_string(),
            value: value.to_string(),
        }
    }

    /// `Ok(false)` reports a violation at `path`; nested violations surface as `Err`.
    fn accepts(&self, value: &Value, path: &KeyPath) -> Result<bool, SymbolicError> {
        if let Value::Hyper(hyper) = value {
            return self.accepts_hyper(&hyper.kind, path);
        }
        if matches!(value, Value::Null) {
            return Ok(self.nullable || matches!(self.kind, SpecKind::Any));
        }
        Ok(match (&self.kind, value) {
            (SpecKind::Any, _) => true,
            (SpecKind::Bool, Value::Bool(_)) => true,
            (SpecKind::Int { min, max }, Value::Int(v)) => {
                min.is_none_or(|lo| *v >= lo) && max.is_none_or(|hi| *v <= hi)
            }
            (SpecKind::Float { min, max }, Value::Float(v)) => {
                !v.is_nan() && min.is_none_or(|lo| *v >= lo) && max.is_none_or(|hi| *v <= hi)
            }
            (SpecKind::Text { pattern }, Value::Text(s)) => {
                pattern.as_ref().is_none_or(|p| p.is_match(s))
            }
            (SpecKind::Enum(values), v) => values.contains(v),
            (SpecKind::ObjectOf(type_name), Value::Object(o)) => {
                type_name.as_ref().is_none_or(|t| o.is_instance_of(t))
            }
            (
                SpecKind::ListOf {
                    element,
                    min_len,
                    max_len,
                },
                Value::List(items),
            ) => {
                if min_len.is_some_and(|lo| items.len() < lo)
                    || max_len.is_some_and(|hi| items.len() > hi)
                {
                    return Ok(false);
                }
                for (i, item) in items.iter().enumerate() {
                    element.check(item, &path.child(i))?;
                }
                true
            }
            (SpecKind::MapOf(spec), Value::Map(map)) => {
                for (k, v) in map {
                    spec.check(v, &path.child(k.as_str()))?;
                }
                true
            }
            _ => false,
        })
    }

    fn accepts_hyper(&self, kind: &HyperKind, path: &KeyPath) -> Result<bool, SymbolicError> {
        match (&self.kind, kind) {
            (SpecKind::Any, _) => Ok(true),
            (_, HyperKind::Choice(choice)) => self.accepts_choice(choice, path),
            (SpecKind::Int { min, max }, HyperKind::Int { min: lo, max: hi }) => {
                Ok(min.is_none_or(|m| *lo >= m) && max.is_none_or(|m| *hi <= m))
            }
            (SpecKind::Enum(values), HyperKind::Int { min: lo, max: hi }) => {
                if hi.saturating_sub(*lo) >= ENUM_RANGE_CHECK_LIMIT {
                    return Ok(false);
                }
                Ok((*lo..=*hi).all(|v| values.contains(&Value::Int(v))))
            }
            (SpecKind::Float { min, max }, HyperKind::Float { min: lo, max: hi }) => {
                Ok(min.is_none_or(|m| *lo >= m) && max.is_none_or(|m| *hi <= m))
            }
            _ => Ok(false),
        }
    }

    fn accepts_choice(&self, choice: &Choice, path: &KeyPath) -> Result<bool, SymbolicError> {
        if choice.k() == 1 {
            for (i, candidate) in choice.candidates().iter().enumerate() {
                self.check(candidate, &path.child(i))?;
            }
            return Ok(true);
        }
        // k > 1 materializes into a list of the chosen candidates.
        match &self.kind {
            SpecKind::ListOf {
                element,
                min_len,
                max_len,
            } => {
                let k = choice.k();
                if min_len.is_some_and(|lo| k < lo) || max_len.is_some_and(|hi| k > hi) {
                    return Ok(false);
                }
                for (i, candidate) in choice.candidates().iter().enumerate() {
                    element.check(candidate, &path.child(i))?;
                }
                Ok(true)
            }
            _ => Ok(false),
        }
    }
}

impl fmt::Display for ValueSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn bounds<T: fmt::Display>(
            f: &mut fmt::Formatter<'_>,
            min: &Option<T>,
            max: &Option<T>,
        ) -> fmt::Result {
            match (min, max) {
                (None, None) => Ok(()),
                (Some(lo), None) => write!(f, "(min={lo})"),
                (None, Some(hi)) => write!(f, "(max={hi})"),
                (Some(lo), Some(hi)) => write!(f, "(min={lo}, max={hi})"),
            }
        }
        match &self.kind {
            SpecKind::Bool => write!(f, "Bool")?,
            SpecKind::Int { min, max } => {
                write!(f, "Int")?;
                bounds(f, min, max)?;
            }
            SpecKind::Float { min, max } => {
                write!(f, "Float")?;
                bounds(f, min, max)?;
            }
            SpecKind::Text { pattern: None } => write!(f, "Text")?,
            SpecKind::Text { pattern: Some(p) } => write!(f, "Text(pattern={:?})", p.source())?,
            SpecKind::Enum(values) => {
                write!(f, "Enum(")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")?;
            }
            SpecKind::ObjectOf(Some(t)) => write!(f, "Object({t})")?,
            SpecKind::ObjectOf(None) => write!(f, "Object(any)")?,
            SpecKind::ListOf {
                element,
                min_len,
                max_len,
            } => {
                write!(f, "List[{element}]")?;
                bounds(f, min_len, max_len)?;
            }
            SpecKind::MapOf(value) => write!(f, "Map[{value}]")?,
            SpecKind::Any => write!(f, "Any")?,
        }
        if self.nullable {
            write!(f, "?")?;
        }
        Ok(())
    }
}
