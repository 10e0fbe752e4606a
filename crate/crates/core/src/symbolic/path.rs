use std::fmt;
use std::str::FromStr;

use super::SymbolicError;

/// One step from a node to one of its children.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Segment {
    Key(String),
    Index(usize),
}

impl From<&str> for Segment {
    fn from(key: &str) -> Self {
        Segment::Key(key.to_string())
    }
}

impl From<usize> for Segment {
    fn from(index: usize) -> Self {
        Segment::Index(index)
    }
}

/// Location of a node relative to the root of a symbolic tree.
///
/// Renders as `model.children[0].filters`; the root renders as the empty string.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KeyPath {
    segments: Vec<Segment>,
}

impl KeyPath {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn from_segments(segments: Vec<Segment>) -> Self {
        Self { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_root(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn child(&self, segment: impl Into<Segment>) -> Self {
        let mut segments = self.segments.clone();
        segments.push(segment.into());
        Self { segments }
    }

    pub fn push(&mut self, segment: impl Into<Segment>) {
        self.segments.push(segment.into());
    }

    pub fn pop(&mut self) -> Option<Segment> {
        self.segments.pop()
    }

    pub fn parent(&self) -> Option<Self> {
        if self.segments.is_empty() {
            None
        } else {
            Some(Self {
                segments: self.segments[..self.segments.len() - 1].to_vec(),
            })
        }
    }

    pub fn last(&self) -> Option<&Segment> {
        self.segments.last()
    }

    /// Prepends `prefix` to this path.
    pub fn prefixed(&self, prefix: &[Segment]) -> Self {
        let mut segments = prefix.to_vec();
        segments.extend(self.segments.iter().cloned());
        Self { segments }
    }

    pub fn parse(text: &str) -> Result<Self, SymbolicError> {
        text.parse()
    }
}

pub(crate) fn is_identifier(key: &str) -> bool {
    let mut chars = key.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for KeyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, segment) in self.segments.iter().enumerate() {
            match segment {
                Segment::Key(key) if i == 0 => write!(f, "{key}")?,
                Segment::Key(key) => write!(f, ".{key}")?,
                Segment::Index(index) => write!(f, "[{index}]")?,
            }
        }
        Ok(())
    }
}

impl FromStr for KeyPath {
    type Err = SymbolicError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let invalid = || SymbolicError::InvalidPath(text.to_string());
        let bytes = text.as_bytes();
        let mut segments = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            match bytes[pos] {
                b'[' => {
                    let close = text[pos..].find(']').ok_or_else(invalid)? + pos;
                    let digits = &text[pos + 1..close];
                    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(invalid());
                    }
                    let index = digits.parse().map_err(|_| invalid())?;
                    segments.push(Segment::Index(index));
                    pos = close + 1;
                }
                b'.' if !segments.is_empty() => {
                    let start = pos + 1;
                    let end = text[start..]
                        .find(['.', '['])
                        .map_or(text.len(), |offset| start + offset);
                    let key = &text[start..end];
                    if !is_identifier(key) {
                        return Err(invalid());
                    }
                    segments.push(Segment::Key(key.to_string()));
                    pos = end;
                }
                _ if segments.is_empty() => {
                    let end = text.find(['.', '[']).unwrap_or(text.len());
                    let key = &text[..end];
                    if !is_identifier(key) {
                        return Err(invalid());
                    }
                    segments.push(Segment::Key(key.to_string()));
                    pos = end;
                }
                _ => return Err(invalid()),
            }
        }
        Ok(Self { segments })
    }
}

/// Anything that can name a path in a tree: rendered text or a parsed [`KeyPath`].
pub trait IntoKeyPath {
    fn into_key_path(self) -> Result<KeyPath, SymbolicError>;
}

impl IntoKeyPath for KeyPath {
    fn into_key_path(self) -> Result<KeyPath, SymbolicError> {
        Ok(self)
    }
}

impl IntoKeyPath for &KeyPath {
    fn into_key_path(self) -> Result<KeyPath, SymbolicError> {
        Ok(self.clone())
    }
}

impl IntoKeyPath for &str {
    fn into_key_path(self) -> Result<KeyPath, SymbolicError> {
        self.parse()
    }
}

impl IntoKeyPath for String {
    fn into_key_path(self) -> Result<KeyPath, SymbolicError> {
        self.parse()
    }
}
