//! Hyper values: to-be-determined nodes that turn a symbolic tree into a
//! search space.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::symbolic::Value;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperError {
    #[error("a choice needs at least one candidate")]
    EmptyCandidates,
    #[error("bad range: min {min} > max {max} or bound not finite")]
    BadRange { min: String, max: String },
    #[error("cannot choose {k} distinct candidates out of {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("a choice must pick at least one candidate")]
    ZeroK,
}

/// Choose `k` of the candidates, as an ordered tuple of indices.
///
/// With `distinct` no index repeats. With `sorted` the indices are increasing
/// (strictly when distinct, non-decreasing otherwise).
#[derive(Debug, Clone, PartialEq)]
pub struct Choice {
    k: usize,
    candidates: Vec<Value>,
    distinct: bool,
    sorted: bool,
}

impl Choice {
    pub fn new(
        k: usize,
        candidates: Vec<Value>,
        distinct: bool,
        sorted: bool,
    ) -> Result<Self, HyperError> {
        if candidates.is_empty() {
            return Err(HyperError::EmptyCandidates);
        }
        if k == 0 {
            return Err(HyperError::ZeroK);
        }
        if distinct && k > candidates.len() {
            return Err(HyperError::KTooLarge {
                k,
                n: candidates.len(),
            });
        }
        let (distinct, sorted) = if k == 1 {
            (false, false)
        } else {
            (distinct, sorted)
        };
        Ok(Choice {
            k,
            candidates,
            distinct,
            sorted,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidates(&self) -> &[Value] {
        &self.candidates
    }

    pub fn distinct(&self) -> bool {
        self.distinct
    }

    pub fn sorted(&self) -> bool {
        self.sorted
    }

    pub fn is_oneof(&self) -> bool {
        self.k == 1
    }

    pub fn is_permutation(&self) -> bool {
        self.k > 1 && self.k == self.n() && self.distinct && !self.sorted
    }

    pub(crate) fn replace_candidates(&mut self, candidates: Vec<Value>) {
        debug_assert_eq!(candidates.len(), self.candidates.len());
        self.candidates = candidates;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HyperKind {
    Choice(Choice),
    Int { min: i64, max: i64 },
    Float { min: f64, max: f64 },
}

impl HyperKind {
    pub fn int_range(min: i64, max: i64) -> Result<Self, HyperError> {
        if min > max {
            return Err(HyperError::BadRange {
                min: min.to_string(),
                max: max.to_string(),
            });
        }
        Ok(HyperKind::Int { min, max })
    }

    pub fn float_range(min: f64, max: f64) -> Result<Self, HyperError> {
        if !(min.is_finite() && max.is_finite() && min <= max) {
            return Err(HyperError::BadRange {
                min: min.to_string(),
                max: max.to_string(),
            });
        }
        Ok(HyperKind::Float { min, max })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperValue {
    pub(crate) kind: HyperKind,
    pub(crate) hints: Option<String>,
}

impl HyperValue {
    pub fn new(kind: HyperKind) -> Self {
        HyperValue { kind, hints: None }
    }

    pub fn kind(&self) -> &HyperKind {
        &self.kind
    }

    pub fn hints(&self) -> Option<&str> {
        self.hints.as_deref()
    }

    pub fn with_hints(mut self, hints: impl Into<String>) -> Self {
        self.hints = Some(hints.into());
        self
    }

    pub fn with_hints_opt(mut self, hints: Option<String>) -> Self {
        self.hints = hints;
        self
    }

    pub fn as_choice(&self) -> Option<&Choice> {
        match &self.kind {
            HyperKind::Choice(c) => Some(c),
            _ => None,
        }
    }

    pub fn space_size(&self) -> SpaceSize {
        match &self.kind {
            HyperKind::Int { min, max } => {
                SpaceSize::Finite(BigUint::from((*max as i128 - *min as i128 + 1) as u128))
            }
            HyperKind::Float { .. } => SpaceSize::Infinite,
            HyperKind::Choice(choice) => {
                let mut sizes = Vec::with_capacity(choice.n());
                for candidate in choice.candidates() {
                    match space_size(candidate) {
                        SpaceSize::Finite(s) => sizes.push(s),
                        SpaceSize::Infinite => return SpaceSize::Infinite,
                    }
                }
                SpaceSize::Finite(choice_size(
                    choice.k,
                    &sizes,
                    choice.distinct,
                    choice.sorted,
                ))
            }
        }
    }
}

pub(crate) fn choice_size(k: usize, sizes: &[BigUint], distinct: bool, sorted: bool) -> BigUint {
    match (distinct, sorted) {
        (true, _) => {
            // Elementary symmetric polynomial e_k over the candidate sizes.
            let mut e = vec![BigUint::zero(); k + 1];
            e[0] = BigUint::one();
            for s in sizes {
                for j in (1..=k).rev() {
                    let add = &e[j - 1] * s;
                    e[j] += add;
                }
            }
            let mut total = e[k].clone();
            if !sorted {
                for j in 2..=k {
                    total *= BigUint::from(j);
                }
            }
            total
        }
        (false, false) => {
            let sum: BigUint = sizes.iter().sum();
            num_traits::pow(sum, k)
        }
        (false, true) => {
            // Complete homogeneous symmetric polynomial h_k.
            let mut h = vec![BigUint::zero(); k + 1];
            h[0] = BigUint::one();
            for s in sizes {
                for j in 1..=k {
                    let add = &h[j - 1] * s;
                    h[j] += add;
                }
            }
            h[k].clone()
        }
    }
}

/// Number of concrete programs a search space can produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceSize {
    Finite(BigUint),
    Infinite,
}

impl SpaceSize {
    pub fn is_finite(&self) -> bool {
        matches!(self, SpaceSize::Finite(_))
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self {
            SpaceSize::Finite(n) => n.to_u64(),
            SpaceSize::Infinite => None,
        }
    }
}

impl std::ops::Mul for SpaceSize {
    type Output = SpaceSize;

    fn mul(self, rhs: SpaceSize) -> SpaceSize {
        match (self, rhs) {
            (SpaceSize::Finite(a), SpaceSize::Finite(b)) => SpaceSize::Finite(a * b),
            _ => SpaceSize::Infinite,
        }
    }
}

impl fmt::Display for SpaceSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSize::Finite(n) => write!(f, "{n}"),
            SpaceSize::Infinite => f.write_str("INFINITE"),
        }
    }
}

/// Counts the programs `space` can materialize into. A tree without hyper
/// values counts as one.
pub fn space_size(space: &Value) -> SpaceSize {
    if let Value::Hyper(h) = space {
        return h.space_size();
    }
    space
        .children()
        .into_iter()
        .fold(SpaceSize::Finite(BigUint::one()), |acc, (_, child)| {
            acc * space_size(child)
        })
}

pub fn oneof(candidates: Vec<Value>) -> Result<HyperValue, HyperError> {
    Ok(HyperValue::new(HyperKind::Choice(Choice::new(
        1, candidates, false, false,
    )?)))
}

pub fn manyof(
    k: usize,
    candidates: Vec<Value>,
    distinct: bool,
    sorted: bool,
) -> Result<HyperValue, HyperError> {
    Ok(HyperValue::new(HyperKind::Choice(Choice::new(
        k, candidates, distinct, sorted,
    )?)))
}

pub fn permutate(candidates: Vec<Value>) -> Result<HyperValue, HyperError> {
    let k = candidates.len();
    Ok(HyperValue::new(HyperKind::Choice(Choice::new(
        k.max(1),
        candidates,
        true,
        false,
    )?)))
}

pub fn intv(min: i64, max: i64) -> Result<HyperValue, HyperError> {
    Ok(HyperValue::new(HyperKind::int_range(min, max)?))
}

pub fn floatv(min: f64, max: f64) -> Result<HyperValue, HyperError> {
    Ok(HyperValue::new(HyperKind::float_range(min, max)?))
}

fn write_candidates(f: &mut fmt::Formatter<'_>, candidates: &[Value]) -> fmt::Result {
    f.write_str("[")?;
    for (i, c) in candidates.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str("]")
}

impl fmt::Display for HyperValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            HyperKind::Choice(c) if c.is_oneof() => {
                f.write_str("oneof(")?;
                write_candidates(f, c.candidates())?;
            }
            HyperKind::Choice(c) if c.is_permutation() => {
                f.write_str("permutate(")?;
                write_candidates(f, c.candidates())?;
            }
            HyperKind::Choice(c) => {
                write!(f, "manyof({}, ", c.k())?;
                write_candidates(f, c.candidates())?;
                write!(f, ", distinct={}, sorted={}", c.distinct(), c.sorted())?;
            }
            HyperKind::Int { min, max } => write!(f, "intv({min}, {max}")?,
            HyperKind::Float { min, max } => write!(f, "floatv({min:?}, {max:?}")?,
        }
        if let Some(h) = &self.hints {
            write!(f, ", hints={h:?}")?;
        }
        f.write_str(")")
    }
}
