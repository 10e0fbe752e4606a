use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::dna::{Decision, Dna};
use super::AbstractionError;
use crate::hyper::{choice_size, HyperKind, SpaceSize};
use crate::symbolic::{KeyPath, Value};

/// The algorithm-facing view of a search space: decision points in pre-order,
/// with conditional points nested under the candidate that introduces them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecisionSpec {
    pub points: Vec<DecisionPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionPoint {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hints: Option<String>,
    #[serde(flatten)]
    pub kind: PointKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PointKind {
    Choice {
        k: usize,
        n: usize,
        distinct: bool,
        sorted: bool,
        candidates: Vec<DecisionSpec>,
    },
    Int {
        min: i64,
        max: i64,
    },
    Float {
        min: f64,
        max: f64,
    },
}

/// Extracts the decision points of `space`. A deterministic tree yields an
/// empty spec.
pub fn abstract_search_space(space: &Value) -> DecisionSpec {
    let mut points = Vec::new();
    collect(space, &mut KeyPath::root(), &mut points);
    DecisionSpec { points }
}

fn collect(value: &Value, path: &mut KeyPath, out: &mut Vec<DecisionPoint>) {
    if let Value::Hyper(hyper) = value {
        let kind = match hyper.kind() {
            HyperKind::Choice(choice) => PointKind::Choice {
                k: choice.k(),
                n: choice.n(),
                distinct: choice.distinct(),
                sorted: choice.sorted(),
                candidates: choice
                    .candidates()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let mut points = Vec::new();
                        path.push(i);
                        collect(c, path, &mut points);
                        path.pop();
                        DecisionSpec { points }
                    })
                    .collect(),
            },
            HyperKind::Int { min, max } => PointKind::Int {
                min: *min,
                max: *max,
            },
            HyperKind::Float { min, max } => PointKind::Float {
                min: *min,
                max: *max,
            },
        };
        out.push(DecisionPoint {
            id: path.to_string(),
            hints: hyper.hints().map(str::to_string),
            kind,
        });
        return;
    }
    for (segment, child) in value.children() {
        path.push(segment);
        collect(child, path, out);
        path.pop();
    }
}

impl DecisionSpec {
    pub fn new(points: Vec<DecisionPoint>) -> Self {
        DecisionSpec { points }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True when no float point is reachable.
    pub fn is_discrete(&self) -> bool {
        self.points.iter().all(|p| match &p.kind {
            PointKind::Choice { candidates, .. } => {
                candidates.iter().all(DecisionSpec::is_discrete)
            }
            PointKind::Int { .. } => true,
            PointKind::Float { .. } => false,
        })
    }

    pub fn space_size(&self) -> SpaceSize {
        let mut total = SpaceSize::Finite(BigUint::one());
        for point in &self.points {
            total = total * point.space_size();
        }
        total
    }

    /// Visits every point, nested ones included, in pre-order.
    pub fn visit(&self, f: &mut impl FnMut(&DecisionPoint)) {
        for point in &self.points {
            f(point);
            if let PointKind::Choice { candidates, .. } = &point.kind {
                for c in candidates {
                    c.visit(f);
                }
            }
        }
    }

    /// Structural equality ignoring point ids.
    pub fn shape_eq(&self, other: &DecisionSpec) -> bool {
        self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| match (&a.kind, &b.kind) {
                    (
                        PointKind::Choice {
                            k,
                            n,
                            distinct,
                            sorted,
                            candidates,
                        },
                        PointKind::Choice {
                            k: k2,
                            n: n2,
                            distinct: d2,
                            sorted: s2,
                            candidates: c2,
                        },
                    ) => {
                        k == k2
                            && n == n2
                            && distinct == d2
                            && sorted == s2
                            && candidates.iter().zip(c2).all(|(x, y)| x.shape_eq(y))
                    }
                    (PointKind::Int { min, max }, PointKind::Int { min: m2, max: x2 }) => {
                        min == m2 && max == x2
                    }
                    (PointKind::Float { min, max }, PointKind::Float { min: m2, max: x2 }) => {
                        min == m2 && max == x2
                    }
                    _ => false,
                })
    }

    /// Checks that `dna` conforms to this spec.
    pub fn validate(&self, dna: &Dna) -> Result<(), AbstractionError> {
        let decisions = dna.decisions();
        if decisions.len() < self.points.len() {
            return Err(nonconforming(
                &self.points[decisions.len()].id,
                "missing decision",
            ));
        }
        if decisions.len() > self.points.len() {
            let at = self.points.last().map_or("", |p| p.id.as_str());
            return Err(nonconforming(
                at,
                format!("{} extra decisions", decisions.len() - self.points.len()),
            ));
        }
        for (point, decision) in self.points.iter().zip(decisions) {
            point.validate(decision)?;
        }
        Ok(())
    }

    /// Keeps the points accepted by `selector`. Points nested under a
    /// rejected choice are dropped with it.
    pub fn filter(&self, selector: &dyn Fn(&DecisionPoint) -> bool) -> DecisionSpec {
        DecisionSpec {
            points: self
                .points
                .iter()
                .filter(|p| selector(p))
                .map(|p| match &p.kind {
                    PointKind::Choice {
                        k,
                        n,
                        distinct,
                        sorted,
                        candidates,
                    } => DecisionPoint {
                        id: p.id.clone(),
                        hints: p.hints.clone(),
                        kind: PointKind::Choice {
                            k: *k,
                            n: *n,
                            distinct: *distinct,
                            sorted: *sorted,
                            candidates: candidates.iter().map(|c| c.filter(selector)).collect(),
                        },
                    },
                    _ => p.clone(),
                })
                .collect(),
        }
    }
}

pub(crate) fn nonconforming(point: &str, reason: impl Into<String>) -> AbstractionError {
    AbstractionError::NonconformingDna {
        point: point.to_string(),
        reason: reason.into(),
    }
}

impl DecisionPoint {
    pub fn is_choice(&self) -> bool {
        matches!(self.kind, PointKind::Choice { .. })
    }

    pub fn space_size(&self) -> SpaceSize {
        match &self.kind {
            PointKind::Choice {
                k,
                distinct,
                sorted,
                candidates,
                ..
            } => {
                let mut sizes = Vec::with_capacity(candidates.len());
                for c in candidates {
                    match c.space_size() {
                        SpaceSize::Finite(s) => sizes.push(s),
                        SpaceSize::Infinite => return SpaceSize::Infinite,
                    }
                }
                SpaceSize::Finite(choice_size(*k, &sizes, *distinct, *sorted))
            }
            PointKind::Int { min, max } => {
                SpaceSize::Finite(BigUint::from((*max as i128 - *min as i128 + 1) as u128))
            }
            PointKind::Float { .. } => SpaceSize::Infinite,
        }
    }

    pub fn validate(&self, decision: &Decision) -> Result<(), AbstractionError> {
        let fail = |reason: String| Err(nonconforming(&self.id, reason));
        match (&self.kind, decision) {
            (
                PointKind::Choice {
                    k,
                    n,
                    distinct,
                    sorted,
                    candidates,
                },
                Decision::Choice(items),
            ) => {
                if items.len() != *k {
                    return fail(format!("expected {k} choices, found {}", items.len()));
                }
                for (j, item) in items.iter().enumerate() {
                    if item.index >= *n {
                        return fail(format!("index {} out of range 0..{n}", item.index));
                    }
                    if *distinct && items[..j].iter().any(|o| o.index == item.index) {
                        return fail(format!("index {} chosen twice", item.index));
                    }
                    if *sorted && j > 0 {
                        let prev = items[j - 1].index;
                        if item.index < prev || (*distinct && item.index == prev) {
                            return fail("indices are not sorted".to_string());
                        }
                    }
                    candidates[item.index].validate(&item.children)?;
                }
                Ok(())
            }
            (PointKind::Int { min, max }, Decision::Int(v)) => {
                if v < min || v > max {
                    return fail(format!("{v} outside [{min}, {max}]"));
                }
                Ok(())
            }
            (PointKind::Float { min, max }, Decision::Float(v)) => {
                if !(v.is_finite() && v >= min && v <= max) {
                    return fail(format!("{v:?} outside [{min:?}, {max:?}]"));
                }
                Ok(())
            }
            (_, decision) => fail(format!(
                "decision {decision:?} does not match the point kind"
            )),
        }
    }
}
