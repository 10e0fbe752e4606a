use super::dna::{ChoiceItem, Decision, Dna};
use super::spec::{DecisionPoint, DecisionSpec, PointKind};
use super::AbstractionError;

/// Lazily yields every conforming DNA of a discrete spec exactly once, in
/// lexicographic order of the numeric token sequence.
#[derive(Debug, Clone)]
pub struct DnaIter {
    spec: DecisionSpec,
    next: Option<Dna>,
}

impl DnaIter {
    pub fn new(spec: DecisionSpec) -> Result<Self, AbstractionError> {
        if !spec.is_discrete() {
            return Err(AbstractionError::ContinuousSpace);
        }
        let next = Some(first_dna(&spec));
        Ok(DnaIter { spec, next })
    }

    pub fn spec(&self) -> &DecisionSpec {
        &self.spec
    }
}

impl Iterator for DnaIter {
    type Item = Dna;

    fn next(&mut self) -> Option<Dna> {
        let current = self.next.take()?;
        let mut successor = current.clone();
        if advance(&mut successor, &self.spec) {
            self.next = Some(successor);
        }
        Some(current)
    }
}

pub fn enumerate_dnas(spec: &DecisionSpec) -> Result<DnaIter, AbstractionError> {
    DnaIter::new(spec.clone())
}

/// The smallest DNA of `spec`: first feasible indices and range minimums.
pub fn first_dna(spec: &DecisionSpec) -> Dna {
    Dna(spec.points.iter().map(first_decision).collect())
}

fn first_decision(point: &DecisionPoint) -> Decision {
    match &point.kind {
        PointKind::Choice { k, .. } => {
            let mut items = Vec::with_capacity(*k);
            complete(&mut items, point);
            Decision::Choice(items)
        }
        PointKind::Int { min, .. } => Decision::Int(*min),
        PointKind::Float { min, .. } => Decision::Float(*min),
    }
}

/// Smallest index at position `items.len()` that is at least `from` and still
/// allows the remaining positions to be filled.
fn next_feasible(point: &DecisionPoint, items: &[ChoiceItem], from: usize) -> Option<usize> {
    let PointKind::Choice {
        k,
        n,
        distinct,
        sorted,
        ..
    } = &point.kind
    else {
        return None;
    };
    let j = items.len();
    let mut lo = from;
    let mut hi = *n;
    if *sorted {
        if let Some(prev) = items.last() {
            lo = lo.max(prev.index + usize::from(*distinct));
        }
        if *distinct {
            hi = n + 1 - (k - j);
        }
    }
    (lo..hi).find(|&i| !*distinct || items.iter().all(|o| o.index != i))
}

fn complete(items: &mut Vec<ChoiceItem>, point: &DecisionPoint) {
    let PointKind::Choice { k, candidates, .. } = &point.kind else {
        return;
    };
    while items.len() < *k {
        let index = next_feasible(point, items, 0).expect("choice constraints are satisfiable");
        items.push(ChoiceItem {
            index,
            children: first_dna(&candidates[index]),
        });
    }
}

fn advance(dna: &mut Dna, spec: &DecisionSpec) -> bool {
    for i in (0..spec.points.len()).rev() {
        if advance_decision(&mut dna.0[i], &spec.points[i]) {
            for later in i + 1..spec.points.len() {
                dna.0[later] = first_decision(&spec.points[later]);
            }
            return true;
        }
    }
    false
}

fn advance_decision(decision: &mut Decision, point: &DecisionPoint) -> bool {
    match (decision, &point.kind) {
        (Decision::Choice(items), PointKind::Choice { candidates, .. }) => {
            for j in (0..items.len()).rev() {
                let index = items[j].index;
                if advance(&mut items[j].children, &candidates[index]) {
                    items.truncate(j + 1);
                    complete(items, point);
                    return true;
                }
                items.truncate(j);
                if let Some(next) = next_feasible(point, items, index + 1) {
                    items.push(ChoiceItem {
                        index: next,
                        children: first_dna(&candidates[next]),
                    });
                    complete(items, point);
                    return true;
                }
            }
            false
        }
        (Decision::Int(v), PointKind::Int { max, .. }) if *v < *max => {
            *v += 1;
            true
        }
        _ => false,
    }
}
