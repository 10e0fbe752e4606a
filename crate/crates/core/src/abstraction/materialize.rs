use super::dna::{ChoiceItem, Decision, Dna};
use super::spec::{abstract_search_space, nonconforming, DecisionPoint, DecisionSpec, PointKind};
use super::AbstractionError;
use crate::hyper::HyperKind;
use crate::symbolic::{new_object, Mapping, Segment, Value};

/// Turns a space and a conforming DNA into a concrete program.
///
/// A one-of choice is replaced by its chosen candidate; a choice of `k > 1`
/// becomes a list of the chosen candidates in order.
pub fn materialize(space: &Value, dna: &Dna) -> Result<Value, AbstractionError> {
    let spec = abstract_search_space(space);
    spec.validate(dna)?;
    fill(space, &spec.points, &mut 0, &dna.0, &mut 0, &|_| true)
}

/// Materializes only the points accepted by `selector`. `subset` must conform
/// to `spec.filter(selector)`; every other hyper value is kept as is.
pub fn materialize_partial(
    space: &Value,
    subset: &Dna,
    selector: &dyn Fn(&DecisionPoint) -> bool,
) -> Result<Value, AbstractionError> {
    let spec = abstract_search_space(space);
    let filtered = spec.filter(selector);
    if filtered.is_empty() {
        log::warn!("partition selects no decision point; space returned unchanged");
        return Ok(space.clone());
    }
    filtered.validate(subset)?;
    fill(space, &spec.points, &mut 0, &subset.0, &mut 0, selector)
}

fn fill(
    value: &Value,
    points: &[DecisionPoint],
    point_cursor: &mut usize,
    decisions: &[Decision],
    decision_cursor: &mut usize,
    selector: &dyn Fn(&DecisionPoint) -> bool,
) -> Result<Value, AbstractionError> {
    if value.is_deterministic() {
        return Ok(value.clone());
    }
    if let Value::Hyper(hyper) = value {
        let point = points
            .get(*point_cursor)
            .ok_or_else(|| nonconforming("", "space and spec disagree"))?;
        *point_cursor += 1;
        if !selector(point) {
            return Ok(value.clone());
        }
        let decision = decisions
            .get(*decision_cursor)
            .ok_or_else(|| nonconforming(&point.id, "missing decision"))?;
        *decision_cursor += 1;
        return match (hyper.kind(), &point.kind, decision) {
            (
                HyperKind::Choice(choice),
                PointKind::Choice { candidates, .. },
                Decision::Choice(items),
            ) => {
                let mut chosen = Vec::with_capacity(items.len());
                for item in items {
                    chosen.push(fill(
                        &choice.candidates()[item.index],
                        &candidates[item.index].points,
                        &mut 0,
                        &item.children.0,
                        &mut 0,
                        selector,
                    )?);
                }
                Ok(if chosen.len() == 1 {
                    chosen.pop().unwrap()
                } else {
                    Value::List(chosen)
                })
            }
            (HyperKind::Int { .. }, _, Decision::Int(v)) => Ok(Value::Int(*v)),
            (HyperKind::Float { .. }, _, Decision::Float(v)) => Ok(Value::Float(*v)),
            _ => Err(nonconforming(
                &point.id,
                "decision does not match the hyper value",
            )),
        };
    }
    let mut rebuilt = Vec::new();
    for (segment, child) in value.children() {
        let child = fill(
            child,
            points,
            point_cursor,
            decisions,
            decision_cursor,
            selector,
        )?;
        rebuilt.push((segment, child));
    }
    Ok(match value {
        Value::List(_) => Value::List(rebuilt.into_iter().map(|(_, v)| v).collect()),
        Value::Map(_) => Value::Map(keyed(rebuilt)),
        Value::Object(object) => new_object(object.def(), keyed(rebuilt))?,
        other => other.clone(),
    })
}

fn keyed(children: Vec<(Segment, Value)>) -> Mapping {
    children
        .into_iter()
        .filter_map(|(segment, v)| match segment {
            Segment::Key(k) => Some((k, v)),
            Segment::Index(_) => None,
        })
        .collect()
}

/// Splits a full DNA into the decisions for the selected points and the
/// decisions of the space left after `materialize_partial`.
pub fn split_dna(
    spec: &DecisionSpec,
    dna: &Dna,
    selector: &dyn Fn(&DecisionPoint) -> bool,
) -> Result<(Dna, Dna), AbstractionError> {
    spec.validate(dna)?;
    let mut complement = Vec::new();
    let selected = split_points(&spec.points, &dna.0, selector, &mut complement);
    Ok((Dna(selected), Dna(complement)))
}

fn split_points(
    points: &[DecisionPoint],
    decisions: &[Decision],
    selector: &dyn Fn(&DecisionPoint) -> bool,
    complement: &mut Vec<Decision>,
) -> Vec<Decision> {
    let mut selected = Vec::new();
    for (point, decision) in points.iter().zip(decisions) {
        if !selector(point) {
            complement.push(decision.clone());
            continue;
        }
        match (&point.kind, decision) {
            (PointKind::Choice { candidates, .. }, Decision::Choice(items)) => {
                let items = items
                    .iter()
                    .map(|item| ChoiceItem {
                        index: item.index,
                        children: Dna(split_points(
                            &candidates[item.index].points,
                            &item.children.0,
                            selector,
                            complement,
                        )),
                    })
                    .collect();
                selected.push(Decision::Choice(items));
            }
            _ => selected.push(decision.clone()),
        }
    }
    selected
}

/// Inverse of [`split_dna`].
pub fn merge_dna(
    spec: &DecisionSpec,
    selector: &dyn Fn(&DecisionPoint) -> bool,
    selected: &Dna,
    complement: &Dna,
) -> Result<Dna, AbstractionError> {
    let mut sel = selected.0.iter();
    let mut comp = complement.0.iter();
    let merged = Dna(merge_points(&spec.points, selector, &mut sel, &mut comp)?);
    if sel.next().is_some() || comp.next().is_some() {
        return Err(nonconforming("", "extra decisions"));
    }
    spec.validate(&merged)?;
    Ok(merged)
}

fn merge_points<'a>(
    points: &[DecisionPoint],
    selector: &dyn Fn(&DecisionPoint) -> bool,
    selected: &mut impl Iterator<Item = &'a Decision>,
    complement: &mut impl Iterator<Item = &'a Decision>,
) -> Result<Vec<Decision>, AbstractionError> {
    let mut out = Vec::with_capacity(points.len());
    for point in points {
        let missing = || nonconforming(&point.id, "missing decision");
        if !selector(point) {
            out.push(complement.next().ok_or_else(missing)?.clone());
            continue;
        }
        let decision = selected.next().ok_or_else(missing)?;
        match (&point.kind, decision) {
            (PointKind::Choice { candidates, .. }, Decision::Choice(items)) => {
                let mut merged = Vec::with_capacity(items.len());
                for item in items {
                    let cand = candidates
                        .get(item.index)
                        .ok_or_else(|| nonconforming(&point.id, "index out of range"))?;
                    let mut children = item.children.0.iter();
                    let inner = merge_points(&cand.points, selector, &mut children, complement)?;
                    merged.push(ChoiceItem {
                        index: item.index,
                        children: Dna(inner),
                    });
                }
                out.push(Decision::Choice(merged));
            }
            _ => out.push(decision.clone()),
        }
    }
    Ok(out)
}
