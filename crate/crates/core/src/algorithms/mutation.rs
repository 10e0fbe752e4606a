use rand::Rng;

use crate::abstraction::{
    random_dna, random_indices, ChoiceItem, Decision, DecisionPoint, DecisionSpec, Dna, PointKind,
};

/// Resamples one active decision point, chosen uniformly, to a different
/// feasible value. Points with a single feasible value are left as they are.
pub fn mutate<R: Rng + ?Sized>(dna: &Dna, spec: &DecisionSpec, rng: &mut R) -> Dna {
    mutate_with(dna, spec, rng, false)
}

/// Like [`mutate`]; with `include_current` the new value may equal the old one.
pub fn mutate_with<R: Rng + ?Sized>(
    dna: &Dna,
    spec: &DecisionSpec,
    rng: &mut R,
    include_current: bool,
) -> Dna {
    let mut locations = Vec::new();
    collect(dna, spec, &mut Vec::new(), &mut locations);
    let mut out = dna.clone();
    if locations.is_empty() {
        return out;
    }
    let (route, i) = &locations[rng.gen_range(0..locations.len())];
    let (decision, point) = locate(&mut out, spec, route, *i);
    resample(decision, point, rng, include_current);
    out
}

type Route = Vec<(usize, usize)>;

fn collect(dna: &Dna, spec: &DecisionSpec, route: &mut Route, out: &mut Vec<(Route, usize)>) {
    for (i, (point, decision)) in spec.points.iter().zip(&dna.0).enumerate() {
        out.push((route.clone(), i));
        if let (PointKind::Choice { candidates, .. }, Decision::Choice(items)) =
            (&point.kind, decision)
        {
            for (j, item) in items.iter().enumerate() {
                route.push((i, j));
                collect(&item.children, &candidates[item.index], route, out);
                route.pop();
            }
        }
    }
}

fn locate<'a>(
    dna: &'a mut Dna,
    spec: &'a DecisionSpec,
    route: &[(usize, usize)],
    i: usize,
) -> (&'a mut Decision, &'a DecisionPoint) {
    match route.split_first() {
        None => (&mut dna.0[i], &spec.points[i]),
        Some((&(d, j), rest)) => {
            let (PointKind::Choice { candidates, .. }, Decision::Choice(items)) =
                (&spec.points[d].kind, &mut dna.0[d])
            else {
                unreachable!("routes only pass through choices");
            };
            let item = &mut items[j];
            locate(&mut item.children, &candidates[item.index], rest, i)
        }
    }
}

fn resample<R: Rng + ?Sized>(
    decision: &mut Decision,
    point: &DecisionPoint,
    rng: &mut R,
    include_current: bool,
) {
    match (&point.kind, decision) {
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
            let singleton = *n == 1 || (*distinct && *sorted && k == n);
            if singleton && !include_current {
                return;
            }
            let current: Vec<usize> = items.iter().map(|item| item.index).collect();
            let indices = loop {
                let draw = random_indices(*k, *n, *distinct, *sorted, rng);
                if include_current || draw != current {
                    break draw;
                }
            };
            let old = std::mem::take(items);
            *items = indices
                .into_iter()
                .zip(old)
                .map(|(index, item)| {
                    if index == item.index {
                        item
                    } else {
                        ChoiceItem {
                            index,
                            children: random_dna(&candidates[index], rng),
                        }
                    }
                })
                .collect();
        }
        (PointKind::Int { min, max }, Decision::Int(v)) => {
            if include_current {
                *v = rng.gen_range(*min..=*max);
            } else if min < max {
                let draw = rng.gen_range(*min..*max);
                *v = if draw >= *v { draw + 1 } else { draw };
            }
        }
        (PointKind::Float { min, max }, Decision::Float(v)) => {
            if include_current {
                *v = rng.gen_range(*min..=*max);
            } else if min < max {
                loop {
                    let draw = rng.gen_range(*min..=*max);
                    if draw != *v {
                        *v = draw;
                        break;
                    }
                }
            }
        }
        _ => {}
    }
}
