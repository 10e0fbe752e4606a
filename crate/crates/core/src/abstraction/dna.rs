use std::fmt;

use super::spec::{nonconforming, DecisionPoint, DecisionSpec, PointKind};
use super::AbstractionError;

/// An abstract child program: one decision per top-level point of a spec.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dna(pub Vec<Decision>);

#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    /// The `k` chosen candidate indices in order, each with the decisions
    /// for that candidate's own points.
    Choice(Vec<ChoiceItem>),
    Int(i64),
    Float(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceItem {
    pub index: usize,
    pub children: Dna,
}

impl Dna {
    pub fn new(decisions: Vec<Decision>) -> Self {
        Dna(decisions)
    }

    pub fn decisions(&self) -> &[Decision] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Canonical text: decisions flattened in pre-order and joined by `|`.
    pub fn encode(&self) -> String {
        let mut tokens = Vec::new();
        self.push_tokens(&mut tokens);
        tokens.join("|")
    }

    fn push_tokens(&self, out: &mut Vec<String>) {
        for decision in &self.0 {
            match decision {
                Decision::Choice(items) => {
                    for item in items {
                        out.push(item.index.to_string());
                        item.children.push_tokens(out);
                    }
                }
                Decision::Int(v) => out.push(v.to_string()),
                Decision::Float(v) => out.push(format!("{v:?}")),
            }
        }
    }

    /// Parses canonical text against `spec` and checks conformance.
    pub fn decode(text: &str, spec: &DecisionSpec) -> Result<Dna, AbstractionError> {
        let tokens: Vec<&str> = if text.is_empty() {
            Vec::new()
        } else {
            text.split('|').collect()
        };
        let mut cursor = 0;
        let dna = decode_points(&spec.points, &tokens, &mut cursor)?;
        if cursor < tokens.len() {
            let at = spec.points.last().map_or("", |p| p.id.as_str());
            return Err(nonconforming(
                at,
                format!("{} extra decisions", tokens.len() - cursor),
            ));
        }
        spec.validate(&dna)?;
        Ok(dna)
    }
}

fn decode_points(
    points: &[DecisionPoint],
    tokens: &[&str],
    cursor: &mut usize,
) -> Result<Dna, AbstractionError> {
    let mut decisions = Vec::with_capacity(points.len());
    for point in points {
        let bad = |token: &str| {
            AbstractionError::Parse(format!("bad token {token:?} for {:?}", point.id))
        };
        let decision = match &point.kind {
            PointKind::Choice {
                k, n, candidates, ..
            } => {
                let mut items = Vec::with_capacity(*k);
                for _ in 0..*k {
                    let token = take(tokens, cursor, &point.id)?;
                    let index: usize = token.parse().map_err(|_| bad(token))?;
                    if index >= *n {
                        return Err(nonconforming(
                            &point.id,
                            format!("index {index} out of range 0..{n}"),
                        ));
                    }
                    let children = decode_points(&candidates[index].points, tokens, cursor)?;
                    items.push(ChoiceItem { index, children });
                }
                Decision::Choice(items)
            }
            PointKind::Int { .. } => {
                let token = take(tokens, cursor, &point.id)?;
                Decision::Int(token.parse().map_err(|_| bad(token))?)
            }
            PointKind::Float { .. } => {
                let token = take(tokens, cursor, &point.id)?;
                Decision::Float(token.parse().map_err(|_| bad(token))?)
            }
        };
        decisions.push(decision);
    }
    Ok(Dna(decisions))
}

fn take<'a>(tokens: &[&'a str], cursor: &mut usize, id: &str) -> Result<&'a str, AbstractionError> {
    let token = tokens
        .get(*cursor)
        .ok_or_else(|| nonconforming(id, "missing decision"))?;
    *cursor += 1;
    Ok(token)
}

impl Decision {
    pub fn pick(index: usize) -> Self {
        Decision::Choice(vec![ChoiceItem {
            index,
            children: Dna::default(),
        }])
    }

    pub fn pick_with(index: usize, children: Vec<Decision>) -> Self {
        Decision::Choice(vec![ChoiceItem {
            index,
            children: Dna(children),
        }])
    }

    pub fn picks(indices: &[usize]) -> Self {
        Decision::Choice(
            indices
                .iter()
                .map(|&index| ChoiceItem {
                    index,
                    children: Dna::default(),
                })
                .collect(),
        )
    }

    pub fn as_choice(&self) -> Option<&[ChoiceItem]> {
        match self {
            Decision::Choice(items) => Some(items),
            _ => None,
        }
    }
}

impl fmt::Display for Dna {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

pub fn encode_dna(dna: &Dna) -> String {
    dna.encode()
}

pub fn decode_dna(text: &str, spec: &DecisionSpec) -> Result<Dna, AbstractionError> {
    Dna::decode(text, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::abstract_search_space;
    use crate::hyper::{floatv, intv, oneof};
    use crate::symbolic::Value;

    fn conv_space() -> DecisionSpec {
        let filters: Value = oneof(vec![2.into(), 4.into()]).unwrap().into();
        let space: Value = oneof(vec![
            Value::Null,
            Value::Int(3),
            Value::from(vec![filters, Value::Int(3)]),
        ])
        .unwrap()
        .into();
        abstract_search_space(&space)
    }

    #[test]
    fn encodes_nested_choice() {
        let dna = Dna::new(vec![Decision::pick_with(2, vec![Decision::pick(1)])]);
        assert_eq!(dna.encode(), "2|1");
        assert_eq!(Dna::decode("2|1", &conv_space()).unwrap(), dna);
        assert_eq!(
            Dna::decode("0", &conv_space()).unwrap(),
            Dna::new(vec![Decision::pick(0)])
        );
    }

    #[test]
    fn decode_errors() {
        let spec = conv_space();
        assert!(matches!(
            Dna::decode("7", &spec),
            Err(AbstractionError::NonconformingDna { .. })
        ));
        assert!(matches!(
            Dna::decode("2", &spec),
            Err(AbstractionError::NonconformingDna { .. })
        ));
        assert!(matches!(
            Dna::decode("0|1", &spec),
            Err(AbstractionError::NonconformingDna { .. })
        ));
        assert!(matches!(
            Dna::decode("x", &spec),
            Err(AbstractionError::Parse(_))
        ));
        assert!(matches!(
            Dna::decode("", &spec),
            Err(AbstractionError::NonconformingDna { .. })
        ));
    }

    #[test]
    fn numbers_roundtrip() {
        let space = Value::from(vec![
            Value::from(intv(-5, 5).unwrap()),
            floatv(0.0, 1.0).unwrap().into(),
        ]);
        let spec = abstract_search_space(&space);
        let dna = Dna::new(vec![Decision::Int(-3), Decision::Float(0.1)]);
        assert_eq!(dna.encode(), "-3|0.1");
        assert_eq!(Dna::decode("-3|0.1", &spec).unwrap(), dna);
        assert!(Dna::decode("-3|1.5", &spec).is_err());
        assert_eq!(
            Dna::decode("", &DecisionSpec::default()).unwrap(),
            Dna::default()
        );
    }
}
