use std::collections::HashMap;

use serde_json::{json, Map as JsonMap, Value as Json};

use super::BenchError;
use crate::abstraction::{abstract_search_space, enumerate_dnas, materialize, DecisionSpec, Dna};
use crate::algorithms::Reward;
use crate::flows::{OracleError, RewardOracle};
use crate::symbolic::Value;

/// Precomputed rewards keyed by canonical DNA text.
///
/// JSON form: `{"spec": <DecisionSpec>, "rewards": {"<dna>": <reward>, ...}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableOracle {
    spec: DecisionSpec,
    keys: Vec<String>,
    rewards: HashMap<String, f64>,
}

impl TableOracle {
    pub fn new(spec: DecisionSpec, rewards: Vec<(String, f64)>) -> Result<Self, BenchError> {
        if !spec.is_discrete() {
            return Err(OracleError::ContinuousSpaceForTable.into());
        }
        let keys = rewards.iter().map(|(k, _)| k.clone()).collect();
        Ok(TableOracle {
            spec,
            keys,
            rewards: rewards.into_iter().collect(),
        })
    }

    /// Tabulates `oracle` over every program of `space`.
    pub fn tabulate<O: RewardOracle<f64> + ?Sized>(
        space: &Value,
        oracle: &O,
    ) -> Result<Self, BenchError> {
        let spec = abstract_search_space(space);
        let dnas = enumerate_dnas(&spec).map_err(|_| OracleError::ContinuousSpaceForTable)?;
        let mut rewards = Vec::new();
        for dna in dnas {
            let program = materialize(space, &dna)?;
            rewards.push((dna.encode(), oracle.reward(&program, &dna)?));
        }
        TableOracle::new(spec, rewards)
    }

    pub fn spec(&self) -> &DecisionSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    pub fn lookup(&self, dna: &Dna) -> Result<f64, OracleError> {
        let key = dna.encode();
        self.rewards
            .get(&key)
            .copied()
            .ok_or(OracleError::UnknownKey(key))
    }

    pub fn to_json(&self) -> Json {
        let mut rewards = JsonMap::new();
        for key in &self.keys {
            rewards.insert(key.clone(), json!(self.rewards[key]));
        }
        json!({"spec": self.spec, "rewards": rewards})
    }

    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let malformed = |m: String| BenchError::MalformedTable(m);
        let doc: Json = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
        let spec: DecisionSpec =
            serde_json::from_value(doc.get("spec").cloned().unwrap_or(Json::Null))
                .map_err(|e| malformed(format!("bad spec: {e}")))?;
        let entries = doc
            .get("rewards")
            .and_then(Json::as_object)
            .ok_or_else(|| malformed("missing \"rewards\" object".into()))?;
        let mut rewards = Vec::with_capacity(entries.len());
        for (key, value) in entries {
            let reward = value
                .as_f64()
                .ok_or_else(|| malformed(format!("reward for {key:?} is not a number")))?;
            rewards.push((key.clone(), reward));
        }
        TableOracle::new(spec, rewards)
    }
}

impl<R: Reward> RewardOracle<R> for TableOracle {
    fn reward(&self, _program: &Value, dna: &Dna) -> Result<R, OracleError> {
        let reward = self.lookup(dna)?;
        R::from(reward)
            .ok_or_else(|| OracleError::Failed("reward does not fit the reward type".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{build_nasbench_space, SyntheticNasOracle};
    use crate::hyper::floatv;

    #[test]
    fn roundtrip_and_lookup() {
        let space = build_nasbench_space(2, 2).unwrap();
        let synthetic = SyntheticNasOracle::new(2, 2, 7).unwrap();
        let table = TableOracle::tabulate(&space, &synthetic).unwrap();
        assert_eq!(table.len(), 8);
        let back = TableOracle::from_json(&table.to_json().to_string()).unwrap();
        assert_eq!(back, table);
        for dna in enumerate_dnas(table.spec()).unwrap() {
            assert_eq!(
                back.lookup(&dna).unwrap(),
                synthetic.score_dna(&dna).unwrap()
            );
        }
    }

    #[test]
    fn errors() {
        let space = build_nasbench_space(2, 2).unwrap();
        let spec = abstract_search_space(&space);
        let table = TableOracle::new(spec.clone(), vec![]).unwrap();
        let dna = crate::abstraction::first_dna(&spec);
        assert!(matches!(table.lookup(&dna), Err(OracleError::UnknownKey(k)) if k == "0|0|0"));
        let continuous = abstract_search_space(&floatv(0.0, 1.0).unwrap().into());
        assert_eq!(
            TableOracle::new(continuous, vec![]),
            Err(BenchError::Oracle(OracleError::ContinuousSpaceForTable))
        );
        assert!(matches!(
            TableOracle::from_json("{}"),
            Err(BenchError::MalformedTable(_))
        ));
    }
}
