use super::BenchError;
use crate::abstraction::{Decision, Dna};
use crate::algorithms::Reward;
use crate::flows::{OracleError, RewardOracle};
use crate::hyper::oneof;
use crate::symbolic::Value;

/// Edge positions `(src, dst)` with `src < dst`, in lexicographic order.
pub fn edge_list(nodes: usize) -> Vec<(usize, usize)> {
    (0..nodes)
        .flat_map(|src| (src + 1..nodes).map(move |dst| (src, dst)))
        .collect()
}

/// `{"ops": [oneof(0..K) x M], "edges": [oneof([false, true]) x M(M-1)/2]}`,
/// with hints "op" and "edge".
pub fn build_nasbench_space(nodes: usize, ops: usize) -> Result<Value, BenchError> {
    if nodes < 2 || ops < 2 {
        return Err(BenchError::BadDimensions { nodes, ops });
    }
    let op_choices = (0..ops as i64).map(Value::Int).collect::<Vec<_>>();
    let node_ops = (0..nodes)
        .map(|_| {
            Value::from(
                oneof(op_choices.clone())
                    .expect("non-empty")
                    .with_hints("op"),
            )
        })
        .collect::<Vec<_>>();
    let edges = edge_list(nodes)
        .into_iter()
        .map(|_| {
            Value::from(
                oneof(vec![false.into(), true.into()])
                    .expect("non-empty")
                    .with_hints("edge"),
            )
        })
        .collect::<Vec<_>>();
    Ok(Value::mapping([
        ("ops", Value::List(node_ops)),
        ("edges", Value::List(edges)),
    ])
    .expect("identifier keys"))
}

/// splitmix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Deterministic stand-in for a tabular NAS benchmark.
///
/// `reward = 0.5 * (sum_i w[i][op_i] / M) + 0.5 * (sum_e v[e] * [edge_e == t_e] / E)`
/// where `t_e = (op_src + op_dst) mod 2` and both sums run in ascending index
/// order. `w` (row-major) and then `v` are drawn from [`SplitMix64`].
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticNasOracle {
    nodes: usize,
    ops: usize,
    weights: Vec<Vec<f64>>,
    edge_values: Vec<f64>,
    edges: Vec<(usize, usize)>,
}

impl SyntheticNasOracle {
    pub fn new(nodes: usize, ops: usize, seed: u64) -> Result<Self, BenchError> {
        if nodes < 2 || ops < 2 {
            return Err(BenchError::BadDimensions { nodes, ops });
        }
        let mut rng = SplitMix64::new(seed);
        let weights = (0..nodes)
            .map(|_| (0..ops).map(|_| rng.next_f64()).collect())
            .collect();
        let edges = edge_list(nodes);
        let edge_values = edges.iter().map(|_| rng.next_f64()).collect();
        Ok(SyntheticNasOracle {
            nodes,
            ops,
            weights,
            edge_values,
            edges,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn ops(&self) -> usize {
        self.ops
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn edge_values(&self) -> &[f64] {
        &self.edge_values
    }

    pub fn score(&self, node_ops: &[usize], edges_on: &[bool]) -> f64 {
        let mut op_sum = 0.0;
        for (i, &op) in node_ops.iter().enumerate() {
            op_sum += self.weights[i][op];
        }
        let mut edge_sum = 0.0;
        for (e, &(src, dst)) in self.edges.iter().enumerate() {
            let target = (node_ops[src] + node_ops[dst]) % 2 == 1;
            if edges_on[e] == target {
                edge_sum += self.edge_values[e];
            }
        }
        0.5 * (op_sum / self.nodes as f64) + 0.5 * (edge_sum / self.edges.len() as f64)
    }

    /// Scores a DNA of [`build_nasbench_space`]: M op indices, then E edge
    /// indices where 1 means on.
    pub fn score_dna(&self, dna: &Dna) -> Result<f64, OracleError> {
        let bad = || {
            OracleError::Failed(format!(
                "DNA {:?} does not fit the benchmark space",
                dna.encode()
            ))
        };
        let expected = self.nodes + self.edges.len();
        if dna.0.len() != expected {
            return Err(bad());
        }
        let pick = |d: &Decision, n: usize| match d.as_choice() {
            Some([item]) if item.index < n => Ok(item.index),
            _ => Err(bad()),
        };
        let node_ops = dna.0[..self.nodes]
            .iter()
            .map(|d| pick(d, self.ops))
            .collect::<Result<Vec<_>, _>>()?;
        let edges_on = dna.0[self.nodes..]
            .iter()
            .map(|d| pick(d, 2).map(|i| i == 1))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.score(&node_ops, &edges_on))
    }
}

impl<R: Reward> RewardOracle<R> for SyntheticNasOracle {
    fn reward(&self, _program: &Value, dna: &Dna) -> Result<R, OracleError> {
        let score = self.score_dna(dna)?;
        R::from(score)
            .ok_or_else(|| OracleError::Failed("reward does not fit the reward type".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{abstract_search_space, enumerate_dnas};
    use crate::hyper::space_size;

    #[test]
    fn space_sizes() {
        assert_eq!(
            space_size(&build_nasbench_space(3, 3).unwrap()).to_u64(),
            Some(216)
        );
        assert_eq!(
            space_size(&build_nasbench_space(2, 2).unwrap()).to_u64(),
            Some(8)
        );
        assert_eq!(
            build_nasbench_space(1, 3),
            Err(BenchError::BadDimensions { nodes: 1, ops: 3 })
        );
        let spec = abstract_search_space(&build_nasbench_space(3, 3).unwrap());
        assert_eq!(spec.points[0].id, "ops[0]");
        assert_eq!(spec.points[3].id, "edges[0]");
        assert_eq!(spec.points[3].hints.as_deref(), Some("edge"));
    }

    #[test]
    fn splitmix_reference_values() {
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
    }

    #[test]
    fn matching_edges_reduce_to_means() {
        let oracle = SyntheticNasOracle::new(3, 3, 7).unwrap();
        let ops = [2, 1, 1];
        let edges = [true, true, false];
        let w = (oracle.weights()[0][2] + oracle.weights()[1][1] + oracle.weights()[2][1]) / 3.0;
        let v = oracle.edge_values().iter().sum::<f64>() / 3.0;
        assert!((oracle.score(&ops, &edges) - (0.5 * w + 0.5 * v)).abs() < 1e-15);
    }

    #[test]
    fn rewards_in_unit_interval() {
        let oracle = SyntheticNasOracle::new(3, 2, 11).unwrap();
        let space = build_nasbench_space(3, 2).unwrap();
        for dna in enumerate_dnas(&abstract_search_space(&space)).unwrap() {
            let r = oracle.score_dna(&dna).unwrap();
            assert!((0.0..1.0).contains(&r));
        }
    }
}
