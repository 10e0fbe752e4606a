//! Search algorithms. They only ever see a [`DecisionSpec`] and DNA.

mod evolution;
mod exhaustive;
mod mutation;
mod random;

use std::collections::HashMap;
use std::fmt::{Debug, Display};

use num_traits::Float;
use serde::Serialize;
use thiserror::Error;

use crate::abstraction::{AbstractionError, DecisionSpec, Dna};

pub use evolution::{EvolutionConfig, RegularizedEvolution};
pub use exhaustive::Exhaustive;
pub use mutation::{mutate, mutate_with};
pub use random::RandomSearch;

/// Scalar type of rewards.
pub trait Reward: Float + Debug + Display + Serialize + Send + Sync + 'static {}

impl<T: Float + Debug + Display + Serialize + Send + Sync + 'static> Reward for T {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgorithmError {
    #[error("algorithm used before setup")]
    NotSetUp,
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("search space exhausted")]
    ExhaustedSpace,
    #[error("feedback for a DNA that was never proposed: {0:?}")]
    UnknownProposal(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Abstraction(#[from] AbstractionError),
}

/// The propose/feedback contract shared by every algorithm.
pub trait SearchAlgorithm<R: Reward>: Send {
    fn name(&self) -> &'static str;

    /// Binds the algorithm to a spec and resets its state.
    fn setup(&mut self, spec: &DecisionSpec) -> Result<(), AlgorithmError>;

    fn propose(&mut self) -> Result<Dna, AlgorithmError>;

    /// Reports the reward of a DNA returned by [`propose`](Self::propose).
    fn feedback(&mut self, dna: &Dna, reward: R) -> Result<(), AlgorithmError>;

    /// Current population, for algorithms that keep one.
    fn population(&self) -> Option<Vec<(Dna, R)>> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgorithmKind {
    Random,
    Exhaustive,
    RegularizedEvolution(EvolutionConfig),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgorithmConfig {
    pub kind: AlgorithmKind,
    pub seed: u64,
}

impl AlgorithmConfig {
    pub fn new(kind: AlgorithmKind, seed: u64) -> Self {
        AlgorithmConfig { kind, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        AlgorithmConfig { seed, ..self }
    }

    pub fn build<R: Reward>(&self) -> Result<Box<dyn SearchAlgorithm<R>>, AlgorithmError> {
        Ok(match self.kind {
            AlgorithmKind::Random => Box::new(RandomSearch::new(self.seed)),
            AlgorithmKind::Exhaustive => Box::new(Exhaustive::new()),
            AlgorithmKind::RegularizedEvolution(cfg) => {
                Box::new(RegularizedEvolution::<R>::new(cfg, self.seed)?)
            }
        })
    }
}

/// Proposals awaiting feedback, keyed by canonical text.
#[derive(Debug, Clone, Default)]
pub(crate) struct Pending(HashMap<String, usize>);

impl Pending {
    pub(crate) fn add(&mut self, dna: &Dna) {
        *self.0.entry(dna.encode()).or_default() += 1;
    }

    pub(crate) fn take(&mut self, dna: &Dna) -> Result<(), AlgorithmError> {
        let key = dna.encode();
        match self.0.get_mut(&key) {
            Some(count) if *count > 1 => *count -= 1,
            Some(_) => {
                self.0.remove(&key);
            }
            None => return Err(AlgorithmError::UnknownProposal(key)),
        }
        Ok(())
    }

    pub(crate) fn clear(&mut self) {
        self.0.clear();
    }
}

pub(crate) fn spec_of(spec: &Option<DecisionSpec>) -> Result<&DecisionSpec, AlgorithmError> {
    spec.as_ref().ok_or(AlgorithmError::NotSetUp)
}
