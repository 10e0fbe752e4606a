//! Sampling loops and the flows built from them.

mod aggregate;
mod eager;
mod report;
mod run;
mod sampler;

use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::abstraction::{AbstractionError, DecisionPoint, Dna};
use crate::algorithms::{AlgorithmError, Reward, SearchAlgorithm};
use crate::symbolic::Value;

pub use aggregate::{top5_average, Aggregator};
pub use eager::{collect_spec, run_eager, Candidate, EagerContext, EagerError};
pub use report::{FlowReport, TrialRecord};
pub use run::{
    derive_seed, run_factorized, run_hybrid, run_joint, run_separate, LoopConfig, RunOptions,
};
pub use sampler::{FeedbackHandle, Sampler, Trial};

pub type SharedAlgorithm<R> = Arc<Mutex<Box<dyn SearchAlgorithm<R>>>>;

pub fn shared<R: Reward>(algorithm: Box<dyn SearchAlgorithm<R>>) -> SharedAlgorithm<R> {
    Arc::new(Mutex::new(algorithm))
}

/// Predicate over decision points that splits a space into a part and its
/// complement.
#[derive(Clone)]
pub struct Partition(Arc<dyn Fn(&DecisionPoint) -> bool + Send + Sync>);

impl Partition {
    pub fn new(f: impl Fn(&DecisionPoint) -> bool + Send + Sync + 'static) -> Self {
        Partition(Arc::new(f))
    }

    /// Selects points whose hints equal `hint`.
    pub fn by_hint(hint: impl Into<String>) -> Self {
        let hint = hint.into();
        Partition::new(move |p| p.hints.as_deref() == Some(hint.as_str()))
    }

    pub fn all() -> Self {
        Partition::new(|_| true)
    }

    pub fn complement(&self) -> Self {
        let inner = Arc::clone(&self.0);
        Partition::new(move |p| !inner(p))
    }

    pub fn matches(&self, point: &DecisionPoint) -> bool {
        (self.0)(point)
    }

    pub fn as_fn(&self) -> &(dyn Fn(&DecisionPoint) -> bool + Send + Sync) {
        &*self.0
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Partition(..)")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("no reward recorded for {0:?}")]
    UnknownKey(String),
    #[error("table oracles need a discrete space")]
    ContinuousSpaceForTable,
    #[error("oracle failed: {0}")]
    Failed(String),
}

/// Scores a concrete program. `dna` is the full DNA of the original space.
pub trait RewardOracle<R>: Sync {
    fn reward(&self, program: &Value, dna: &Dna) -> Result<R, OracleError>;
}

impl<R, F> RewardOracle<R> for F
where
    F: Fn(&Value, &Dna) -> Result<R, OracleError> + Sync,
{
    fn reward(&self, program: &Value, dna: &Dna) -> Result<R, OracleError> {
        self(program, dna)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("feedback already given for trial {0}")]
    DoubleFeedback(usize),
    #[error("trial {0} was skipped without feedback")]
    FeedbackSkipped(usize),
    #[error("partition selects no decision point")]
    EmptySelection,
    #[error("no rewards to aggregate")]
    EmptyRewards,
    #[error("invalid flow configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Abstraction(#[from] AbstractionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Eager(#[from] EagerError),
}
