//! Abstract search spaces and DNA: the decision-level view that search
//! algorithms work with, and the way back to concrete programs.

mod dna;
mod enumerate;
mod materialize;
mod random;
mod spec;

use thiserror::Error;

use crate::symbolic::SymbolicError;

pub use dna::{decode_dna, encode_dna, ChoiceItem, Decision, Dna};
pub use enumerate::{enumerate_dnas, first_dna, DnaIter};
pub use materialize::{materialize, materialize_partial, merge_dna, split_dna};
pub(crate) use random::random_indices;
pub use random::{random_decision, random_dna};
pub use spec::{abstract_search_space, DecisionPoint, DecisionSpec, PointKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AbstractionError {
    #[error("nonconforming DNA at {point:?}: {reason}")]
    NonconformingDna { point: String, reason: String },
    #[error("cannot parse DNA text: {0}")]
    Parse(String),
    #[error("space contains a continuous decision")]
    ContinuousSpace,
    #[error("partition selects no decision point")]
    EmptySelection,
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}
