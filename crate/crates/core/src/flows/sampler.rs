use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use super::{FlowError, Partition, SharedAlgorithm};
use crate::abstraction::{
    abstract_search_space, materialize, materialize_partial, DecisionSpec, Dna,
};
use crate::algorithms::{AlgorithmError, Reward};
use crate::symbolic::Value;

/// One proposal: the DNA, the program (or sub-space, when partitioned) it
/// materializes to, and the handle for reporting its reward.
pub struct Trial<R: Reward> {
    pub index: usize,
    pub dna: Dna,
    pub child: Value,
    pub feedback: FeedbackHandle<R>,
}

/// Reports a reward for exactly one DNA, at most once.
pub struct FeedbackHandle<R: Reward> {
    index: usize,
    dna: Dna,
    algorithm: SharedAlgorithm<R>,
    fed: Arc<AtomicBool>,
}

impl<R: Reward> FeedbackHandle<R> {
    pub fn feedback(&self, reward: R) -> Result<(), FlowError> {
        if self.fed.swap(true, Ordering::SeqCst) {
            return Err(FlowError::DoubleFeedback(self.index));
        }
        let mut algorithm = self.algorithm.lock().expect("algorithm lock poisoned");
        algorithm.feedback(&self.dna, reward)?;
        Ok(())
    }

    pub fn dna(&self) -> &Dna {
        &self.dna
    }

    pub fn is_fed(&self) -> bool {
        self.fed.load(Ordering::SeqCst)
    }
}

/// The propose, materialize, feedback loop as an iterator.
///
/// In strict mode (the default) advancing past a trial that got no feedback is
/// an error. In lenient mode such trials are fed negative infinity.
pub struct Sampler<R: Reward> {
    space: Value,
    spec: DecisionSpec,
    algorithm: SharedAlgorithm<R>,
    partition: Option<Partition>,
    budget: Option<usize>,
    strict: bool,
    issued: usize,
    last: Option<(usize, Dna, Arc<AtomicBool>)>,
    done: bool,
}

impl<R: Reward> Sampler<R> {
    /// Sets up `algorithm` on the (partition-filtered) spec of `space`.
    pub fn new(
        space: Value,
        algorithm: SharedAlgorithm<R>,
        partition: Option<Partition>,
        budget: Option<usize>,
    ) -> Result<Self, FlowError> {
        let sampler = Sampler::resume(space, algorithm, partition, budget)?;
        sampler
            .algorithm
            .lock()
            .expect("algorithm lock poisoned")
            .setup(&sampler.spec)?;
        Ok(sampler)
    }

    /// Like [`new`](Self::new) but keeps the algorithm's current state.
    pub fn resume(
        space: Value,
        algorithm: SharedAlgorithm<R>,
        partition: Option<Partition>,
        budget: Option<usize>,
    ) -> Result<Self, FlowError> {
        let full = abstract_search_space(&space);
        let spec = match &partition {
            Some(p) => {
                let filtered = full.filter(p.as_fn());
                if filtered.is_empty() {
                    return Err(FlowError::EmptySelection);
                }
                filtered
            }
            None => full,
        };
        Ok(Sampler {
            space,
            spec,
            algorithm,
            partition,
            budget,
            strict: true,
            issued: 0,
            last: None,
            done: false,
        })
    }

    pub fn lenient(mut self) -> Self {
        self.strict = false;
        self
    }

    pub fn spec(&self) -> &DecisionSpec {
        &self.spec
    }

    pub fn algorithm(&self) -> &SharedAlgorithm<R> {
        &self.algorithm
    }

    fn settle_last(&mut self) -> Result<(), FlowError> {
        if let Some((index, dna, fed)) = self.last.take() {
            if !fed.load(Ordering::SeqCst) {
                if self.strict {
                    return Err(FlowError::FeedbackSkipped(index));
                }
                fed.store(true, Ordering::SeqCst);
                self.algorithm
                    .lock()
                    .expect("algorithm lock poisoned")
                    .feedback(&dna, R::neg_infinity())?;
            }
        }
        Ok(())
    }

    fn next_trial(&mut self) -> Result<Option<Trial<R>>, FlowError> {
        self.settle_last()?;
        if self.budget.is_some_and(|b| self.issued >= b) {
            return Ok(None);
        }
        let proposal = self
            .algorithm
            .lock()
            .expect("algorithm lock poisoned")
            .propose();
        let dna = match proposal {
            Ok(dna) => dna,
            Err(AlgorithmError::ExhaustedSpace) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let child = match &self.partition {
            Some(p) => materialize_partial(&self.space, &dna, p.as_fn())?,
            None => materialize(&self.space, &dna)?,
        };
        let index = self.issued;
        self.issued += 1;
        let fed = Arc::new(AtomicBool::new(false));
        self.last = Some((index, dna.clone(), Arc::clone(&fed)));
        Ok(Some(Trial {
            index,
            dna: dna.clone(),
            child,
            feedback: FeedbackHandle {
                index,
                dna,
                algorithm: Arc::clone(&self.algorithm),
                fed,
            },
        }))
    }
}

impl<R: Reward> Iterator for Sampler<R> {
    type Item = Result<Trial<R>, FlowError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_trial() {
            Ok(Some(trial)) => Some(Ok(trial)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}
