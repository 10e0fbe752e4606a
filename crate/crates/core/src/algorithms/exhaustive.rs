use super::{AlgorithmError, Pending, Reward, SearchAlgorithm};
use crate::abstraction::{DecisionSpec, Dna, DnaIter};

/// Proposes every DNA of a discrete space once, in enumeration order.
#[derive(Debug, Clone, Default)]
pub struct Exhaustive {
    iter: Option<DnaIter>,
    pending: Pending,
}

impl Exhaustive {
    pub fn new() -> Self {
        Exhaustive::default()
    }
}

impl<R: Reward> SearchAlgorithm<R> for Exhaustive {
    fn name(&self) -> &'static str {
        "exhaustive"
    }

    fn setup(&mut self, spec: &DecisionSpec) -> Result<(), AlgorithmError> {
        let iter = DnaIter::new(spec.clone()).map_err(|_| {
            AlgorithmError::UnsupportedSpace("exhaustive search needs a discrete space".into())
        })?;
        self.iter = Some(iter);
        self.pending.clear();
        Ok(())
    }

    fn propose(&mut self) -> Result<Dna, AlgorithmError> {
        let iter = self.iter.as_mut().ok_or(AlgorithmError::NotSetUp)?;
        let dna = iter.next().ok_or(AlgorithmError::ExhaustedSpace)?;
        self.pending.add(&dna);
        Ok(dna)
    }

    fn feedback(&mut self, dna: &Dna, _reward: R) -> Result<(), AlgorithmError> {
        let iter = self.iter.as_ref().ok_or(AlgorithmError::NotSetUp)?;
        iter.spec().validate(dna)?;
        self.pending.take(dna)
    }
}
