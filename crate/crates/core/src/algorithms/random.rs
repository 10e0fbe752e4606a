use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{spec_of, AlgorithmError, Pending, Reward, SearchAlgorithm};
use crate::abstraction::{random_dna, DecisionSpec, Dna};

/// Uniform random search. Rewards are ignored.
#[derive(Debug, Clone)]
pub struct RandomSearch {
    seed: u64,
    rng: ChaCha8Rng,
    spec: Option<DecisionSpec>,
    pending: Pending,
}

impl RandomSearch {
    pub fn new(seed: u64) -> Self {
        RandomSearch {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            spec: None,
            pending: Pending::default(),
        }
    }
}

impl<R: Reward> SearchAlgorithm<R> for RandomSearch {
    fn name(&self) -> &'static str {
        "random"
    }

    fn setup(&mut self, spec: &DecisionSpec) -> Result<(), AlgorithmError> {
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.spec = Some(spec.clone());
        self.pending.clear();
        Ok(())
    }

    fn propose(&mut self) -> Result<Dna, AlgorithmError> {
        let dna = random_dna(spec_of(&self.spec)?, &mut self.rng);
        self.pending.add(&dna);
        Ok(dna)
    }

    fn feedback(&mut self, dna: &Dna, _reward: R) -> Result<(), AlgorithmError> {
        spec_of(&self.spec)?.validate(dna)?;
        self.pending.take(dna)
    }
}
