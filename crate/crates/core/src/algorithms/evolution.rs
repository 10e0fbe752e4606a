use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{mutate_with, spec_of, AlgorithmError, Pending, Reward, SearchAlgorithm};
use crate::abstraction::{random_dna, DecisionSpec, Dna};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub tournament_size: usize,
    /// Let mutation redraw the current value.
    pub include_current: bool,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            population_size: 25,
            tournament_size: 5,
            include_current: false,
        }
    }
}

impl EvolutionConfig {
    pub fn new(population_size: usize, tournament_size: usize) -> Self {
        EvolutionConfig {
            population_size,
            tournament_size,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), AlgorithmError> {
        if self.population_size == 0
            || self.tournament_size == 0
            || self.tournament_size > self.population_size
        {
            return Err(AlgorithmError::InvalidConfig(format!(
                "need 1 <= tournament ({}) <= population ({})",
                self.tournament_size, self.population_size
            )));
        }
        Ok(())
    }
}

/// Regularized evolution: a FIFO population of the last `P` evaluated DNAs,
/// tournament parent selection and single-point mutation.
#[derive(Debug, Clone)]
pub struct RegularizedEvolution<R> {
    config: EvolutionConfig,
    seed: u64,
    rng: ChaCha8Rng,
    spec: Option<DecisionSpec>,
    population: VecDeque<(Dna, R)>,
    feedbacks: usize,
    pending: Pending,
}

impl<R: Reward> RegularizedEvolution<R> {
    pub fn new(config: EvolutionConfig, seed: u64) -> Result<Self, AlgorithmError> {
        config.validate()?;
        Ok(RegularizedEvolution {
            config,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            spec: None,
            population: VecDeque::with_capacity(config.population_size),
            feedbacks: 0,
            pending: Pending::default(),
        })
    }

    pub fn config(&self) -> &EvolutionConfig {
        &self.config
    }

    /// Adds evaluated DNAs without proposing them first.
    pub fn seed_population(
        &mut self,
        members: impl IntoIterator<Item = (Dna, R)>,
    ) -> Result<(), AlgorithmError> {
        for (dna, reward) in members {
            spec_of(&self.spec)?.validate(&dna)?;
            self.push(dna, reward);
        }
        Ok(())
    }

    fn push(&mut self, dna: Dna, reward: R) {
        self.population.push_back((dna, reward));
        while self.population.len() > self.config.population_size {
            self.population.pop_front();
        }
        self.feedbacks += 1;
    }

    fn tournament(&mut self) -> usize {
        let picks = sample(
            &mut self.rng,
            self.population.len(),
            self.config.tournament_size.min(self.population.len()),
        );
        let mut best: Option<usize> = None;
        for i in picks.into_iter() {
            best = match best {
                None => Some(i),
                Some(b) => {
                    let (ri, rb) = (self.population[i].1, self.population[b].1);
                    if ri > rb || (ri == rb && i < b) {
                        Some(i)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best.expect("tournament over a non-empty population")
    }
}

impl<R: Reward> SearchAlgorithm<R> for RegularizedEvolution<R> {
    fn name(&self) -> &'static str {
        "regevo"
    }

    fn setup(&mut self, spec: &DecisionSpec) -> Result<(), AlgorithmError> {
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.spec = Some(spec.clone());
        self.population.clear();
        self.feedbacks = 0;
        self.pending.clear();
        Ok(())
    }

    fn propose(&mut self) -> Result<Dna, AlgorithmError> {
        let spec = self.spec.as_ref().ok_or(AlgorithmError::NotSetUp)?;
        let dna = if self.feedbacks < self.config.population_size || self.population.is_empty() {
            random_dna(spec, &mut self.rng)
        } else {
            let parent = self.tournament();
            let spec = self.spec.as_ref().ok_or(AlgorithmError::NotSetUp)?;
            mutate_with(
                &self.population[parent].0,
                spec,
                &mut self.rng,
                self.config.include_current,
            )
        };
        self.pending.add(&dna);
        Ok(dna)
    }

    fn feedback(&mut self, dna: &Dna, reward: R) -> Result<(), AlgorithmError> {
        spec_of(&self.spec)?.validate(dna)?;
        self.pending.take(dna)?;
        self.push(dna.clone(), reward);
        Ok(())
    }

    fn population(&self) -> Option<Vec<(Dna, R)>> {
        Some(self.population.iter().cloned().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::abstract_search_space;
    use crate::hyper::oneof;
    use crate::symbolic::Value;

    fn spec() -> DecisionSpec {
        let choice = || Value::from(oneof((0..4).map(Value::Int).collect()).unwrap());
        abstract_search_space(&Value::from(vec![choice(), choice(), choice()]))
    }

    #[test]
    fn population_is_capped_fifo() {
        let mut algo = RegularizedEvolution::<f64>::new(EvolutionConfig::new(5, 2), 0).unwrap();
        algo.setup(&spec()).unwrap();
        let mut fed = Vec::new();
        for i in 0..8 {
            let dna = algo.propose().unwrap();
            algo.feedback(&dna, i as f64).unwrap();
            fed.push(dna);
            assert!(algo.population().unwrap().len() <= 5);
        }
        let pop = algo.population().unwrap();
        assert_eq!(pop.len(), 5);
        assert_eq!(
            pop.iter().map(|(d, _)| d.clone()).collect::<Vec<_>>(),
            fed[3..]
        );
        assert_eq!(
            pop.iter().map(|(_, r)| *r).collect::<Vec<_>>(),
            [3.0, 4.0, 5.0, 6.0, 7.0]
        );
    }

    #[test]
    fn warm_up_is_random_then_full_tournament_picks_max() {
        let spec = spec();
        let mut algo = RegularizedEvolution::<f64>::new(EvolutionConfig::new(4, 4), 9).unwrap();
        algo.setup(&spec).unwrap();
        let mut reference = crate::algorithms::RandomSearch::new(9);
        SearchAlgorithm::<f64>::setup(&mut reference, &spec).unwrap();
        for r in [0.1, 0.9, 0.9, 0.3] {
            let dna = algo.propose().unwrap();
            assert_eq!(
                dna,
                SearchAlgorithm::<f64>::propose(&mut reference).unwrap()
            );
            algo.feedback(&dna, r).unwrap();
        }
        for _ in 0..50 {
            assert_eq!(algo.tournament(), 1);
        }
    }

    #[test]
    fn bad_config() {
        assert!(RegularizedEvolution::<f64>::new(EvolutionConfig::new(3, 4), 0).is_err());
        assert!(RegularizedEvolution::<f64>::new(EvolutionConfig::new(0, 0), 0).is_err());
    }
}
