use std::io::{self, Write};

use serde::Serialize;

use crate::abstraction::Dna;
use crate::algorithms::Reward;

/// One evaluated program.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord<R> {
    pub trial_index: usize,
    pub outer_index: usize,
    pub inner_index: Option<usize>,
    pub dna: String,
    pub reward: R,
    pub best_so_far: R,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport<R> {
    pub trials: Vec<TrialRecord<R>>,
    pub oracle_calls: usize,
    pub best_dna: Option<Dna>,
    pub best_reward: Option<R>,
    /// Index of the first trial of the second phase, for two-phase flows.
    pub handoff: Option<usize>,
}

impl<R> Default for FlowReport<R> {
    fn default() -> Self {
        FlowReport {
            trials: Vec::new(),
            oracle_calls: 0,
            best_dna: None,
            best_reward: None,
            handoff: None,
        }
    }
}

impl<R: Reward> FlowReport<R> {
    pub fn new() -> Self {
        FlowReport::default()
    }

    /// Appends a trial; the best is the first strictly greatest reward.
    pub fn record(
        &mut self,
        outer_index: usize,
        inner_index: Option<usize>,
        dna: &Dna,
        reward: R,
        wall_ms: u64,
    ) {
        let improved = match self.best_reward {
            None => true,
            Some(best) => reward > best,
        };
        if improved {
            self.best_reward = Some(reward);
            self.best_dna = Some(dna.clone());
        }
        self.oracle_calls += 1;
        self.trials.push(TrialRecord {
            trial_index: self.trials.len(),
            outer_index,
            inner_index,
            dna: dna.encode(),
            reward,
            best_so_far: self.best_reward.unwrap_or(reward),
            wall_ms,
        });
    }

    /// Best-so-far after each trial.
    pub fn trajectory(&self) -> Vec<R> {
        self.trials.iter().map(|t| t.best_so_far).collect()
    }

    /// Writes one JSON object per trial.
    pub fn write_jsonl(&self, mut out: impl Write) -> io::Result<()> {
        for trial in &self.trials {
            serde_json::to_writer(&mut out, trial)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}
