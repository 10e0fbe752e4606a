use std::time::Instant;

use super::{
    shared, Aggregator, FlowError, FlowReport, Partition, RewardOracle, Sampler, SharedAlgorithm,
    Trial,
};
use crate::abstraction::{
    abstract_search_space, materialize_partial, merge_dna, split_dna, DecisionSpec, Dna,
};
use crate::algorithms::{AlgorithmConfig, Reward};
use crate::symbolic::Value;

/// One search loop: which algorithm, and how many trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopConfig {
    pub algorithm: AlgorithmConfig,
    pub trials: usize,
}

impl LoopConfig {
    pub fn new(algorithm: AlgorithmConfig, trials: usize) -> Self {
        LoopConfig { algorithm, trials }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Record wall-clock time per trial. Off keeps logs reproducible.
    pub timing: bool,
}

/// Seed for the `index`-th inner loop of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed
        ^ (index as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn evaluate<R: Reward>(
    trial: &Trial<R>,
    full_dna: &Dna,
    oracle: &dyn RewardOracle<R>,
    report: &mut FlowReport<R>,
    outer_index: usize,
    inner_index: Option<usize>,
    options: &RunOptions,
) -> Result<R, FlowError> {
    let start = options.timing.then(Instant::now);
    let reward = oracle.reward(&trial.child, full_dna)?;
    let wall_ms = start.map_or(0, |s| s.elapsed().as_millis() as u64);
    trial.feedback.feedback(reward)?;
    report.record(outer_index, inner_index, full_dna, reward, wall_ms);
    Ok(reward)
}

/// Searches the whole space at once.
pub fn run_joint<R: Reward>(
    space: &Value,
    config: &LoopConfig,
    oracle: &dyn RewardOracle<R>,
    options: &RunOptions,
) -> Result<FlowReport<R>, FlowError> {
    let mut report = FlowReport::new();
    joint_into(space, config, oracle, options, &mut report, |dna| {
        Ok(dna.clone())
    })?;
    Ok(report)
}

fn joint_into<R: Reward>(
    space: &Value,
    config: &LoopConfig,
    oracle: &dyn RewardOracle<R>,
    options: &RunOptions,
    report: &mut FlowReport<R>,
    full_dna: impl Fn(&Dna) -> Result<Dna, FlowError>,
) -> Result<(), FlowError> {
    let algorithm = shared(config.algorithm.build()?);
    for trial in Sampler::new(space.clone(), algorithm, None, Some(config.trials))? {
        let trial = trial?;
        let full = full_dna(&trial.dna)?;
        let index = report.trials.len();
        evaluate(&trial, &full, oracle, report, index, None, options)?;
    }
    Ok(())
}

struct OuterResult<R: Reward> {
    index: usize,
    aggregate: R,
    outer_dna: Dna,
    sub_space: Value,
    inner: SharedAlgorithm<R>,
}

/// Outer loop over the partition, a fresh inner search of each sub-space.
/// Calls `keep` with every finished outer trial.
#[allow(clippy::too_many_arguments)]
fn factorized_into<R: Reward>(
    space: &Value,
    partition: &Partition,
    outer: &LoopConfig,
    inner: &LoopConfig,
    oracle: &dyn RewardOracle<R>,
    aggregator: Aggregator,
    options: &RunOptions,
    report: &mut FlowReport<R>,
    mut keep: impl FnMut(OuterResult<R>),
) -> Result<(), FlowError> {
    let full_spec = abstract_search_space(space);
    let selector = partition.as_fn();
    let outer_algo = shared(outer.algorithm.build()?);
    let sampler = Sampler::new(
        space.clone(),
        outer_algo,
        Some(partition.clone()),
        Some(outer.trials),
    )?;
    for outer_trial in sampler {
        let outer_trial = outer_trial?;
        let o = outer_trial.index;
        let inner_cfg = inner
            .algorithm
            .with_seed(derive_seed(outer.algorithm.seed, o));
        let inner_algo = shared(inner_cfg.build()?);
        let inner_sampler = Sampler::new(
            outer_trial.child.clone(),
            inner_algo.clone(),
            None,
            Some(inner.trials),
        )?;
        let mut rewards = Vec::with_capacity(inner.trials);
        for inner_trial in inner_sampler {
            let inner_trial = inner_trial?;
            let full = merge_dna(&full_spec, selector, &outer_trial.dna, &inner_trial.dna)?;
            rewards.push(evaluate(
                &inner_trial,
                &full,
                oracle,
                report,
                o,
                Some(inner_trial.index),
                options,
            )?);
        }
        let aggregate = aggregator.apply(&rewards)?;
        outer_trial.feedback.feedback(aggregate)?;
        keep(OuterResult {
            index: o,
            aggregate,
            outer_dna: outer_trial.dna,
            sub_space: outer_trial.child,
            inner: inner_algo,
        });
    }
    Ok(())
}

/// Nested search: the outer loop picks the partition's decisions, a fresh
/// inner loop searches the rest, and the outer reward aggregates the inner
/// rewards.
#[allow(clippy::too_many_arguments)]
pub fn run_factorized<R: Reward>(
    space: &Value,
    partition: &Partition,
    outer: &LoopConfig,
    inner: &LoopConfig,
    oracle: &dyn RewardOracle<R>,
    aggregator: Aggregator,
    options: &RunOptions,
) -> Result<FlowReport<R>, FlowError> {
    let mut report = FlowReport::new();
    factorized_into(
        space,
        partition,
        outer,
        inner,
        oracle,
        aggregator,
        options,
        &mut report,
        |_| {},
    )?;
    Ok(report)
}

/// A factorized phase, then `phase2_trials` more trials on the sub-space
/// with the best aggregate, continuing that sub-space's inner algorithm.
#[allow(clippy::too_many_arguments)]
pub fn run_hybrid<R: Reward>(
    space: &Value,
    partition: &Partition,
    outer: &LoopConfig,
    inner: &LoopConfig,
    phase2_trials: usize,
    oracle: &dyn RewardOracle<R>,
    aggregator: Aggregator,
    options: &RunOptions,
) -> Result<FlowReport<R>, FlowError> {
    let mut report = FlowReport::new();
    let mut best: Option<OuterResult<R>> = None;
    factorized_into(
        space,
        partition,
        outer,
        inner,
        oracle,
        aggregator,
        options,
        &mut report,
        |result| {
            if best.as_ref().is_none_or(|b| result.aggregate > b.aggregate) {
                best = Some(result);
            }
        },
    )?;
    let Some(best) = best else {
        return Ok(report);
    };
    if phase2_trials == 0 {
        return Ok(report);
    }
    report.handoff = Some(report.trials.len());
    let full_spec = abstract_search_space(space);
    let selector = partition.as_fn();
    let first_inner = report
        .trials
        .iter()
        .filter(|t| t.outer_index == best.index)
        .count();
    let sampler = Sampler::resume(best.sub_space, best.inner, None, Some(phase2_trials))?;
    for (inner_index, trial) in (first_inner..).zip(sampler) {
        let trial = trial?;
        let full = merge_dna(&full_spec, selector, &best.outer_dna, &trial.dna)?;
        evaluate(
            &trial,
            &full,
            oracle,
            &mut report,
            best.index,
            Some(inner_index),
            options,
        )?;
    }
    Ok(report)
}

/// Two sequential searches: first the partition with the rest fixed to
/// `pivot`, then the rest with the partition fixed to the first search's best.
#[allow(clippy::too_many_arguments)]
pub fn run_separate<R: Reward>(
    space: &Value,
    partition: &Partition,
    config_a: &LoopConfig,
    config_b: &LoopConfig,
    oracle: &dyn RewardOracle<R>,
    pivot: &Dna,
    options: &RunOptions,
) -> Result<FlowReport<R>, FlowError> {
    let full_spec = abstract_search_space(space);
    let selected = partition.as_fn();
    let complement = partition.complement();
    let rest = complement.as_fn();

    let (fixed, _) = split_dna(&full_spec, pivot, rest)?;
    let space_a = fix(space, &full_spec, &fixed, rest)?;
    let mut report = FlowReport::new();
    joint_into(&space_a, config_a, oracle, options, &mut report, |dna| {
        Ok(merge_dna(&full_spec, rest, &fixed, dna)?)
    })?;
    let Some(best_a) = report.best_dna.clone() else {
        return Ok(report);
    };

    let (chosen, _) = split_dna(&full_spec, &best_a, selected)?;
    let space_b = fix(space, &full_spec, &chosen, selected)?;
    if abstract_search_space(&space_b).is_empty() {
        return Ok(report);
    }
    report.handoff = Some(report.trials.len());
    joint_into(&space_b, config_b, oracle, options, &mut report, |dna| {
        Ok(merge_dna(&full_spec, selected, &chosen, dna)?)
    })?;
    Ok(report)
}

fn fix(
    space: &Value,
    spec: &DecisionSpec,
    decisions: &Dna,
    selector: &dyn Fn(&crate::abstraction::DecisionPoint) -> bool,
) -> Result<Value, FlowError> {
    if spec.filter(selector).is_empty() {
        return Ok(space.clone());
    }
    Ok(materialize_partial(space, decisions, selector)?)
}
