use super::FlowError;
use crate::algorithms::Reward;

/// How an outer trial's reward is computed from its inner rewards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregator {
    #[default]
    Top5,
    Mean,
    Max,
}

impl Aggregator {
    pub fn apply<R: Reward>(&self, rewards: &[R]) -> Result<R, FlowError> {
        if rewards.is_empty() {
            return Err(FlowError::EmptyRewards);
        }
        Ok(match self {
            Aggregator::Top5 => return top5_average(rewards),
            Aggregator::Mean => mean(rewards),
            Aggregator::Max => rewards.iter().copied().fold(R::neg_infinity(), R::max),
        })
    }
}

fn mean<R: Reward>(rewards: &[R]) -> R {
    let sum = rewards.iter().copied().fold(R::zero(), |a, b| a + b);
    sum / R::from(rewards.len()).expect("count fits the reward type")
}

/// Mean of the five largest rewards, or of all of them when fewer.
pub fn top5_average<R: Reward>(rewards: &[R]) -> Result<R, FlowError> {
    if rewards.is_empty() {
        return Err(FlowError::EmptyRewards);
    }
    let mut sorted = rewards.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sorted.truncate(5);
    Ok(mean(&sorted))
}
