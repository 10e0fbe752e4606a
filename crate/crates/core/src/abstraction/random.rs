use rand::Rng;

use super::dna::{ChoiceItem, Decision, Dna};
use super::spec::{DecisionPoint, DecisionSpec, PointKind};

/// Samples a conforming DNA. Choice tuples are uniform over the feasible
/// tuples; children are sampled only for chosen candidates.
pub fn random_dna<R: Rng + ?Sized>(spec: &DecisionSpec, rng: &mut R) -> Dna {
    Dna(spec
        .points
        .iter()
        .map(|p| random_decision(p, rng))
        .collect())
}

pub fn random_decision<R: Rng + ?Sized>(point: &DecisionPoint, rng: &mut R) -> Decision {
    match &point.kind {
        PointKind::Choice {
            k,
            n,
            distinct,
            sorted,
            candidates,
        } => {
            let indices = random_indices(*k, *n, *distinct, *sorted, rng);
            Decision::Choice(
                indices
                    .into_iter()
                    .map(|index| ChoiceItem {
                        index,
                        children: random_dna(&candidates[index], rng),
                    })
                    .collect(),
            )
        }
        PointKind::Int { min, max } => Decision::Int(rng.gen_range(*min..=*max)),
        PointKind::Float { min, max } => Decision::Float(rng.gen_range(*min..=*max)),
    }
}

pub(crate) fn random_indices<R: Rng + ?Sized>(
    k: usize,
    n: usize,
    distinct: bool,
    sorted: bool,
    rng: &mut R,
) -> Vec<usize> {
    match (distinct, sorted) {
        (true, _) => {
            let mut picked = partial_shuffle(n, k, rng);
            if sorted {
                picked.sort_unstable();
            }
            picked
        }
        (false, false) => (0..k).map(|_| rng.gen_range(0..n)).collect(),
        (false, true) => {
            // Multisets of size k over n items, via k distinct slots out of n + k - 1.
            let mut slots = partial_shuffle(n + k - 1, k, rng);
            slots.sort_unstable();
            slots.into_iter().enumerate().map(|(j, s)| s - j).collect()
        }
    }
}

fn partial_shuffle<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for j in 0..k {
        let pick = rng.gen_range(j..n);
        pool.swap(j, pick);
    }
    pool.truncate(k);
    pool
}
