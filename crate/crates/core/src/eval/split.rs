use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{EvalError, Result};

/// One train/test split; both index lists ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified k-fold over `labels`. Each class is shuffled with `seed` and
/// dealt round-robin across folds, continuing where the previous class
/// stopped so fold sizes stay within one of each other.
pub fn stratified_kfold(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Fold>> {
    if k < 2 {
        return Err(EvalError::InvalidPlan(format!("need at least 2 folds, got {k}")));
    }
    let n_classes = labels.iter().max().map_or(0, |&m| m + 1);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    if let Some((class, members)) = by_class.iter().enumerate().find(|(_, m)| !m.is_empty() && m.len() < k) {
        return Err(EvalError::StratificationImpossible {
            class,
            count: members.len(),
            k,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tests: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut next = 0;
    for mut members in by_class {
        members.shuffle(&mut rng);
        for i in members {
            tests[next].push(i);
            next = (next + 1) % k;
        }
    }
    Ok(tests
        .into_iter()
        .map(|mut test| {
            test.sort_unstable();
            let mut in_test = vec![false; labels.len()];
            for &i in &test {
                in_test[i] = true;
            }
            let train = (0..labels.len()).filter(|&i| !in_test[i]).collect();
            Fold { train, test }
        })
        .collect())
}

/// Fails with `Leakage` if the two index sets intersect.
pub fn ensure_disjoint(train: &[usize], test: &[usize]) -> Result<()> {
    let set: std::collections::HashSet<_> = train.iter().collect();
    match test.iter().find(|i| set.contains(i)) {
        Some(&i) => Err(EvalError::Leakage(format!("index {i} is in both train and test"))),
        None => Ok(()),
    }
}
