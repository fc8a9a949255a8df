//! Acquisition strategies for the labeling loop.
//!
//! The headline strategy ([`medal_select`]) keeps the M most-uncertain pool
//! candidates (predictive entropy) and then picks, among those, the k whose
//! learned features lie farthest — by mean distance — from the current
//! training set. Uncertainty-only and random baselines share the same
//! interface, and [`farthest_first_init`] builds an initial training set
//! from descriptors alone, before any model exists.
//!
//! Tie-breaking is uniform across every ranking in this module: the lower
//! id wins. All selectors are deterministic given their seeds.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::ExampleId;
use crate::metrics::{
    entropy, mean_distance_score, FeatureVector, Metric, MetricError, ProbabilityVector,
};

/// Acquisition strategy identifier, as it appears in configs and CSVs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SamplerId {
    Medal,
    Uncertainty,
    Random,
}

impl SamplerId {
    pub const ALL: [SamplerId; 3] = [SamplerId::Medal, SamplerId::Uncertainty, SamplerId::Random];

    pub fn name(self) -> &'static str {
        match self {
            SamplerId::Medal => "medal",
            SamplerId::Uncertainty => "uncertainty",
            SamplerId::Random => "random",
        }
    }
}

impl fmt::Display for SamplerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SamplerId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let mut msg = String::from("unknown sampler `");
                msg.push_str(s);
                msg.push_str("`; expected medal, uncertainty, or random");
                msg
            })
    }
}

/// Errors from the acquisition strategies.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplerError {
    #[error("acquisition requires a nonempty pool")]
    EmptyPool,
    #[error("distance scoring requires a nonempty training set")]
    EmptyTrainingSet,
    #[error("cannot draw {k} ids from a pool of {pool}")]
    KTooLarge { k: usize, pool: usize },
    #[error("cannot build an initial set of {target} from {available} candidates")]
    TargetTooLarge { target: usize, available: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// One pool candidate presented to the distance-based selector.
#[derive(Debug, Clone)]
pub struct PoolCandidate {
    pub id: ExampleId,
    pub features: FeatureVector,
    pub probs: ProbabilityVector,
}

/// Audit record for one candidate: its predictive entropy, and its mean
/// feature distance to the training set if it survived the entropy filter.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateScore {
    pub entropy: f64,
    pub mean_distance: Option<f64>,
}

/// Result of one batch acquisition.
#[derive(Debug, Clone)]
pub struct AcquisitionResult {
    /// Chosen ids, in selection order (best first).
    pub selected: Vec<ExampleId>,
    /// Per-candidate audit scores for the whole pool.
    pub scores: BTreeMap<ExampleId, CandidateScore>,
    /// How many ids were appended from outside the entropy filter because
    /// the filter held fewer than k candidates.
    pub fallback_count: usize,
}

/// Sorts (id, score) pairs by descending score, ties to the lower id.
fn rank_descending(scored: &mut [(ExampleId, f64)]) {
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
}

/// Ids of the min(M, |pool|) highest-entropy candidates, best first.
pub fn entropy_filter(pool: &[(ExampleId, ProbabilityVector)], m: usize) -> Vec<ExampleId> {
    let mut scored: Vec<(ExampleId, f64)> =
        pool.iter().map(|(id, p)| (*id, entropy(p))).collect();
    rank_descending(&mut scored);
    scored.into_iter().take(m).map(|(id, _)| id).collect()
}

/// Entropy-filtered maximum-mean-distance acquisition.
///
/// Ranks the entropy filter's survivors by s(x), the mean distance of the
/// candidate's features to every training feature vector, and returns the
/// top min(k, |pool|) ids. If the filter holds fewer than k candidates the
/// remainder is taken from the rest of the pool in entropy order (a
/// warning is logged and counted in the result).
///
/// The whole batch is chosen against one snapshot of the training set; see
/// [`medal_select_greedy`] for the variant that re-scores after every pick.
pub fn medal_select(
    pool: &[PoolCandidate],
    train_feats: &[FeatureVector],
    metric: Metric,
    m: usize,
    k: usize,
) -> Result<AcquisitionResult, SamplerError> {
    if pool.is_empty() {
        return Err(SamplerError::EmptyPool);
    }
    if train_feats.is_empty() {
        return Err(SamplerError::EmptyTrainingSet);
    }

    let mut entropies: Vec<(ExampleId, f64)> =
        pool.iter().map(|c| (c.id, entropy(&c.probs))).collect();
    rank_descending(&mut entropies);
    let filter_size = m.min(entropies.len());
    let filtered: Vec<ExampleId> = entropies[..filter_size].iter().map(|e| e.0).collect();

    let mut scores: BTreeMap<ExampleId, CandidateScore> = entropies
        .iter()
        .map(|&(id, h)| {
            (
                id,
                CandidateScore {
                    entropy: h,
                    mean_distance: None,
                },
            )
        })
        .collect();

    let by_id: BTreeMap<ExampleId, &PoolCandidate> = pool.iter().map(|c| (c.id, c)).collect();
    let mut ranked: Vec<(ExampleId, f64)> = Vec::with_capacity(filtered.len());
    for &id in &filtered {
        let s = mean_distance_score(&by_id[&id].features, train_feats, metric)?;
        scores.get_mut(&id).expect("scored above").mean_distance = Some(s);
        ranked.push((id, s));
    }
    rank_descending(&mut ranked);

    let take = k.min(pool.len());
    let mut selected: Vec<ExampleId> = ranked.iter().take(take).map(|r| r.0).collect();
    let mut fallback_count = 0;
    if selected.len() < take {
        // Filter exhausted: fall back to the remaining pool in entropy order.
        log::warn!(
            "entropy filter (M = {m}) holds fewer than k = {k} candidates; \
             filling from the pool by entropy"
        );
        for &(id, _) in entropies[filter_size..].iter() {
            if selected.len() == take {
                break;
            }
            selected.push(id);
            fallback_count += 1;
        }
    }

    Ok(AcquisitionResult {
        selected,
        scores,
        fallback_count,
    })
}

/// Greedy variant of [`medal_select`]: after each pick the chosen
/// candidate's features join the training side and the entropy filter is
/// reapplied to the remaining pool, so later picks are pushed away from
/// earlier ones. Costs k re-scoring rounds instead of one.
pub fn medal_select_greedy(
    pool: &[PoolCandidate],
    train_feats: &[FeatureVector],
    metric: Metric,
    m: usize,
    k: usize,
) -> Result<AcquisitionResult, SamplerError> {
    if pool.is_empty() {
        return Err(SamplerError::EmptyPool);
    }
    if train_feats.is_empty() {
        return Err(SamplerError::EmptyTrainingSet);
    }

    let mut scores: BTreeMap<ExampleId, CandidateScore> = pool
        .iter()
        .map(|c| {
            (
                c.id,
                CandidateScore {
                    entropy: entropy(&c.probs),
                    mean_distance: None,
                },
            )
        })
        .collect();

    let mut remaining: Vec<&PoolCandidate> = pool.iter().collect();
    let mut extended_train: Vec<FeatureVector> = train_feats.to_vec();
    let mut selected = Vec::new();
    let take = k.min(pool.len());

    while selected.len() < take {
        let mut entropies: Vec<(ExampleId, f64)> = remaining
            .iter()
            .map(|c| (c.id, scores[&c.id].entropy))
            .collect();
        rank_descending(&mut entropies);
        let filtered: Vec<ExampleId> = entropies
            .into_iter()
            .take(m)
            .map(|(id, _)| id)
            .collect();

        let mut best: Option<(ExampleId, f64)> = None;
        for &id in &filtered {
            let candidate = remaining
                .iter()
                .find(|c| c.id == id)
                .expect("filtered id is in the remaining pool");
            let s = mean_distance_score(&candidate.features, &extended_train, metric)?;
            scores.get_mut(&id).expect("scored above").mean_distance = Some(s);
            let better = match best {
                None => true,
                Some((best_id, best_s)) => s > best_s || (s == best_s && id < best_id),
            };
            if better {
                best = Some((id, s));
            }
        }
        let (chosen, _) = best.expect("nonempty filter over nonempty pool");
        let position = remaining
            .iter()
            .position(|c| c.id == chosen)
            .expect("chosen from remaining");
        extended_train.push(remaining[position].features.clone());
        remaining.remove(position);
        selected.push(chosen);
    }

    Ok(AcquisitionResult {
        selected,
        scores,
        fallback_count: 0,
    })
}

/// Uncertainty baseline: the min(k, |pool|) highest-entropy ids.
pub fn uncertainty_select(
    pool: &[(ExampleId, ProbabilityVector)],
    k: usize,
) -> Result<Vec<ExampleId>, SamplerError> {
    if pool.is_empty() {
        return Err(SamplerError::EmptyPool);
    }
    let mut scored: Vec<(ExampleId, f64)> =
        pool.iter().map(|(id, p)| (*id, entropy(p))).collect();
    rank_descending(&mut scored);
    Ok(scored.into_iter().take(k).map(|(id, _)| id).collect())
}

/// Random baseline: uniform sample of k ids without replacement.
///
/// The draw depends only on the id set and the seed, not on the order the
/// ids are passed in.
pub fn random_select(
    pool_ids: &[ExampleId],
    k: usize,
    seed: u64,
) -> Result<Vec<ExampleId>, SamplerError> {
    if k > pool_ids.len() {
        return Err(SamplerError::KTooLarge {
            k,
            pool: pool_ids.len(),
        });
    }
    let mut ids = pool_ids.to_vec();
    ids.sort_unstable();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);
    ids.truncate(k);
    Ok(ids)
}

/// Farthest-first construction of an initial training set from
/// descriptors, before any model exists.
///
/// The first id is drawn uniformly by `seed`; every further id is the one
/// maximizing the mean distance of its descriptor to the descriptors
/// already chosen (ties to the lower id). The output is prefix-stable: the
/// first m ids of a size-n run equal the full size-m run.
pub fn farthest_first_init(
    descriptors: &BTreeMap<ExampleId, FeatureVector>,
    target_size: usize,
    metric: Metric,
    seed: u64,
) -> Result<Vec<ExampleId>, SamplerError> {
    if target_size > descriptors.len() {
        return Err(SamplerError::TargetTooLarge {
            target: target_size,
            available: descriptors.len(),
        });
    }
    if target_size == 0 {
        return Ok(Vec::new());
    }

    let ids: Vec<ExampleId> = descriptors.keys().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = ids[rng.random_range(0..ids.len())];

    let mut selected = Vec::with_capacity(target_size);
    selected.push(first);
    // Running sum of distances to the selected set, in selection order, so
    // the mean matches mean_distance_score over the selected descriptors.
    let mut remaining: Vec<(ExampleId, f64)> = ids
        .iter()
        .filter(|&&id| id != first)
        .map(|&id| (id, 0.0))
        .collect();

    while selected.len() < target_size {
        let newest = &descriptors[selected.last().expect("nonempty")];
        for (id, sum) in remaining.iter_mut() {
            *sum += single_distance(metric, &descriptors[id], newest)?;
        }
        let count = selected.len() as f64;
        let mut best_idx = 0;
        let mut best_mean = remaining[0].1 / count;
        for (idx, (id, sum)) in remaining.iter().enumerate().skip(1) {
            let mean = sum / count;
            if mean > best_mean || (mean == best_mean && *id < remaining[best_idx].0) {
                best_idx = idx;
                best_mean = mean;
            }
        }
        selected.push(remaining.remove(best_idx).0);
    }
    Ok(selected)
}

/// Distance under `metric`, binarizing both sides for the binary measures.
fn single_distance(
    metric: Metric,
    a: &FeatureVector,
    b: &FeatureVector,
) -> Result<f64, MetricError> {
    if metric.is_binary() {
        crate::metrics::binary_distance(
            metric,
            &crate::metrics::binarize(a),
            &crate::metrics::binarize(b),
        )
    } else {
        crate::metrics::distance(metric, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::Rng;

    fn fv(values: &[f64]) -> FeatureVector {
        FeatureVector::new(values.to_vec())
    }

    fn pv(probs: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(probs.to_vec()).unwrap()
    }

    fn uniform2() -> ProbabilityVector {
        pv(&[0.5, 0.5])
    }

    fn candidate(id: ExampleId, features: &[f64], probs: ProbabilityVector) -> PoolCandidate {
        PoolCandidate {
            id,
            features: fv(features),
            probs,
        }
    }

    #[test]
    fn entropy_filter_keeps_most_uncertain() {
        let pool = vec![
            (0, pv(&[0.98, 0.02])), // lowest entropy
            (1, uniform2()),        // highest
            (2, pv(&[0.85, 0.15])), // middle
        ];
        assert_eq!(entropy_filter(&pool, 2), vec![1, 2]);
    }

    #[test]
    fn entropy_filter_saturates_when_m_exceeds_pool() {
        let pool = vec![(0, uniform2()), (1, pv(&[0.9, 0.1]))];
        assert_eq!(entropy_filter(&pool, 10), vec![0, 1]);
    }

    #[test]
    fn entropy_filter_ties_go_to_lower_id() {
        let pool = vec![(2, uniform2()), (0, uniform2()), (1, uniform2())];
        assert_eq!(entropy_filter(&pool, 2), vec![0, 1]);
    }

    #[test]
    fn medal_prefers_farther_candidate() {
        let pool = vec![
            candidate(0, &[1.0, 0.0], uniform2()),
            candidate(1, &[5.0, 0.0], uniform2()),
        ];
        let train = [fv(&[0.0, 0.0])];
        let result =
            medal_select(&pool, &train, Metric::Euclidean, pool.len(), 1).unwrap();
        assert_eq!(result.selected, vec![1]);
        assert_eq!(result.scores[&1].mean_distance, Some(5.0));
        assert_eq!(result.scores[&0].mean_distance, Some(1.0));
        assert_eq!(result.fallback_count, 0);
    }

    #[test]
    fn filter_of_size_one_forces_the_pick() {
        // id 0 is nearest but maximally uncertain; M = 1 leaves no choice.
        let pool = vec![
            candidate(0, &[0.1, 0.0], uniform2()),
            candidate(1, &[9.0, 0.0], pv(&[0.99, 0.01])),
        ];
        let train = [fv(&[0.0, 0.0])];
        let result = medal_select(&pool, &train, Metric::Euclidean, 1, 1).unwrap();
        assert_eq!(result.selected, vec![0]);
    }

    #[test]
    fn medal_errors_on_degenerate_inputs() {
        let train = [fv(&[0.0])];
        assert_eq!(
            medal_select(&[], &train, Metric::Euclidean, 5, 1).unwrap_err(),
            SamplerError::EmptyPool
        );
        let pool = vec![candidate(0, &[1.0], uniform2())];
        assert_eq!(
            medal_select(&pool, &[], Metric::Euclidean, 5, 1).unwrap_err(),
            SamplerError::EmptyTrainingSet
        );
    }

    #[test]
    fn medal_fallback_fills_from_pool_by_entropy() {
        // M = 1 but k = 3: one filtered pick, two fallback picks in entropy order.
        let pool = vec![
            candidate(0, &[1.0], pv(&[0.6, 0.4])),
            candidate(1, &[2.0], uniform2()),
            candidate(2, &[3.0], pv(&[0.8, 0.2])),
            candidate(3, &[4.0], pv(&[0.95, 0.05])),
        ];
        let train = [fv(&[0.0])];
        let result = medal_select(&pool, &train, Metric::Euclidean, 1, 3).unwrap();
        // Filter keeps id 1 (max entropy). Fallback order by entropy: 0, then 2.
        assert_eq!(result.selected, vec![1, 0, 2]);
        assert_eq!(result.fallback_count, 2);
    }

    #[test]
    fn medal_matches_brute_force_on_random_pools() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let dims = 8;
            let pool: Vec<PoolCandidate> = (0..50)
                .map(|id| {
                    let feats: Vec<f64> =
                        (0..dims).map(|_| rng.random_range(-3.0..3.0)).collect();
                    let a: f64 = rng.random_range(0.05..0.95);
                    candidate(id, &feats, pv(&[a, 1.0 - a]))
                })
                .collect();
            let train: Vec<FeatureVector> = (0..10)
                .map(|_| fv(&(0..dims).map(|_| rng.random_range(-3.0..3.0)).collect::<Vec<_>>()))
                .collect();
            let m = rng.random_range(1..60);
            let k = rng.random_range(1..10);

            let got = medal_select(&pool, &train, Metric::Euclidean, m, k).unwrap();

            // Brute force: full entropy sort, double-loop means, full sort by s.
            let mut by_entropy: Vec<(ExampleId, f64)> = pool
                .iter()
                .map(|c| {
                    let h: f64 = c
                        .probs
                        .probs()
                        .iter()
                        .filter(|&&p| p > 0.0)
                        .map(|&p| -p * p.ln())
                        .sum();
                    (c.id, h)
                })
                .collect();
            by_entropy.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
            let keep = m.min(by_entropy.len());
            let mut by_s: Vec<(ExampleId, f64)> = by_entropy[..keep]
                .iter()
                .map(|&(id, _)| {
                    let c = pool.iter().find(|c| c.id == id).unwrap();
                    let mut total = 0.0;
                    for t in &train {
                        let mut sq = 0.0;
                        for (a, b) in c.features.values().iter().zip(t.values()) {
                            sq += (a - b) * (a - b);
                        }
                        total += sq.sqrt();
                    }
                    (id, total / train.len() as f64)
                })
                .collect();
            by_s.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
            let mut expected: Vec<ExampleId> =
                by_s.iter().take(k.min(pool.len())).map(|e| e.0).collect();
            for &(id, _) in by_entropy[keep..].iter() {
                if expected.len() == k.min(pool.len()) {
                    break;
                }
                expected.push(id);
            }
            assert_eq!(got.selected, expected);
        }
    }

    #[test]
    fn greedy_pushes_later_picks_apart() {
        let pool = vec![
            candidate(1, &[1.0], uniform2()),
            candidate(2, &[2.0], uniform2()),
            candidate(3, &[2.5], uniform2()),
        ];
        let train = [fv(&[0.0])];
        let snapshot = medal_select(&pool, &train, Metric::Euclidean, 3, 2).unwrap();
        assert_eq!(snapshot.selected, vec![3, 2]);
        // After picking 3, ids 1 and 2 tie on mean distance to {0, 2.5};
        // the lower id wins.
        let greedy = medal_select_greedy(&pool, &train, Metric::Euclidean, 3, 2).unwrap();
        assert_eq!(greedy.selected, vec![3, 1]);
    }

    #[test]
    fn uncertainty_picks_maximal_entropy() {
        let pool = vec![(0, uniform2()), (1, pv(&[0.99, 0.01]))];
        assert_eq!(uncertainty_select(&pool, 1).unwrap(), vec![0]);
        assert_eq!(uncertainty_select(&pool, 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn uncertainty_matches_sort_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pool: Vec<(ExampleId, ProbabilityVector)> = (0..20)
            .map(|id| {
                let raw: Vec<f64> = (0..3).map(|_| rng.random_range(0.01..1.0)).collect();
                let sum: f64 = raw.iter().sum();
                (id, pv(&raw.iter().map(|x| x / sum).collect::<Vec<_>>()))
            })
            .collect();
        let got = uncertainty_select(&pool, 5).unwrap();
        let mut oracle: Vec<(ExampleId, f64)> = pool
            .iter()
            .map(|(id, p)| {
                let h: f64 = p.probs().iter().map(|&x| -x * x.ln()).sum();
                (*id, h)
            })
            .collect();
        oracle.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let expected: Vec<ExampleId> = oracle.into_iter().take(5).map(|e| e.0).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn random_select_is_seeded_and_complete() {
        let ids = [3, 1, 4, 1 + 4, 9, 2, 6];
        let a = random_select(&ids, 7, 42).unwrap();
        let b = random_select(&ids, 7, 42).unwrap();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2, 3, 4, 5, 6, 9]);
        assert!(random_select(&ids, 8, 42).is_err());
    }

    #[test]
    fn random_select_is_roughly_uniform() {
        let ids: Vec<ExampleId> = (0..10).collect();
        let mut counts = [0usize; 10];
        for trial in 0..10_000 {
            let pick = random_select(&ids, 1, trial).unwrap()[0];
            counts[pick] += 1;
        }
        // 3σ band for Binomial(10000, 0.1).
        let sigma = (10_000.0f64 * 0.1 * 0.9).sqrt();
        for &c in &counts {
            assert!(
                (c as f64 - 1000.0).abs() <= 3.0 * sigma,
                "count {c} outside 3σ"
            );
        }
    }

    fn descriptor_map(points: &[(ExampleId, &[f64])]) -> BTreeMap<ExampleId, FeatureVector> {
        points.iter().map(|(id, v)| (*id, fv(v))).collect()
    }

    /// Searches for a seed whose first farthest-first pick is `want`.
    fn seed_picking(
        descriptors: &BTreeMap<ExampleId, FeatureVector>,
        want: ExampleId,
    ) -> u64 {
        (0..1000)
            .find(|&seed| {
                farthest_first_init(descriptors, 1, Metric::Euclidean, seed).unwrap()[0] == want
            })
            .expect("some seed picks the wanted id")
    }

    #[test]
    fn farthest_first_jumps_to_the_far_point() {
        let descriptors = descriptor_map(&[(0, &[0.0]), (1, &[1.0]), (2, &[10.0])]);
        let seed = seed_picking(&descriptors, 0);
        let picks = farthest_first_init(&descriptors, 2, Metric::Euclidean, seed).unwrap();
        assert_eq!(picks, vec![0, 2]);
    }

    #[test]
    fn farthest_first_target_one_is_the_seeded_pick() {
        let descriptors = descriptor_map(&[(0, &[0.0]), (1, &[5.0])]);
        for seed in 0..10 {
            let picks = farthest_first_init(&descriptors, 1, Metric::Euclidean, seed).unwrap();
            assert_eq!(picks.len(), 1);
        }
    }

    #[test]
    fn farthest_first_ties_resolve_to_lowest_ids() {
        let descriptors = descriptor_map(&[(0, &[2.0]), (1, &[2.0]), (2, &[2.0]), (3, &[2.0])]);
        let seed = seed_picking(&descriptors, 2);
        let picks = farthest_first_init(&descriptors, 3, Metric::Euclidean, seed).unwrap();
        assert_eq!(picks, vec![2, 0, 1]);
    }

    #[test]
    fn farthest_first_prefixes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let descriptors: BTreeMap<ExampleId, FeatureVector> = (0..12)
            .map(|id| {
                (
                    id,
                    fv(&[rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]),
                )
            })
            .collect();
        let full = farthest_first_init(&descriptors, 9, Metric::Cityblock, 3).unwrap();
        for m in 1..=9 {
            let partial = farthest_first_init(&descriptors, m, Metric::Cityblock, 3).unwrap();
            assert_eq!(partial, full[..m]);
        }
        let unique: alloc::collections::BTreeSet<_> = full.iter().collect();
        assert_eq!(unique.len(), full.len());
    }

    #[test]
    fn farthest_first_rejects_oversized_target() {
        let descriptors = descriptor_map(&[(0, &[0.0])]);
        assert!(matches!(
            farthest_first_init(&descriptors, 2, Metric::Euclidean, 0).unwrap_err(),
            SamplerError::TargetTooLarge { .. }
        ));
    }

    #[test]
    fn selection_is_invariant_to_positive_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let pool: Vec<PoolCandidate> = (0..30)
            .map(|id| {
                let feats: Vec<f64> = (0..6).map(|_| rng.random_range(-2.0..2.0)).collect();
                let a: f64 = rng.random_range(0.1..0.9);
                candidate(id, &feats, pv(&[a, 1.0 - a]))
            })
            .collect();
        let train: Vec<FeatureVector> = (0..8)
            .map(|_| fv(&(0..6).map(|_| rng.random_range(-2.0..2.0)).collect::<Vec<_>>()))
            .collect();
        for metric in [
            Metric::Euclidean,
            Metric::Cityblock,
            Metric::Chebyshev,
            Metric::Cosine,
        ] {
            let base = medal_select(&pool, &train, metric, 15, 4).unwrap();
            for factor in [0.25, 2.0, 4.0] {
                let scaled_pool: Vec<PoolCandidate> = pool
                    .iter()
                    .map(|c| PoolCandidate {
                        id: c.id,
                        features: c.features.scaled(factor),
                        probs: c.probs.clone(),
                    })
                    .collect();
                let scaled_train: Vec<FeatureVector> =
                    train.iter().map(|t| t.scaled(factor)).collect();
                let scaled = medal_select(&scaled_pool, &scaled_train, metric, 15, 4).unwrap();
                assert_eq!(scaled.selected, base.selected, "metric {metric}");
            }
        }
    }
}
