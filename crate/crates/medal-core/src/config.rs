//! Run configuration: every knob of an acquisition experiment.

use core::fmt;
use core::str::FromStr;

use alloc::string::String;

use crate::learner::AdamConfig;
use crate::metrics::Metric;

/// How the initial training set is constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitStrategy {
    /// Uniform draw from the pool.
    Random,
    /// Greedy farthest-first over descriptors (pooled image descriptors in
    /// image mode, raw features in tabular mode).
    FarthestFirst,
}

impl InitStrategy {
    pub fn name(self) -> &'static str {
        match self {
            InitStrategy::Random => "random",
            InitStrategy::FarthestFirst => "farthest-first",
        }
    }
}

impl fmt::Display for InitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InitStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(InitStrategy::Random),
            "farthest-first" => Ok(InitStrategy::FarthestFirst),
            other => {
                let mut msg = String::from("unknown init strategy `");
                msg.push_str(other);
                msg.push_str("`; expected random or farthest-first");
                Err(msg)
            }
        }
    }
}

/// All knobs of one experiment run.
///
/// Defaults mirror the desk-scale reference setup: a 960-example dataset
/// split 80/20 into pool and test, 100 initial labels, 20 acquisitions per
/// iteration with an entropy filter of 50, euclidean distance on the
/// second hidden layer, and the stock Adam settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Size of the initial training set drawn from the pool.
    pub initial_train_size: usize,
    /// Examples acquired per iteration (k).
    pub imgs_per_iteration: usize,
    /// Entropy filter size (M): how many of the most-uncertain candidates
    /// survive to distance ranking.
    pub entropy_filter_size: usize,
    /// Distance function for the mean-distance score.
    pub metric: Metric,
    /// Hidden layer whose activations serve as the feature map.
    pub feature_layer: usize,
    /// Epoch cap for each reset-and-retrain fit.
    pub max_epochs: usize,
    pub adam: AdamConfig,
    /// Root of every per-run randomness stream.
    pub master_seed: u64,
    /// Duplicate minority-class training examples up to the majority count.
    pub oversample_minority: bool,
    /// Initial-set construction strategy.
    pub init_strategy: InitStrategy,
    /// Optional cap on acquisition iterations (None: run until the pool is
    /// exhausted).
    pub max_iterations: Option<usize>,
    /// Re-score the batch after every pick instead of ranking one snapshot.
    pub greedy_batch: bool,
    /// Hidden layer widths of the reference learner.
    pub hidden_sizes: [usize; 2],
    /// Fraction of examples forming the combined train + oracle pool.
    pub pool_ratio: f64,
    /// Fraction of examples held out for testing.
    pub test_ratio: f64,
    /// Seed of the shared descriptor test pattern (image mode).
    pub brief_seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            initial_train_size: 100,
            imgs_per_iteration: 20,
            entropy_filter_size: 50,
            metric: Metric::Euclidean,
            feature_layer: 1,
            max_epochs: 500,
            adam: AdamConfig::default(),
            master_seed: 0,
            oversample_minority: false,
            init_strategy: InitStrategy::Random,
            max_iterations: None,
            greedy_batch: false,
            hidden_sizes: [64, 32],
            pool_ratio: 0.8,
            test_ratio: 0.2,
            brief_seed: 42,
        }
    }
}
