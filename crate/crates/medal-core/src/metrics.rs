//! Distance functions, predictive entropy, and the mean-distance
//! informativeness score.
//!
//! The informativeness of a pool candidate is the arithmetic mean of its
//! feature-space distance to every current training example
//! ([`mean_distance_score`]). Six distance functions are supported; the two
//! binary measures (Russell-Rao and Kulsinski) operate on bit vectors, which
//! real-valued features reach through [`binarize`].

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// Allowed deviation of a probability vector's sum from one.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// Errors from distance and entropy computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    /// Entries were negative, non-finite, or did not sum to one.
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    /// Operands have different lengths.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    /// A binary metric was applied to real vectors (or vice versa).
    #[error("{metric} does not operate on this vector kind; binarize real features first")]
    KindMismatch { metric: Metric },
    /// The mean-distance score is undefined over an empty training set.
    #[error("mean distance score requires a nonempty training set")]
    EmptyTrainingSet,
}

/// Distance function identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Euclidean,
    Cosine,
    Cityblock,
    Chebyshev,
    Russellrao,
    Kulsinski,
}

impl Metric {
    /// All supported metrics, in canonical order.
    pub const ALL: [Metric; 6] = [
        Metric::Euclidean,
        Metric::Cosine,
        Metric::Cityblock,
        Metric::Chebyshev,
        Metric::Russellrao,
        Metric::Kulsinski,
    ];

    /// True for metrics defined over bit vectors.
    pub fn is_binary(self) -> bool {
        matches!(self, Metric::Russellrao | Metric::Kulsinski)
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Cosine => "cosine",
            Metric::Cityblock => "cityblock",
            Metric::Chebyshev => "chebyshev",
            Metric::Russellrao => "russellrao",
            Metric::Kulsinski => "kulsinski",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let mut msg = String::from("unknown metric `");
                msg.push_str(s);
                msg.push_str("`; expected one of euclidean, cosine, cityblock, chebyshev, russellrao, kulsinski");
                msg
            })
    }
}

/// Fixed-dimension real feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()), "non-finite feature");
        FeatureVector(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Returns a copy scaled by `factor` (used by selection-invariance tests).
    pub fn scaled(&self, factor: f64) -> FeatureVector {
        FeatureVector::new(self.0.iter().map(|v| v * factor).collect())
    }
}

impl From<Vec<f64>> for FeatureVector {
    fn from(values: Vec<f64>) -> Self {
        FeatureVector::new(values)
    }
}

/// Fixed-length bit vector; the domain of the binary metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryVector(Vec<bool>);

impl BinaryVector {
    pub fn new(bits: Vec<bool>) -> Self {
        BinaryVector(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The 0.0/1.0 real embedding of the bits.
    pub fn to_features(&self) -> FeatureVector {
        FeatureVector::new(self.0.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect())
    }
}

/// Class-probability vector; validated at construction so downstream
/// consumers (entropy, filtering) never see a malformed distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates that all entries are finite and non-negative and that the
    /// sum is within [`PROBABILITY_SUM_TOLERANCE`] of one.
    pub fn new(probs: Vec<f64>) -> Result<Self, MetricError> {
        if probs.is_empty() {
            return Err(MetricError::InvalidDistribution(String::from(
                "empty distribution",
            )));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(MetricError::InvalidDistribution(String::from(
                "entries must be finite and non-negative",
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(MetricError::InvalidDistribution(alloc::format!(
                "entries sum to {sum}, expected 1"
            )));
        }
        Ok(ProbabilityVector(probs))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn num_classes(&self) -> usize {
        self.0.len()
    }
}

/// Shannon entropy −Σ pᶜ·ln pᶜ in nats, with 0·ln 0 taken as 0.
///
/// The result lies in [0, ln C] for a C-class distribution. Natural log:
/// only the ranking of entropies matters to the samplers, and the argmax is
/// invariant to the base.
pub fn entropy(p: &ProbabilityVector) -> f64 {
    p.probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * libm::log(p))
        .sum()
}

/// Distance between two real feature vectors.
///
/// Cosine distance is 1 − cos(a, b), clamped to [0, 2]; if either vector is
/// zero the similarity is taken as 0 and the distance as 1, so a degenerate
/// feature never produces a NaN that would poison an argmax.
pub fn distance(metric: Metric, a: &FeatureVector, b: &FeatureVector) -> Result<f64, MetricError> {
    if metric.is_binary() {
        return Err(MetricError::KindMismatch { metric });
    }
    let (a, b) = (a.values(), b.values());
    if a.len() != b.len() {
        return Err(MetricError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let d = match metric {
        Metric::Euclidean => {
            let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            libm::sqrt(sq)
        }
        Metric::Cityblock => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        Metric::Chebyshev => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
        Metric::Cosine => {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let na = libm::sqrt(a.iter().map(|x| x * x).sum());
            let nb = libm::sqrt(b.iter().map(|x| x * x).sum());
            if na == 0.0 || nb == 0.0 {
                1.0
            } else {
                (1.0 - dot / (na * nb)).clamp(0.0, 2.0)
            }
        }
        Metric::Russellrao | Metric::Kulsinski => unreachable!(),
    };
    Ok(d)
}

/// Distance between two bit vectors under a binary metric.
///
/// With n the length and c_XY the count of positions holding the bit pair
/// (X, Y): Russell-Rao is (n − c_TT)/n and Kulsinski is
/// (c_TF + c_FT + n − c_TT)/(c_TF + c_FT + n). Neither is zero for identical
/// inputs in general; they measure shared-trait dissimilarity, not a metric
/// distance.
pub fn binary_distance(
    metric: Metric,
    a: &BinaryVector,
    b: &BinaryVector,
) -> Result<f64, MetricError> {
    if !metric.is_binary() {
        return Err(MetricError::KindMismatch { metric });
    }
    if a.len() != b.len() {
        return Err(MetricError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    debug_assert!(n > 0, "binary distance over empty vectors");
    let mut tt = 0usize;
    let mut tf = 0usize;
    let mut ft = 0usize;
    for (&x, &y) in a.bits().iter().zip(b.bits()) {
        match (x, y) {
            (true, true) => tt += 1,
            (true, false) => tf += 1,
            (false, true) => ft += 1,
            (false, false) => {}
        }
    }
    let d = match metric {
        Metric::Russellrao => (n - tt) as f64 / n as f64,
        Metric::Kulsinski => (tf + ft + n - tt) as f64 / (tf + ft + n) as f64,
        _ => unreachable!(),
    };
    Ok(d)
}

/// Maps a real vector to bits with the strict-positive rule: bit i is set
/// iff vᵢ > 0. This matches the sparsity semantics of rectified activations,
/// where "active" means strictly positive.
pub fn binarize(v: &FeatureVector) -> BinaryVector {
    BinaryVector::new(v.values().iter().map(|&x| x > 0.0).collect())
}

/// Mean distance from `x_feat` to every vector in `train_feats`:
/// s(x) = (1/N) Σᵢ d(f(x), f(xᵢ)).
///
/// For binary metrics both sides are binarized with [`binarize`] first.
/// Summation runs in slice order, so results are bit-reproducible.
pub fn mean_distance_score(
    x_feat: &FeatureVector,
    train_feats: &[FeatureVector],
    metric: Metric,
) -> Result<f64, MetricError> {
    if train_feats.is_empty() {
        return Err(MetricError::EmptyTrainingSet);
    }
    let mut sum = 0.0;
    if metric.is_binary() {
        let xb = binarize(x_feat);
        for t in train_feats {
            sum += binary_distance(metric, &xb, &binarize(t))?;
        }
    } else {
        for t in train_feats {
            sum += distance(metric, x_feat, t)?;
        }
    }
    Ok(sum / train_feats.len() as f64)
}
