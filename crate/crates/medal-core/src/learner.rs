//! Reference classifier: a small feed-forward network with rectifier hidden
//! layers and a softmax head, trained full-batch with Adam until it fits
//! its training set.
//!
//! The network doubles as the feature extractor for acquisition: the
//! post-activation output of a hidden layer is the description function
//! applied to pool candidates and training examples alike. Weights are
//! reset before every acquisition iteration, so each model is a pure
//! function of (seed, labeled set, config).

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::metrics::{FeatureVector, ProbabilityVector};

/// Errors from model construction, inference, and training.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LearnerError {
    #[error("architecture needs at least input and output layers with positive sizes")]
    InvalidArchitecture,
    #[error("expected input of dimension {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("hidden layer {layer} out of range; model has {hidden_layers} hidden layers")]
    InvalidLayer { layer: usize, hidden_layers: usize },
    #[error("training requires a nonempty labeled set")]
    EmptyTrainingSet,
    #[error("label {label} out of range for {num_classes} classes")]
    LabelOutOfRange { label: usize, num_classes: usize },
    #[error("model produced a non-finite output")]
    NonFiniteOutput,
}

/// Adam hyperparameters. Defaults follow the recommended values with the
/// learning rate used by the reset-and-retrain protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            lr: 2e-4,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// One fully connected layer with its Adam moment accumulators.
#[derive(Debug, Clone)]
struct Dense {
    in_dim: usize,
    /// Row-major `out_dim x in_dim`.
    weights: Vec<f64>,
    biases: Vec<f64>,
    m_weights: Vec<f64>,
    v_weights: Vec<f64>,
    m_biases: Vec<f64>,
    v_biases: Vec<f64>,
}

impl Dense {
    fn glorot(in_dim: usize, out_dim: usize, rng: &mut ChaCha8Rng) -> Dense {
        let bound = libm::sqrt(6.0 / (in_dim + out_dim) as f64);
        let weights = (0..in_dim * out_dim)
            .map(|_| rng.random_range(-bound..bound))
            .collect();
        Dense {
            in_dim,
            weights,
            biases: vec![0.0; out_dim],
            m_weights: vec![0.0; in_dim * out_dim],
            v_weights: vec![0.0; in_dim * out_dim],
            m_biases: vec![0.0; out_dim],
            v_biases: vec![0.0; out_dim],
        }
    }

    /// z = W·input + b, written into `out`.
    fn affine(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for (row, bias) in self.weights.chunks_exact(self.in_dim).zip(&self.biases) {
            let mut z = *bias;
            for (w, a) in row.iter().zip(input) {
                z += w * a;
            }
            out.push(z);
        }
    }
}

/// Per-layer gradients, shaped like the model's weights and biases.
#[derive(Debug, Clone)]
pub struct Gradients {
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

impl Gradients {
    fn zeros_like(layers: &[Dense]) -> Gradients {
        Gradients {
            weights: layers.iter().map(|l| vec![0.0; l.weights.len()]).collect(),
            biases: layers.iter().map(|l| vec![0.0; l.biases.len()]).collect(),
        }
    }

    /// Flat view in the model's parameter order (per layer: weights row-major,
    /// then biases). Mirrors [`Mlp::param`] indexing.
    pub fn flatten(&self) -> Vec<f64> {
        let mut flat = Vec::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            flat.extend_from_slice(w);
            flat.extend_from_slice(b);
        }
        flat
    }
}

/// Outcome of one full-batch evaluation: mean cross-entropy loss, gradients,
/// and how many examples the current weights already classify correctly.
#[derive(Debug, Clone)]
pub struct BatchEvaluation {
    pub loss: f64,
    pub correct: usize,
    pub gradients: Gradients,
}

/// Result of a reset-and-retrain fit.
#[derive(Debug, Clone)]
pub struct FitReport {
    /// True if training accuracy reached 1.0 within the epoch budget.
    pub achieved_fit: bool,
    /// Number of Adam steps taken.
    pub epochs_run: usize,
    /// Mean loss observed before each step, in epoch order.
    pub losses: Vec<f64>,
    pub final_train_accuracy: f64,
}

/// Feed-forward classifier with rectifier hidden layers and softmax output.
#[derive(Debug, Clone)]
pub struct Mlp {
    sizes: Vec<usize>,
    layers: Vec<Dense>,
    step: u64,
}

impl Mlp {
    /// Glorot-uniform initialization: every weight is drawn from
    /// U[−b, b) with b = √(6 / (fan_in + fan_out)); biases start at zero,
    /// Adam accumulators at zero. Deterministic given `seed`.
    pub fn init(layer_sizes: &[usize], seed: u64) -> Result<Mlp, LearnerError> {
        if layer_sizes.len() < 2 || layer_sizes.iter().any(|&s| s == 0) {
            return Err(LearnerError::InvalidArchitecture);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = layer_sizes
            .windows(2)
            .map(|w| Dense::glorot(w[0], w[1], &mut rng))
            .collect();
        Ok(Mlp {
            sizes: layer_sizes.to_vec(),
            layers,
            step: 0,
        })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn num_classes(&self) -> usize {
        *self.sizes.last().expect("at least two layers")
    }

    /// Number of hidden layers available to `extract_features`.
    pub fn hidden_layer_count(&self) -> usize {
        self.sizes.len() - 2
    }

    /// Adam step counter.
    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    fn check_input(&self, x: &FeatureVector) -> Result<(), LearnerError> {
        if x.len() != self.input_dim() {
            return Err(LearnerError::ShapeMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Forward pass; fills `activations` with [a0, a1, ..., a_{L-1}, probs]
    /// where hidden activations are post-rectifier.
    fn forward_into(&self, x: &[f64], activations: &mut Vec<Vec<f64>>) {
        activations.clear();
        activations.push(x.to_vec());
        let mut scratch = Vec::new();
        for (idx, layer) in self.layers.iter().enumerate() {
            layer.affine(activations.last().expect("input pushed"), &mut scratch);
            let last = idx + 1 == self.layers.len();
            if last {
                softmax_in_place(&mut scratch);
            } else {
                for z in scratch.iter_mut() {
                    if *z < 0.0 {
                        *z = 0.0;
                    }
                }
            }
            activations.push(core::mem::take(&mut scratch));
        }
    }

    /// Class probabilities for one input.
    pub fn predict_proba(&self, x: &FeatureVector) -> Result<ProbabilityVector, LearnerError> {
        self.check_input(x)?;
        let mut activations = Vec::new();
        self.forward_into(x.values(), &mut activations);
        let probs = activations.pop().expect("forward produced output");
        if probs.iter().any(|p| !p.is_finite()) {
            return Err(LearnerError::NonFiniteOutput);
        }
        ProbabilityVector::new(probs).map_err(|_| LearnerError::NonFiniteOutput)
    }

    /// Post-activation representation at hidden layer `layer` (0 = first
    /// hidden layer). This is the description function used to compare pool
    /// candidates against the training set.
    pub fn extract_features(
        &self,
        x: &FeatureVector,
        layer: usize,
    ) -> Result<FeatureVector, LearnerError> {
        if layer >= self.hidden_layer_count() {
            return Err(LearnerError::InvalidLayer {
                layer,
                hidden_layers: self.hidden_layer_count(),
            });
        }
        self.check_input(x)?;
        let mut current = x.values().to_vec();
        let mut scratch = Vec::new();
        for dense in &self.layers[..=layer] {
            dense.affine(&current, &mut scratch);
            for z in scratch.iter_mut() {
                if *z < 0.0 {
                    *z = 0.0;
                }
            }
            core::mem::swap(&mut current, &mut scratch);
        }
        Ok(FeatureVector::new(current))
    }

    /// Full-batch mean cross-entropy loss, gradients, and correct count for
    /// the current weights. Examples are processed in slice order, so the
    /// result is bit-reproducible.
    pub fn loss_and_gradients(
        &self,
        batch: &[(&FeatureVector, usize)],
    ) -> Result<BatchEvaluation, LearnerError> {
        if batch.is_empty() {
            return Err(LearnerError::EmptyTrainingSet);
        }
        let classes = self.num_classes();
        let scale = 1.0 / batch.len() as f64;
        let mut gradients = Gradients::zeros_like(&self.layers);
        let mut activations: Vec<Vec<f64>> = Vec::new();
        let mut loss = 0.0;
        let mut correct = 0;

        for &(x, label) in batch {
            self.check_input(x)?;
            if label >= classes {
                return Err(LearnerError::LabelOutOfRange {
                    label,
                    num_classes: classes,
                });
            }
            self.forward_into(x.values(), &mut activations);
            let probs = activations.last().expect("output present");
            if argmax(probs) == label {
                correct += 1;
            }
            loss -= scale * libm::log(probs[label].max(1e-300));

            // Output delta of the mean loss: (p − onehot(label)) / B.
            let mut delta: Vec<f64> = probs.iter().map(|&p| p * scale).collect();
            delta[label] -= scale;

            for (idx, layer) in self.layers.iter().enumerate().rev() {
                let input = &activations[idx];
                let gw = &mut gradients.weights[idx];
                for (o, &d) in delta.iter().enumerate() {
                    let row = &mut gw[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (g, a) in row.iter_mut().zip(input) {
                        *g += d * a;
                    }
                    gradients.biases[idx][o] += d;
                }
                if idx > 0 {
                    // Backpropagate through the rectifier: gate on the
                    // post-activation output (zero at the kink).
                    let mut prev = vec![0.0; layer.in_dim];
                    for (o, &d) in delta.iter().enumerate() {
                        let row = &layer.weights[o * layer.in_dim..(o + 1) * layer.in_dim];
                        for (p, w) in prev.iter_mut().zip(row) {
                            *p += w * d;
                        }
                    }
                    for (p, a) in prev.iter_mut().zip(input) {
                        if *a <= 0.0 {
                            *p = 0.0;
                        }
                    }
                    delta = prev;
                }
            }
        }

        Ok(BatchEvaluation {
            loss,
            correct,
            gradients,
        })
    }

    /// One Adam update: m ← β₁m + (1−β₁)g, v ← β₂v + (1−β₂)g², both
    /// bias-corrected, then θ ← θ − lr·m̂ / (√v̂ + ε). Increments the step
    /// counter.
    pub fn adam_step(
        &mut self,
        gradients: &Gradients,
        cfg: &AdamConfig,
    ) -> Result<(), LearnerError> {
        if gradients.weights.len() != self.layers.len()
            || gradients
                .weights
                .iter()
                .zip(&self.layers)
                .any(|(g, l)| g.len() != l.weights.len())
            || gradients
                .biases
                .iter()
                .zip(&self.layers)
                .any(|(g, l)| g.len() != l.biases.len())
        {
            return Err(LearnerError::ShapeMismatch {
                expected: self.layers.len(),
                got: gradients.weights.len(),
            });
        }
        self.step += 1;
        let t = self.step as f64;
        let m_correction = 1.0 - libm::pow(cfg.beta1, t);
        let v_correction = 1.0 - libm::pow(cfg.beta2, t);
        let update = |theta: &mut [f64], m: &mut [f64], v: &mut [f64], g: &[f64]| {
            for i in 0..theta.len() {
                m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
                v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
                let m_hat = m[i] / m_correction;
                let v_hat = v[i] / v_correction;
                theta[i] -= cfg.lr * m_hat / (libm::sqrt(v_hat) + cfg.epsilon);
            }
        };
        for (idx, layer) in self.layers.iter_mut().enumerate() {
            update(
                &mut layer.weights,
                &mut layer.m_weights,
                &mut layer.v_weights,
                &gradients.weights[idx],
            );
            update(
                &mut layer.biases,
                &mut layer.m_biases,
                &mut layer.v_biases,
                &gradients.biases[idx],
            );
        }
        Ok(())
    }

    /// Fraction of `batch` the current weights classify correctly.
    pub fn train_accuracy(&self, batch: &[(&FeatureVector, usize)]) -> Result<f64, LearnerError> {
        if batch.is_empty() {
            return Err(LearnerError::EmptyTrainingSet);
        }
        let mut activations = Vec::new();
        let mut correct = 0usize;
        for &(x, label) in batch {
            self.check_input(x)?;
            self.forward_into(x.values(), &mut activations);
            if argmax(activations.last().expect("output present")) == label {
                correct += 1;
            }
        }
        Ok(correct as f64 / batch.len() as f64)
    }

    /// Full-batch descent until the training set is fit exactly: stops at
    /// the first epoch where training accuracy is 1.0, or after
    /// `max_epochs` Adam steps, whichever comes first.
    pub fn train_to_fit(
        &mut self,
        batch: &[(&FeatureVector, usize)],
        cfg: &AdamConfig,
        max_epochs: usize,
    ) -> Result<FitReport, LearnerError> {
        if batch.is_empty() {
            return Err(LearnerError::EmptyTrainingSet);
        }
        let mut losses = Vec::new();
        let mut epochs_run = 0;
        let mut achieved_fit = false;
        for _ in 0..max_epochs {
            let eval = self.loss_and_gradients(batch)?;
            losses.push(eval.loss);
            if eval.correct == batch.len() {
                achieved_fit = true;
                break;
            }
            self.adam_step(&eval.gradients, cfg)?;
            epochs_run += 1;
        }
        let final_train_accuracy = if achieved_fit {
            1.0
        } else {
            // The last step may have pushed accuracy to 1.0 unobserved.
            let acc = self.train_accuracy(batch)?;
            achieved_fit = acc == 1.0;
            acc
        };
        Ok(FitReport {
            achieved_fit,
            epochs_run,
            losses,
            final_train_accuracy,
        })
    }

    /// Total number of scalar parameters.
    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.biases.len())
            .sum()
    }

    /// Parameter at flat index `i` (per layer: weights row-major, then
    /// biases). Used by finite-difference checks.
    pub fn param(&self, i: usize) -> f64 {
        let (layer, offset) = self.locate(i);
        if offset < layer.weights.len() {
            layer.weights[offset]
        } else {
            layer.biases[offset - layer.weights.len()]
        }
    }

    pub fn set_param(&mut self, i: usize, value: f64) {
        let idx = self.locate_index(i);
        let layer = &mut self.layers[idx.0];
        if idx.1 < layer.weights.len() {
            layer.weights[idx.1] = value;
        } else {
            layer.biases[idx.1 - layer.weights.len()] = value;
        }
    }

    fn locate(&self, i: usize) -> (&Dense, usize) {
        let (layer, offset) = self.locate_index(i);
        (&self.layers[layer], offset)
    }

    fn locate_index(&self, mut i: usize) -> (usize, usize) {
        for (idx, layer) in self.layers.iter().enumerate() {
            let span = layer.weights.len() + layer.biases.len();
            if i < span {
                return (idx, i);
            }
            i -= span;
        }
        panic!("parameter index out of range");
    }
}

/// Index of the largest entry; ties go to the lower index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Numerically stable softmax (shift by the max logit).
fn softmax_in_place(logits: &mut [f64]) {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for z in logits.iter_mut() {
        *z = libm::exp(*z - max);
        sum += *z;
    }
    for z in logits.iter_mut() {
        *z /= sum;
    }
}
