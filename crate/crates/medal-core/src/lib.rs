//! Core primitives for pool-based active learning.
//!
//! The crate is split along the stages of an acquisition loop:
//!
//! * [`dataset`] — examples, labeled/oracle/test partitions, and the
//!   bookkeeping that moves ids between them.
//! * [`metrics`] — distance functions, predictive entropy, and the
//!   mean-distance informativeness score.
//! * [`descriptors`] — ORB-style binary image descriptors (FAST keypoints,
//!   intensity-centroid orientation, rotated BRIEF tests, average pooling)
//!   used to build an initial training set without a trained model.
//! * [`learner`] — a small feed-forward reference classifier trained with
//!   Adam under a reset-and-retrain-to-full-accuracy protocol.
//! * [`sampler`] — acquisition strategies: entropy-filtered maximum mean
//!   feature distance, uncertainty sampling, random sampling, and
//!   farthest-first initial-set construction.
//!
//! Everything here is pure computation over owned values; file formats,
//! experiment orchestration, and the CLI live in the companion
//! `medal-harness` crate. The crate is `no_std` (with `alloc`) so the
//! kernels can be reused in constrained environments.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod config;
pub mod dataset;
pub mod descriptors;
pub mod learner;
pub mod metrics;
pub mod sampler;
pub mod seed;

pub use config::{InitStrategy, RunConfig};
pub use dataset::{DatasetState, Example, ExampleId, ExampleSet, IterationRecord, Payload};
pub use learner::{AdamConfig, FitReport, Mlp};
pub use metrics::{BinaryVector, FeatureVector, Metric, ProbabilityVector};
pub use sampler::{AcquisitionResult, SamplerId};
