//! Examples, dataset partitions, and the set bookkeeping of the
//! acquisition loop.
//!
//! A dataset is an [`ExampleSet`] (payloads plus hidden labels) and a
//! [`DatasetState`] partitioning the ids into labeled training set, the
//! unlabeled oracle pool, and a held-out test set. Labels are gated behind
//! the partition: reading the label of an example still sitting in the
//! oracle pool is a programming error, caught by a debug assertion. Moving
//! ids out of the pool ([`DatasetState::transfer`]) is what makes their
//! labels visible.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::descriptors::Image;
use crate::metrics::FeatureVector;
use crate::sampler::SamplerId;

/// Dense integer identifier, assigned at load time in file order.
pub type ExampleId = usize;

/// Errors from dataset construction and partition bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("id {0} appears more than once in a transfer request")]
    DuplicateId(ExampleId),
    #[error("id {0} is not in the oracle pool")]
    NotInOracle(ExampleId),
    #[error("id {0} appears in more than one partition")]
    OverlappingPartition(ExampleId),
    #[error("partitions cover {covered} ids but the dataset holds {expected}")]
    IncompleteCover { covered: usize, expected: usize },
    #[error("example ids must be dense and in order; found {found} at position {position}")]
    NonDenseIds { position: usize, found: ExampleId },
    #[error("dataset mixes feature and image payloads")]
    MixedPayload,
    #[error("label {label} out of range for {num_classes} classes (example {id})")]
    LabelOutOfRange {
        id: ExampleId,
        label: usize,
        num_classes: usize,
    },
    #[error("dataset contains no examples")]
    EmptyDataset,
}

/// Example payload: raw features in tabular mode, a grayscale image in
/// image mode. One dataset uses a single kind throughout.
#[derive(Debug, Clone)]
pub enum Payload {
    Features(FeatureVector),
    Image(Image),
}

impl Payload {
    fn same_kind(&self, other: &Payload) -> bool {
        matches!(
            (self, other),
            (Payload::Features(_), Payload::Features(_)) | (Payload::Image(_), Payload::Image(_))
        )
    }
}

/// One example: id, payload, and the label held by the simulated oracle.
///
/// The label field is private; it is only reachable through
/// [`ExampleSet::visible_label`], which enforces the partition gate.
#[derive(Debug, Clone)]
pub struct Example {
    id: ExampleId,
    payload: Payload,
    hidden_label: usize,
}

impl Example {
    pub fn new(id: ExampleId, payload: Payload, hidden_label: usize) -> Self {
        Example {
            id,
            payload,
            hidden_label,
        }
    }

    pub fn id(&self) -> ExampleId {
        self.id
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }
}

/// The full example store of one run. Immutable after construction.
#[derive(Debug, Clone)]
pub struct ExampleSet {
    examples: Vec<Example>,
    num_classes: usize,
}

impl ExampleSet {
    /// Validates dense in-order ids, payload-kind uniformity, and label
    /// range before accepting the examples.
    pub fn new(examples: Vec<Example>, num_classes: usize) -> Result<Self, DatasetError> {
        if examples.is_empty() {
            return Err(DatasetError::EmptyDataset);
        }
        for (position, ex) in examples.iter().enumerate() {
            if ex.id != position {
                return Err(DatasetError::NonDenseIds {
                    position,
                    found: ex.id,
                });
            }
            if ex.hidden_label >= num_classes {
                return Err(DatasetError::LabelOutOfRange {
                    id: ex.id,
                    label: ex.hidden_label,
                    num_classes,
                });
            }
            if !ex.payload.same_kind(&examples[0].payload) {
                return Err(DatasetError::MixedPayload);
            }
        }
        Ok(ExampleSet {
            examples,
            num_classes,
        })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn get(&self, id: ExampleId) -> &Example {
        &self.examples[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Example> {
        self.examples.iter()
    }

    /// Label of `id`, gated by the partition: in debug and test builds,
    /// asking for the label of an example still in the oracle pool panics.
    /// Acquiring the example (transferring it to the training set) is what
    /// reveals its label.
    pub fn visible_label(&self, state: &DatasetState, id: ExampleId) -> usize {
        debug_assert!(
            !state.oracle.contains(&id),
            "label of example {id} read while it is still unlabeled in the oracle pool"
        );
        self.examples[id].hidden_label
    }
}

/// Partition of example ids into train / oracle / test.
///
/// A `DatasetState` is an immutable value: [`transfer`](Self::transfer)
/// returns a new state, so a snapshot can be shared read-only across
/// concurrent scorers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetState {
    train: BTreeSet<ExampleId>,
    oracle: BTreeSet<ExampleId>,
    test: BTreeSet<ExampleId>,
    num_classes: usize,
}

impl DatasetState {
    /// Builds a partition, checking that the three sets are pairwise
    /// disjoint and together cover the dense id range 0..total.
    pub fn new(
        train: BTreeSet<ExampleId>,
        oracle: BTreeSet<ExampleId>,
        test: BTreeSet<ExampleId>,
        num_classes: usize,
        total_examples: usize,
    ) -> Result<Self, DatasetError> {
        if let Some(&id) = train.intersection(&oracle).next() {
            return Err(DatasetError::OverlappingPartition(id));
        }
        if let Some(&id) = train.intersection(&test).next() {
            return Err(DatasetError::OverlappingPartition(id));
        }
        if let Some(&id) = oracle.intersection(&test).next() {
            return Err(DatasetError::OverlappingPartition(id));
        }
        let covered = train.len() + oracle.len() + test.len();
        if covered != total_examples
            || train
                .iter()
                .chain(&oracle)
                .chain(&test)
                .any(|&id| id >= total_examples)
        {
            return Err(DatasetError::IncompleteCover {
                covered,
                expected: total_examples,
            });
        }
        Ok(DatasetState {
            train,
            oracle,
            test,
            num_classes,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn train_ids(&self) -> &BTreeSet<ExampleId> {
        &self.train
    }

    pub fn oracle_ids(&self) -> &BTreeSet<ExampleId> {
        &self.oracle
    }

    pub fn test_ids(&self) -> &BTreeSet<ExampleId> {
        &self.test
    }

    pub fn total_examples(&self) -> usize {
        self.train.len() + self.oracle.len() + self.test.len()
    }

    /// Moves `ids` from the oracle pool into the training set, returning
    /// the new state. Their labels become visible to the learner from the
    /// returned state onward.
    pub fn transfer(&self, ids: &[ExampleId]) -> Result<DatasetState, DatasetError> {
        let mut seen = BTreeSet::new();
        for &id in ids {
            if !seen.insert(id) {
                return Err(DatasetError::DuplicateId(id));
            }
            if !self.oracle.contains(&id) {
                return Err(DatasetError::NotInOracle(id));
            }
        }
        let mut next = self.clone();
        for &id in ids {
            next.oracle.remove(&id);
            next.train.insert(id);
        }
        Ok(next)
    }
}

/// One point on an accuracy-versus-labels curve.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub labeled_count: usize,
    pub test_accuracy: f64,
    pub sampler_id: SamplerId,
    pub wall_time_ms: u64,
}
