//! The fingerprinting adversary: windowed signed-size features, a random
//! forest, and accuracy / precision / recall / F1.

mod dataset;
mod features;
mod forest;
mod metrics;

pub use dataset::{split_dataset, Dataset, DEFAULT_TRAIN_FRACTION};
pub use features::{extract_windows, FeatureVector, DEFAULT_VECTOR_LEN, DEFAULT_WINDOW_S};
pub use forest::{train_forest, Classifier, DecisionTree, ForestModel, ForestParams, MaxFeatures};
pub use metrics::{accuracy, evaluate, evaluate_dataset, f1, precision, recall, ClassMetrics, Metrics};

use rand::Rng;

use crate::error::Result;
use crate::tracesim::Trace;

/// Settings for one attack run over a set of traces.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct AttackParams {
    pub window_s: f64,
    pub vector_len: usize,
    pub train_fraction: f64,
    pub forest: ForestParams,
}

impl Default for AttackParams {
    fn default() -> Self {
        AttackParams {
            window_s: DEFAULT_WINDOW_S,
            vector_len: DEFAULT_VECTOR_LEN,
            train_fraction: DEFAULT_TRAIN_FRACTION,
            forest: ForestParams::default(),
        }
    }
}

/// Windows every trace, splits, trains and evaluates.
pub fn run_attack<R: Rng + ?Sized>(traces: &[Trace], params: &AttackParams, rng: &mut R) -> Result<Metrics> {
    let mut vectors = Vec::new();
    for t in traces {
        vectors.extend(extract_windows(t, params.window_s, params.vector_len)?);
    }
    let (train, test) = split_dataset(&vectors, params.train_fraction, rng)?;
    let train = Dataset::from_vectors(&train)?;
    let model = train_forest(&train, &params.forest)?;
    evaluate(&model, &test)
}
