use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::features::FeatureVector;
use super::forest::{Classifier, ForestModel};
use crate::error::{Error, Result};

/// Correct / (correct + incorrect).
pub fn accuracy(correct: u64, incorrect: u64) -> f64 {
    ratio(correct, correct + incorrect)
}

pub fn precision(tp: u64, fp: u64) -> f64 {
    ratio(tp, tp + fp)
}

pub fn recall(tp: u64, fn_: u64) -> f64 {
    ratio(tp, tp + fn_)
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * (precision * recall) / (precision + recall)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

/// Accuracy plus macro-averaged precision, recall and F1.
///
/// `confusion[actual][predicted]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub classes: Vec<String>,
    pub confusion: Vec<Vec<u64>>,
    pub per_class: Vec<ClassMetrics>,
}

impl Metrics {
    pub fn from_confusion(classes: &[String], confusion: Vec<Vec<u64>>) -> Self {
        let k = confusion.len();
        let total: u64 = confusion.iter().flatten().sum();
        let correct: u64 = (0..k).map(|i| confusion[i][i]).sum();
        let per_class: Vec<ClassMetrics> = (0..k)
            .map(|c| {
                let tp = confusion[c][c];
                let fn_ = confusion[c].iter().sum::<u64>() - tp;
                let fp = (0..k).map(|r| confusion[r][c]).sum::<u64>() - tp;
                let p = precision(tp, fp);
                let r = recall(tp, fn_);
                ClassMetrics {
                    label: classes.get(c).cloned().unwrap_or_else(|| c.to_string()),
                    precision: p,
                    recall: r,
                    f1: f1(p, r),
                    support: tp + fn_,
                }
            })
            .collect();
        let mean = |f: fn(&ClassMetrics) -> f64| {
            if k == 0 {
                0.0
            } else {
                per_class.iter().map(f).sum::<f64>() / k as f64
            }
        };
        Metrics {
            accuracy: accuracy(correct, total - correct),
            precision: mean(|m| m.precision),
            recall: mean(|m| m.recall),
            f1: mean(|m| m.f1),
            classes: classes.to_vec(),
            confusion,
            per_class,
        }
    }

    pub fn from_predictions(classes: &[String], actual: &[usize], predicted: &[usize]) -> Self {
        let k = classes.len();
        let mut confusion = vec![vec![0u64; k]; k];
        for (&a, &p) in actual.iter().zip(predicted) {
            confusion[a][p] += 1;
        }
        Self::from_confusion(classes, confusion)
    }
}

/// Scores `model` on held-out vectors.
pub fn evaluate(model: &ForestModel, test: &[FeatureVector]) -> Result<Metrics> {
    if test.is_empty() {
        return Err(Error::invalid("test set is empty"));
    }
    let data = Dataset::with_classes(test, &model.classes)?;
    Ok(evaluate_dataset(model, &data))
}

pub fn evaluate_dataset(model: &impl Classifier, data: &Dataset) -> Metrics {
    let predicted = model.predict_all(&data.features);
    Metrics::from_predictions(&data.classes, &data.labels, &predicted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes() -> Vec<String> {
        vec!["pos".into(), "neg".into()]
    }

    #[test]
    fn perfect_confusion() {
        let m = Metrics::from_confusion(&classes(), vec![vec![5, 0], vec![0, 5]]);
        assert_eq!((m.accuracy, m.precision, m.recall, m.f1), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn hand_computed_two_by_two() {
        let m = Metrics::from_confusion(&classes(), vec![vec![3, 2], vec![1, 4]]);
        assert!((m.accuracy - 0.7).abs() < 1e-15);
        let pos = &m.per_class[0];
        assert!((pos.precision - 0.75).abs() < 1e-15);
        assert!((pos.recall - 0.6).abs() < 1e-15);
        assert!((pos.f1 - 2.0 / 3.0).abs() < 1e-15);
        let neg = &m.per_class[1];
        assert!((neg.precision - 4.0 / 6.0).abs() < 1e-15);
        assert!((neg.recall - 0.8).abs() < 1e-15);
        assert!((m.precision - (0.75 + 4.0 / 6.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn empty_class_scores_zero() {
        let m = Metrics::from_confusion(&classes(), vec![vec![4, 0], vec![0, 0]]);
        assert_eq!(m.per_class[1].f1, 0.0);
        assert_eq!(m.accuracy, 1.0);
    }

    #[test]
    fn f1_zero_when_nothing_right() {
        assert_eq!(f1(0.0, 0.0), 0.0);
    }
}
