use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::features::FeatureVector;
use crate::error::{Error, Result};

pub const DEFAULT_TRAIN_FRACTION: f64 = 0.7;

/// Numeric view of a set of feature vectors, with labels mapped to indices
/// into `classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub classes: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

impl Dataset {
    /// Classes are the sorted distinct labels.
    pub fn from_vectors(vectors: &[FeatureVector]) -> Result<Self> {
        let classes: Vec<String> = vectors
            .iter()
            .map(|v| v.label.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Self::with_classes(vectors, &classes)
    }

    pub fn with_classes(vectors: &[FeatureVector], classes: &[String]) -> Result<Self> {
        let width = vectors.first().map_or(0, |v| v.values.len());
        let mut features = Vec::with_capacity(vectors.len());
        let mut labels = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.values.len() != width {
                return Err(Error::invalid(format!(
                    "feature vectors differ in length ({} vs {width})",
                    v.values.len()
                )));
            }
            let class = classes
                .iter()
                .position(|c| *c == v.label)
                .ok_or_else(|| Error::invalid(format!("unknown label `{}`", v.label)))?;
            features.push(v.values.iter().map(|&x| f64::from(x)).collect());
            labels.push(class);
        }
        Ok(Dataset {
            classes: classes.to_vec(),
            features,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }
}

/// Stratified random split: each class contributes `round(n * train_fraction)`
/// samples to training, clamped so both partitions get at least one.
pub fn split_dataset<R: Rng + ?Sized>(
    vectors: &[FeatureVector],
    train_fraction: f64,
    rng: &mut R,
) -> Result<(Vec<FeatureVector>, Vec<FeatureVector>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::invalid(format!(
            "train fraction {train_fraction} must lie strictly between 0 and 1"
        )));
    }
    let mut by_class: BTreeMap<&str, Vec<&FeatureVector>> = BTreeMap::new();
    for v in vectors {
        by_class.entry(&v.label).or_default().push(v);
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (label, mut group) in by_class {
        let n = group.len();
        if n < 2 {
            return Err(Error::invalid(format!(
                "class `{label}` has {n} sample(s); a split needs at least 2"
            )));
        }
        group.shuffle(rng);
        let k = ((n as f64 * train_fraction).round() as usize).clamp(1, n - 1);
        train.extend(group[..k].iter().map(|v| (*v).clone()));
        test.extend(group[k..].iter().map(|v| (*v).clone()));
    }
    train.shuffle(rng);
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn vectors(per_class: &[(&str, usize)]) -> Vec<FeatureVector> {
        let mut out = Vec::new();
        for &(label, n) in per_class {
            for i in 0..n {
                out.push(FeatureVector {
                    values: vec![i as i32 + 1, -1],
                    label: label.into(),
                    packets: 2,
                });
            }
        }
        out
    }

    #[test]
    fn seventy_thirty() {
        let v = vectors(&[("a", 50), ("b", 50)]);
        let (train, test) = split_dataset(&v, 0.7, &mut seeded(0)).unwrap();
        assert_eq!((train.len(), test.len()), (70, 30));
        for label in ["a", "b"] {
            assert!(train.iter().any(|x| x.label == label));
            assert!(test.iter().any(|x| x.label == label));
        }
    }

    #[test]
    fn every_class_in_both_partitions() {
        let v = vectors(&[("a", 2), ("b", 9), ("c", 3)]);
        let (train, test) = split_dataset(&v, 0.9, &mut seeded(1)).unwrap();
        for label in ["a", "b", "c"] {
            assert!(train.iter().any(|x| x.label == label));
            assert!(test.iter().any(|x| x.label == label));
        }
    }

    #[test]
    fn rejects_degenerate_fractions_and_singletons() {
        let v = vectors(&[("a", 5), ("b", 5)]);
        assert!(split_dataset(&v, 1.0, &mut seeded(0)).is_err());
        assert!(split_dataset(&v, 0.0, &mut seeded(0)).is_err());
        let v = vectors(&[("a", 5), ("b", 1)]);
        assert!(split_dataset(&v, 0.7, &mut seeded(0)).is_err());
    }

    #[test]
    fn same_seed_same_split() {
        let v = vectors(&[("a", 20), ("b", 20)]);
        let a = split_dataset(&v, 0.7, &mut seeded(42)).unwrap();
        let b = split_dataset(&v, 0.7, &mut seeded(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dataset_maps_labels() {
        let v = vectors(&[("plug", 1), ("bulb", 1)]);
        let d = Dataset::from_vectors(&v).unwrap();
        assert_eq!(d.classes, vec!["bulb", "plug"]);
        assert_eq!(d.labels, vec![1, 0]);
        assert!(Dataset::with_classes(&v, &["bulb".to_string()]).is_err());
    }
}
