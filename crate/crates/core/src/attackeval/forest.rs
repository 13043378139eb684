use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::{derive_index, seeded};

/// Anything that maps a feature row to a class index.
pub trait Classifier {
    fn predict(&self, x: &[f64]) -> usize;

    fn predict_all(&self, rows: &[Vec<f64>]) -> Vec<usize> {
        rows.iter().map(|x| self.predict(x)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    Sqrt,
    All,
    Count(usize),
}

impl MaxFeatures {
    fn resolve(self, n_features: usize) -> usize {
        let k = match self {
            MaxFeatures::Sqrt => (n_features as f64).sqrt().floor() as usize,
            MaxFeatures::All => n_features,
            MaxFeatures::Count(k) => k,
        };
        k.clamp(1, n_features.max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `None` grows until leaves are pure.
    pub max_depth: Option<usize>,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            max_depth: None,
            max_features: MaxFeatures::Sqrt,
            bootstrap: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf {
        class: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// CART tree with Gini impurity; rows with `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// The root split as `(feature, threshold)`, if the root is not a leaf.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match self.nodes[0] {
            Node::Split {
                feature, threshold, ..
            } => Some((feature, threshold)),
            Node::Leaf { .. } => None,
        }
    }
}

impl Classifier for DecisionTree {
    fn predict(&self, x: &[f64]) -> usize {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { class } => return class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x[feature] <= threshold { left } else { right },
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub classes: Vec<String>,
    pub params: ForestParams,
    trees: Vec<DecisionTree>,
}

impl ForestModel {
    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }
}

impl Classifier for ForestModel {
    /// Majority vote; ties go to the lowest class index.
    fn predict(&self, x: &[f64]) -> usize {
        let mut votes = vec![0usize; self.classes.len()];
        for t in &self.trees {
            votes[t.predict(x)] += 1;
        }
        argmax(&votes)
    }
}

pub(crate) fn argmax(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Trains a random forest. Each tree gets its own generator derived from
/// `params.seed` and its index, so results do not depend on thread scheduling.
pub fn train_forest(train: &Dataset, params: &ForestParams) -> Result<ForestModel> {
    if train.is_empty() {
        return Err(Error::invalid("training set is empty"));
    }
    if params.n_trees == 0 {
        return Err(Error::invalid("a forest needs at least one tree"));
    }
    let present = {
        let mut seen = vec![false; train.n_classes()];
        for &l in &train.labels {
            seen[l] = true;
        }
        seen.iter().filter(|&&s| s).count()
    };
    if present < 2 {
        return Err(Error::invalid("training set holds a single class"));
    }
    let mtry = params.max_features.resolve(train.n_features());
    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded(derive_index(params.seed, i as u64));
            let rows: Vec<usize> = if params.bootstrap {
                (0..train.len()).map(|_| rng.random_range(0..train.len())).collect()
            } else {
                (0..train.len()).collect()
            };
            TreeBuilder {
                data: train,
                mtry,
                max_depth: params.max_depth,
                nodes: Vec::new(),
            }
            .build(rows, &mut rng)
        })
        .collect();
    Ok(ForestModel {
        classes: train.classes.clone(),
        params: params.clone(),
        trees,
    })
}

/// Sum over children of `n_child * gini(child)`; equal to `n - sum(c^2)/n` per child.
pub(crate) fn weighted_gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let sq: f64 = counts.iter().map(|&c| (c * c) as f64).sum();
    n as f64 - sq / n as f64
}

// Smallest impurity improvement treated as real rather than rounding noise.
pub(crate) const SPLIT_EPS: f64 = 1e-9;

struct TreeBuilder<'a> {
    data: &'a Dataset,
    mtry: usize,
    max_depth: Option<usize>,
    nodes: Vec<Node>,
}

impl TreeBuilder<'_> {
    fn build<R: Rng + ?Sized>(mut self, rows: Vec<usize>, rng: &mut R) -> DecisionTree {
        self.grow(rows, 0, rng);
        DecisionTree { nodes: self.nodes }
    }

    fn counts(&self, rows: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.data.n_classes()];
        for &r in rows {
            c[self.data.labels[r]] += 1;
        }
        c
    }

    fn grow<R: Rng + ?Sized>(&mut self, rows: Vec<usize>, depth: usize, rng: &mut R) -> usize {
        let id = self.nodes.len();
        let counts = self.counts(&rows);
        self.nodes.push(Node::Leaf {
            class: argmax(&counts),
        });
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || rows.len() < 2 || self.max_depth.is_some_and(|d| depth >= d) {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&rows, &counts, rng) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&i| self.data.features[i][feature] <= threshold);
        let left = self.grow(l, depth + 1, rng);
        let right = self.grow(r, depth + 1, rng);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }

    fn best_split<R: Rng + ?Sized>(
        &self,
        rows: &[usize],
        counts: &[usize],
        rng: &mut R,
    ) -> Option<(usize, f64)> {
        let n = rows.len();
        let parent = weighted_gini(counts, n);
        let mut best: Option<(f64, usize, f64)> = None;
        let mut order = rows.to_vec();
        for feature in index::sample(rng, self.data.n_features(), self.mtry) {
            let x = |i: usize| self.data.features[i][feature];
            order.sort_by(|&a, &b| x(a).total_cmp(&x(b)));
            let mut left = vec![0usize; counts.len()];
            let mut right = counts.to_vec();
            for k in 0..n - 1 {
                let class = self.data.labels[order[k]];
                left[class] += 1;
                right[class] -= 1;
                let (lo, hi) = (x(order[k]), x(order[k + 1]));
                if lo == hi {
                    continue;
                }
                let score = weighted_gini(&left, k + 1) + weighted_gini(&right, n - k - 1);
                if best.is_none_or(|(s, _, _)| score < s) {
                    best = Some((score, feature, midpoint(lo, hi)));
                }
            }
        }
        best.filter(|&(s, _, _)| s < parent - SPLIT_EPS)
            .map(|(_, f, t)| (f, t))
    }
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = lo + (hi - lo) / 2.0;
    if m < hi {
        m
    } else {
        lo
    }
}
