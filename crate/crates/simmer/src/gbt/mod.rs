//! Stochastic gradient-boosted regression trees with exponential loss for
//! binary pair classification, with relative-importance accounting, a
//! seeded train/test splitter, and an exact text serialization.

mod tree;

pub use tree::{best_split, fit_tree, BestSplit, RegressionTree, TreeNode};

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::PairMatrix;
use crate::seeded::substream;

#[derive(Debug, Error)]
pub enum GbtError {
    #[error("need at least {need} rows, got {got}")]
    TooFewRows { need: usize, got: usize },
    #[error("labels must be +1 or -1 (row {0})")]
    BadLabel(usize),
    #[error("non-finite feature value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },
    #[error("feature count {got} does not match the model's {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("train fraction must be in (0, 1), got {0}")]
    BadFraction(f64),
    #[error("model has no splits; importance undefined")]
    NoSplits,
    #[error("empty test set")]
    EmptyTestSet,
    #[error("model file {path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbtConfig {
    pub n_trees: usize,
    pub max_leaves: usize,
    pub shrinkage: f64,
    pub subsample_fraction: f64,
    pub min_samples_leaf: usize,
    pub seed: u64,
}

impl Default for GbtConfig {
    fn default() -> Self {
        GbtConfig {
            n_trees: 200,
            max_leaves: 8,
            shrinkage: 0.1,
            subsample_fraction: 0.5,
            min_samples_leaf: 5,
            seed: 0,
        }
    }
}

/// A trained additive model: prediction is
/// `initial_score + shrinkage * sum(tree(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostedEnsemble {
    pub config: GbtConfig,
    pub feature_names: Vec<String>,
    pub initial_score: f64,
    pub trees: Vec<RegressionTree>,
    /// Accumulated squared improvement per feature (imp(j) before the
    /// square root and normalization).
    pub importance_sq: Vec<f64>,
    /// Training exp-loss after each boosting iteration.
    pub loss_trace: Vec<f64>,
}

/// Train on rows of features with labels in {-1, +1}.
pub fn train(
    rows: &[Vec<f64>],
    labels: &[f64],
    feature_names: &[String],
    config: &GbtConfig,
) -> Result<BoostedEnsemble, GbtError> {
    let n = rows.len();
    let need = 2 * config.min_samples_leaf;
    if n < need || labels.len() != n {
        return Err(GbtError::TooFewRows { need, got: n });
    }
    for (i, &label) in labels.iter().enumerate() {
        if label != 1.0 && label != -1.0 {
            return Err(GbtError::BadLabel(i));
        }
    }
    for (r, row) in rows.iter().enumerate() {
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(GbtError::NonFinite { row: r, column: c });
        }
    }

    let n_pos = labels.iter().filter(|&&y| y > 0.0).count();
    let n_neg = n - n_pos;
    if n_pos == 0 || n_neg == 0 {
        log::warn!("all {n} labels identical; ensemble is the prior alone");
        return Ok(BoostedEnsemble {
            config: *config,
            feature_names: feature_names.to_vec(),
            initial_score: if n_pos > 0 { 10.0 } else { -10.0 },
            trees: Vec::new(),
            importance_sq: vec![0.0; feature_names.len()],
            loss_trace: Vec::new(),
        });
    }
    let initial_score = 0.5 * (n_pos as f64 / n_neg as f64).ln();

    let mut scores = vec![initial_score; n];
    let mut trees = Vec::with_capacity(config.n_trees);
    let mut importance_sq = vec![0.0; feature_names.len()];
    let mut loss_trace = Vec::with_capacity(config.n_trees);
    let mut rng = substream(config.seed, "gbt.subsample");
    let mut indices: Vec<usize> = (0..n).collect();
    let sample_size = ((config.subsample_fraction * n as f64).round() as usize)
        .clamp(1, n);

    // Pseudo-residual of exponential loss: r_i = y_i * exp(-y_i F_i).
    let mut residuals = vec![0.0; n];
    for _ in 0..config.n_trees {
        let subsample: Vec<usize> = if sample_size < n {
            indices.shuffle(&mut rng);
            let mut picked = indices[..sample_size].to_vec();
            picked.sort_unstable();
            picked
        } else {
            indices.clone()
        };
        for &i in &subsample {
            residuals[i] = labels[i] * (-labels[i] * scores[i]).exp();
        }
        let fitted = fit_tree(
            &subsample,
            rows,
            &residuals,
            config.max_leaves,
            config.min_samples_leaf,
        );
        let mut tree = fitted.tree;
        // One Newton step per leaf on the exponential loss:
        // gamma = sum(r) / sum(|r|).
        for (node, members) in &fitted.leaf_rows {
            let numerator: f64 = members.iter().map(|&i| residuals[i]).sum();
            let denominator: f64 = members.iter().map(|&i| residuals[i].abs()).sum();
            let value = if denominator > 0.0 {
                numerator / denominator
            } else {
                0.0
            };
            tree.nodes[*node] = TreeNode::Leaf { value };
        }
        for (feature, gain) in &fitted.split_gains {
            importance_sq[*feature] += gain;
        }
        for (i, row) in rows.iter().enumerate() {
            scores[i] += config.shrinkage * tree.predict(row);
        }
        loss_trace.push(
            labels
                .iter()
                .zip(&scores)
                .map(|(y, f)| (-y * f).exp())
                .sum(),
        );
        trees.push(tree);
    }

    Ok(BoostedEnsemble {
        config: *config,
        feature_names: feature_names.to_vec(),
        initial_score,
        trees,
        importance_sq,
        loss_trace,
    })
}

impl BoostedEnsemble {
    /// Raw additive score and the sign label (ties to +1).
    pub fn predict(&self, row: &[f64]) -> Result<(f64, i8), GbtError> {
        if row.len() != self.feature_names.len() {
            return Err(GbtError::DimensionMismatch {
                got: row.len(),
                expected: self.feature_names.len(),
            });
        }
        let score = self.initial_score
            + self.config.shrinkage
                * self
                    .trees
                    .iter()
                    .map(|tree| tree.predict(row))
                    .sum::<f64>();
        Ok((score, if score >= 0.0 { 1 } else { -1 }))
    }

    /// Fraction of test rows whose predicted label matches.
    pub fn evaluate(&self, rows: &[Vec<f64>], labels: &[f64]) -> Result<f64, GbtError> {
        if rows.is_empty() {
            return Err(GbtError::EmptyTestSet);
        }
        let mut correct = 0usize;
        for (row, &label) in rows.iter().zip(labels) {
            let (_, predicted) = self.predict(row)?;
            if predicted as f64 == label {
                correct += 1;
            }
        }
        Ok(correct as f64 / rows.len() as f64)
    }

    /// Normalized relative importance per feature: sqrt of the accumulated
    /// squared improvements, scaled to sum 1. A feature never split on has
    /// importance exactly 0.
    pub fn relative_importance(&self) -> Result<Vec<(String, f64)>, GbtError> {
        let roots: Vec<f64> = self.importance_sq.iter().map(|v| v.sqrt()).collect();
        let total: f64 = roots.iter().sum();
        if total == 0.0 {
            return Err(GbtError::NoSplits);
        }
        Ok(self
            .feature_names
            .iter()
            .zip(&roots)
            .map(|(name, &value)| (name.clone(), value / total))
            .collect())
    }
}

/// Seed-deterministic split into train and test with pair-orientation
/// randomization: each row's sides are swapped (label flipped) with
/// probability 1/2 so the label is roughly balanced, then the shuffled
/// first ceil(fraction * n) rows become the training set.
pub fn split_train_test(
    matrix: &PairMatrix,
    train_fraction: f64,
    seed: u64,
) -> Result<(PairMatrix, PairMatrix), GbtError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(GbtError::BadFraction(train_fraction));
    }
    let n = matrix.rows.len();
    if n < 3 {
        return Err(GbtError::TooFewRows { need: 3, got: n });
    }
    let mut oriented = matrix.clone();
    let mut orient_rng = substream(seed, "orient");
    for row in 0..n {
        if orient_rng.random::<bool>() {
            oriented.swap_row_sides(row);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut shuffle_rng = substream(seed, "split");
    order.shuffle(&mut shuffle_rng);
    let n_train = ((train_fraction * n as f64).ceil() as usize).min(n - 1).max(1);

    let take = |slice: &[usize]| -> PairMatrix {
        PairMatrix {
            names: oriented.names.clone(),
            groups: oriented.groups.clone(),
            half: oriented.half,
            rows: slice.iter().map(|&i| oriented.rows[i].clone()).collect(),
            labels: slice.iter().map(|&i| oriented.labels[i]).collect(),
            pair_keys: slice
                .iter()
                .map(|&i| oriented.pair_keys[i].clone())
                .collect(),
        }
    };
    Ok((take(&order[..n_train]), take(&order[n_train..])))
}

// ── Model serialization ────────────────────────────────────────────────

/// Versioned text format; round-trips exactly (floats use the shortest
/// representation that parses back to the same bits).
pub fn save_model(model: &BoostedEnsemble, path: &Path) -> Result<(), GbtError> {
    fs::write(path, model_to_string(model)).map_err(|source| GbtError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn model_to_string(model: &BoostedEnsemble) -> String {
    let mut out = String::new();
    out.push_str("simmer-gbt v1\n");
    let c = &model.config;
    out.push_str(&format!("n_trees {}\n", c.n_trees));
    out.push_str(&format!("max_leaves {}\n", c.max_leaves));
    out.push_str(&format!("shrinkage {}\n", c.shrinkage));
    out.push_str(&format!("subsample_fraction {}\n", c.subsample_fraction));
    out.push_str(&format!("min_samples_leaf {}\n", c.min_samples_leaf));
    out.push_str(&format!("seed {}\n", c.seed));
    out.push_str(&format!("initial_score {}\n", model.initial_score));
    out.push_str(&format!("n_features {}\n", model.feature_names.len()));
    for (i, name) in model.feature_names.iter().enumerate() {
        out.push_str(&format!("feature {i} {name}\n"));
    }
    for (i, value) in model.importance_sq.iter().enumerate() {
        if *value != 0.0 {
            out.push_str(&format!("importance {i} {value}\n"));
        }
    }
    out.push_str(&format!("trees {}\n", model.trees.len()));
    for (t, tree) in model.trees.iter().enumerate() {
        out.push_str(&format!("tree {t} nodes {}\n", tree.nodes.len()));
        for (id, node) in tree.nodes.iter().enumerate() {
            match node {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => out.push_str(&format!("node {id} split {feature} {threshold} {left} {right}\n")),
                TreeNode::Leaf { value } => out.push_str(&format!("node {id} leaf {value}\n")),
            }
        }
    }
    out.push_str("end\n");
    out
}

pub fn load_model(path: &Path) -> Result<BoostedEnsemble, GbtError> {
    let text = fs::read_to_string(path).map_err(|source| GbtError::Io {
        path: path.display().to_string(),
        source,
    })?;
    model_from_string(&text, &path.display().to_string())
}

pub fn model_from_string(text: &str, path: &str) -> Result<BoostedEnsemble, GbtError> {
    let mut lines = text.lines().enumerate();
    let error = |line: usize, message: &str| GbtError::Parse {
        path: path.to_string(),
        line: line + 1,
        message: message.to_string(),
    };
    macro_rules! next_line {
        () => {
            lines.next().ok_or_else(|| error(0, "unexpected end of file"))?
        };
    }
    macro_rules! expect_kv {
        ($key:expr) => {{
            let (no, line) = next_line!();
            let rest = line
                .strip_prefix(concat!($key, " "))
                .ok_or_else(|| error(no, concat!("expected ", $key)))?;
            rest.parse()
                .map_err(|_| error(no, concat!("bad value for ", $key)))?
        }};
    }

    let (no, header) = next_line!();
    if header != "simmer-gbt v1" {
        return Err(error(no, "unrecognized model header"));
    }
    let n_trees: usize = expect_kv!("n_trees");
    let max_leaves: usize = expect_kv!("max_leaves");
    let shrinkage: f64 = expect_kv!("shrinkage");
    let subsample_fraction: f64 = expect_kv!("subsample_fraction");
    let min_samples_leaf: usize = expect_kv!("min_samples_leaf");
    let seed: u64 = expect_kv!("seed");
    let initial_score: f64 = expect_kv!("initial_score");
    let n_features: usize = expect_kv!("n_features");

    let mut feature_names = vec![String::new(); n_features];
    let mut importance_sq = vec![0.0; n_features];
    let mut trees: Vec<RegressionTree> = Vec::new();
    let mut tree_count = 0usize;

    loop {
        let (no, line) = next_line!();
        if line == "end" {
            break;
        }
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("feature") => {
                let i: usize = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| error(no, "bad feature index"))?;
                if i >= n_features {
                    return Err(error(no, "feature index out of range"));
                }
                feature_names[i] = parts.collect::<Vec<_>>().join(" ");
            }
            Some("importance") => {
                let i: usize = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| error(no, "bad importance index"))?;
                let v: f64 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| error(no, "bad importance value"))?;
                if i >= n_features {
                    return Err(error(no, "importance index out of range"));
                }
                importance_sq[i] = v;
            }
            Some("trees") => {
                tree_count = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| error(no, "bad tree count"))?;
            }
            Some("tree") => {
                let _index: usize = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| error(no, "bad tree index"))?;
                if parts.next() != Some("nodes") {
                    return Err(error(no, "expected nodes count"));
                }
                let n_nodes: usize = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| error(no, "bad node count"))?;
                let mut nodes = Vec::with_capacity(n_nodes);
                for _ in 0..n_nodes {
                    let (no, line) = next_line!();
                    let mut p = line.split_whitespace();
                    if p.next() != Some("node") {
                        return Err(error(no, "expected node line"));
                    }
                    let _id: usize = p
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| error(no, "bad node id"))?;
                    match p.next() {
                        Some("split") => {
                            let feature = p.next().and_then(|s| s.parse().ok());
                            let threshold = p.next().and_then(|s| s.parse().ok());
                            let left = p.next().and_then(|s| s.parse().ok());
                            let right = p.next().and_then(|s| s.parse().ok());
                            match (feature, threshold, left, right) {
                                (Some(f), Some(t), Some(l), Some(r)) => {
                                    nodes.push(TreeNode::Split {
                                        feature: f,
                                        threshold: t,
                                        left: l,
                                        right: r,
                                    })
                                }
                                _ => return Err(error(no, "bad split node")),
                            }
                        }
                        Some("leaf") => {
                            let value: f64 = p
                                .next()
                                .and_then(|s| s.parse().ok())
                                .ok_or_else(|| error(no, "bad leaf value"))?;
                            nodes.push(TreeNode::Leaf { value });
                        }
                        _ => return Err(error(no, "unknown node kind")),
                    }
                }
                trees.push(RegressionTree { nodes });
            }
            _ => return Err(error(no, "unrecognized line")),
        }
    }
    if trees.len() != tree_count {
        return Err(error(0, "tree count mismatch"));
    }

    Ok(BoostedEnsemble {
        config: GbtConfig {
            n_trees,
            max_leaves,
            shrinkage,
            subsample_fraction,
            min_samples_leaf,
            seed,
        },
        feature_names,
        initial_score,
        trees,
        importance_sq,
        loss_trace: Vec::new(),
    })
}
