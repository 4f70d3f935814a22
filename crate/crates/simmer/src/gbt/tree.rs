//! Axis-aligned regression trees fit to least-squares targets, grown
//! best-first (the leaf with the largest split improvement splits next)
//! up to a leaf budget. Split search is exact over all feature values;
//! ties break to the lowest feature index, then the lowest threshold.

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTree {
    pub nodes: Vec<TreeNode>,
}

impl RegressionTree {
    pub fn predict(&self, row: &[f64]) -> f64 {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }
}

/// The best split found for a set of rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestSplit {
    pub feature: usize,
    pub threshold: f64,
    /// Squared-error reduction (the empirical improvement i^2).
    pub improvement: f64,
}

/// Exact best split of `rows` on squared error against `targets`.
///
/// Returns `None` when no split leaves at least `min_samples_leaf` rows on
/// each side or no feature separates the rows.
pub fn best_split(
    rows: &[usize],
    features: &[Vec<f64>],
    targets: &[f64],
    min_samples_leaf: usize,
) -> Option<BestSplit> {
    let n = rows.len();
    if n < 2 * min_samples_leaf {
        return None;
    }
    let n_features = features[rows[0]].len();
    let total: f64 = rows.iter().map(|&r| targets[r]).sum();

    let mut best: Option<BestSplit> = None;
    let mut sortable: Vec<(f64, f64)> = Vec::with_capacity(n);
    for feature in 0..n_features {
        sortable.clear();
        sortable.extend(rows.iter().map(|&r| (features[r][feature], targets[r])));
        sortable.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut left_sum = 0.0;
        let mut left_n = 0usize;
        let mut i = 0usize;
        while i < n {
            // Advance over a run of equal feature values.
            let value = sortable[i].0;
            while i < n && sortable[i].0 == value {
                left_sum += sortable[i].1;
                left_n += 1;
                i += 1;
            }
            if i == n {
                break;
            }
            let right_n = n - left_n;
            if left_n < min_samples_leaf || right_n < min_samples_leaf {
                continue;
            }
            let right_sum = total - left_sum;
            let improvement = left_sum * left_sum / left_n as f64
                + right_sum * right_sum / right_n as f64
                - total * total / n as f64;
            let threshold = 0.5 * (value + sortable[i].0);
            let candidate = BestSplit {
                feature,
                threshold,
                improvement,
            };
            let better = match &best {
                None => improvement > 0.0,
                Some(current) => {
                    improvement > current.improvement
                        || (improvement == current.improvement
                            && (feature < current.feature
                                || (feature == current.feature
                                    && threshold < current.threshold)))
                }
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    best
}

/// A fitted tree plus per-leaf row membership and the improvements of the
/// splits taken (for importance accounting).
pub struct FittedTree {
    pub tree: RegressionTree,
    /// (leaf node index, member rows).
    pub leaf_rows: Vec<(usize, Vec<usize>)>,
    /// (feature, improvement) per internal split.
    pub split_gains: Vec<(usize, f64)>,
}

struct OpenLeaf {
    node: usize,
    rows: Vec<usize>,
    split: Option<BestSplit>,
}

/// Fit a least-squares tree on the given rows, best-first, until
/// `max_leaves` leaves or no admissible split remains.
pub fn fit_tree(
    rows: &[usize],
    features: &[Vec<f64>],
    targets: &[f64],
    max_leaves: usize,
    min_samples_leaf: usize,
) -> FittedTree {
    let mut nodes = vec![TreeNode::Leaf { value: 0.0 }];
    let mut open = vec![OpenLeaf {
        node: 0,
        rows: rows.to_vec(),
        split: best_split(rows, features, targets, min_samples_leaf),
    }];
    let mut split_gains = Vec::new();
    let mut n_leaves = 1usize;

    while n_leaves < max_leaves {
        // Split the open leaf with the largest improvement next; ties keep
        // the earliest-created leaf.
        let Some(pick) = open
            .iter()
            .enumerate()
            .filter_map(|(i, leaf)| leaf.split.map(|s| (i, s.improvement)))
            .fold(None::<(usize, f64)>, |acc, (i, gain)| match acc {
                Some((_, best_gain)) if best_gain >= gain => acc,
                _ => Some((i, gain)),
            })
        else {
            break;
        };
        let leaf = open.swap_remove(pick.0);
        let split = leaf.split.expect("picked leaf has a split");

        let (mut left_rows, mut right_rows) = (Vec::new(), Vec::new());
        for &r in &leaf.rows {
            if features[r][split.feature] <= split.threshold {
                left_rows.push(r);
            } else {
                right_rows.push(r);
            }
        }
        let left = nodes.len();
        nodes.push(TreeNode::Leaf { value: 0.0 });
        let right = nodes.len();
        nodes.push(TreeNode::Leaf { value: 0.0 });
        nodes[leaf.node] = TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        split_gains.push((split.feature, split.improvement));
        n_leaves += 1;

        let left_split = best_split(&left_rows, features, targets, min_samples_leaf);
        let right_split = best_split(&right_rows, features, targets, min_samples_leaf);
        open.push(OpenLeaf {
            node: left,
            rows: left_rows,
            split: left_split,
        });
        open.push(OpenLeaf {
            node: right,
            rows: right_rows,
            split: right_split,
        });
    }

    let leaf_rows = open
        .into_iter()
        .map(|leaf| (leaf.node, leaf.rows))
        .collect();
    FittedTree {
        tree: RegressionTree { nodes },
        leaf_rows,
        split_gains,
    }
}
