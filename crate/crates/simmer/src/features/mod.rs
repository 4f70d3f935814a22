//! Per-recipe and per-pair feature construction: baseline (methods and
//! effort), nutrition, full ingredient indicators, network positions
//! (centrality dot presence), and SVD community projections.

mod svd;

pub use svd::{dot, jacobi_eigen, svd_lowrank, LowRankBasis, SparseMatrix, SvdError};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::corpus::{Corpus, Recipe, NUTRIENT_KEYS};
use crate::ingredients::{extract_methods, ingredient_vector, Vocabulary};
use crate::network::{pmi, CentralityKind, PresenceCounts, WeightedDiGraph};
use crate::numeric::pearson;
use crate::pairs::RecipePair;
use crate::rules::RuleSet;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("only {0} recipes qualify; need at least 3")]
    TooFewRecipes(usize),
    #[error("recipe ratings have zero variance; correlation undefined")]
    ConstantRatings,
    #[error("unknown feature group {0:?}")]
    UnknownGroup(String),
    #[error("vector length {got} does not match expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FeatureGroup {
    Baseline,
    FullIngredients,
    Nutrition,
    NetPosition,
    NetCommunity,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 5] = [
        FeatureGroup::Baseline,
        FeatureGroup::FullIngredients,
        FeatureGroup::Nutrition,
        FeatureGroup::NetPosition,
        FeatureGroup::NetCommunity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FeatureGroup::Baseline => "baseline",
            FeatureGroup::FullIngredients => "full_ingredients",
            FeatureGroup::Nutrition => "nutrition",
            FeatureGroup::NetPosition => "net_position",
            FeatureGroup::NetCommunity => "net_community",
        }
    }

    pub fn parse(name: &str) -> Result<FeatureGroup, FeatureError> {
        FeatureGroup::ALL
            .into_iter()
            .find(|g| g.name() == name)
            .ok_or_else(|| FeatureError::UnknownGroup(name.to_string()))
    }
}

/// The five experimental conditions: each is baseline plus the listed
/// extras; "combined" is everything except the raw full-ingredient list.
pub fn condition_sets() -> Vec<(&'static str, Vec<FeatureGroup>)> {
    vec![
        ("baseline", vec![FeatureGroup::Baseline]),
        (
            "full_ingredients",
            vec![FeatureGroup::Baseline, FeatureGroup::FullIngredients],
        ),
        (
            "nutrition",
            vec![FeatureGroup::Baseline, FeatureGroup::Nutrition],
        ),
        (
            "networks",
            vec![
                FeatureGroup::Baseline,
                FeatureGroup::NetPosition,
                FeatureGroup::NetCommunity,
            ],
        ),
        (
            "combined",
            vec![
                FeatureGroup::Baseline,
                FeatureGroup::Nutrition,
                FeatureGroup::NetPosition,
                FeatureGroup::NetCommunity,
            ],
        ),
    ]
}

/// Baseline features: one binary indicator per lexicon method plus the
/// effort descriptors.
pub fn baseline_features(recipe: &Recipe, rules: &RuleSet) -> (Vec<String>, Vec<f64>) {
    let stems = rules.methods.all_stems();
    let used = extract_methods(&recipe.directions, &rules.methods);
    let mut names = Vec::with_capacity(stems.len() + 3);
    let mut values = Vec::with_capacity(stems.len() + 3);
    for stem in &stems {
        names.push(format!("method_{stem}"));
        values.push(if used.contains(stem) { 1.0 } else { 0.0 });
    }
    names.push("prep_minutes".into());
    values.push(recipe.prep_minutes as f64);
    names.push("cook_minutes".into());
    values.push(recipe.cook_minutes as f64);
    names.push("servings".into());
    values.push(recipe.servings as f64);
    (names, values)
}

/// Nutrition features: the eight nutrient quantities in fixed order, each
/// paired with a missing flag (absent key -> value 0, flag 1).
pub fn nutrition_features(recipe: &Recipe) -> (Vec<String>, Vec<f64>) {
    let mut names = Vec::with_capacity(16);
    let mut values = Vec::with_capacity(16);
    for key in NUTRIENT_KEYS {
        let entry = recipe.nutrition.get(key);
        names.push(format!("nutrition_{key}"));
        values.push(entry.copied().unwrap_or(0.0));
        names.push(format!("nutrition_{key}_missing"));
        values.push(if entry.is_some() { 0.0 } else { 1.0 });
    }
    (names, values)
}

/// Aggregated network position: centrality vector dotted with the binary
/// ingredient vector.
pub fn position_feature(centrality: &[f64], f: &[f64]) -> Result<f64, FeatureError> {
    if centrality.len() != f.len() {
        return Err(FeatureError::DimensionMismatch {
            got: f.len(),
            expected: centrality.len(),
        });
    }
    Ok(dot(centrality, f))
}

/// Precomputed centralities and SVD basis of one ingredient network.
pub struct NetworkFeatureInputs {
    pub name: &'static str,
    pub centralities: Vec<(CentralityKind, Vec<f64>)>,
    pub basis: LowRankBasis,
}

/// Per-recipe feature vectors for every group, index-aligned with the
/// corpus recipe list.
pub struct FeatureSpace {
    pub baseline_names: Vec<String>,
    pub nutrition_names: Vec<String>,
    pub full_names: Vec<String>,
    pub position_names: Vec<String>,
    pub community_names: Vec<String>,
    pub baseline: Vec<Vec<f64>>,
    pub nutrition: Vec<Vec<f64>>,
    pub full: Vec<Vec<f64>>,
    pub positions: Vec<Vec<f64>>,
    pub communities: Vec<Vec<f64>>,
}

impl FeatureSpace {
    pub fn build(
        corpus: &Corpus,
        vocab: &Vocabulary,
        rules: &RuleSet,
        networks: &[NetworkFeatureInputs],
    ) -> Result<FeatureSpace, FeatureError> {
        let mut position_names = Vec::new();
        let mut community_names = Vec::new();
        for network in networks {
            for (kind, _) in &network.centralities {
                position_names.push(format!("position_{}_{}", network.name, kind.name()));
            }
            for dim in 0..network.basis.k {
                community_names.push(format!("community_{}_{dim:03}", network.name));
            }
        }
        let full_names: Vec<String> = vocab
            .names()
            .map(|n| format!("ingredient_{}", n.replace(' ', "_")))
            .collect();

        let mut space = FeatureSpace {
            baseline_names: Vec::new(),
            nutrition_names: Vec::new(),
            full_names,
            position_names,
            community_names,
            baseline: Vec::new(),
            nutrition: Vec::new(),
            full: Vec::new(),
            positions: Vec::new(),
            communities: Vec::new(),
        };

        for recipe in corpus.recipes() {
            let (baseline_names, baseline) = baseline_features(recipe, rules);
            let (nutrition_names, nutrition) = nutrition_features(recipe);
            if space.baseline_names.is_empty() {
                space.baseline_names = baseline_names;
                space.nutrition_names = nutrition_names;
            }
            let f = ingredient_vector(recipe, vocab, rules);
            let mut positions = Vec::with_capacity(space.position_names.len());
            let mut communities = Vec::with_capacity(space.community_names.len());
            for network in networks {
                for (_, centrality) in &network.centralities {
                    positions.push(position_feature(centrality, &f)?);
                }
                let projected = network.basis.community_features(&f).map_err(|_| {
                    FeatureError::DimensionMismatch {
                        got: f.len(),
                        expected: network.basis.right.first().map_or(0, Vec::len),
                    }
                })?;
                communities.extend(projected);
            }
            space.baseline.push(baseline);
            space.nutrition.push(nutrition);
            space.full.push(f);
            space.positions.push(positions);
            space.communities.push(communities);
        }
        Ok(space)
    }

    fn group_names(&self, group: FeatureGroup) -> &[String] {
        match group {
            FeatureGroup::Baseline => &self.baseline_names,
            FeatureGroup::FullIngredients => &self.full_names,
            FeatureGroup::Nutrition => &self.nutrition_names,
            FeatureGroup::NetPosition => &self.position_names,
            FeatureGroup::NetCommunity => &self.community_names,
        }
    }

    fn group_row(&self, group: FeatureGroup, recipe: usize) -> &[f64] {
        match group {
            FeatureGroup::Baseline => &self.baseline[recipe],
            FeatureGroup::FullIngredients => &self.full[recipe],
            FeatureGroup::Nutrition => &self.nutrition[recipe],
            FeatureGroup::NetPosition => &self.positions[recipe],
            FeatureGroup::NetCommunity => &self.communities[recipe],
        }
    }
}

/// A labeled pair-feature matrix: each row is the concatenation of the two
/// recipes' selected feature groups ("a." side first); label +1 means the
/// a side is the majority-preferred recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMatrix {
    pub names: Vec<String>,
    pub groups: Vec<FeatureGroup>,
    /// Number of columns per side; columns [0, half) are the a side.
    pub half: usize,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
    /// (hi, lo) recipe ids per row, for export and cross-footing.
    pub pair_keys: Vec<(String, String)>,
}

impl PairMatrix {
    /// Swap the two sides of one row in place (used by orientation
    /// randomization together with a label flip).
    pub fn swap_row_sides(&mut self, row: usize) {
        let half = self.half;
        let (a, b) = self.rows[row].split_at_mut(half);
        a.swap_with_slice(b);
        self.labels[row] = -self.labels[row];
        let (hi, lo) = self.pair_keys[row].clone();
        self.pair_keys[row] = (lo, hi);
    }
}

/// Assemble the pair matrix for a group selection; every pair contributes
/// one row oriented hi-side first with label +1.
pub fn pair_matrix(
    pairs: &[RecipePair],
    space: &FeatureSpace,
    selection: &[FeatureGroup],
) -> PairMatrix {
    let mut side_names = Vec::new();
    let mut side_groups = Vec::new();
    for &group in selection {
        for name in space.group_names(group) {
            side_names.push(name.clone());
            side_groups.push(group);
        }
    }
    let half = side_names.len();
    let mut names = Vec::with_capacity(half * 2);
    let mut groups = Vec::with_capacity(half * 2);
    for prefix in ["a", "b"] {
        for (name, group) in side_names.iter().zip(&side_groups) {
            names.push(format!("{prefix}.{name}"));
            groups.push(*group);
        }
    }

    let mut rows = Vec::with_capacity(pairs.len());
    let mut labels = Vec::with_capacity(pairs.len());
    let mut pair_keys = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let mut row = Vec::with_capacity(half * 2);
        for &recipe in [pair.hi_index, pair.lo_index].iter() {
            for &group in selection {
                row.extend_from_slice(space.group_row(group, recipe));
            }
        }
        rows.push(row);
        labels.push(1.0);
        pair_keys.push((pair.recipe_hi.clone(), pair.recipe_lo.clone()));
    }
    PairMatrix {
        names,
        groups,
        half,
        rows,
        labels,
        pair_keys,
    }
}

/// Correlations of per-recipe min/avg/max pairwise PMI with average
/// rating. `None` components mark zero-variance PMI columns.
#[derive(Debug, Clone, Copy)]
pub struct PmiRatingCorrelation {
    pub rho_min: Option<f64>,
    pub rho_avg: Option<f64>,
    pub rho_max: Option<f64>,
    pub n_recipes: usize,
}

/// Per recipe with at least two in-vocabulary ingredients and one review:
/// min/avg/max pairwise PMI (undefined pairs skipped) correlated against
/// the recipe's average rating.
pub fn pmi_rating_correlation(
    corpus: &Corpus,
    ingredient_sets: &[BTreeSet<usize>],
    cooccurrence: &WeightedDiGraph,
    presence: &PresenceCounts,
) -> Result<PmiRatingCorrelation, FeatureError> {
    let ratings = corpus.average_ratings();
    let mut mins = Vec::new();
    let mut avgs = Vec::new();
    let mut maxs = Vec::new();
    let mut rating_column = Vec::new();
    for (recipe, set) in corpus.recipes().iter().zip(ingredient_sets) {
        if set.len() < 2 {
            continue;
        }
        let Some(&rating) = ratings.get(&recipe.id) else {
            continue;
        };
        let items: Vec<usize> = set.iter().copied().collect();
        let mut values = Vec::new();
        for (i, &a) in items.iter().enumerate() {
            for &b in &items[i + 1..] {
                let joint = cooccurrence.weight(a, b).unwrap_or(0.0) as u32;
                if let Some(value) = pmi(
                    joint,
                    presence.presence[a],
                    presence.presence[b],
                    presence.n_recipes,
                ) {
                    values.push(value);
                }
            }
        }
        if values.is_empty() {
            continue;
        }
        mins.push(values.iter().copied().fold(f64::INFINITY, f64::min));
        maxs.push(values.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        avgs.push(values.iter().sum::<f64>() / values.len() as f64);
        rating_column.push(rating);
    }
    if rating_column.len() < 3 {
        return Err(FeatureError::TooFewRecipes(rating_column.len()));
    }
    let spread = rating_column
        .iter()
        .any(|r| (r - rating_column[0]).abs() > 0.0);
    if !spread {
        return Err(FeatureError::ConstantRatings);
    }
    Ok(PmiRatingCorrelation {
        rho_min: pearson(&mins, &rating_column),
        rho_avg: pearson(&avgs, &rating_column),
        rho_max: pearson(&maxs, &rating_column),
        n_recipes: rating_column.len(),
    })
}
