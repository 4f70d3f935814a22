//! Corpus data model: recipes, reviews, loading/validation, synthetic
//! generation, and corpus-level statistics.

mod io;
mod stats;
mod synthetic;

pub use io::{load_corpus, load_recipes, load_reviews, save_corpus};
pub use stats::{chi_square, method_region_table, rating_contrast, MethodRegionTable, RatingContrast};
pub use synthetic::{
    generate_synthetic, generate_synthetic_with_ledger, PlantedEvent, PlantedSubstitution,
    SyntheticConfig, SyntheticLedger,
};

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The five US regions a recipe may be labeled with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Mountain,
    Midwest,
    Northeast,
    South,
    WestCoast,
}

impl Region {
    pub const ALL: [Region; 5] = [
        Region::Mountain,
        Region::Midwest,
        Region::Northeast,
        Region::South,
        Region::WestCoast,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Region::Mountain => "mountain",
            Region::Midwest => "midwest",
            Region::Northeast => "northeast",
            Region::South => "south",
            Region::WestCoast => "west_coast",
        }
    }
}

/// Names of the nutrition quantities carried by a recipe, in report order.
pub const NUTRIENT_KEYS: [&str; 8] = [
    "calories",
    "fat",
    "carbohydrates",
    "protein",
    "sodium",
    "cholesterol",
    "fiber",
    "sugar",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    pub id: String,
    pub title: String,
    pub ingredient_lines: Vec<String>,
    pub directions: Vec<String>,
    /// Nutrient name -> non-negative amount (kcal for calories, g or mg for
    /// the rest). Keys outside [`NUTRIENT_KEYS`] are preserved but unused.
    #[serde(default)]
    pub nutrition: BTreeMap<String, f64>,
    #[serde(default)]
    pub prep_minutes: u32,
    #[serde(default)]
    pub cook_minutes: u32,
    pub servings: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Review {
    pub recipe_id: String,
    pub user_id: String,
    /// Star rating, 1..=5.
    pub rating: u8,
    pub text: String,
    #[serde(default)]
    pub helpful_votes: u32,
}

/// A validated, immutable collection of recipes and reviews.
///
/// Reviews are identified by their position in `reviews` (the corpus files
/// carry no review ids); extraction and export code uses that ordinal.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    recipes: Vec<Recipe>,
    reviews: Vec<Review>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}:{line}: malformed record: {message}")]
    Malformed {
        path: String,
        line: usize,
        message: String,
    },
    #[error("duplicate recipe id {id:?}")]
    DuplicateRecipeId { id: String },
    #[error("review {review} references unknown recipe id {id:?}")]
    DanglingRecipeId { review: usize, id: String },
    #[error("recipe {id:?}: {message}")]
    InvalidRecipe { id: String, message: String },
    #[error("review {review}: {message}")]
    InvalidReview { review: usize, message: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Corpus {
    /// Assemble and validate a corpus from parts.
    pub fn new(recipes: Vec<Recipe>, reviews: Vec<Review>) -> Result<Corpus, CorpusError> {
        let mut index = HashMap::with_capacity(recipes.len());
        for (i, recipe) in recipes.iter().enumerate() {
            if index.insert(recipe.id.clone(), i).is_some() {
                return Err(CorpusError::DuplicateRecipeId {
                    id: recipe.id.clone(),
                });
            }
            if recipe.ingredient_lines.is_empty() {
                return Err(CorpusError::InvalidRecipe {
                    id: recipe.id.clone(),
                    message: "ingredient_lines must be non-empty".into(),
                });
            }
            if recipe.servings == 0 {
                return Err(CorpusError::InvalidRecipe {
                    id: recipe.id.clone(),
                    message: "servings must be positive".into(),
                });
            }
            if let Some((key, value)) = recipe
                .nutrition
                .iter()
                .find(|(_, v)| !v.is_finite() || **v < 0.0)
            {
                return Err(CorpusError::InvalidRecipe {
                    id: recipe.id.clone(),
                    message: format!("nutrition {key:?} = {value} must be a non-negative number"),
                });
            }
        }
        for (i, review) in reviews.iter().enumerate() {
            if !index.contains_key(&review.recipe_id) {
                return Err(CorpusError::DanglingRecipeId {
                    review: i,
                    id: review.recipe_id.clone(),
                });
            }
            if !(1..=5).contains(&review.rating) {
                return Err(CorpusError::InvalidReview {
                    review: i,
                    message: format!("rating {} outside 1..=5", review.rating),
                });
            }
        }
        Ok(Corpus {
            recipes,
            reviews,
            index,
        })
    }

    pub fn recipes(&self) -> &[Recipe] {
        &self.recipes
    }

    pub fn reviews(&self) -> &[Review] {
        &self.reviews
    }

    pub fn recipe(&self, id: &str) -> Option<&Recipe> {
        self.index.get(id).map(|&i| &self.recipes[i])
    }

    pub fn recipe_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Mean star rating per recipe id; recipes with no reviews are absent.
    pub fn average_ratings(&self) -> HashMap<String, f64> {
        let mut sums: HashMap<&str, (f64, u32)> = HashMap::new();
        for review in &self.reviews {
            let entry = sums.entry(&review.recipe_id).or_insert((0.0, 0));
            entry.0 += review.rating as f64;
            entry.1 += 1;
        }
        sums.into_iter()
            .map(|(id, (sum, n))| (id.to_string(), sum / n as f64))
            .collect()
    }

    /// Reviews grouped by recipe id, as ordinals into `reviews()`.
    pub fn reviews_by_recipe(&self) -> HashMap<&str, Vec<usize>> {
        let mut map: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, review) in self.reviews.iter().enumerate() {
            map.entry(review.recipe_id.as_str()).or_default().push(i);
        }
        map
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    pub fn recipe(id: &str, lines: &[&str]) -> Recipe {
        Recipe {
            id: id.into(),
            title: format!("recipe {id}"),
            ingredient_lines: lines.iter().map(|s| s.to_string()).collect(),
            directions: vec!["Mix everything.".into()],
            nutrition: BTreeMap::new(),
            prep_minutes: 5,
            cook_minutes: 10,
            servings: 4,
            region: None,
        }
    }

    pub fn review(recipe_id: &str, user_id: &str, rating: u8, text: &str) -> Review {
        Review {
            recipe_id: recipe_id.into(),
            user_id: user_id.into(),
            rating,
            text: text.into(),
            helpful_votes: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::{recipe, review};
    use super::*;

    #[test]
    fn duplicate_recipe_id_rejected() {
        let err = Corpus::new(
            vec![recipe("a", &["salt"]), recipe("a", &["pepper"])],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateRecipeId { id } if id == "a"));
    }

    #[test]
    fn dangling_review_rejected() {
        let err = Corpus::new(
            vec![recipe("a", &["salt"])],
            vec![review("x9", "u1", 5, "great")],
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::DanglingRecipeId { id, .. } if id == "x9"));
    }

    #[test]
    fn rating_out_of_range_rejected() {
        let err = Corpus::new(
            vec![recipe("a", &["salt"])],
            vec![review("a", "u1", 6, "great")],
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::InvalidReview { .. }));
    }

    #[test]
    fn average_rating_is_mean_of_reviews() {
        let corpus = Corpus::new(
            vec![recipe("a", &["salt"])],
            vec![
                review("a", "u1", 5, ""),
                review("a", "u2", 4, ""),
                review("a", "u3", 3, ""),
            ],
        )
        .unwrap();
        let avg = corpus.average_ratings();
        assert_eq!(avg["a"], 4.0);
    }
}
