//! Seeded synthetic corpora with planted structure.
//!
//! Recipes draw ingredients from a home community with a configurable
//! cohesion probability; review ratings follow a latent score driven by
//! per-ingredient quality weights; a configurable fraction of review texts
//! instantiate the modification phrase templates the miner recognizes,
//! including planted substitutions. The generator keeps a ledger of every
//! planted event so extractor recall and precision are measurable.
//!
//! Users are grouped into rating "pods" (blocks of consecutive recipes) and
//! rate within their pod, so similar recipe pairs accumulate enough common
//! raters for pair generation.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Corpus, Recipe, Region, Review};
use crate::mining::ModificationKind;
use crate::seeded::substream;

#[derive(Debug, Error)]
pub enum SyntheticError {
    #[error("config invariant violated: {0}")]
    Invalid(String),
}

/// A planted substitution rule: when a review of a recipe containing
/// `original` suggests a substitution, it names `replacement` with this
/// probability (otherwise a uniformly random other ingredient).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSubstitution {
    pub original: String,
    pub replacement: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub n_recipes: usize,
    pub n_users: usize,
    pub n_reviews: usize,
    pub n_ingredients: usize,
    pub n_communities: usize,
    /// Probability an ingredient draw stays within the recipe's home
    /// community; the rest are uniform over the whole universe.
    pub community_cohesion: f64,
    #[serde(default)]
    pub planted_substitutions: Vec<PlantedSubstitution>,
    /// Latent rating contribution per ingredient.
    #[serde(default)]
    pub quality_weights: BTreeMap<String, f64>,
    pub seed: u64,
    #[serde(default = "default_ingredients_per_recipe")]
    pub ingredients_per_recipe: (usize, usize),
    /// Fraction of reviews whose text contains a modification sentence.
    #[serde(default = "default_modification_fraction")]
    pub modification_fraction: f64,
    /// Among modification reviews, the share that are substitutions.
    #[serde(default = "default_substitute_share")]
    pub substitute_share: f64,
    /// Fraction of recipes carrying a region label.
    #[serde(default = "default_region_fraction")]
    pub region_fraction: f64,
    /// Standard deviation of the Gaussian rating noise.
    #[serde(default = "default_rating_noise")]
    pub rating_noise: f64,
    /// Standard deviation of a per-recipe quality residual (execution
    /// quality beyond the ingredient list); part of the latent-score noise,
    /// drawn once per recipe and reflected in its nutrition profile.
    #[serde(default = "default_recipe_noise")]
    pub recipe_noise: f64,
    #[serde(default = "default_base_rating")]
    pub base_rating: f64,
    /// Number of consecutive recipes per rating pod.
    #[serde(default = "default_pod_size")]
    pub pod_size: usize,
}

fn default_ingredients_per_recipe() -> (usize, usize) {
    (5, 10)
}
fn default_modification_fraction() -> f64 {
    0.6
}
fn default_substitute_share() -> f64 {
    0.35
}
fn default_region_fraction() -> f64 {
    0.3
}
fn default_rating_noise() -> f64 {
    0.7
}
fn default_recipe_noise() -> f64 {
    0.25
}
fn default_base_rating() -> f64 {
    3.5
}
fn default_pod_size() -> usize {
    40
}

/// One event the generator wrote into a review text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedEvent {
    pub review_id: usize,
    pub recipe_id: String,
    pub kind: ModificationKind,
    pub ingredient_a: String,
    pub ingredient_b: Option<String>,
}

/// Bookkeeping for oracle tests: what was planted where.
#[derive(Debug, Clone, Default)]
pub struct SyntheticLedger {
    pub events: Vec<PlantedEvent>,
    /// Number of reviews that carry a modification sentence.
    pub modified_reviews: usize,
}

const INGREDIENT_BANK: [&str; 121] = [
    "salt", "pepper", "butter", "sugar", "flour", "olive oil", "garlic", "onion", "egg", "water",
    "milk", "brown sugar", "vanilla extract", "vanilla", "baking powder", "baking soda",
    "cinnamon", "nutmeg", "ginger", "cumin", "paprika", "chili powder", "oregano", "basil",
    "thyme", "rosemary", "parsley", "cilantro", "dill", "bay leaves", "soy sauce",
    "worcestershire sauce", "lemon juice", "lime juice", "orange juice", "vinegar",
    "apple cider vinegar", "honey", "maple syrup", "molasses", "cornstarch", "cocoa powder",
    "chocolate chips", "walnuts", "pecans", "almonds", "peanut butter", "raisins", "oats",
    "cornmeal", "bread crumbs", "mayonnaise", "mustard", "ketchup", "tomato sauce",
    "tomato paste", "tomatoes", "green pepper", "red pepper", "celery", "carrots", "potatoes",
    "sweet potatoes", "mushrooms", "spinach", "broccoli", "zucchini", "corn", "peas",
    "green beans", "black beans", "kidney beans", "chickpeas", "rice", "pasta", "noodles",
    "chicken breast", "ground beef", "ground turkey", "bacon", "ham", "sausage", "pork chops",
    "salmon", "shrimp", "tuna", "cheddar cheese", "sharp cheddar cheese", "mozzarella cheese",
    "parmesan cheese", "cream cheese", "sour cream", "heavy cream", "yogurt", "buttermilk",
    "evaporated milk", "coconut milk", "chicken broth", "beef broth", "vegetable broth",
    "white wine", "red wine", "splenda", "margarine", "shortening", "vegetable oil",
    "canola oil", "sesame oil", "coconut oil", "applesauce", "bananas", "apples", "lemons",
    "limes", "strawberries", "blueberries", "cranberries", "pineapple", "peaches",
    "almond extract", "cream of tartar",
];

const LINE_TEMPLATES: [&str; 8] = [
    "{name}",
    "2 cups {name}",
    "1 cup {name}",
    "1/2 teaspoon {name}",
    "3 tablespoons {name}, divided",
    "1 (8 ounce) package {name}",
    "1 pound {name}",
    "1 cup chopped {name}",
];

const DISTRACTORS: [&str; 6] = [
    "Great recipe.",
    "My family loved it.",
    "Will make this again.",
    "Perfect as written.",
    "Came out wonderful.",
    "Thanks for sharing.",
];

const METHOD_POOL: [&str; 10] = [
    "bake", "boil", "simmer", "fry", "grill", "steam", "roast", "marinate", "chop", "whisk",
];

impl SyntheticConfig {
    fn validate(&self) -> Result<(), SyntheticError> {
        let positive = [
            ("n_recipes", self.n_recipes),
            ("n_users", self.n_users),
            ("n_reviews", self.n_reviews),
            ("n_ingredients", self.n_ingredients),
            ("n_communities", self.n_communities),
            ("pod_size", self.pod_size),
        ];
        for (name, value) in positive {
            if value == 0 {
                return Err(SyntheticError::Invalid(format!("{name} must be positive")));
            }
        }
        if !(self.community_cohesion > 0.0 && self.community_cohesion <= 1.0) {
            return Err(SyntheticError::Invalid(
                "community_cohesion must be in (0, 1]".into(),
            ));
        }
        for (name, value) in [
            ("modification_fraction", self.modification_fraction),
            ("substitute_share", self.substitute_share),
            ("region_fraction", self.region_fraction),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SyntheticError::Invalid(format!("{name} must be in [0, 1]")));
            }
        }
        for planted in &self.planted_substitutions {
            if !(0.0..=1.0).contains(&planted.probability) {
                return Err(SyntheticError::Invalid(format!(
                    "substitution {} -> {} probability must be in [0, 1]",
                    planted.original, planted.replacement
                )));
            }
            if planted.original == planted.replacement {
                return Err(SyntheticError::Invalid(format!(
                    "substitution {} -> itself",
                    planted.original
                )));
            }
        }
        let (lo, hi) = self.ingredients_per_recipe;
        if lo == 0 || lo > hi {
            return Err(SyntheticError::Invalid(
                "ingredients_per_recipe must be a non-empty range".into(),
            ));
        }
        if hi > self.n_ingredients {
            return Err(SyntheticError::Invalid(
                "ingredients_per_recipe exceeds n_ingredients".into(),
            ));
        }
        if self.rating_noise < 0.0 {
            return Err(SyntheticError::Invalid("rating_noise must be >= 0".into()));
        }
        if self.mentioned_names().len() > self.n_ingredients {
            return Err(SyntheticError::Invalid(
                "more names mentioned in substitutions/weights than n_ingredients".into(),
            ));
        }
        Ok(())
    }

    fn mentioned_names(&self) -> BTreeSet<String> {
        let mut names: BTreeSet<String> = BTreeSet::new();
        for planted in &self.planted_substitutions {
            names.insert(planted.original.clone());
            names.insert(planted.replacement.clone());
        }
        names.extend(self.quality_weights.keys().cloned());
        names
    }

    /// The ingredient universe: names mentioned in the config (sorted),
    /// padded from the built-in bank, then numbered fillers.
    pub fn ingredient_universe(&self) -> Vec<String> {
        let mentioned = self.mentioned_names();
        let mut names: Vec<String> = mentioned.iter().cloned().collect();
        for bank in INGREDIENT_BANK {
            if names.len() >= self.n_ingredients {
                break;
            }
            if !mentioned.contains(bank) {
                names.push(bank.to_string());
            }
        }
        let mut filler = 0usize;
        while names.len() < self.n_ingredients {
            let candidate = format!("spice blend {filler:03}");
            if !mentioned.contains(&candidate) {
                names.push(candidate);
            }
            filler += 1;
        }
        names
    }

    /// Community of the ingredient at `index` in the universe: contiguous
    /// blocks of equal size.
    pub fn community_of(&self, index: usize) -> usize {
        index * self.n_communities / self.n_ingredients
    }

    /// The bundled demonstration corpus: 5,000 recipes, 50,000 reviews,
    /// four ingredient communities with alternating base quality plus a
    /// within-community quality ramp, and substitutions planted from the
    /// low end of each ramp toward the high end (the bigger the quality
    /// gap, the likelier the substitution).
    pub fn demo() -> SyntheticConfig {
        let mut config = SyntheticConfig {
            n_recipes: 5000,
            n_users: 1250,
            n_reviews: 50_000,
            n_ingredients: 120,
            n_communities: 4,
            community_cohesion: 0.9,
            planted_substitutions: Vec::new(),
            quality_weights: BTreeMap::new(),
            seed: 42,
            ingredients_per_recipe: (5, 10),
            modification_fraction: 0.6,
            substitute_share: 0.35,
            region_fraction: 0.3,
            rating_noise: 0.7,
            recipe_noise: 0.3,
            base_rating: 3.3,
            pod_size: 40,
        };
        // Once every name carries a weight, the universe is the sorted name
        // list; assign quality on that final order.
        let mut names = config.ingredient_universe();
        names.sort();
        const COMMUNITY_QUALITY: [f64; 4] = [0.14, -0.14, 0.2, -0.2];
        const RAMP: f64 = 0.06;
        let block = config.n_ingredients / config.n_communities;
        for (i, name) in names.iter().enumerate() {
            let community = i * config.n_communities / config.n_ingredients;
            let position = (i - community * block) as f64;
            let ramp = RAMP * (2.0 * position / (block as f64 - 1.0) - 1.0);
            config
                .quality_weights
                .insert(name.clone(), COMMUNITY_QUALITY[community] + ramp);
        }
        // Within each community, users substitute the ramp's low end with
        // its high end; wider gaps get higher probabilities.
        for community in 0..config.n_communities {
            let start = community * block;
            for (slot, &probability) in [0.9, 0.7].iter().enumerate() {
                config.planted_substitutions.push(PlantedSubstitution {
                    original: names[start + slot].clone(),
                    replacement: names[start + block - 1 - slot].clone(),
                    probability,
                });
            }
        }
        config
    }
}

/// Generate a corpus; see [`generate_synthetic_with_ledger`] for the
/// planted-event bookkeeping.
pub fn generate_synthetic(config: &SyntheticConfig) -> Result<Corpus, SyntheticError> {
    generate_synthetic_with_ledger(config).map(|(corpus, _)| corpus)
}

/// Generate a corpus plus the ledger of planted modification events.
pub fn generate_synthetic_with_ledger(
    config: &SyntheticConfig,
) -> Result<(Corpus, SyntheticLedger), SyntheticError> {
    config.validate()?;
    let universe = config.ingredient_universe();
    let communities: Vec<Vec<usize>> = {
        let mut groups = vec![Vec::new(); config.n_communities];
        for i in 0..universe.len() {
            groups[config.community_of(i)].push(i);
        }
        groups
    };

    let drafts = generate_recipes(config, &universe, &communities);
    let (reviews, ledger) = generate_reviews(config, &universe, &drafts);

    let recipes = drafts.into_iter().map(|d| d.recipe).collect();
    let corpus = Corpus::new(recipes, reviews).map_err(|e| {
        SyntheticError::Invalid(format!("generator produced an invalid corpus: {e}"))
    })?;
    Ok((corpus, ledger))
}

struct RecipeDraft {
    recipe: Recipe,
    ingredients: Vec<usize>,
    /// Ingredient-driven quality plus the per-recipe residual.
    latent_quality: f64,
}

fn generate_recipes(
    config: &SyntheticConfig,
    universe: &[String],
    communities: &[Vec<usize>],
) -> Vec<RecipeDraft> {
    let mut rng = substream(config.seed, "corpus.recipes");
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let n_pods = config.n_recipes.div_ceil(config.pod_size);
    let mut drafts: Vec<RecipeDraft> = Vec::with_capacity(config.n_recipes);

    for r in 0..config.n_recipes {
        let pod = r / config.pod_size;
        let home = pod % config.n_communities;
        let (lo, hi) = config.ingredients_per_recipe;
        let k = rng.random_range(lo..=hi);
        let mut picked: BTreeSet<usize> = BTreeSet::new();
        let mut attempts = 0usize;
        while picked.len() < k && attempts < 50 * k {
            attempts += 1;
            let ingredient = if rng.random::<f64>() < config.community_cohesion {
                communities[home][rng.random_range(0..communities[home].len())]
            } else {
                rng.random_range(0..universe.len())
            };
            picked.insert(ingredient);
        }
        let ingredients: Vec<usize> = picked.into_iter().collect();

        let mut lines = Vec::with_capacity(ingredients.len());
        for &ingredient in &ingredients {
            let template = LINE_TEMPLATES[rng.random_range(0..LINE_TEMPLATES.len())];
            lines.push(template.replace("{name}", &universe[ingredient]));
        }

        let region = if rng.random::<f64>() < config.region_fraction {
            Some(Region::ALL[rng.random_range(0..Region::ALL.len())])
        } else {
            None
        };
        let directions = generate_directions(&mut rng, region);

        let ingredient_quality: f64 = ingredients
            .iter()
            .filter_map(|&i| config.quality_weights.get(&universe[i]))
            .sum();
        let latent_quality = ingredient_quality + config.recipe_noise * normal.sample(&mut rng);

        // Nutrition reflects the full latent quality (carbs and sugar fall
        // as quality rises), so the nutrition feature set sees a slice of
        // signal the ingredient networks cannot.
        let mut nutrition = BTreeMap::new();
        let noisy = |rng: &mut rand_chacha::ChaCha8Rng, base: f64, spread: f64| {
            (base + spread * normal.sample(rng)).max(0.0)
        };
        nutrition.insert("calories".into(), noisy(&mut rng, 320.0, 80.0));
        nutrition.insert(
            "carbohydrates".into(),
            noisy(&mut rng, 40.0 - 8.0 * latent_quality, 6.0),
        );
        nutrition.insert(
            "sugar".into(),
            noisy(&mut rng, 18.0 - 5.0 * latent_quality, 4.0),
        );
        nutrition.insert("fat".into(), noisy(&mut rng, 14.0, 5.0));
        nutrition.insert("protein".into(), noisy(&mut rng, 12.0, 5.0));
        nutrition.insert("sodium".into(), noisy(&mut rng, 480.0, 150.0));
        nutrition.insert("cholesterol".into(), noisy(&mut rng, 40.0, 18.0));
        nutrition.insert("fiber".into(), noisy(&mut rng, 3.0, 1.5));

        let recipe = Recipe {
            id: format!("r{r:05}"),
            title: format!("synthetic dish {r} (pod {pod} of {n_pods})"),
            ingredient_lines: lines,
            directions,
            nutrition,
            // Coarse 5-minute steps, as recipe sites list them.
            prep_minutes: 5 * rng.random_range(1..=9),
            cook_minutes: 5 * rng.random_range(2..=18),
            servings: rng.random_range(2..=10),
            region,
        };
        drafts.push(RecipeDraft {
            recipe,
            ingredients,
            latent_quality,
        });
    }
    drafts
}

fn generate_directions(rng: &mut rand_chacha::ChaCha8Rng, region: Option<Region>) -> Vec<String> {
    // Regions prefer certain methods, echoing regional cooking-style skews.
    let preferred: &[&str] = match region {
        Some(Region::Mountain) => &["grill", "roast"],
        Some(Region::Midwest) => &["bake", "boil"],
        Some(Region::Northeast) => &["fry", "bake"],
        Some(Region::South) => &["boil", "fry", "simmer"],
        Some(Region::WestCoast) => &["grill", "marinate"],
        None => &[],
    };
    let n_steps = rng.random_range(1..=3);
    let mut steps = Vec::with_capacity(n_steps);
    for _ in 0..n_steps {
        let method = if !preferred.is_empty() && rng.random::<f64>() < 0.6 {
            preferred[rng.random_range(0..preferred.len())]
        } else {
            METHOD_POOL[rng.random_range(0..METHOD_POOL.len())]
        };
        let mut sentence: Vec<char> = format!("{method} until done, then serve.").chars().collect();
        sentence[0] = sentence[0].to_ascii_uppercase();
        steps.push(sentence.into_iter().collect());
    }
    steps
}

fn generate_reviews(
    config: &SyntheticConfig,
    universe: &[String],
    drafts: &[RecipeDraft],
) -> (Vec<Review>, SyntheticLedger) {
    let mut rng = substream(config.seed, "corpus.reviews");
    let normal = Normal::new(0.0, 1.0).expect("unit normal");

    let name_to_index: BTreeMap<&str, usize> = universe
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();

    let n_pods = config.n_recipes.div_ceil(config.pod_size);
    // Per-user shuffled tour of their pod's recipes.
    let mut schedules: Vec<Vec<usize>> = Vec::with_capacity(config.n_users);
    for user in 0..config.n_users {
        let pod = user % n_pods;
        let start = pod * config.pod_size;
        let end = ((pod + 1) * config.pod_size).min(config.n_recipes);
        let mut tour: Vec<usize> = (start..end).collect();
        tour.shuffle(&mut rng);
        schedules.push(tour);
    }
    let mut positions = vec![0usize; config.n_users];

    let planted_by_source: BTreeMap<usize, Vec<&PlantedSubstitution>> = {
        let mut map: BTreeMap<usize, Vec<&PlantedSubstitution>> = BTreeMap::new();
        for planted in &config.planted_substitutions {
            if let Some(&i) = name_to_index.get(planted.original.as_str()) {
                map.entry(i).or_default().push(planted);
            }
        }
        map
    };

    let mut reviews = Vec::with_capacity(config.n_reviews);
    let mut ledger = SyntheticLedger::default();

    for review_id in 0..config.n_reviews {
        let user = review_id % config.n_users;
        let tour = &schedules[user];
        let recipe_idx = tour[positions[user] % tour.len()];
        positions[user] += 1;
        let recipe = &drafts[recipe_idx].recipe;
        let ingredients = &drafts[recipe_idx].ingredients;

        let latent = config.base_rating
            + drafts[recipe_idx].latent_quality
            + config.rating_noise * normal.sample(&mut rng);
        let rating = latent.clamp(1.0, 5.0).round() as u8;

        let mut text = String::new();
        if rng.random::<f64>() < config.modification_fraction && !ingredients.is_empty() {
            let sentence = modification_sentence(
                config,
                universe,
                recipe,
                ingredients,
                &planted_by_source,
                review_id,
                &mut ledger,
                &mut rng,
            );
            text.push_str(&sentence);
            ledger.modified_reviews += 1;
            if rng.random::<f64>() < 0.5 {
                text.push(' ');
                text.push_str(DISTRACTORS[rng.random_range(0..DISTRACTORS.len())]);
            }
        } else {
            text.push_str(DISTRACTORS[rng.random_range(0..DISTRACTORS.len())]);
            if rng.random::<f64>() < 0.3 {
                text.push(' ');
                text.push_str(DISTRACTORS[rng.random_range(0..DISTRACTORS.len())]);
            }
        }

        reviews.push(Review {
            recipe_id: recipe.id.clone(),
            user_id: format!("u{user:05}"),
            rating,
            text,
            helpful_votes: rng.random_range(0..20),
        });
    }

    (reviews, ledger)
}

/// True when `line` was rendered from a template over `name`.
#[cfg(test)]
fn line_names_ingredient(line: &str, name: &str) -> bool {
    LINE_TEMPLATES
        .iter()
        .any(|template| template.replace("{name}", name) == line)
}

#[allow(clippy::too_many_arguments)]
fn modification_sentence(
    config: &SyntheticConfig,
    universe: &[String],
    recipe: &Recipe,
    ingredients: &[usize],
    planted_by_source: &BTreeMap<usize, Vec<&PlantedSubstitution>>,
    review_id: usize,
    ledger: &mut SyntheticLedger,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> String {
    let mut kind = if rng.random::<f64>() < config.substitute_share {
        ModificationKind::Substitute
    } else {
        match rng.random_range(0..4) {
            0 => ModificationKind::AdjustUp,
            1 => ModificationKind::AdjustDown,
            2 => ModificationKind::Delete,
            _ => ModificationKind::Add,
        }
    };

    if kind == ModificationKind::Substitute {
        let sources: Vec<usize> = if config.planted_substitutions.is_empty() {
            ingredients.to_vec()
        } else {
            ingredients
                .iter()
                .copied()
                .filter(|i| planted_by_source.contains_key(i))
                .collect()
        };
        if sources.is_empty() {
            // No planted source in this recipe; fall back to an adjustment.
            kind = ModificationKind::AdjustUp;
        } else {
            let a = sources[rng.random_range(0..sources.len())];
            let b = if let Some(planted) = planted_by_source.get(&a) {
                let rule = planted[rng.random_range(0..planted.len())];
                if rng.random::<f64>() < rule.probability {
                    universe
                        .iter()
                        .position(|n| *n == rule.replacement)
                        .expect("validated replacement name")
                } else {
                    random_other(universe.len(), a, rng)
                }
            } else {
                random_other(universe.len(), a, rng)
            };
            let a_name = &universe[a];
            let b_name = &universe[b];
            let sentence = match rng.random_range(0..3) {
                0 => format!("I used {b_name} instead of {a_name}."),
                1 => format!("replaced the {a_name} with {b_name}."),
                _ => format!("I substituted {b_name} for the {a_name}."),
            };
            ledger.events.push(PlantedEvent {
                review_id,
                recipe_id: recipe.id.clone(),
                kind: ModificationKind::Substitute,
                ingredient_a: a_name.clone(),
                ingredient_b: Some(b_name.clone()),
            });
            return sentence;
        }
    }

    match kind {
        ModificationKind::AdjustUp => {
            let a = &universe[ingredients[rng.random_range(0..ingredients.len())]];
            let sentence = match rng.random_range(0..3) {
                0 => format!("I doubled the {a}."),
                1 => format!("I used more {a} than called for."),
                _ => format!("added extra {a}!"),
            };
            ledger.events.push(PlantedEvent {
                review_id,
                recipe_id: recipe.id.clone(),
                kind: ModificationKind::AdjustUp,
                ingredient_a: a.clone(),
                ingredient_b: None,
            });
            sentence
        }
        ModificationKind::AdjustDown => {
            let a = &universe[ingredients[rng.random_range(0..ingredients.len())]];
            let sentence = match rng.random_range(0..3) {
                0 => format!("I cut the {a} in half."),
                1 => format!("used less {a}."),
                _ => format!("I reduced the {a} a bit."),
            };
            ledger.events.push(PlantedEvent {
                review_id,
                recipe_id: recipe.id.clone(),
                kind: ModificationKind::AdjustDown,
                ingredient_a: a.clone(),
                ingredient_b: None,
            });
            sentence
        }
        ModificationKind::Delete => {
            let a = &universe[ingredients[rng.random_range(0..ingredients.len())]];
            let sentence = match rng.random_range(0..3) {
                0 => format!("I didn't have {a}."),
                1 => format!("left out the {a}."),
                _ => format!("omitted the {a}."),
            };
            ledger.events.push(PlantedEvent {
                review_id,
                recipe_id: recipe.id.clone(),
                kind: ModificationKind::Delete,
                ingredient_a: a.clone(),
                ingredient_b: None,
            });
            sentence
        }
        ModificationKind::Add => {
            let mut candidate = rng.random_range(0..universe.len());
            let mut attempts = 0;
            while ingredients.contains(&candidate) && attempts < 200 {
                candidate = rng.random_range(0..universe.len());
                attempts += 1;
            }
            if ingredients.contains(&candidate) {
                // Recipe spans the whole universe; nothing addable.
                return DISTRACTORS[0].to_string();
            }
            let x = &universe[candidate];
            let sentence = match rng.random_range(0..2) {
                0 => format!("I added {x} on top."),
                _ => format!("added {x}."),
            };
            ledger.events.push(PlantedEvent {
                review_id,
                recipe_id: recipe.id.clone(),
                kind: ModificationKind::Add,
                ingredient_a: x.clone(),
                ingredient_b: None,
            });
            sentence
        }
        ModificationKind::Substitute => unreachable!("handled above"),
    }
}

fn random_other(n: usize, not: usize, rng: &mut rand_chacha::ChaCha8Rng) -> usize {
    loop {
        let candidate = rng.random_range(0..n);
        if candidate != not || n == 1 {
            return candidate;
        }
    }
}
