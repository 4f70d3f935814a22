//! Factorize an ingredient network with the truncated SVD and project
//! recipes into the low-dimensional community space.
//!
//! Run with: `cargo run --example svd_features`

use std::collections::BTreeMap;

use simmer::corpus::{generate_synthetic, SyntheticConfig};
use simmer::features::{svd_lowrank, SparseMatrix};
use simmer::ingredients::{ingredient_vector, Vocabulary};
use simmer::network::build_complement;
use simmer::rules::RuleSet;

fn main() {
    let config = SyntheticConfig {
        n_recipes: 500,
        n_users: 100,
        n_reviews: 1000,
        n_ingredients: 30,
        n_communities: 3,
        community_cohesion: 0.95,
        planted_substitutions: vec![],
        quality_weights: BTreeMap::new(),
        seed: 5,
        ingredients_per_recipe: (4, 7),
        modification_fraction: 0.3,
        substitute_share: 0.3,
        region_fraction: 0.0,
        rating_noise: 0.7,
        recipe_noise: 0.2,
        base_rating: 3.5,
        pod_size: 25,
    };
    let corpus = generate_synthetic(&config).expect("valid config");
    let rules = RuleSet::builtin();
    let vocab = Vocabulary::build(&corpus, 1000, &rules).expect("non-empty corpus");
    let complement = build_complement(&corpus, &vocab, &rules, 0.0, 3);

    let n = complement.node_count();
    let matrix = SparseMatrix {
        rows: n,
        cols: n,
        triplets: complement.edges().collect(),
    };
    let k = 6;
    let basis = svd_lowrank(&matrix, k, 1e-8, config.seed).expect("non-zero matrix");

    println!("top-{} singular values of the complement matrix:", basis.k);
    for (rank, sigma) in basis.singular_values.iter().enumerate() {
        println!("  sigma_{rank} = {sigma:.4}");
    }
    println!(
        "reconstruction error |W - W_k|_F = {:.4} (|W|_F = {:.4})",
        basis.reconstruction_error(&matrix).sqrt(),
        matrix.frobenius_norm()
    );

    println!("\ncommunity features Sigma^-1 V^T f for three recipes:");
    for recipe in corpus.recipes().iter().take(3) {
        let f = ingredient_vector(recipe, &vocab, &rules);
        let features = basis.community_features(&f).expect("dimensions match");
        let rendered: Vec<String> = features.iter().map(|v| format!("{v:+.3}")).collect();
        println!("  {}: [{}]", recipe.id, rendered.join(", "));
    }

    // Recipes from the same planted community land near each other in the
    // projected space; eyeball it via the leading coordinates.
    println!("\nleading projection coordinate by home pod:");
    for recipe in corpus.recipes().iter().step_by(100) {
        let f = ingredient_vector(recipe, &vocab, &rules);
        let features = basis.community_features(&f).expect("dimensions match");
        println!("  {} -> {:+.3}", recipe.title, features[0]);
    }
}
