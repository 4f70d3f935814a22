//! Generate the labeled recipe-pair dataset and the directed-PMI
//! preference network, including the two-recipe worked example where
//! {beef, ketchup, cheese} outrates {beef, pickles}.
//!
//! Run with: `cargo run --example preference_pairs`

use std::collections::BTreeSet;

use simmer::corpus::{Corpus, Recipe, Review};
use simmer::ingredients::{recipe_vocab_indices, Vocabulary};
use simmer::network::{build_preference, PresenceCounts};
use simmer::pairs::{generate_pairs, idf_cosine, IdfTable, PairParams};
use simmer::rules::RuleSet;

fn main() {
    let rules = RuleSet::builtin();

    // Two similar recipes plus filler so ten raters qualify as active.
    let mut recipes = vec![
        recipe("burger_deluxe", &["ground beef", "ketchup", "cheddar cheese"]),
        recipe("burger_plain", &["ground beef", "pickles"]),
    ];
    let mut reviews = Vec::new();
    for user in 0..10 {
        let user_id = format!("u{user}");
        reviews.push(review("burger_deluxe", &user_id, 5));
        reviews.push(review("burger_plain", &user_id, 3));
        for filler in 0..8 {
            let id = format!("filler_{user}_{filler}");
            recipes.push(recipe(&id, &[&format!("pantry item {user} {filler}")]));
            reviews.push(review(&id, &user_id, 4));
        }
    }
    let corpus = Corpus::new(recipes, reviews).expect("valid corpus");
    let vocab = Vocabulary::build(&corpus, 1000, &rules).expect("non-empty corpus");

    let sets: Vec<BTreeSet<usize>> = corpus
        .recipes()
        .iter()
        .map(|r| recipe_vocab_indices(r, &vocab, &rules))
        .collect();
    let idf = IdfTable::from_corpus(&corpus, &vocab, &rules);
    println!(
        "similarity(burger_deluxe, burger_plain) = {:.3}",
        idf_cosine(&sets[0], &sets[1], &idf)
    );

    let pairs = generate_pairs(&corpus, &vocab, &rules, &PairParams::default());
    println!("\n== qualifying pairs ==");
    for pair in &pairs {
        println!(
            "  {} > {}  (similarity {:.3}, {} common raters, majority {:.2})",
            pair.recipe_hi, pair.recipe_lo, pair.similarity, pair.n_common_raters,
            pair.majority_fraction
        );
    }

    let presence = PresenceCounts::from_corpus(&corpus, &vocab, &rules);
    let ordered: Vec<(usize, usize)> = pairs.iter().map(|p| (p.hi_index, p.lo_index)).collect();
    let preference =
        build_preference(&ordered, &sets, &presence, &vocab).expect("pairs available");

    println!("\n== preference network (directed PMI) ==");
    println!("the losing side's unique ingredients point at the winner's:");
    for (a, b, w) in preference.edges() {
        println!(
            "  {} -> {}  PMI {:.3}",
            preference.node_name(a),
            preference.node_name(b),
            w
        );
    }
}

fn recipe(id: &str, lines: &[&str]) -> Recipe {
    Recipe {
        id: id.into(),
        title: id.into(),
        ingredient_lines: lines.iter().map(|s| s.to_string()).collect(),
        directions: vec!["Grill until done.".into()],
        nutrition: Default::default(),
        prep_minutes: 10,
        cook_minutes: 15,
        servings: 4,
        region: None,
    }
}

fn review(recipe_id: &str, user_id: &str, rating: u8) -> Review {
    Review {
        recipe_id: recipe_id.into(),
        user_id: user_id.into(),
        rating,
        text: String::new(),
        helpful_votes: 0,
    }
}
