//! Extract modification events (adjustments, deletions, additions,
//! substitutions) from review text.
//!
//! Run with: `cargo run --example mine_reviews`

use simmer::corpus::{Corpus, Recipe, Review};
use simmer::ingredients::Vocabulary;
use simmer::mining::{
    detect_modification, extract_corpus_events, modification_stats, MinerParams,
};
use simmer::rules::RuleSet;

fn main() {
    let rules = RuleSet::builtin();

    let recipe = Recipe {
        id: "meatloaf".into(),
        title: "weeknight meatloaf".into(),
        ingredient_lines: vec![
            "1 pound ground beef".into(),
            "1/2 cup ketchup".into(),
            "1 teaspoon vanilla extract".into(),
            "2 cups bread crumbs".into(),
            "1 onion, chopped".into(),
        ],
        directions: vec!["Bake for an hour.".into()],
        nutrition: Default::default(),
        prep_minutes: 15,
        cook_minutes: 60,
        servings: 6,
        region: None,
    };
    let reviews = vec![
        review("meatloaf", "u1", 5, "Wonderful. I doubled the onion, added extra ketchup!"),
        review("meatloaf", "u2", 4, "Used ground turkey instead of beef, came out great."),
        review("meatloaf", "u3", 4, "didn't have vanilla, left it out. Still perfect."),
        review("meatloaf", "u4", 3, "I added mushrooms on top. Cut the ketchup in half."),
        review("meatloaf", "u5", 5, "Perfect as written."),
    ];
    let corpus = Corpus::new(vec![recipe], reviews).expect("valid corpus");

    // The vocabulary would normally come from the whole corpus; seed it
    // with the names reviewers mention so matches resolve.
    let vocab = Vocabulary::from_entries(
        [
            "beef",
            "ground beef",
            "ground turkey",
            "ketchup",
            "vanilla extract",
            "bread crumbs",
            "onion",
            "mushrooms",
        ]
        .iter()
        .map(|n| (n.to_string(), 1))
        .collect(),
    );

    println!("== modification signals ==");
    for (i, review) in corpus.reviews().iter().enumerate() {
        let flagged = detect_modification(&review.text, &rules.signals);
        println!("  review {i}: flagged={flagged}  {:?}", review.text);
    }

    println!("\n== extracted events ==");
    let events = extract_corpus_events(&corpus, &vocab, &rules, &MinerParams::default());
    for event in &events {
        match &event.ingredient_b {
            Some(b) => println!(
                "  review {} {:<11} {} -> {}  ({:?})",
                event.review_id,
                event.kind.name(),
                event.ingredient_a,
                b,
                event.clause
            ),
            None => println!(
                "  review {} {:<11} {}  ({:?})",
                event.review_id,
                event.kind.name(),
                event.ingredient_a,
                event.clause
            ),
        }
    }

    println!("\n== per-ingredient counts ==");
    let stats = modification_stats(&events, &vocab);
    for (name, counts) in &stats.per_ingredient {
        if counts.additions + counts.deletions + counts.increases + counts.decreases > 0 {
            println!(
                "  {name}: +{} -{} up{} down{}",
                counts.additions, counts.deletions, counts.increases, counts.decreases
            );
        }
    }
}

fn review(recipe_id: &str, user_id: &str, rating: u8, text: &str) -> Review {
    Review {
        recipe_id: recipe_id.into(),
        user_id: user_id.into(),
        rating,
        text: text.into(),
        helpful_votes: 0,
    }
}
