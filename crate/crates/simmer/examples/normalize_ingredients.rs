//! Normalize raw ingredient lines, build a frequency-ranked vocabulary,
//! and extract cooking methods from directions.
//!
//! Run with: `cargo run --example normalize_ingredients`

use simmer::corpus::{Corpus, Recipe};
use simmer::ingredients::{extract_methods, ingredient_vector, normalize_ingredient_line, Vocabulary};
use simmer::rules::RuleSet;

fn main() {
    let rules = RuleSet::builtin();

    println!("== line normalization ==");
    let lines = [
        "1 (28 ounce) can baked beans (such as Bush's Original\u{00ae})",
        "2 cups chopped cold sharp cheddar cheese",
        "3 cloves garlic, minced",
        "1 teaspoon ground cloves",
        "salt and pepper to taste",
        "1 \u{00bd} cups all-purpose flour",
    ];
    for line in lines {
        match normalize_ingredient_line(line, &rules) {
            Ok(name) => println!("  {line:<55} -> {name}"),
            Err(e) => println!("  {line:<55} -> error: {e}"),
        }
    }

    let recipes = vec![
        recipe("r1", &["1 cup sugar", "2 eggs", "1 teaspoon vanilla extract"], "Bake at 350 degrees."),
        recipe("r2", &["2 cups sugar", "1/2 cup butter"], "Cream the butter, then bake."),
        recipe("r3", &["1 pound butter", "salt"], "Simmer gently, stirring often."),
    ];
    let corpus = Corpus::new(recipes, vec![]).expect("valid corpus");

    println!("\n== vocabulary (recipe frequency, ties alphabetical) ==");
    let vocab = Vocabulary::build(&corpus, 1000, &rules).expect("non-empty corpus");
    for (name, frequency) in vocab.entries() {
        println!("  {frequency}  {name}");
    }

    println!("\n== ingredient presence vector for r2 ==");
    let r2 = corpus.recipe("r2").unwrap();
    let vector = ingredient_vector(r2, &vocab, &rules);
    for (i, value) in vector.iter().enumerate() {
        if *value > 0.0 {
            println!("  [{i}] {}", vocab.name(i));
        }
    }

    println!("\n== methods from directions ==");
    for recipe in corpus.recipes() {
        let methods = extract_methods(&recipe.directions, &rules.methods);
        println!("  {}: {:?}", recipe.id, methods);
    }
}

fn recipe(id: &str, lines: &[&str], direction: &str) -> Recipe {
    Recipe {
        id: id.into(),
        title: id.into(),
        ingredient_lines: lines.iter().map(|s| s.to_string()).collect(),
        directions: vec![direction.into()],
        nutrition: Default::default(),
        prep_minutes: 10,
        cook_minutes: 20,
        servings: 4,
        region: None,
    }
}
