//! Ingredient line normalization, the frequency-ranked vocabulary, and
//! cooking-method extraction.
//!
//! Normalization deliberately does the minimum needed to strip quantities,
//! units, and preparation descriptors; near-identical ingredients ("cheddar
//! cheese" vs "sharp cheddar cheese") stay distinct.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::corpus::{Corpus, Recipe};
use crate::rules::{MethodLexicon, RuleSet};

#[derive(Debug, Error, PartialEq)]
pub enum IngredientError {
    #[error("line {0:?} contains no ingredient after stripping")]
    EmptyAfterStripping(String),
    #[error("corpus has no recipes")]
    EmptyCorpus,
}

/// Reduce a freeform ingredient line to a canonical lowercase name.
///
/// Parenthesized content, punctuation, and brand marks are dropped; state
/// and temperature descriptors are removed anywhere; quantity and unit
/// tokens are peeled off the front. What remains is returned verbatim.
pub fn normalize_ingredient_line(line: &str, rules: &RuleSet) -> Result<String, IngredientError> {
    let lowered = fold_unicode(&line.to_lowercase());
    let without_parens = strip_parenthesized(&lowered);
    let cleaned = strip_punctuation(&without_parens);

    let mut tokens: Vec<&str> = cleaned
        .split_whitespace()
        .filter(|t| !rules.descriptors.contains(*t))
        .filter(|t| t.chars().any(|c| c.is_alphanumeric()))
        .collect();

    // Peel quantities and units off the front only, so unit words inside a
    // name ("ground cloves") survive.
    let mut start = 0;
    while start < tokens.len() {
        let token = tokens[start];
        if is_quantity_token(token) || rules.quantities.contains(token) || rules.units.contains(token)
        {
            start += 1;
        } else {
            break;
        }
    }
    tokens.drain(..start);

    // Stripping descriptors can leave a conjunction dangling at an edge
    // ("onion, peeled and quartered" -> "onion and").
    const EDGE_FILLERS: [&str; 6] = ["and", "or", "with", "of", "in", "plus"];
    while tokens.last().is_some_and(|t| EDGE_FILLERS.contains(t)) {
        tokens.pop();
    }
    while tokens.first().is_some_and(|t| EDGE_FILLERS.contains(t)) {
        tokens.remove(0);
    }

    if tokens.is_empty() {
        return Err(IngredientError::EmptyAfterStripping(line.to_string()));
    }
    Ok(tokens.join(" "))
}

/// NFD-decompose, drop combining marks and brand symbols, recompose.
fn fold_unicode(text: &str) -> String {
    text.nfd()
        .filter(|c| !('\u{0300}'..='\u{036f}').contains(c))
        .filter(|c| !matches!(c, '\u{00ae}' | '\u{2122}' | '\u{00a9}'))
        .nfc()
        .collect()
}

fn strip_parenthesized(text: &str) -> String {
    let mut depth = 0usize;
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

fn strip_punctuation(text: &str) -> String {
    text.chars()
        .map(|c| match c {
            ',' | '.' | ';' | ':' | '!' | '?' | '*' | '"' | '\'' | '\u{2019}' | '\u{2018}'
            | '{' | '}' | '%' | '$' | '#' | '@' | '~' | '<' | '>' | '=' | '&' | '+' => ' ',
            _ => c,
        })
        .collect()
}

const UNICODE_FRACTIONS: &str = "\u{00bc}\u{00bd}\u{00be}\u{2150}\u{2151}\u{2152}\u{2153}\u{2154}\u{2155}\u{2156}\u{2157}\u{2158}\u{2159}\u{215a}\u{215b}\u{215c}\u{215d}\u{215e}";

/// Numerals, decimals, fractions (ASCII or unicode), and ranges like `2-3`.
fn is_quantity_token(token: &str) -> bool {
    if token.is_empty() {
        return false;
    }
    let mut has_digit = false;
    for c in token.chars() {
        if c.is_ascii_digit() {
            has_digit = true;
        } else if UNICODE_FRACTIONS.contains(c) {
            has_digit = true;
        } else if !matches!(c, '/' | '.' | '-' | '\u{2013}' | '\u{2014}' | 'x' | '\u{00d7}') {
            return false;
        }
    }
    has_digit
}

/// Frequency-ranked ingredient vocabulary.
///
/// Entries are ordered by the number of distinct recipes containing the
/// ingredient, descending, with ties broken lexicographically ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    entries: Vec<(String, u32)>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Count distinct-recipe frequencies, rank, and keep the top `top_n`.
    pub fn build(corpus: &Corpus, top_n: usize, rules: &RuleSet) -> Result<Vocabulary, IngredientError> {
        if corpus.recipes().is_empty() {
            return Err(IngredientError::EmptyCorpus);
        }
        let mut counts: HashMap<String, u32> = HashMap::new();
        for recipe in corpus.recipes() {
            let mut seen: HashSet<String> = HashSet::new();
            for line in &recipe.ingredient_lines {
                if let Ok(name) = normalize_ingredient_line(line, rules) {
                    seen.insert(name);
                }
            }
            for name in seen {
                *counts.entry(name).or_insert(0) += 1;
            }
        }
        let mut entries: Vec<(String, u32)> = counts.into_iter().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        entries.truncate(top_n);
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, (name, _))| (name.clone(), i))
            .collect();
        Ok(Vocabulary { entries, index })
    }

    /// Build directly from (name, frequency) pairs; used by tests and tools.
    pub fn from_entries(mut entries: Vec<(String, u32)>) -> Vocabulary {
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, (name, _))| (name.clone(), i))
            .collect();
        Vocabulary { entries, index }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, ordinal: usize) -> &str {
        &self.entries[ordinal].0
    }

    pub fn frequency(&self, ordinal: usize) -> u32 {
        self.entries[ordinal].1
    }

    pub fn entries(&self) -> &[(String, u32)] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(name, _)| name.as_str())
    }
}

/// Vocabulary ordinals of a recipe's normalized ingredient lines.
pub fn recipe_vocab_indices(recipe: &Recipe, vocab: &Vocabulary, rules: &RuleSet) -> BTreeSet<usize> {
    let mut set = BTreeSet::new();
    for line in &recipe.ingredient_lines {
        if let Ok(name) = normalize_ingredient_line(line, rules) {
            if let Some(i) = vocab.get(&name) {
                set.insert(i);
            }
        }
    }
    set
}

/// Binary presence vector over the vocabulary for one recipe.
pub fn ingredient_vector(recipe: &Recipe, vocab: &Vocabulary, rules: &RuleSet) -> Vec<f64> {
    let mut vector = vec![0.0; vocab.len()];
    for i in recipe_vocab_indices(recipe, vocab, rules) {
        vector[i] = 1.0;
    }
    vector
}

/// Methods named in the directions: a method is present iff some token
/// stem-matches a lexicon entry (bake / bakes / baked / baking all match
/// "bake").
pub fn extract_methods(directions: &[String], lexicon: &MethodLexicon) -> BTreeSet<String> {
    let stems = lexicon.all_stems();
    let mut found = BTreeSet::new();
    for direction in directions {
        let lowered = fold_unicode(&direction.to_lowercase());
        for token in lowered.split(|c: char| !c.is_alphabetic() && c != '-') {
            if token.is_empty() {
                continue;
            }
            for stem in &stems {
                if stem_matches(token, stem) {
                    found.insert(stem.clone());
                }
            }
        }
    }
    found
}

/// Prefix stem match with two orthographic variants: a final 'e' drops
/// before "ing" (bake -> baking) and a final 'y' becomes 'i' before "ed" or
/// "es" (fry -> fried). No general stemmer; "corn" must not match "core".
pub(crate) fn stem_matches(token: &str, stem: &str) -> bool {
    if token.starts_with(stem) {
        return true;
    }
    if let Some(base) = stem.strip_suffix('e') {
        if let Some(rest) = token.strip_prefix(base) {
            if rest.starts_with("ing") {
                return true;
            }
        }
    }
    if let Some(base) = stem.strip_suffix('y') {
        let altered = format!("{base}i");
        if let Some(rest) = token.strip_prefix(&altered) {
            if rest == "ed" || rest == "es" {
                return true;
            }
        }
    }
    false
}

/// Fraction of ingredient lines whose normalization lands in the vocabulary.
pub fn coverage(corpus: &Corpus, vocab: &Vocabulary, rules: &RuleSet) -> f64 {
    let mut total = 0usize;
    let mut in_vocab = 0usize;
    for recipe in corpus.recipes() {
        for line in &recipe.ingredient_lines {
            total += 1;
            if let Ok(name) = normalize_ingredient_line(line, rules) {
                if vocab.get(&name).is_some() {
                    in_vocab += 1;
                }
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        in_vocab as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::recipe;

    fn rules() -> RuleSet {
        RuleSet::builtin()
    }

    #[test]
    fn canned_brand_line_normalizes() {
        let name = normalize_ingredient_line(
            "1 (28 ounce) can baked beans (such as Bush's Original\u{00ae})",
            &rules(),
        )
        .unwrap();
        assert_eq!(name, "baked beans");
    }

    #[test]
    fn already_canonical_is_fixed_point() {
        assert_eq!(normalize_ingredient_line("salt", &rules()).unwrap(), "salt");
    }

    #[test]
    fn descriptors_removed_but_variety_kept() {
        let name =
            normalize_ingredient_line("2 cups chopped cold sharp cheddar cheese", &rules()).unwrap();
        assert_eq!(name, "sharp cheddar cheese");
    }

    #[test]
    fn unit_word_inside_name_survives() {
        assert_eq!(
            normalize_ingredient_line("1 teaspoon ground cloves", &rules()).unwrap(),
            "ground cloves"
        );
        assert_eq!(
            normalize_ingredient_line("3 cloves garlic", &rules()).unwrap(),
            "garlic"
        );
    }

    #[test]
    fn multi_ingredient_line_stays_single() {
        assert_eq!(
            normalize_ingredient_line("salt and pepper to taste", &rules()).unwrap(),
            "salt and pepper"
        );
    }

    #[test]
    fn accents_fold() {
        assert_eq!(
            normalize_ingredient_line("2 jalape\u{00f1}o peppers", &rules()).unwrap(),
            "jalapeno peppers"
        );
    }

    #[test]
    fn quantity_only_line_is_an_error() {
        assert!(matches!(
            normalize_ingredient_line("2 cups", &rules()),
            Err(IngredientError::EmptyAfterStripping(_))
        ));
    }

    #[test]
    fn normalization_is_idempotent() {
        let rules = rules();
        for line in [
            "1 (28 ounce) can baked beans (such as Bush's Original\u{00ae})",
            "2 cups chopped cold sharp cheddar cheese",
            "1 \u{00bd} cups all-purpose flour",
            "salt and pepper to taste",
            "3 cloves garlic, minced",
        ] {
            let once = normalize_ingredient_line(line, &rules).unwrap();
            let twice = normalize_ingredient_line(&once, &rules).unwrap();
            assert_eq!(once, twice, "not idempotent for {line:?}");
        }
    }

    #[test]
    fn vocabulary_orders_by_frequency() {
        let corpus = Corpus::new(
            vec![
                recipe("a", &["salt", "basil"]),
                recipe("b", &["salt"]),
                recipe("c", &["sugar"]),
            ],
            vec![],
        )
        .unwrap();
        let vocab = Vocabulary::build(&corpus, 1, &rules()).unwrap();
        assert_eq!(vocab.len(), 1);
        assert_eq!(vocab.name(0), "salt");
        assert_eq!(vocab.frequency(0), 2);
    }

    #[test]
    fn vocabulary_breaks_ties_lexicographically() {
        let corpus = Corpus::new(
            vec![
                recipe("a", &["salt", "pepper"]),
                recipe("b", &["salt", "pepper"]),
            ],
            vec![],
        )
        .unwrap();
        let vocab = Vocabulary::build(&corpus, 1, &rules()).unwrap();
        assert_eq!(vocab.name(0), "pepper");
    }

    #[test]
    fn vocabulary_truncation_noop_when_small() {
        let corpus = Corpus::new(
            vec![recipe(
                "a",
                &["salt", "pepper", "basil", "sugar", "flour", "butter", "milk"],
            )],
            vec![],
        )
        .unwrap();
        let vocab = Vocabulary::build(&corpus, 1000, &rules()).unwrap();
        assert_eq!(vocab.len(), 7);
    }

    #[test]
    fn vocabulary_counts_recipes_not_occurrences() {
        // Brute-force recount oracle over normalized lines.
        let corpus = Corpus::new(
            vec![
                recipe("a", &["salt", "1 teaspoon salt"]),
                recipe("b", &["salt"]),
            ],
            vec![],
        )
        .unwrap();
        let vocab = Vocabulary::build(&corpus, 10, &rules()).unwrap();
        let mut oracle: HashMap<String, u32> = HashMap::new();
        for r in corpus.recipes() {
            let names: HashSet<String> = r
                .ingredient_lines
                .iter()
                .filter_map(|l| normalize_ingredient_line(l, &rules()).ok())
                .collect();
            for n in names {
                *oracle.entry(n).or_insert(0) += 1;
            }
        }
        for (name, freq) in vocab.entries() {
            assert_eq!(oracle[name], *freq);
        }
        assert_eq!(vocab.frequency(vocab.get("salt").unwrap()), 2);
    }

    #[test]
    fn ingredient_vector_marks_expected_entries() {
        let vocab = Vocabulary::from_entries(vec![
            ("basil".into(), 5),
            ("butter".into(), 4),
            ("salt".into(), 3),
            ("sharp cheddar cheese".into(), 2),
            ("sugar".into(), 1),
        ]);
        let r = recipe(
            "a",
            &["2 cups chopped sharp cheddar cheese", "1 teaspoon salt", "paprika"],
        );
        let v = ingredient_vector(&r, &vocab, &rules());
        assert_eq!(v, vec![0.0, 0.0, 1.0, 1.0, 0.0]);
        let ones: f64 = v.iter().sum();
        assert!(ones <= r.ingredient_lines.len() as f64);
    }

    #[test]
    fn out_of_vocabulary_recipe_gives_zero_vector() {
        let vocab = Vocabulary::from_entries(vec![("salt".into(), 1)]);
        let r = recipe("a", &["dragon fruit", "starfruit"]);
        assert_eq!(ingredient_vector(&r, &vocab, &rules()), vec![0.0]);
    }

    #[test]
    fn full_vocabulary_recipe_gives_ones() {
        let vocab = Vocabulary::from_entries(vec![("pepper".into(), 1), ("salt".into(), 1)]);
        let r = recipe("a", &["salt", "pepper"]);
        assert_eq!(ingredient_vector(&r, &vocab, &rules()), vec![1.0, 1.0]);
    }

    #[test]
    fn methods_stem_match() {
        let rules = rules();
        let methods = extract_methods(
            &["Bake at 350 degrees, then grill.".into()],
            &rules.methods,
        );
        assert_eq!(
            methods.iter().cloned().collect::<Vec<_>>(),
            vec!["bake", "grill"]
        );
    }

    #[test]
    fn empty_directions_no_methods() {
        assert!(extract_methods(&[], &rules().methods).is_empty());
    }

    #[test]
    fn inflections_match_but_oven_does_not() {
        let methods = extract_methods(
            &["Preheat the oven; baking time 30 minutes".into()],
            &rules().methods,
        );
        assert_eq!(methods.iter().cloned().collect::<Vec<_>>(), vec!["bake"]);
    }

    #[test]
    fn stem_variants_are_narrow() {
        assert!(stem_matches("baking", "bake"));
        assert!(stem_matches("baked", "bake"));
        assert!(stem_matches("fried", "fry"));
        assert!(stem_matches("fries", "fry"));
        assert!(!stem_matches("corn", "core"));
        assert!(!stem_matches("friend", "fry"));
        assert!(!stem_matches("bring", "brine"));
    }
}
