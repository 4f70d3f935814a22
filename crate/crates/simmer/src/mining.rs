//! Modification-event mining from review text: quantity adjustments,
//! deletions, additions, and substitutions, plus the per-ingredient
//! modification statistics and their correlations.
//!
//! All extraction is pattern-based per clause. Negated triggers ("didn't
//! add") are not treated specially; this mirrors the simplicity of the
//! heuristics and is a documented limitation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::ingredients::{recipe_vocab_indices, Vocabulary};
use crate::numeric::pearson;
use crate::rules::{RuleSet, SlotRole, SubstitutePattern};

#[derive(Debug, Error)]
pub enum MiningError {
    #[error("n-gram length must be at least 1")]
    BadNgramLength,
    #[error("need at least 3 ingredients with nonzero recipe frequency, found {0}")]
    TooFewIngredients(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModificationKind {
    AdjustUp,
    AdjustDown,
    Delete,
    Add,
    Substitute,
}

impl ModificationKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModificationKind::AdjustUp => "adjust_up",
            ModificationKind::AdjustDown => "adjust_down",
            ModificationKind::Delete => "delete",
            ModificationKind::Add => "add",
            ModificationKind::Substitute => "substitute",
        }
    }
}

/// One extracted modification suggestion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModificationEvent {
    /// Ordinal of the review in the corpus.
    pub review_id: usize,
    pub recipe_id: String,
    pub kind: ModificationKind,
    /// The affected (or replaced) vocabulary ingredient.
    pub ingredient_a: String,
    /// The replacement; `Substitute` only.
    pub ingredient_b: Option<String>,
    /// The clause the event was extracted from, original casing.
    pub clause: String,
}

/// Extraction thresholds; defaults follow the shipped configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinerParams {
    /// Characters scanned after a trigger for the ingredient match.
    pub window_chars: usize,
    /// Acceptance threshold for the 4-gram cosine used by deletions.
    pub delete_similarity: f64,
    /// Character n-gram length for fuzzy matching.
    pub ngram: usize,
}

impl Default for MinerParams {
    fn default() -> Self {
        MinerParams {
            window_chars: 40,
            delete_similarity: 0.55,
            ngram: 4,
        }
    }
}

/// Split review text into clauses on `, . ; ! ?` and newlines, dropping
/// empties and preserving order.
pub fn split_clauses(text: &str) -> Vec<&str> {
    text.split(|c: char| matches!(c, ',' | '.' | ';' | '!' | '?' | '\n' | '\r'))
        .map(str::trim)
        .filter(|clause| !clause.is_empty())
        .collect()
}

/// True iff any signal term occurs in the text as a word or phrase
/// (case-insensitive; each signal word matches a token by prefix, so
/// "omit" flags "Omitted the nutmeg").
pub fn detect_modification(text: &str, signals: &[String]) -> bool {
    let lowered = text.to_lowercase();
    let tokens: Vec<&str> = tokenize(&lowered).into_iter().map(|t| t.text).collect();
    signals.iter().any(|signal| {
        let words: Vec<&str> = signal.split_whitespace().collect();
        phrase_position(&tokens, &words).is_some()
    })
}

/// Cosine similarity of character n-gram count vectors.
///
/// Strings are lowercased; a string shorter than `n` has an empty vector,
/// giving similarity 0 unless both are empty (then 1).
pub fn char_ngram_cosine(s1: &str, s2: &str, n: usize) -> f64 {
    assert!(n >= 1, "n-gram length must be at least 1");
    let g1 = ngram_counts(s1, n);
    let g2 = ngram_counts(s2, n);
    match (g1.is_empty(), g2.is_empty()) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        (false, false) => {
            let dot: f64 = g1
                .iter()
                .filter_map(|(gram, &c1)| g2.get(gram).map(|&c2| c1 as f64 * c2 as f64))
                .sum();
            let n1: f64 = g1.values().map(|&c| (c as f64) * (c as f64)).sum();
            let n2: f64 = g2.values().map(|&c| (c as f64) * (c as f64)).sum();
            dot / (n1.sqrt() * n2.sqrt())
        }
    }
}

fn ngram_counts(s: &str, n: usize) -> HashMap<String, u32> {
    let chars: Vec<char> = s.to_lowercase().chars().collect();
    let mut counts = HashMap::new();
    if chars.len() >= n {
        for window in chars.windows(n) {
            *counts.entry(window.iter().collect::<String>()).or_insert(0) += 1;
        }
    }
    counts
}

// ── Tokenization with offsets ──────────────────────────────────────────

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    start: usize,
    end: usize,
}

/// Word tokens (letters, digits, apostrophes, hyphens) with byte offsets.
fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        let is_word = c.is_alphanumeric() || c == '\'' || c == '\u{2019}' || c == '-';
        match (is_word, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                tokens.push(Token {
                    text: &text[s..i],
                    start: s,
                    end: i,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &text[s..],
            start: s,
            end: text.len(),
        });
    }
    tokens
}

/// A token matches a lexicon word when it is the word itself or a regular
/// inflection of it: plural/past/progressive suffixes, with final-e drop
/// and final-consonant doubling ("omit" matches "omitted", "double"
/// matches "doubling", but "extra" does not match "extract").
fn word_matches(token: &str, word: &str) -> bool {
    if token == word {
        return true;
    }
    let Some(rest) = token.strip_prefix(word) else {
        // Final-e drop: "replace" -> "replacing".
        if let Some(base) = word.strip_suffix('e') {
            if let Some(rest) = token.strip_prefix(base) {
                return matches!(rest, "ing" | "ings");
            }
        }
        return false;
    };
    if matches!(rest, "s" | "es" | "d" | "ed" | "ing" | "ings") {
        return true;
    }
    // Final-consonant doubling: "omit" -> "omitted", "skip" -> "skipping".
    if let Some(last) = word.chars().last() {
        if !matches!(last, 'a' | 'e' | 'i' | 'o' | 'u') {
            let mut doubled = String::with_capacity(4);
            doubled.push(last);
            if let Some(suffix) = rest.strip_prefix(&doubled) {
                return matches!(suffix, "ed" | "ing" | "ings");
            }
        }
    }
    false
}

/// First token index where the phrase (one inflection-matched word per
/// token) begins.
fn phrase_position(tokens: &[&str], words: &[&str]) -> Option<usize> {
    if words.is_empty() || tokens.len() < words.len() {
        return None;
    }
    (0..=tokens.len() - words.len()).find(|&i| {
        words
            .iter()
            .enumerate()
            .all(|(j, word)| word_matches(tokens[i + j], word))
    })
}

/// Longest vocabulary entry occurring as a substring of `window`; ties
/// break to the earliest position. Returns the vocabulary name.
fn maximal_vocab_match<'v>(window: &str, vocab: &'v Vocabulary) -> Option<&'v str> {
    let mut best: Option<(&str, usize, usize)> = None; // (name, len, pos)
    for name in vocab.names() {
        if let Some(pos) = window.find(name) {
            let better = match best {
                None => true,
                Some((_, blen, bpos)) => {
                    name.len() > blen || (name.len() == blen && pos < bpos)
                }
            };
            if better {
                best = Some((name, name.len(), pos));
            }
        }
    }
    best.map(|(name, _, _)| name)
}

/// The `window_chars` characters of `clause` following byte offset `from`.
fn window_after(clause: &str, from: usize, window_chars: usize) -> String {
    clause[from..].chars().take(window_chars).collect()
}

// ── Per-clause extractors ──────────────────────────────────────────────

/// Adjustment events: the first up/down trigger in a clause binds to the
/// maximal vocabulary match in the window that follows it.
pub fn extract_adjustments(
    review_text: &str,
    vocab: &Vocabulary,
    rules: &RuleSet,
    params: &MinerParams,
) -> Vec<(ModificationKind, String, String)> {
    let mut events = Vec::new();
    for clause in split_clauses(review_text) {
        let lowered = clause.to_lowercase();
        let tokens = tokenize(&lowered);
        let mut first: Option<(usize, ModificationKind)> = None;
        for (i, token) in tokens.iter().enumerate() {
            let up = rules.triggers_up.iter().any(|s| word_matches(token.text, s));
            let down = rules
                .triggers_down
                .iter()
                .any(|s| word_matches(token.text, s));
            if up || down {
                let kind = if up {
                    ModificationKind::AdjustUp
                } else {
                    ModificationKind::AdjustDown
                };
                first = Some((i, kind));
                break;
            }
        }
        if let Some((i, kind)) = first {
            let window = window_after(&lowered, tokens[i].end, params.window_chars);
            if let Some(name) = maximal_vocab_match(&window, vocab) {
                events.push((kind, name.to_string(), clause.to_string()));
            }
        }
    }
    events
}

/// Deletion events: a delete trigger followed by a span fuzzy-matched
/// against this recipe's own ingredients by n-gram cosine.
pub fn extract_deletions(
    review_text: &str,
    recipe_ingredients: &BTreeSet<String>,
    rules: &RuleSet,
    params: &MinerParams,
) -> Vec<(String, String)> {
    const DETERMINERS: [&str; 9] = ["the", "a", "an", "my", "our", "some", "any", "all", "of"];
    let mut events = Vec::new();
    for clause in split_clauses(review_text) {
        let lowered = clause.to_lowercase();
        let tokens = tokenize(&lowered);
        let token_texts: Vec<&str> = tokens.iter().map(|t| t.text).collect();
        let mut span_start: Option<usize> = None;
        for trigger in &rules.triggers_delete {
            let words: Vec<&str> = trigger.split_whitespace().collect();
            if let Some(pos) = phrase_position(&token_texts, &words) {
                let end_token = pos + words.len() - 1;
                let candidate = tokens[end_token].end;
                span_start = Some(span_start.map_or(candidate, |s: usize| s.min(candidate)));
            }
        }
        let Some(start) = span_start else { continue };
        let mut span = lowered[start..].trim().to_string();
        // Peel leading determiners so "didn't have the vanilla" compares as
        // "vanilla".
        loop {
            let mut peeled = false;
            for det in DETERMINERS {
                if let Some(rest) = span.strip_prefix(det) {
                    if rest.starts_with(' ') {
                        span = rest.trim_start().to_string();
                        peeled = true;
                    }
                }
            }
            if !peeled {
                break;
            }
        }
        // A span shorter than the n-gram length has an empty vector and
        // can only "match" equally degenerate names; skip it.
        if span.chars().count() < params.ngram {
            continue;
        }
        let mut best: Option<(&String, f64)> = None;
        for ingredient in recipe_ingredients {
            let sim = char_ngram_cosine(&span, ingredient, params.ngram);
            if best.map_or(true, |(_, b)| sim > b) {
                best = Some((ingredient, sim));
            }
        }
        if let Some((ingredient, sim)) = best {
            if sim >= params.delete_similarity {
                events.push((ingredient.clone(), clause.to_string()));
            }
        }
    }
    events
}

/// Addition events: an "add" trigger outside any substitution phrasing,
/// bound to a vocabulary ingredient not already in the recipe.
pub fn extract_additions(
    review_text: &str,
    recipe_ingredients: &BTreeSet<String>,
    vocab: &Vocabulary,
    rules: &RuleSet,
    params: &MinerParams,
) -> Vec<(String, String)> {
    let mut events = Vec::new();
    for clause in split_clauses(review_text) {
        let lowered = clause.to_lowercase();
        if clause_has_substitution_syntax(&lowered, rules) {
            continue;
        }
        let tokens = tokenize(&lowered);
        let trigger = tokens.iter().find(|t| {
            rules
                .triggers_add
                .iter()
                .any(|s| word_matches(t.text, s))
        });
        let Some(token) = trigger else { continue };
        let window = window_after(&lowered, token.end, params.window_chars);
        if let Some(name) = maximal_vocab_match(&window, vocab) {
            if !recipe_ingredients.contains(name) {
                events.push((name.to_string(), clause.to_string()));
            }
        }
    }
    events
}

/// Substitution events from the pattern families; direction is always
/// original -> replacement regardless of surface order.
pub fn extract_substitutions(
    review_text: &str,
    vocab: &Vocabulary,
    rules: &RuleSet,
) -> Vec<(String, String, String)> {
    let mut events = Vec::new();
    for clause in split_clauses(review_text) {
        let lowered = clause.to_lowercase();
        for pattern in &rules.substitute_patterns {
            if let Some((a, b)) = match_pattern(&lowered, pattern, vocab) {
                if a != b {
                    events.push((a, b, clause.to_string()));
                    break;
                }
            }
        }
    }
    events
}

/// Check for the syntactic shape of any substitution pattern (used to keep
/// "added cucumber instead of green pepper" out of the addition extractor).
fn clause_has_substitution_syntax(lowered_clause: &str, rules: &RuleSet) -> bool {
    let tokens: Vec<&str> = tokenize(lowered_clause).into_iter().map(|t| t.text).collect();
    rules.substitute_patterns.iter().any(|pattern| {
        let mid: Vec<&str> = pattern.mid_literals.iter().map(|s| s.as_str()).collect();
        match &pattern.lead_stem {
            Some(stem) => tokens.iter().any(|t| word_matches(t, stem)),
            None => phrase_position(&tokens, &mid).is_some(),
        }
    })
}

fn match_pattern(
    lowered_clause: &str,
    pattern: &SubstitutePattern,
    vocab: &Vocabulary,
) -> Option<(String, String)> {
    let tokens = tokenize(lowered_clause);
    let token_texts: Vec<&str> = tokens.iter().map(|t| t.text).collect();

    let search_from = match &pattern.lead_stem {
        Some(stem) => {
            let i = token_texts.iter().position(|t| word_matches(t, stem))?;
            i + 1
        }
        None => 0,
    };
    if search_from >= tokens.len() {
        return None;
    }
    let mid: Vec<&str> = pattern.mid_literals.iter().map(|s| s.as_str()).collect();
    // Interior literals match exact words.
    let rel = (search_from..=token_texts.len().checked_sub(mid.len())?).find(|&i| {
        mid.iter()
            .enumerate()
            .all(|(j, word)| token_texts.get(i + j) == Some(word))
    })?;

    let first_start = tokens.get(search_from)?.start;
    let first_end = if rel > search_from {
        tokens[rel - 1].end
    } else {
        return None;
    };
    let second_start = tokens.get(rel + mid.len())?.start;
    let second_end = tokens.last()?.end;

    let first_text = &lowered_clause[first_start..first_end];
    let second_text = &lowered_clause[second_start..second_end];
    let first_name = maximal_vocab_match(first_text, vocab)?;
    let second_name = maximal_vocab_match(second_text, vocab)?;

    let (a, b) = match (pattern.first_slot, pattern.second_slot) {
        (SlotRole::Original, SlotRole::Replacement) => (first_name, second_name),
        (SlotRole::Replacement, SlotRole::Original) => (second_name, first_name),
        _ => return None,
    };
    Some((a.to_string(), b.to_string()))
}

// ── Corpus-level extraction ────────────────────────────────────────────

/// Extract every modification event in the corpus.
///
/// Per review, each extractor runs clause by clause; events are then
/// deduplicated to at most one per (review, kind, ingredient pair).
/// Extraction is parallel over reviews with an order-preserving merge.
pub fn extract_corpus_events(
    corpus: &Corpus,
    vocab: &Vocabulary,
    rules: &RuleSet,
    params: &MinerParams,
) -> Vec<ModificationEvent> {
    let ingredient_sets: HashMap<&str, BTreeSet<String>> = corpus
        .recipes()
        .iter()
        .map(|recipe| {
            let names: BTreeSet<String> = recipe_vocab_indices(recipe, vocab, rules)
                .into_iter()
                .map(|i| vocab.name(i).to_string())
                .collect();
            (recipe.id.as_str(), names)
        })
        .collect();

    let per_review: Vec<Vec<ModificationEvent>> = corpus
        .reviews()
        .par_iter()
        .enumerate()
        .map(|(review_id, review)| {
            let recipe_ingredients = &ingredient_sets[review.recipe_id.as_str()];
            let mut events = Vec::new();
            for (kind, name, clause) in
                extract_adjustments(&review.text, vocab, rules, params)
            {
                events.push(ModificationEvent {
                    review_id,
                    recipe_id: review.recipe_id.clone(),
                    kind,
                    ingredient_a: name,
                    ingredient_b: None,
                    clause,
                });
            }
            for (name, clause) in
                extract_deletions(&review.text, recipe_ingredients, rules, params)
            {
                events.push(ModificationEvent {
                    review_id,
                    recipe_id: review.recipe_id.clone(),
                    kind: ModificationKind::Delete,
                    ingredient_a: name,
                    ingredient_b: None,
                    clause,
                });
            }
            for (name, clause) in
                extract_additions(&review.text, recipe_ingredients, vocab, rules, params)
            {
                events.push(ModificationEvent {
                    review_id,
                    recipe_id: review.recipe_id.clone(),
                    kind: ModificationKind::Add,
                    ingredient_a: name,
                    ingredient_b: None,
                    clause,
                });
            }
            for (a, b, clause) in extract_substitutions(&review.text, vocab, rules) {
                events.push(ModificationEvent {
                    review_id,
                    recipe_id: review.recipe_id.clone(),
                    kind: ModificationKind::Substitute,
                    ingredient_a: a,
                    ingredient_b: Some(b),
                    clause,
                });
            }
            events
        })
        .collect();

    let mut seen: BTreeSet<(usize, ModificationKind, String, Option<String>)> = BTreeSet::new();
    let mut out = Vec::new();
    for event in per_review.into_iter().flatten() {
        let key = (
            event.review_id,
            event.kind,
            event.ingredient_a.clone(),
            event.ingredient_b.clone(),
        );
        if seen.insert(key) {
            out.push(event);
        }
    }
    out
}

// ── Modification statistics ────────────────────────────────────────────

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngredientModCounts {
    pub additions: u32,
    pub deletions: u32,
    pub increases: u32,
    pub decreases: u32,
    pub recipe_frequency: u32,
}

/// Per-ingredient modification counts over the whole corpus.
#[derive(Debug, Clone, Default)]
pub struct ModificationStats {
    pub per_ingredient: BTreeMap<String, IngredientModCounts>,
}

impl ModificationStats {
    /// Rate of a count against the ingredient's recipe frequency;
    /// `None` when the ingredient occurs in no recipe.
    pub fn rate(count: u32, frequency: u32) -> Option<f64> {
        (frequency > 0).then(|| count as f64 / frequency as f64)
    }
}

/// Aggregate events into per-ingredient counts keyed to the vocabulary.
pub fn modification_stats(
    events: &[ModificationEvent],
    vocab: &Vocabulary,
) -> ModificationStats {
    let mut stats = ModificationStats::default();
    for (name, frequency) in vocab.entries() {
        stats.per_ingredient.insert(
            name.clone(),
            IngredientModCounts {
                recipe_frequency: *frequency,
                ..Default::default()
            },
        );
    }
    for event in events {
        let Some(counts) = stats.per_ingredient.get_mut(&event.ingredient_a) else {
            continue;
        };
        match event.kind {
            ModificationKind::Add => counts.additions += 1,
            ModificationKind::Delete => counts.deletions += 1,
            ModificationKind::AdjustUp => counts.increases += 1,
            ModificationKind::AdjustDown => counts.decreases += 1,
            ModificationKind::Substitute => {}
        }
    }
    stats
}

/// Upper-triangle Pearson correlations among (recipe_frequency, additions,
/// deletions, increases, decreases). `None` marks a zero-variance column.
#[derive(Debug, Clone)]
pub struct CorrelationTable {
    pub labels: [&'static str; 5],
    pub values: [[Option<f64>; 5]; 5],
}

pub fn stats_correlations(stats: &ModificationStats) -> Result<CorrelationTable, MiningError> {
    let rows: Vec<&IngredientModCounts> = stats
        .per_ingredient
        .values()
        .filter(|c| c.recipe_frequency > 0)
        .collect();
    if rows.len() < 3 {
        return Err(MiningError::TooFewIngredients(rows.len()));
    }
    let columns: [Vec<f64>; 5] = [
        rows.iter().map(|c| c.recipe_frequency as f64).collect(),
        rows.iter().map(|c| c.additions as f64).collect(),
        rows.iter().map(|c| c.deletions as f64).collect(),
        rows.iter().map(|c| c.increases as f64).collect(),
        rows.iter().map(|c| c.decreases as f64).collect(),
    ];
    let mut values = [[None; 5]; 5];
    for i in 0..5 {
        for j in (i + 1)..5 {
            values[i][j] = pearson(&columns[i], &columns[j]);
        }
    }
    Ok(CorrelationTable {
        labels: [
            "recipe_frequency",
            "additions",
            "deletions",
            "increases",
            "decreases",
        ],
        values,
    })
}
