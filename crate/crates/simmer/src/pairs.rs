//! Labeled recipe-pair generation: IDF-weighted cosine similarity gating,
//! same-rater preference labeling, and reviewer-activity filtering.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::ingredients::{recipe_vocab_indices, Vocabulary};
use crate::network::PresenceCounts;
use crate::rules::RuleSet;

/// Thresholds for pair generation; defaults follow the shipped
/// configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    /// Similarity must strictly exceed this.
    pub sim_min: f64,
    /// Minimum number of eligible common raters.
    pub min_common: usize,
    /// The winning side must exceed this fraction of common raters.
    pub majority_min: f64,
    /// A common rater must have rated at least this many recipes besides
    /// the two in the pair.
    pub min_user_reviews: usize,
}

impl Default for PairParams {
    fn default() -> Self {
        PairParams {
            sim_min: 0.2,
            min_common: 10,
            majority_min: 0.5,
            min_user_reviews: 8,
        }
    }
}

/// An oriented pair: `recipe_hi` is the majority-preferred recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct RecipePair {
    pub recipe_hi: String,
    pub recipe_lo: String,
    /// Index of `recipe_hi` in the corpus.
    pub hi_index: usize,
    pub lo_index: usize,
    pub n_common_raters: usize,
    /// Winning-side share of common raters, in (0.5, 1].
    pub majority_fraction: f64,
    pub similarity: f64,
}

/// Inverse document frequency per vocabulary ordinal:
/// ln(n_recipes / n_recipes_containing); 0 for ingredients in every recipe
/// (and for ingredients in none).
#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable {
    pub values: Vec<f64>,
}

impl IdfTable {
    pub fn from_presence(presence: &PresenceCounts) -> IdfTable {
        let n = presence.n_recipes as f64;
        let values = presence
            .presence
            .iter()
            .map(|&count| {
                if count == 0 {
                    0.0
                } else {
                    (n / count as f64).ln()
                }
            })
            .collect();
        IdfTable { values }
    }

    pub fn from_corpus(corpus: &Corpus, vocab: &Vocabulary, rules: &RuleSet) -> IdfTable {
        Self::from_presence(&PresenceCounts::from_corpus(corpus, vocab, rules))
    }
}

/// Cosine similarity of the two recipes' IDF-weighted ingredient vectors.
/// A recipe whose weighted vector is zero yields similarity 0.
pub fn idf_cosine(set_a: &BTreeSet<usize>, set_b: &BTreeSet<usize>, idf: &IdfTable) -> f64 {
    let sq = |set: &BTreeSet<usize>| -> f64 {
        set.iter().map(|&i| idf.values[i] * idf.values[i]).sum()
    };
    let norm_a = sq(set_a);
    let norm_b = sq(set_b);
    if norm_a == 0.0 || norm_b == 0.0 {
        return 0.0;
    }
    let dot: f64 = set_a
        .intersection(set_b)
        .map(|&i| idf.values[i] * idf.values[i])
        .sum();
    dot / (norm_a.sqrt() * norm_b.sqrt())
}

/// Generate the oriented, similarity-gated recipe pairs.
///
/// Duplicate reviews by the same user of the same recipe keep the latest
/// (last in file order) only. A common rater of a pair is eligible when
/// they rated at least `min_user_reviews` distinct recipes besides the two
/// in the pair. Ties count toward neither side; the pair is emitted only
/// when one side strictly exceeds `majority_min` of all eligible common
/// raters. Output is sorted by (recipe_hi, recipe_lo) ids.
pub fn generate_pairs(
    corpus: &Corpus,
    vocab: &Vocabulary,
    rules: &RuleSet,
    params: &PairParams,
) -> Vec<RecipePair> {
    let ingredient_sets: Vec<BTreeSet<usize>> = corpus
        .recipes()
        .iter()
        .map(|r| recipe_vocab_indices(r, vocab, rules))
        .collect();
    let idf = IdfTable::from_corpus(corpus, vocab, rules);
    generate_pairs_from_parts(corpus, &ingredient_sets, &idf, params)
}

/// Pair generation over precomputed ingredient sets and IDF values.
pub fn generate_pairs_from_parts(
    corpus: &Corpus,
    ingredient_sets: &[BTreeSet<usize>],
    idf: &IdfTable,
    params: &PairParams,
) -> Vec<RecipePair> {
    // Latest rating per (user, recipe).
    let mut latest: HashMap<&str, HashMap<usize, u8>> = HashMap::new();
    for review in corpus.reviews() {
        let recipe = corpus
            .recipe_index(&review.recipe_id)
            .expect("validated corpus");
        latest
            .entry(review.user_id.as_str())
            .or_default()
            .insert(recipe, review.rating);
    }

    // Candidate pairs from users that can possibly be eligible anywhere:
    // an eligible common rater needs min_user_reviews + 2 distinct recipes.
    let needed = params.min_user_reviews + 2;
    let mut co_raters: HashMap<(usize, usize), Vec<&str>> = HashMap::new();
    for (user, ratings) in &latest {
        if ratings.len() < needed {
            continue;
        }
        let mut rated: Vec<usize> = ratings.keys().copied().collect();
        rated.sort_unstable();
        for (i, &a) in rated.iter().enumerate() {
            for &b in &rated[i + 1..] {
                co_raters.entry((a, b)).or_default().push(user);
            }
        }
    }

    let mut pairs = Vec::new();
    for (&(a, b), users) in &co_raters {
        if users.len() < params.min_common {
            continue;
        }
        let similarity = idf_cosine(&ingredient_sets[a], &ingredient_sets[b], idf);
        if !(similarity > params.sim_min) {
            continue;
        }
        let mut wins_a = 0usize;
        let mut wins_b = 0usize;
        for user in users {
            let ratings = &latest[user];
            let (ra, rb) = (ratings[&a], ratings[&b]);
            if ra > rb {
                wins_a += 1;
            } else if rb > ra {
                wins_b += 1;
            }
        }
        let n_common = users.len();
        let threshold = params.majority_min * n_common as f64;
        let (hi, lo, wins) = if wins_a as f64 > threshold {
            (a, b, wins_a)
        } else if wins_b as f64 > threshold {
            (b, a, wins_b)
        } else {
            continue;
        };
        pairs.push(RecipePair {
            recipe_hi: corpus.recipes()[hi].id.clone(),
            recipe_lo: corpus.recipes()[lo].id.clone(),
            hi_index: hi,
            lo_index: lo,
            n_common_raters: n_common,
            majority_fraction: wins as f64 / n_common as f64,
            similarity,
        });
    }
    pairs.sort_by(|x, y| {
        (&x.recipe_hi, &x.recipe_lo).cmp(&(&y.recipe_hi, &y.recipe_lo))
    });
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::{recipe, review};
    use crate::corpus::Review;

    fn rules() -> RuleSet {
        RuleSet::builtin()
    }

    #[test]
    fn idf_zero_for_ubiquitous() {
        let corpus = Corpus::new(
            vec![recipe("a", &["salt", "basil"]), recipe("b", &["salt"])],
            vec![],
        )
        .unwrap();
        let vocab = Vocabulary::build(&corpus, 10, &rules()).unwrap();
        let idf = IdfTable::from_corpus(&corpus, &vocab, &rules());
        let salt = vocab.get("salt").unwrap();
        let basil = vocab.get("basil").unwrap();
        assert_eq!(idf.values[salt], 0.0);
        assert!((idf.values[basil] - 2.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn cosine_identity_and_disjoint() {
        let idf = IdfTable {
            values: vec![1.0, 0.5, 2.0],
        };
        let a: BTreeSet<usize> = [0, 1].into_iter().collect();
        let b: BTreeSet<usize> = [2].into_iter().collect();
        assert!((idf_cosine(&a, &a, &idf) - 1.0).abs() < 1e-12);
        assert_eq!(idf_cosine(&a, &b, &idf), 0.0);
    }

    #[test]
    fn rare_shared_ingredient_beats_ubiquitous() {
        // idf 2.0 on the shared rare ingredient vs idf 0 on the shared
        // ubiquitous one; hand oracle: cos = 4 / (sqrt(4+1) * sqrt(4+1)).
        let idf = IdfTable {
            values: vec![2.0, 1.0, 1.0, 0.0, 1.0, 1.0],
        };
        let rare_a: BTreeSet<usize> = [0, 1].into_iter().collect();
        let rare_b: BTreeSet<usize> = [0, 2].into_iter().collect();
        let rare = idf_cosine(&rare_a, &rare_b, &idf);
        assert!((rare - 4.0 / 5.0).abs() < 1e-12);

        let common_a: BTreeSet<usize> = [3, 4].into_iter().collect();
        let common_b: BTreeSet<usize> = [3, 5].into_iter().collect();
        let common = idf_cosine(&common_a, &common_b, &idf);
        assert_eq!(common, 0.0);
        assert!(rare > common);
    }

    /// Corpus where `extra` users each rate one unique filler so recipe A
    /// and B have exactly the given common raters.
    fn pair_corpus(raters: &[(&str, u8, u8)]) -> Corpus {
        let mut recipes = vec![
            recipe("A", &["saffron", "lobster", "truffle"]),
            recipe("B", &["saffron", "lobster", "truffle"]),
        ];
        let mut reviews: Vec<Review> = Vec::new();
        let mut filler_id = 0usize;
        for (user, ra, rb) in raters {
            reviews.push(review("A", user, *ra, ""));
            reviews.push(review("B", user, *rb, ""));
            // 8 distinct fillers per user keeps them eligible.
            for _ in 0..8 {
                let id = format!("f{filler_id}");
                recipes.push(recipe(&id, &[&format!("filler {filler_id}")]));
                reviews.push(review(&id, user, 3, ""));
                filler_id += 1;
            }
        }
        Corpus::new(recipes, reviews).unwrap()
    }

    #[test]
    fn unanimous_ten_raters_make_one_pair() {
        let raters: Vec<(String, u8, u8)> =
            (0..10).map(|i| (format!("u{i}"), 5, 3)).collect();
        let refs: Vec<(&str, u8, u8)> = raters.iter().map(|(u, a, b)| (u.as_str(), *a, *b)).collect();
        let corpus = pair_corpus(&refs);
        let vocab = Vocabulary::build(&corpus, 1000, &rules()).unwrap();
        let pairs = generate_pairs(&corpus, &vocab, &rules(), &PairParams::default());
        assert_eq!(pairs.len(), 1);
        let pair = &pairs[0];
        assert_eq!(pair.recipe_hi, "A");
        assert_eq!(pair.recipe_lo, "B");
        assert_eq!(pair.n_common_raters, 10);
        assert_eq!(pair.majority_fraction, 1.0);
        assert!(pair.similarity > 0.2);
    }

    #[test]
    fn nine_raters_are_not_enough() {
        let raters: Vec<(String, u8, u8)> =
            (0..9).map(|i| (format!("u{i}"), 5, 3)).collect();
        let refs: Vec<(&str, u8, u8)> = raters.iter().map(|(u, a, b)| (u.as_str(), *a, *b)).collect();
        let corpus = pair_corpus(&refs);
        let vocab = Vocabulary::build(&corpus, 1000, &rules()).unwrap();
        let pairs = generate_pairs(&corpus, &vocab, &rules(), &PairParams::default());
        assert!(pairs.is_empty());
    }

    #[test]
    fn even_split_yields_no_pair() {
        let raters: Vec<(String, u8, u8)> = (0..12)
            .map(|i| {
                if i < 6 {
                    (format!("u{i}"), 5, 3)
                } else {
                    (format!("u{i}"), 3, 5)
                }
            })
            .collect();
        let refs: Vec<(&str, u8, u8)> = raters.iter().map(|(u, a, b)| (u.as_str(), *a, *b)).collect();
        let corpus = pair_corpus(&refs);
        let vocab = Vocabulary::build(&corpus, 1000, &rules()).unwrap();
        let pairs = generate_pairs(&corpus, &vocab, &rules(), &PairParams::default());
        assert!(pairs.is_empty());
    }

    #[test]
    fn ineligible_raters_do_not_count() {
        // 10 raters but only 9 have the required 8 other recipes.
        let raters: Vec<(String, u8, u8)> =
            (0..9).map(|i| (format!("u{i}"), 5, 3)).collect();
        let refs: Vec<(&str, u8, u8)> = raters.iter().map(|(u, a, b)| (u.as_str(), *a, *b)).collect();
        let mut corpus = pair_corpus(&refs);
        // Add a tenth common rater with no filler reviews.
        let mut recipes = corpus.recipes().to_vec();
        let mut reviews = corpus.reviews().to_vec();
        reviews.push(review("A", "lazy", 5, ""));
        reviews.push(review("B", "lazy", 3, ""));
        recipes.rotate_left(0);
        corpus = Corpus::new(recipes, reviews).unwrap();
        let vocab = Vocabulary::build(&corpus, 1000, &rules()).unwrap();
        let pairs = generate_pairs(&corpus, &vocab, &rules(), &PairParams::default());
        assert!(pairs.is_empty());
    }

    #[test]
    fn duplicate_reviews_keep_latest() {
        let raters: Vec<(String, u8, u8)> =
            (0..10).map(|i| (format!("u{i}"), 5, 3)).collect();
        let refs: Vec<(&str, u8, u8)> = raters.iter().map(|(u, a, b)| (u.as_str(), *a, *b)).collect();
        let corpus = pair_corpus(&refs);
        let mut reviews = corpus.reviews().to_vec();
        // u0 re-reviews A with a 1: latest wins, flipping u0 to prefer B,
        // leaving 9 of 10 for A (still > 50%).
        reviews.push(review("A", "u0", 1, ""));
        let corpus = Corpus::new(corpus.recipes().to_vec(), reviews).unwrap();
        let vocab = Vocabulary::build(&corpus, 1000, &rules()).unwrap();
        let pairs = generate_pairs(&corpus, &vocab, &rules(), &PairParams::default());
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].majority_fraction, 0.9);
    }

    #[test]
    fn output_invariant_under_review_order_and_user_relabel() {
        let raters: Vec<(String, u8, u8)> = (0..11)
            .map(|i| (format!("u{i}"), if i < 8 { 5 } else { 2 }, 3))
            .collect();
        let refs: Vec<(&str, u8, u8)> = raters.iter().map(|(u, a, b)| (u.as_str(), *a, *b)).collect();
        let corpus = pair_corpus(&refs);
        let vocab = Vocabulary::build(&corpus, 1000, &rules()).unwrap();
        let baseline = generate_pairs(&corpus, &vocab, &rules(), &PairParams::default());

        let mut reviews = corpus.reviews().to_vec();
        reviews.reverse();
        let reordered = Corpus::new(corpus.recipes().to_vec(), reviews).unwrap();
        assert_eq!(
            generate_pairs(&reordered, &vocab, &rules(), &PairParams::default()),
            baseline
        );

        let relabeled_reviews: Vec<Review> = corpus
            .reviews()
            .iter()
            .map(|r| Review {
                user_id: format!("renamed-{}", r.user_id),
                ..r.clone()
            })
            .collect();
        let relabeled = Corpus::new(corpus.recipes().to_vec(), relabeled_reviews).unwrap();
        assert_eq!(
            generate_pairs(&relabeled, &vocab, &rules(), &PairParams::default()),
            baseline
        );
    }
}
