//! JSON Lines corpus files: one record per line, UTF-8, snake_case keys.
//!
//! Unknown keys are ignored with a warning (via `log`), so corpora produced
//! by newer writers still load. Malformed lines abort with the line number.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{Corpus, CorpusError, Recipe, Review};

const RECIPE_KEYS: [&str; 9] = [
    "id",
    "title",
    "ingredient_lines",
    "directions",
    "nutrition",
    "prep_minutes",
    "cook_minutes",
    "servings",
    "region",
];

const REVIEW_KEYS: [&str; 5] = ["recipe_id", "user_id", "rating", "text", "helpful_votes"];

/// Load and validate a corpus from a recipes file and a reviews file.
pub fn load_corpus(recipes_path: &Path, reviews_path: &Path) -> Result<Corpus, CorpusError> {
    let recipes = load_recipes(recipes_path)?;
    let reviews = load_reviews(reviews_path)?;
    Corpus::new(recipes, reviews)
}

/// Load recipe records from a JSON Lines file.
pub fn load_recipes(path: &Path) -> Result<Vec<Recipe>, CorpusError> {
    load_records(path, &RECIPE_KEYS, "recipe")
}

/// Load review records from a JSON Lines file.
pub fn load_reviews(path: &Path) -> Result<Vec<Review>, CorpusError> {
    load_records(path, &REVIEW_KEYS, "review")
}

fn load_records<T: serde::de::DeserializeOwned>(
    path: &Path,
    known_keys: &[&str],
    what: &str,
) -> Result<Vec<T>, CorpusError> {
    let display = path.display().to_string();
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: display.clone(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut out = Vec::new();
    let mut warned: BTreeSet<String> = BTreeSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: display.clone(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(&line).map_err(|e| CorpusError::Malformed {
                path: display.clone(),
                line: line_no,
                message: e.to_string(),
            })?;
        if let Some(object) = value.as_object() {
            for key in object.keys() {
                if !known_keys.contains(&key.as_str()) && warned.insert(key.clone()) {
                    log::warn!("{display}:{line_no}: ignoring unknown {what} key {key:?}");
                }
            }
        }
        let record: T = serde_json::from_value(value).map_err(|e| CorpusError::Malformed {
            path: display.clone(),
            line: line_no,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

/// Write a corpus back out as a recipes file and a reviews file.
///
/// `load_corpus(save_corpus(c)) == c` for any valid corpus.
pub fn save_corpus(
    corpus: &Corpus,
    recipes_path: &Path,
    reviews_path: &Path,
) -> Result<(), CorpusError> {
    write_records(recipes_path, corpus.recipes())?;
    write_records(reviews_path, corpus.reviews())
}

fn write_records<T: serde::Serialize>(path: &Path, records: &[T]) -> Result<(), CorpusError> {
    let display = path.display().to_string();
    let io_err = |source| CorpusError::Io {
        path: display.clone(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut writer = BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(record).expect("corpus records serialize");
        writeln!(writer, "{line}").map_err(io_err)?;
    }
    writer.flush().map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::{recipe, review};
    use super::*;

    fn write_lines(dir: &Path, name: &str, lines: &[&str]) -> std::path::PathBuf {
        let path = dir.join(name);
        std::fs::write(&path, lines.join("\n")).unwrap();
        path
    }

    #[test]
    fn well_formed_files_round_trip_counts() {
        let dir = tempfile::tempdir().unwrap();
        let recipes = write_lines(
            dir.path(),
            "recipes.jsonl",
            &[
                r#"{"id":"r1","title":"one","ingredient_lines":["salt"],"directions":[],"servings":2}"#,
                r#"{"id":"r2","title":"two","ingredient_lines":["pepper"],"directions":[],"servings":2}"#,
                r#"{"id":"r3","title":"three","ingredient_lines":["basil"],"directions":[],"servings":2}"#,
            ],
        );
        let reviews = write_lines(
            dir.path(),
            "reviews.jsonl",
            &[
                r#"{"recipe_id":"r1","user_id":"u1","rating":5,"text":"great"}"#,
                r#"{"recipe_id":"r1","user_id":"u2","rating":4,"text":"good"}"#,
                r#"{"recipe_id":"r2","user_id":"u1","rating":3,"text":"ok"}"#,
                r#"{"recipe_id":"r2","user_id":"u3","rating":2,"text":"meh"}"#,
                r#"{"recipe_id":"r3","user_id":"u2","rating":5,"text":"nice"}"#,
            ],
        );
        let corpus = load_corpus(&recipes, &reviews).unwrap();
        assert_eq!(corpus.recipes().len(), 3);
        assert_eq!(corpus.reviews().len(), 5);
    }

    #[test]
    fn dangling_reference_names_the_id() {
        let dir = tempfile::tempdir().unwrap();
        let recipes = write_lines(
            dir.path(),
            "recipes.jsonl",
            &[r#"{"id":"r1","title":"one","ingredient_lines":["salt"],"directions":[],"servings":2}"#],
        );
        let reviews = write_lines(
            dir.path(),
            "reviews.jsonl",
            &[r#"{"recipe_id":"x9","user_id":"u1","rating":5,"text":"?"}"#],
        );
        let err = load_corpus(&recipes, &reviews).unwrap_err();
        assert!(err.to_string().contains("x9"), "{err}");
    }

    #[test]
    fn empty_reviews_file_is_valid() {
        let dir = tempfile::tempdir().unwrap();
        let recipes = write_lines(
            dir.path(),
            "recipes.jsonl",
            &[r#"{"id":"r1","title":"one","ingredient_lines":["salt"],"directions":[],"servings":2}"#],
        );
        let reviews = write_lines(dir.path(), "reviews.jsonl", &[""]);
        let corpus = load_corpus(&recipes, &reviews).unwrap();
        assert_eq!(corpus.reviews().len(), 0);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let recipes = write_lines(
            dir.path(),
            "recipes.jsonl",
            &[
                r#"{"id":"r1","title":"one","ingredient_lines":["salt"],"directions":[],"servings":2}"#,
                r#"{"id":"r2", not json"#,
            ],
        );
        let err = load_recipes(&recipes).unwrap_err();
        match err {
            CorpusError::Malformed { line, .. } => assert_eq!(line, 2),
            other => panic!("expected Malformed, got {other:?}"),
        }
    }

    #[test]
    fn save_then_load_round_trips() {
        let mut r = recipe("r1", &["2 cups flour", "salt"]);
        r.region = Some(super::super::Region::Midwest);
        r.nutrition.insert("calories".into(), 210.5);
        let corpus = Corpus::new(
            vec![r, recipe("r2", &["basil"])],
            vec![review("r1", "u1", 4, "tasty"), review("r2", "u2", 5, "yum")],
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let rp = dir.path().join("recipes.jsonl");
        let vp = dir.path().join("reviews.jsonl");
        save_corpus(&corpus, &rp, &vp).unwrap();
        let reloaded = load_corpus(&rp, &vp).unwrap();
        assert_eq!(corpus, reloaded);
    }
}
