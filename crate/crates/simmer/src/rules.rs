//! Rule file: the lexicons driving ingredient normalization, method
//! extraction, and review mining.
//!
//! The file is plain text split into `[section]` blocks holding one lowercase
//! token, stem, or phrase per line; `#` starts a comment. The crate ships a
//! default file (`data/default_rules.txt`) embedded at compile time, and any
//! file with the same layout can be supplied instead.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

/// Embedded copy of the default rule file.
pub const DEFAULT_RULES: &str = include_str!("../data/default_rules.txt");

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("failed to read rule file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: entry before any [section] header")]
    EntryOutsideSection { line: usize },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: substitute pattern must contain {{a}} and {{b}} exactly once: {text}")]
    BadPattern { line: usize, text: String },
    #[error("rule file is missing required section [{0}]")]
    MissingSection(&'static str),
}

/// Cooking-method verb stems grouped by the kind of processing they name.
#[derive(Debug, Clone, Default)]
pub struct MethodLexicon {
    pub heating: BTreeSet<String>,
    pub mechanical: BTreeSet<String>,
    pub chemical: BTreeSet<String>,
}

impl MethodLexicon {
    /// All stems across the three categories, sorted and deduplicated.
    pub fn all_stems(&self) -> Vec<String> {
        let mut stems: BTreeSet<String> = BTreeSet::new();
        stems.extend(self.heating.iter().cloned());
        stems.extend(self.mechanical.iter().cloned());
        stems.extend(self.chemical.iter().cloned());
        stems.into_iter().collect()
    }
}

/// Which ingredient a pattern slot binds: the original (`{a}`) or the
/// replacement (`{b}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotRole {
    Original,
    Replacement,
}

/// A parsed substitute pattern such as `replac {a} with {b}`.
///
/// Patterns take one of two shapes: a leading verb stem followed by
/// slot/literals/slot, or slot/literals/slot with no verb. The verb stem is
/// matched by prefix ("replac" matches "replaced"); interior literals match
/// whole words.
#[derive(Debug, Clone)]
pub struct SubstitutePattern {
    /// Leading verb stem, when the pattern has one.
    pub lead_stem: Option<String>,
    /// Role of the slot before the interior literals.
    pub first_slot: SlotRole,
    /// Words between the two slots ("with", "instead of", ...).
    pub mid_literals: Vec<String>,
    /// Role of the slot after the interior literals.
    pub second_slot: SlotRole,
    /// Original pattern text, for diagnostics.
    pub text: String,
}

impl fmt::Display for SubstitutePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// The full rule set, one instance per pipeline run.
#[derive(Debug, Clone)]
pub struct RuleSet {
    pub units: BTreeSet<String>,
    pub quantities: BTreeSet<String>,
    pub descriptors: BTreeSet<String>,
    pub methods: MethodLexicon,
    /// Modification signal terms (words or phrases) for review flagging.
    pub signals: Vec<String>,
    pub triggers_up: Vec<String>,
    pub triggers_down: Vec<String>,
    pub triggers_delete: Vec<String>,
    pub triggers_add: Vec<String>,
    pub substitute_patterns: Vec<SubstitutePattern>,
}

impl RuleSet {
    /// Parse the embedded default rule file.
    pub fn builtin() -> RuleSet {
        Self::parse(DEFAULT_RULES).expect("embedded rule file must parse")
    }

    /// Load a rule file from disk.
    pub fn from_path(path: &Path) -> Result<RuleSet, RuleError> {
        let text = fs::read_to_string(path).map_err(|source| RuleError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parse rule-file text.
    pub fn parse(text: &str) -> Result<RuleSet, RuleError> {
        let mut units = BTreeSet::new();
        let mut quantities = BTreeSet::new();
        let mut descriptors = BTreeSet::new();
        let mut methods = MethodLexicon::default();
        let mut signals = Vec::new();
        let mut triggers_up = Vec::new();
        let mut triggers_down = Vec::new();
        let mut triggers_delete = Vec::new();
        let mut triggers_add = Vec::new();
        let mut substitute_patterns = Vec::new();

        let mut section: Option<String> = None;
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                let name = line[1..line.len() - 1].to_string();
                seen.insert(name.clone());
                section = Some(name);
                continue;
            }
            let entry = line.to_lowercase();
            match section.as_deref() {
                None => return Err(RuleError::EntryOutsideSection { line: line_no }),
                Some("units") => {
                    units.insert(entry);
                }
                Some("quantities") => {
                    quantities.insert(entry);
                }
                Some("descriptors") => {
                    descriptors.insert(entry);
                }
                Some("methods.heating") => {
                    methods.heating.insert(entry);
                }
                Some("methods.mechanical") => {
                    methods.mechanical.insert(entry);
                }
                Some("methods.chemical") => {
                    methods.chemical.insert(entry);
                }
                Some("signals") => signals.push(entry),
                Some("triggers.up") => triggers_up.push(entry),
                Some("triggers.down") => triggers_down.push(entry),
                Some("triggers.delete") => triggers_delete.push(entry),
                Some("triggers.add") => triggers_add.push(entry),
                Some("patterns.substitute") => {
                    substitute_patterns.push(parse_pattern(&entry, line_no)?)
                }
                Some(other) => {
                    return Err(RuleError::UnknownSection {
                        line: line_no,
                        name: other.to_string(),
                    })
                }
            }
        }

        for required in [
            "units",
            "quantities",
            "descriptors",
            "methods.heating",
            "methods.mechanical",
            "methods.chemical",
            "signals",
            "triggers.up",
            "triggers.down",
            "triggers.delete",
            "triggers.add",
            "patterns.substitute",
        ] {
            if !seen.contains(required) {
                return Err(RuleError::MissingSection(required));
            }
        }

        Ok(RuleSet {
            units,
            quantities,
            descriptors,
            methods,
            signals,
            triggers_up,
            triggers_down,
            triggers_delete,
            triggers_add,
            substitute_patterns,
        })
    }
}

fn parse_pattern(text: &str, line_no: usize) -> Result<SubstitutePattern, RuleError> {
    let bad = || RuleError::BadPattern {
        line: line_no,
        text: text.to_string(),
    };
    let words: Vec<&str> = text.split_whitespace().collect();
    let slot_role = |w: &str| match w {
        "{a}" => Some(SlotRole::Original),
        "{b}" => Some(SlotRole::Replacement),
        _ => None,
    };

    let mut rest = &words[..];
    let lead_stem = if !rest.is_empty() && slot_role(rest[0]).is_none() {
        let stem = rest[0].to_string();
        rest = &rest[1..];
        Some(stem)
    } else {
        None
    };

    let first_slot = rest.first().and_then(|w| slot_role(w)).ok_or_else(bad)?;
    rest = &rest[1..];
    let mid_end = rest
        .iter()
        .position(|w| slot_role(w).is_some())
        .ok_or_else(bad)?;
    if mid_end == 0 {
        return Err(bad());
    }
    let mid_literals: Vec<String> = rest[..mid_end].iter().map(|w| w.to_string()).collect();
    let second_slot = slot_role(rest[mid_end]).ok_or_else(bad)?;
    if rest.len() != mid_end + 1 || first_slot == second_slot {
        return Err(bad());
    }

    Ok(SubstitutePattern {
        lead_stem,
        first_slot,
        mid_literals,
        second_slot,
        text: text.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses_and_has_18_signals() {
        let rules = RuleSet::builtin();
        assert_eq!(rules.signals.len(), 18);
        assert!(rules.units.contains("cup"));
        assert!(rules.descriptors.contains("chopped"));
        assert!(rules.methods.heating.contains("bake"));
        assert!(!rules.methods.heating.contains("marinate"));
        assert!(rules.methods.chemical.contains("marinate"));
        assert_eq!(rules.substitute_patterns.len(), 6);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let rules = RuleSet::parse(
            "# header\n[units]\ncup # trailing\n\n[quantities]\n[descriptors]\n[methods.heating]\n[methods.mechanical]\n[methods.chemical]\n[signals]\nadd\n[triggers.up]\n[triggers.down]\n[triggers.delete]\n[triggers.add]\n[patterns.substitute]\n{b} instead of {a}\n",
        )
        .unwrap();
        assert!(rules.units.contains("cup"));
        assert_eq!(rules.signals, vec!["add"]);
    }

    #[test]
    fn entry_before_section_rejected() {
        let err = RuleSet::parse("cup\n[units]\n").unwrap_err();
        assert!(matches!(err, RuleError::EntryOutsideSection { line: 1 }));
    }

    #[test]
    fn missing_section_rejected() {
        let err = RuleSet::parse("[units]\ncup\n").unwrap_err();
        assert!(matches!(err, RuleError::MissingSection(_)));
    }

    #[test]
    fn malformed_pattern_rejected() {
        let text = "[units]\n[quantities]\n[descriptors]\n[methods.heating]\n[methods.mechanical]\n[methods.chemical]\n[signals]\n[triggers.up]\n[triggers.down]\n[triggers.delete]\n[triggers.add]\n[patterns.substitute]\nreplac {a} with {a}\n";
        assert!(matches!(
            RuleSet::parse(text).unwrap_err(),
            RuleError::BadPattern { .. }
        ));
    }
}
