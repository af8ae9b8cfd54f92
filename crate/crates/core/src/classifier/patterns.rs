use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ClassifierError, Result};

/// Bumped whenever extraction logic changes in a way that alters vectors.
pub const EXTRACTOR_VERSION: u32 = 1;

/// Detector names that take a phrase list.
pub const PHRASE_DETECTORS: [&str; 7] = [
    "time_criticality",
    "past_tense",
    "future_tense",
    "coordination",
    "personal_request",
    "importance",
    "marketing",
];

/// Case-insensitive phrase lists per detector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, Vec<String>>", into = "BTreeMap<String, Vec<String>>")]
pub struct PatternSet {
    lists: BTreeMap<String, Vec<String>>,
}

impl Default for PatternSet {
    fn default() -> Self {
        let seed: [(&str, &[&str]); 7] = [
            (
                "time_criticality",
                &["happening soon", "right away", "as soon as possible", "need this soon", "deadline is"],
            ),
            ("past_tense", &["we met", "meeting went", "took care of", "meeting yesterday"]),
            ("future_tense", &["this week", "are you going to", "when are you"]),
            ("coordination", &["get together", "can we meet", "coordinate with"]),
            (
                "personal_request",
                &["will you", "are you", "can you", "i need", "take care of", "need to know"],
            ),
            ("importance", &["is important", "is critical"]),
            ("marketing", &["free!", "only $", "limited offer"]),
        ];
        Self {
            lists: seed
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.iter().map(|p| p.to_string()).collect()))
                .collect(),
        }
    }
}

impl TryFrom<BTreeMap<String, Vec<String>>> for PatternSet {
    type Error = ClassifierError;

    fn try_from(lists: BTreeMap<String, Vec<String>>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (name, phrases) in lists {
            if !PHRASE_DETECTORS.contains(&name.as_str()) {
                return Err(ClassifierError::Patterns(format!("unknown detector `{name}`")));
            }
            let mut cleaned: Vec<String> = Vec::new();
            for p in phrases {
                let p = p.trim().to_lowercase();
                if p.is_empty() {
                    return Err(ClassifierError::Patterns(format!("empty phrase for `{name}`")));
                }
                if !cleaned.contains(&p) {
                    cleaned.push(p);
                }
            }
            out.insert(name, cleaned);
        }
        for name in PHRASE_DETECTORS {
            out.entry(name.to_string()).or_default();
        }
        Ok(Self { lists: out })
    }
}

impl From<PatternSet> for BTreeMap<String, Vec<String>> {
    fn from(p: PatternSet) -> Self {
        p.lists
    }
}

impl PatternSet {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The default lists plus every phrase in `extra`.
    pub fn extended(&self, extra: &PatternSet) -> Self {
        let mut lists = self.lists.clone();
        for (name, phrases) in &extra.lists {
            let list = lists.entry(name.clone()).or_default();
            for p in phrases {
                if !list.contains(p) {
                    list.push(p.clone());
                }
            }
        }
        Self { lists }
    }

    pub fn phrases(&self, detector: &str) -> &[String] {
        self.lists.get(detector).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Identifies the extraction behavior: extractor version plus the
    /// exact phrase lists.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(EXTRACTOR_VERSION.to_le_bytes());
        h.update(serde_json::to_vec(&self.lists).expect("pattern lists serialize"));
        hex::encode(&h.finalize()[..16])
    }
}

/// Finds `phrase` in lowercase `text`, requiring that alphanumeric ends of
/// the phrase are not glued to neighboring alphanumerics.
pub(crate) fn contains_phrase(text: &str, phrase: &str) -> bool {
    let starts_alnum = phrase.chars().next().is_some_and(char::is_alphanumeric);
    let ends_alnum = phrase.chars().last().is_some_and(char::is_alphanumeric);
    let mut from = 0;
    while let Some(pos) = text[from..].find(phrase) {
        let start = from + pos;
        let end = start + phrase.len();
        let before_ok = !starts_alnum || !text[..start].chars().last().is_some_and(char::is_alphanumeric);
        let after_ok = !ends_alnum || !text[end..].chars().next().is_some_and(char::is_alphanumeric);
        if before_ok && after_ok {
            return true;
        }
        from = start + text[start..].chars().next().map_or(1, char::len_utf8);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phrase_boundaries() {
        assert!(contains_phrase("please reply as soon as possible.", "as soon as possible"));
        assert!(!contains_phrase("we meter things", "we met"));
        assert!(contains_phrase("totally free! today", "free!"));
        assert!(contains_phrase("only $5", "only $"));
        assert!(!contains_phrase("scan you", "can you"));
    }

    #[test]
    fn file_validation_and_fingerprint() {
        let extra = PatternSet::from_json(r#"{"importance": ["Is Urgent"]}"#).unwrap();
        assert_eq!(extra.phrases("importance"), ["is urgent"]);
        assert!(extra.phrases("marketing").is_empty());
        assert!(PatternSet::from_json(r#"{"mood": ["x"]}"#).is_err());
        let merged = PatternSet::default().extended(&extra);
        assert!(merged.phrases("importance").contains(&"is urgent".to_string()));
        assert_ne!(merged.fingerprint(), PatternSet::default().fingerprint());
        assert_eq!(PatternSet::default().fingerprint(), PatternSet::default().fingerprint());
    }
}
