use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::LazyLock;

use chrono::Timelike;
use regex::Regex;
use serde::{Deserialize, Serialize};

use super::message::{MessageDoc, Priority};
use super::patterns::{contains_phrase, PatternSet};
use super::{ClassifierError, Result};

/// Handcrafted detectors. Their vocabulary ids are their position in
/// [`Detector::ALL`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Detector {
    SenderAlias,
    SenderSameOrg,
    SenderOnUserList,
    SenderRepliedTo,
    RecipientsUserOnly,
    RecipientsSmallGroup,
    RecipientsMailingList,
    TimeCriticality,
    ImpliedMeetingTime,
    PastTense,
    FutureTense,
    FutureDate,
    Coordination,
    PersonalRequest,
    Importance,
    PriorityHigh,
    PriorityLow,
    Length0,
    Length1,
    Length2,
    Length3,
    Length4,
    Attachment,
    TimeNight,
    TimeMorning,
    TimeAfternoon,
    TimeEvening,
    JunkNonAlnum,
    Marketing,
}

impl Detector {
    pub const ALL: [Detector; 29] = [
        Self::SenderAlias,
        Self::SenderSameOrg,
        Self::SenderOnUserList,
        Self::SenderRepliedTo,
        Self::RecipientsUserOnly,
        Self::RecipientsSmallGroup,
        Self::RecipientsMailingList,
        Self::TimeCriticality,
        Self::ImpliedMeetingTime,
        Self::PastTense,
        Self::FutureTense,
        Self::FutureDate,
        Self::Coordination,
        Self::PersonalRequest,
        Self::Importance,
        Self::PriorityHigh,
        Self::PriorityLow,
        Self::Length0,
        Self::Length1,
        Self::Length2,
        Self::Length3,
        Self::Length4,
        Self::Attachment,
        Self::TimeNight,
        Self::TimeMorning,
        Self::TimeAfternoon,
        Self::TimeEvening,
        Self::JunkNonAlnum,
        Self::Marketing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SenderAlias => "sender_alias",
            Self::SenderSameOrg => "sender_same_org",
            Self::SenderOnUserList => "sender_on_user_list",
            Self::SenderRepliedTo => "sender_replied_to",
            Self::RecipientsUserOnly => "recipients_user_only",
            Self::RecipientsSmallGroup => "recipients_small_group",
            Self::RecipientsMailingList => "recipients_mailing_list",
            Self::TimeCriticality => "time_criticality",
            Self::ImpliedMeetingTime => "implied_meeting_time",
            Self::PastTense => "past_tense",
            Self::FutureTense => "future_tense",
            Self::FutureDate => "future_date",
            Self::Coordination => "coordination",
            Self::PersonalRequest => "personal_request",
            Self::Importance => "importance",
            Self::PriorityHigh => "priority_high",
            Self::PriorityLow => "priority_low",
            Self::Length0 => "length_0",
            Self::Length1 => "length_1",
            Self::Length2 => "length_2",
            Self::Length3 => "length_3",
            Self::Length4 => "length_4",
            Self::Attachment => "attachment",
            Self::TimeNight => "time_night",
            Self::TimeMorning => "time_morning",
            Self::TimeAfternoon => "time_afternoon",
            Self::TimeEvening => "time_evening",
            Self::JunkNonAlnum => "junk_nonalnum",
            Self::Marketing => "marketing",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.name() == name)
    }

    pub fn id(self) -> u32 {
        Self::ALL.iter().position(|d| *d == self).expect("listed") as u32
    }

    /// Length bucket over body words: 0, 1-20, 21-100, 101-400, more.
    pub fn length_bucket(words: usize) -> Self {
        match words {
            0 => Self::Length0,
            1..=20 => Self::Length1,
            21..=100 => Self::Length2,
            101..=400 => Self::Length3,
            _ => Self::Length4,
        }
    }

    /// Composition hour: night 0-5, morning 6-11, afternoon 12-17, evening 18-23.
    pub fn time_bucket(hour: u32) -> Self {
        match hour {
            0..=5 => Self::TimeNight,
            6..=11 => Self::TimeMorning,
            12..=17 => Self::TimeAfternoon,
            _ => Self::TimeEvening,
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

static WEEKDAY: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b(monday|tuesday|wednesday|thursday|friday|saturday|sunday)\b").unwrap());
static CLOCK: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b(\d{1,2}:\d{2}(\s?[ap]m)?|\d{1,2}\s?[ap]m)\b").unwrap());
static NUMERIC_DATE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b(\d{1,2}/\d{1,2}(/\d{2,4})?|\d{4}-\d{2}-\d{2})\b").unwrap());
static BY_TIME: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"\bby\s+(\d{1,2}(:\d{2})?\s?([ap]m)?|noon|tonight|tomorrow|today|eod|end of (the )?day|monday|tuesday|wednesday|thursday|friday|saturday|sunday|\d{1,2}/\d{1,2})\b",
    )
    .unwrap()
});
static MEETING_WORD: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b(meet|meeting|call|lunch|appointment|conference)\b").unwrap());
static QUESTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\w\?(\s|$)").unwrap());

/// Lowercase alphanumeric runs.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

/// What fired on a message, before mapping to vocabulary ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtractedFeatures {
    pub detectors: BTreeSet<Detector>,
    pub words: BTreeSet<String>,
}

/// Feature extractor bound to a phrase set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extractor {
    patterns: PatternSet,
}

impl Extractor {
    pub fn new(patterns: PatternSet) -> Self {
        Self { patterns }
    }

    pub fn patterns(&self) -> &PatternSet {
        &self.patterns
    }

    pub fn fingerprint(&self) -> String {
        self.patterns.fingerprint()
    }

    fn phrase_hit(&self, text: &str, detector: Detector) -> bool {
        self.patterns.phrases(detector.name()).iter().any(|p| contains_phrase(text, p))
    }

    /// Detectors that fire on free text alone.
    pub fn text_detectors(&self, text: &str) -> BTreeSet<Detector> {
        let lower = text.to_lowercase();
        let mut out = BTreeSet::new();
        let mut fire = |d: Detector, on: bool| {
            if on {
                out.insert(d);
            }
        };
        let weekday = WEEKDAY.is_match(&lower);
        let clock = CLOCK.is_match(&lower);
        let date = NUMERIC_DATE.is_match(&lower);
        fire(
            Detector::TimeCriticality,
            self.phrase_hit(&lower, Detector::TimeCriticality) || BY_TIME.is_match(&lower),
        );
        fire(Detector::ImpliedMeetingTime, MEETING_WORD.is_match(&lower) && (weekday || clock));
        fire(Detector::PastTense, self.phrase_hit(&lower, Detector::PastTense));
        fire(Detector::FutureTense, self.phrase_hit(&lower, Detector::FutureTense));
        fire(Detector::FutureDate, weekday || clock || date);
        fire(Detector::Coordination, self.phrase_hit(&lower, Detector::Coordination));
        fire(
            Detector::PersonalRequest,
            self.phrase_hit(&lower, Detector::PersonalRequest) || QUESTION.is_match(&lower),
        );
        fire(Detector::Importance, self.phrase_hit(&lower, Detector::Importance));
        fire(Detector::Marketing, self.phrase_hit(&lower, Detector::Marketing));

        let visible: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let odd = visible.iter().filter(|c| !c.is_alphanumeric()).count();
        fire(Detector::JunkNonAlnum, visible.len() >= 20 && odd as f64 / visible.len() as f64 > 0.2);
        out
    }

    pub fn extract(&self, msg: &MessageDoc) -> ExtractedFeatures {
        let text = format!("{}\n{}", msg.subject, msg.body);
        let mut detectors = self.text_detectors(&text);
        let mut fire = |d: Detector, on: bool| {
            if on {
                detectors.insert(d);
            }
        };
        fire(Detector::SenderAlias, msg.sender.is_alias);
        fire(Detector::SenderSameOrg, msg.sender.same_org);
        fire(Detector::SenderOnUserList, msg.sender.on_user_list);
        fire(Detector::SenderRepliedTo, msg.sender.replied_to);
        fire(Detector::RecipientsUserOnly, msg.recipients.to_user_only);
        fire(Detector::RecipientsMailingList, msg.recipients.mailing_list);
        fire(
            Detector::RecipientsSmallGroup,
            !msg.recipients.mailing_list && (2..=5).contains(&msg.recipients.addresses.len()),
        );
        fire(Detector::PriorityHigh, msg.priority == Priority::High);
        fire(Detector::PriorityLow, msg.priority == Priority::Low);
        fire(Detector::Attachment, msg.attachments > 0);
        detectors.insert(Detector::length_bucket(tokenize(&msg.body).count()));
        detectors.insert(Detector::time_bucket(msg.sent_time.hour()));

        let words = tokenize(&msg.subject).chain(tokenize(&msg.body)).collect();
        ExtractedFeatures { detectors, words }
    }
}

/// A vocabulary entry: a handcrafted detector or a word token.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    Detector(Detector),
    Word(String),
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Detector(d) => write!(f, "d:{d}"),
            Self::Word(w) => write!(f, "w:{w}"),
        }
    }
}

impl std::str::FromStr for Feature {
    type Err = ClassifierError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(name) = s.strip_prefix("d:") {
            Detector::from_name(name)
                .map(Self::Detector)
                .ok_or_else(|| ClassifierError::Version(format!("unknown detector `{name}`")))
        } else if let Some(w) = s.strip_prefix("w:") {
            Ok(Self::Word(w.to_string()))
        } else {
            Err(ClassifierError::Version(format!("bad feature descriptor `{s}`")))
        }
    }
}

/// Sparse binary vector: ids of the features present, strictly increasing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub indices: Vec<u32>,
}

impl FeatureVector {
    pub fn contains(&self, id: u32) -> bool {
        self.indices.binary_search(&id).is_ok()
    }
}

/// Vocabulary (id = position) and the ids kept by selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FeatureSpecFile", into = "FeatureSpecFile")]
pub struct FeatureSpec {
    vocabulary: Vec<Feature>,
    selected: Vec<u32>,
    word_ids: HashMap<String, u32>,
    positions: HashMap<u32, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureSpecFile {
    pub vocabulary: Vec<String>,
    pub selected: Vec<u32>,
}

impl TryFrom<FeatureSpecFile> for FeatureSpec {
    type Error = ClassifierError;

    fn try_from(f: FeatureSpecFile) -> Result<Self> {
        let vocabulary = f.vocabulary.iter().map(|s| s.parse()).collect::<Result<Vec<Feature>>>()?;
        Self::new(vocabulary, f.selected)
    }
}

impl From<FeatureSpec> for FeatureSpecFile {
    fn from(s: FeatureSpec) -> Self {
        Self {
            vocabulary: s.vocabulary.iter().map(ToString::to_string).collect(),
            selected: s.selected,
        }
    }
}

impl FeatureSpec {
    pub fn new(vocabulary: Vec<Feature>, mut selected: Vec<u32>) -> Result<Self> {
        for (i, d) in Detector::ALL.iter().enumerate() {
            if vocabulary.get(i) != Some(&Feature::Detector(*d)) {
                return Err(ClassifierError::Version(format!("vocabulary id {i} is not detector `{d}`")));
            }
        }
        selected.sort_unstable();
        selected.dedup();
        if selected.iter().any(|&id| id as usize >= vocabulary.len()) {
            return Err(ClassifierError::Version("selected id outside the vocabulary".into()));
        }
        let mut word_ids = HashMap::new();
        for (i, f) in vocabulary.iter().enumerate().skip(Detector::ALL.len()) {
            match f {
                Feature::Word(w) => {
                    if word_ids.insert(w.clone(), i as u32).is_some() {
                        return Err(ClassifierError::Version(format!("duplicate word `{w}`")));
                    }
                }
                Feature::Detector(d) => {
                    return Err(ClassifierError::Version(format!("detector `{d}` listed twice")));
                }
            }
        }
        let positions = selected.iter().enumerate().map(|(p, &id)| (id, p)).collect();
        Ok(Self { vocabulary, selected, word_ids, positions })
    }

    /// Every detector followed by the words seen in `docs`, sorted, with
    /// everything selected.
    pub fn from_documents<'a>(docs: impl IntoIterator<Item = &'a ExtractedFeatures>) -> Self {
        let words: BTreeSet<&str> = docs.into_iter().flat_map(|d| d.words.iter().map(String::as_str)).collect();
        let vocabulary: Vec<Feature> = Detector::ALL
            .into_iter()
            .map(Feature::Detector)
            .chain(words.into_iter().map(|w| Feature::Word(w.to_string())))
            .collect();
        let all = (0..vocabulary.len() as u32).collect();
        Self::new(vocabulary, all).expect("well-formed by construction")
    }

    pub fn vocabulary(&self) -> &[Feature] {
        &self.vocabulary
    }

    pub fn selected(&self) -> &[u32] {
        &self.selected
    }

    pub fn with_selection(&self, selected: Vec<u32>) -> Result<Self> {
        Self::new(self.vocabulary.clone(), selected)
    }

    /// Vocabulary ids that fire, over the whole vocabulary.
    pub fn vectorize_all(&self, x: &ExtractedFeatures) -> FeatureVector {
        let mut indices: Vec<u32> = x
            .detectors
            .iter()
            .map(|d| d.id())
            .chain(x.words.iter().filter_map(|w| self.word_ids.get(w).copied()))
            .collect();
        indices.sort_unstable();
        FeatureVector { indices }
    }

    /// Vocabulary ids that fire and are selected.
    pub fn vectorize(&self, x: &ExtractedFeatures) -> FeatureVector {
        let mut v = self.vectorize_all(x);
        v.indices.retain(|id| self.positions.contains_key(id));
        v
    }

    /// Position of each selected id of `v` in the selected list.
    pub fn positions(&self, v: &FeatureVector) -> Vec<usize> {
        v.indices.iter().filter_map(|id| self.positions.get(id).copied()).collect()
    }
}

/// Features of `msg` under `spec`.
pub fn extract_features(extractor: &Extractor, spec: &FeatureSpec, msg: &MessageDoc) -> FeatureVector {
    spec.vectorize(&extractor.extract(msg))
}
