//! Synthetic labeled corpora with controlled detector-firing rates.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};

use super::{HarnessError, Result};
use crate::classifier::{Detector, Extractor, LabeledMessage, MessageDoc, PatternSet, Priority, Recipients, Sender};
use crate::rng::SimRng;

/// Per-class generation profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassProfile {
    pub name: String,
    pub count: usize,
    /// Probability that a message generated from this profile is built to
    /// fire the named detector. Length and composition-time detectors are
    /// driven by `body_words` and `hours` instead.
    pub rates: BTreeMap<String, f64>,
    /// Inclusive range of filler words in the body.
    pub body_words: [usize; 2],
    /// Relative weight of night, morning, afternoon, evening send times.
    pub hours: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    /// Size of the filler vocabulary shared by all classes.
    pub filler_words: usize,
    /// Extra words owned by each class.
    pub topic_words: usize,
    /// Chance that a filler slot takes one of the class's own words.
    pub topic_rate: f64,
    pub subject_words: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    pub seed: u64,
    pub classes: Vec<ClassProfile>,
    pub noise: NoiseSpec,
    /// Graded urgency. A message of the first class draws u ~ U(1 − overlap,
    /// 1), one of the second class u ~ U(0, overlap), and is generated from
    /// the profile blend u·first + (1 − u)·second. 0 keeps the classes pure;
    /// a positive value needs exactly two classes.
    #[serde(default)]
    pub overlap: f64,
}

fn rates(pairs: &[(Detector, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(d, r)| (d.name().to_string(), r)).collect()
}

impl Default for CorpusSpec {
    fn default() -> Self {
        use Detector::*;
        let high = rates(&[
            (SenderAlias, 0.05),
            (SenderSameOrg, 0.7),
            (SenderOnUserList, 0.4),
            (SenderRepliedTo, 0.5),
            (RecipientsUserOnly, 0.55),
            (RecipientsSmallGroup, 0.3),
            (RecipientsMailingList, 0.05),
            (TimeCriticality, 0.45),
            (ImpliedMeetingTime, 0.3),
            (PastTense, 0.1),
            (FutureTense, 0.25),
            (FutureDate, 0.3),
            (Coordination, 0.3),
            (PersonalRequest, 0.6),
            (Importance, 0.25),
            (PriorityHigh, 0.2),
            (PriorityLow, 0.01),
            (Attachment, 0.25),
            (JunkNonAlnum, 0.0),
            (Marketing, 0.0),
        ]);
        let low = rates(&[
            (SenderAlias, 0.3),
            (SenderSameOrg, 0.3),
            (SenderOnUserList, 0.1),
            (SenderRepliedTo, 0.15),
            (RecipientsUserOnly, 0.15),
            (RecipientsSmallGroup, 0.2),
            (RecipientsMailingList, 0.45),
            (TimeCriticality, 0.05),
            (ImpliedMeetingTime, 0.05),
            (PastTense, 0.15),
            (FutureTense, 0.1),
            (FutureDate, 0.15),
            (Coordination, 0.05),
            (PersonalRequest, 0.15),
            (Importance, 0.03),
            (PriorityHigh, 0.02),
            (PriorityLow, 0.1),
            (Attachment, 0.2),
            (JunkNonAlnum, 0.15),
            (Marketing, 0.25),
        ]);
        Self {
            seed: 1500,
            classes: vec![
                ClassProfile {
                    name: "high".into(),
                    count: 750,
                    rates: high,
                    body_words: [15, 120],
                    hours: [0.05, 0.45, 0.42, 0.08],
                },
                ClassProfile {
                    name: "low".into(),
                    count: 750,
                    rates: low,
                    body_words: [30, 300],
                    hours: [0.15, 0.3, 0.3, 0.25],
                },
            ],
            noise: NoiseSpec { filler_words: 800, topic_words: 40, topic_rate: 0.05, subject_words: [2, 6] },
            overlap: 0.25,
        }
    }
}

/// Detectors a profile may set a rate for.
pub fn injectable(d: Detector) -> bool {
    !matches!(
        d,
        Detector::Length0
            | Detector::Length1
            | Detector::Length2
            | Detector::Length3
            | Detector::Length4
            | Detector::TimeNight
            | Detector::TimeMorning
            | Detector::TimeAfternoon
            | Detector::TimeEvening
    )
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        if self.classes.is_empty() {
            return Err(HarnessError::Spec("corpus spec has no classes".into()));
        }
        for c in &self.classes {
            if !names.insert(c.name.as_str()) {
                return Err(HarnessError::Spec(format!("duplicate class `{}`", c.name)));
            }
            for (name, &r) in &c.rates {
                match Detector::from_name(name) {
                    Some(d) if injectable(d) => {}
                    _ => return Err(HarnessError::Spec(format!("`{name}` is not an injectable detector"))),
                }
                if !(0.0..=1.0).contains(&r) {
                    return Err(HarnessError::Spec(format!("rate for `{name}` in class `{}` is outside [0, 1]", c.name)));
                }
            }
            if c.body_words[0] > c.body_words[1] {
                return Err(HarnessError::Spec(format!("body_words range of `{}` is reversed", c.name)));
            }
            if c.hours.iter().any(|w| !w.is_finite() || *w < 0.0) || c.hours.iter().sum::<f64>() <= 0.0 {
                return Err(HarnessError::Spec(format!("hours weights of `{}` are invalid", c.name)));
            }
        }
        if !(0.0..=0.5).contains(&self.overlap) {
            return Err(HarnessError::Spec("overlap must lie in [0, 0.5]".into()));
        }
        if self.overlap > 0.0 && self.classes.len() != 2 {
            return Err(HarnessError::Spec("graded urgency (overlap > 0) needs exactly two classes".into()));
        }
        let n = &self.noise;
        if n.filler_words == 0 || !(0.0..=1.0).contains(&n.topic_rate) || n.subject_words[0] > n.subject_words[1] {
            return Err(HarnessError::Spec("invalid noise parameters".into()));
        }
        if n.topic_rate > 0.0 && n.topic_words == 0 {
            return Err(HarnessError::Spec("topic_rate is positive but topic_words is 0".into()));
        }
        Ok(())
    }
}

const JUNK: [&str; 5] = ["$$$", "!!!", "***", "%%%", ">>>"];

/// Phrases used to make each text detector fire. Every phrase fires exactly
/// its detector (implied meetings also fire the future-date detector) and
/// none mentions a meeting unless it is one.
struct PhraseBank {
    phrases: BTreeMap<Detector, Vec<String>>,
}

impl PhraseBank {
    fn new(extractor: &Extractor) -> Self {
        let mut candidates: BTreeMap<Detector, Vec<String>> = BTreeMap::new();
        for d in Detector::ALL {
            let list = extractor.patterns().phrases(d.name());
            if !list.is_empty() {
                candidates.insert(d, list.to_vec());
            }
        }
        let own = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        candidates.insert(
            Detector::ImpliedMeetingTime,
            own(&["lunch on friday", "meeting at 3pm", "call at 10:30", "meet on tuesday", "conference at 2pm"]),
        );
        candidates.insert(Detector::FutureDate, own(&["on thursday", "at 4:15", "on 3/14", "after 2001-04-02"]));

        let phrases = candidates
            .into_iter()
            .map(|(d, list)| {
                let mut expected = BTreeSet::from([d]);
                if d == Detector::ImpliedMeetingTime {
                    expected.insert(Detector::FutureDate);
                }
                let kept = list
                    .into_iter()
                    .filter(|p| {
                        extractor.text_detectors(p) == expected
                            && (d == Detector::ImpliedMeetingTime
                                || !extractor
                                    .text_detectors(&format!("{p} on monday"))
                                    .contains(&Detector::ImpliedMeetingTime))
                    })
                    .collect();
                (d, kept)
            })
            .collect();
        Self { phrases }
    }

    fn get(&self, d: Detector) -> &[String] {
        self.phrases.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }
}

fn pseudo_word(rng: &mut SimRng) -> String {
    const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
    const VOWELS: &[u8] = b"aeiou";
    let syllables = 2 + rng.below(2);
    let mut w = String::with_capacity(syllables * 2);
    for _ in 0..syllables {
        w.push(CONSONANTS[rng.below(CONSONANTS.len())] as char);
        w.push(VOWELS[rng.below(VOWELS.len())] as char);
    }
    w
}

struct Vocabulary {
    shared: Vec<String>,
    topics: Vec<Vec<String>>,
}

impl Vocabulary {
    fn new(rng: &mut SimRng, spec: &CorpusSpec) -> Self {
        let mut seen = BTreeSet::new();
        let mut fresh = |rng: &mut SimRng, n: usize| {
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let w = pseudo_word(rng);
                if seen.insert(w.clone()) {
                    out.push(w);
                }
            }
            out
        };
        let shared = fresh(rng, spec.noise.filler_words);
        let topics = spec.classes.iter().map(|_| fresh(rng, spec.noise.topic_words)).collect();
        Self { shared, topics }
    }

    fn word<'a>(&'a self, rng: &mut SimRng, class: &Mixture, topic_rate: f64) -> &'a str {
        let topic = rng.bernoulli(topic_rate);
        let owner = class.topic_owner(rng);
        if topic && !self.topics[owner].is_empty() {
            rng.choose(&self.topics[owner])
        } else {
            rng.choose(&self.shared)
        }
    }
}

/// A class profile, or a blend of two for graded messages.
struct Mixture {
    rates: BTreeMap<Detector, f64>,
    body_words: [f64; 2],
    hours: [f64; 4],
    /// (class index, weight) pairs for topic words
    owners: Vec<(usize, f64)>,
}

impl Mixture {
    fn of(profile: &ClassProfile, index: usize) -> Self {
        Self {
            rates: profile.rates.iter().map(|(k, &v)| (Detector::from_name(k).expect("validated"), v)).collect(),
            body_words: [profile.body_words[0] as f64, profile.body_words[1] as f64],
            hours: profile.hours,
            owners: vec![(index, 1.0)],
        }
    }

    /// `w` of `a` and `1 − w` of `b`.
    fn blend(a: &Mixture, b: &Mixture, w: f64) -> Self {
        let lerp = |x: f64, y: f64| w * x + (1.0 - w) * y;
        let keys: BTreeSet<Detector> = a.rates.keys().chain(b.rates.keys()).copied().collect();
        let rate = |m: &Mixture, d| m.rates.get(&d).copied().unwrap_or(0.0);
        Self {
            rates: keys.into_iter().map(|d| (d, lerp(rate(a, d), rate(b, d)))).collect(),
            body_words: [lerp(a.body_words[0], b.body_words[0]), lerp(a.body_words[1], b.body_words[1])],
            hours: std::array::from_fn(|i| lerp(a.hours[i], b.hours[i])),
            owners: vec![(a.owners[0].0, w), (b.owners[0].0, 1.0 - w)],
        }
    }

    fn topic_owner(&self, rng: &mut SimRng) -> usize {
        if self.owners.len() == 1 {
            return self.owners[0].0;
        }
        let weights: Vec<f64> = self.owners.iter().map(|o| o.1).collect();
        self.owners[rng.categorical(&weights)].0
    }
}

struct Generator<'a> {
    spec: &'a CorpusSpec,
    extractor: Extractor,
    bank: PhraseBank,
    vocab: Vocabulary,
}

impl<'a> Generator<'a> {
    fn new(spec: &'a CorpusSpec, rng: &mut SimRng) -> Result<Self> {
        spec.validate()?;
        let extractor = Extractor::new(PatternSet::default());
        let bank = PhraseBank::new(&extractor);
        for c in &spec.classes {
            for (name, &r) in &c.rates {
                let d = Detector::from_name(name).expect("validated");
                let needs_phrase = is_text_detector(d) && d != Detector::JunkNonAlnum;
                if needs_phrase && r > 0.0 && bank.get(d).is_empty() {
                    return Err(HarnessError::Spec(format!("no usable phrase for detector `{name}`")));
                }
            }
        }
        let vocab = Vocabulary::new(rng, spec);
        Ok(Self { spec, extractor, bank, vocab })
    }

    fn message(&self, rng: &mut SimRng, mix: &Mixture) -> MessageDoc {
        let mut fire = BTreeSet::new();
        for d in Detector::ALL.into_iter().filter(|&d| injectable(d)) {
            if rng.bernoulli(mix.rates.get(&d).copied().unwrap_or(0.0)) {
                fire.insert(d);
            }
        }
        let on = |d| fire.contains(&d);

        let day = NaiveDate::from_ymd_opt(2001, 3, 5).expect("valid date") + Duration::days(rng.below(60) as i64);
        let bucket = rng.categorical(&mix.hours);
        let hour = [0, 6, 12, 18][bucket] + rng.below(6) as u32;
        let sent_time = day.and_hms_opt(hour, rng.below(60) as u32, 0).expect("valid time");
        let mut msg = MessageDoc::new(sent_time);

        let who = rng.choose(&self.vocab.shared).to_string();
        msg.sender = Sender {
            address: if on(Detector::SenderSameOrg) {
                format!("{who}@ourco.example")
            } else {
                format!("{who}@elsewhere.example")
            },
            is_alias: on(Detector::SenderAlias),
            same_org: on(Detector::SenderSameOrg),
            on_user_list: on(Detector::SenderOnUserList),
            replied_to: on(Detector::SenderRepliedTo),
        };
        let others = |rng: &mut SimRng, n: usize| -> Vec<String> {
            (0..n).map(|_| format!("{}@ourco.example", rng.choose(&self.vocab.shared))).collect()
        };
        msg.recipients = if on(Detector::RecipientsMailingList) {
            Recipients { addresses: vec!["team-list@ourco.example".into()], to_user_only: false, mailing_list: true }
        } else if on(Detector::RecipientsSmallGroup) {
            let mut a = vec!["me@ourco.example".to_string()];
            let n = 1 + rng.below(4);
            a.extend(others(rng, n));
            Recipients { addresses: a, to_user_only: false, mailing_list: false }
        } else if on(Detector::RecipientsUserOnly) {
            Recipients { addresses: vec!["me@ourco.example".into()], to_user_only: true, mailing_list: false }
        } else {
            let n = 6 + rng.below(7);
            Recipients { addresses: others(rng, n), to_user_only: false, mailing_list: false }
        };
        msg.priority = if on(Detector::PriorityHigh) {
            Priority::High
        } else if on(Detector::PriorityLow) {
            Priority::Low
        } else {
            Priority::None
        };
        msg.attachments = if on(Detector::Attachment) { 1 + rng.below(3) as u32 } else { 0 };

        let topic_rate = self.spec.noise.topic_rate;
        let [s0, s1] = self.spec.noise.subject_words;
        let subject_len = s0 + rng.below(s1 - s0 + 1);
        msg.subject = (0..subject_len).map(|_| self.vocab.word(rng, mix, topic_rate)).collect::<Vec<_>>().join(" ");

        let lo = mix.body_words[0].round() as usize;
        let hi = (mix.body_words[1].round() as usize).max(lo);
        let body_len = lo + rng.below(hi - lo + 1);
        let mut sentences: Vec<String> = Vec::new();
        let mut left = body_len;
        while left > 0 {
            let n = left.min(6 + rng.below(7));
            sentences.push((0..n).map(|_| self.vocab.word(rng, mix, topic_rate)).collect::<Vec<_>>().join(" "));
            left -= n;
        }
        for d in fire.iter().copied().filter(|&d| is_text_detector(d) && d != Detector::JunkNonAlnum) {
            let phrase = rng.choose(self.bank.get(d)).clone();
            let at = rng.below(sentences.len() + 1);
            sentences.insert(at, phrase);
        }
        msg.body = sentences.join(". ");
        if on(Detector::JunkNonAlnum) {
            while !self.extractor.text_detectors(&format!("{}\n{}", msg.subject, msg.body)).contains(&Detector::JunkNonAlnum) {
                msg.body.push(' ');
                msg.body.push_str(rng.choose(&JUNK));
            }
        }
        msg
    }
}

fn is_text_detector(d: Detector) -> bool {
    matches!(
        d,
        Detector::TimeCriticality
            | Detector::ImpliedMeetingTime
            | Detector::PastTense
            | Detector::FutureTense
            | Detector::FutureDate
            | Detector::Coordination
            | Detector::PersonalRequest
            | Detector::Importance
            | Detector::JunkNonAlnum
            | Detector::Marketing
    )
}

/// Labeled messages, classes in spec order, each class's messages then
/// interleaved by a seeded shuffle.
pub fn gen_corpus(spec: &CorpusSpec) -> Result<Vec<LabeledMessage>> {
    let rng = SimRng::new(spec.seed);
    let mut vocab_rng = rng.fork(0);
    let generator = Generator::new(spec, &mut vocab_rng)?;
    let pure: Vec<Mixture> = spec.classes.iter().enumerate().map(|(i, c)| Mixture::of(c, i)).collect();
    let mut out = Vec::new();
    for (i, class) in spec.classes.iter().enumerate() {
        let mut crng = rng.fork(1 + i as u64);
        for _ in 0..class.count {
            let message = if spec.overlap > 0.0 {
                let u = if i == 0 { 1.0 - spec.overlap * crng.uniform() } else { spec.overlap * crng.uniform() };
                generator.message(&mut crng, &Mixture::blend(&pure[0], &pure[1], u))
            } else {
                generator.message(&mut crng, &pure[i])
            };
            out.push(LabeledMessage { label: class.name.clone(), score: None, message });
        }
    }
    let mut order_rng = rng.fork(u32::MAX as u64);
    order_rng.shuffle(&mut out);
    Ok(out)
}

/// Messages drawn from the same distribution as `gen_corpus` (class chosen
/// in proportion to the class counts, urgency u as described under
/// `overlap`), each with an assessed score 1 + 99·u plus Gaussian noise,
/// clipped to [1, 100]. Needs exactly two classes.
pub fn gen_scored_corpus(spec: &CorpusSpec, count: usize, score_noise: f64) -> Result<Vec<LabeledMessage>> {
    if spec.classes.len() != 2 {
        return Err(HarnessError::Spec("scored corpora need exactly two classes".into()));
    }
    if !(score_noise.is_finite() && score_noise >= 0.0) {
        return Err(HarnessError::Spec("score noise must be non-negative".into()));
    }
    let weights = [spec.classes[0].count as f64, spec.classes[1].count as f64];
    if weights.contains(&0.0) {
        return Err(HarnessError::Spec("scored corpora need both classes to have a positive count".into()));
    }
    let rng = SimRng::new(spec.seed);
    let mut vocab_rng = rng.fork(0);
    let generator = Generator::new(spec, &mut vocab_rng)?;
    let high = Mixture::of(&spec.classes[0], 0);
    let low = Mixture::of(&spec.classes[1], 1);
    let mut srng = rng.fork(u32::MAX as u64 + 1);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let k = srng.categorical(&weights);
        let spread = spec.overlap * srng.uniform();
        let u = if k == 0 { 1.0 - spread } else { spread };
        let message = generator.message(&mut srng, &Mixture::blend(&high, &low, u));
        let score = (1.0 + 99.0 * u + score_noise * srng.normal()).clamp(1.0, 100.0);
        out.push(LabeledMessage { label: spec.classes[k].name.clone(), score: Some(score), message });
    }
    Ok(out)
}

/// Splits off `per_class` held-out messages of every label, chosen by a
/// seeded shuffle. Both halves keep corpus order.
pub fn holdout_split(
    corpus: &[LabeledMessage],
    per_class: usize,
    seed: u64,
) -> Result<(Vec<LabeledMessage>, Vec<LabeledMessage>)> {
    let mut by_label: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, m) in corpus.iter().enumerate() {
        by_label.entry(&m.label).or_default().push(i);
    }
    let mut rng = SimRng::new(seed);
    let mut test = BTreeSet::new();
    for (label, mut idx) in by_label {
        if idx.len() <= per_class {
            return Err(HarnessError::Spec(format!(
                "class `{label}` has {} messages, not enough to hold out {per_class}",
                idx.len()
            )));
        }
        rng.shuffle(&mut idx);
        test.extend(idx.into_iter().take(per_class));
    }
    let (mut train, mut held) = (Vec::new(), Vec::new());
    for (i, m) in corpus.iter().enumerate() {
        if test.contains(&i) {
            held.push(m.clone());
        } else {
            train.push(m.clone());
        }
    }
    Ok((train, held))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::write_corpus;

    fn small(count: usize) -> CorpusSpec {
        let mut s = CorpusSpec::default();
        for c in &mut s.classes {
            c.count = count;
        }
        s
    }

    #[test]
    fn every_phrase_detector_has_phrases() {
        let bank = PhraseBank::new(&Extractor::default());
        for d in Detector::ALL.into_iter().filter(|&d| is_text_detector(d) && d != Detector::JunkNonAlnum) {
            assert!(!bank.get(d).is_empty(), "{d}");
        }
    }

    #[test]
    fn rate_one_always_fires() {
        let mut spec = small(60);
        spec.overlap = 0.0;
        spec.classes[0].rates.insert("time_criticality".into(), 1.0);
        let corpus = gen_corpus(&spec).unwrap();
        let ex = Extractor::default();
        for m in corpus.iter().filter(|m| m.label == "high") {
            assert!(ex.extract(&m.message).detectors.contains(&Detector::TimeCriticality));
        }
    }

    #[test]
    fn firing_rates_match_within_binomial_noise() {
        let spec = small(400);
        let corpus = gen_corpus(&spec).unwrap();
        let ex = Extractor::default();
        // detectors that no other injection can trigger
        let clean = [
            Detector::TimeCriticality,
            Detector::PastTense,
            Detector::Coordination,
            Detector::Importance,
            Detector::Marketing,
            Detector::JunkNonAlnum,
            Detector::SenderSameOrg,
            Detector::PriorityHigh,
            Detector::Attachment,
            Detector::RecipientsMailingList,
        ];
        for (k, class) in spec.classes.iter().enumerate() {
            let msgs: Vec<_> = corpus.iter().filter(|m| m.label == class.name).collect();
            let n = msgs.len() as f64;
            // mean blend weight on the first profile
            let w = if k == 0 { 1.0 - spec.overlap / 2.0 } else { spec.overlap / 2.0 };
            for d in clean {
                let rate = w * spec.classes[0].rates[d.name()] + (1.0 - w) * spec.classes[1].rates[d.name()];
                let hits = msgs.iter().filter(|m| ex.extract(&m.message).detectors.contains(&d)).count() as f64;
                let sd = (rate * (1.0 - rate) / n).sqrt();
                assert!((hits / n - rate).abs() <= 4.0 * sd + 1e-12, "{} {d}: {} vs {rate}", class.name, hits / n);
            }
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        let spec = small(30);
        assert_eq!(write_corpus(&gen_corpus(&spec).unwrap()), write_corpus(&gen_corpus(&spec).unwrap()));
        let mut other = spec.clone();
        other.seed += 1;
        assert_ne!(write_corpus(&gen_corpus(&spec).unwrap()), write_corpus(&gen_corpus(&other).unwrap()));
    }

    #[test]
    fn counts_and_validation() {
        let mut spec = small(5);
        spec.classes[1].count = 3;
        let corpus = gen_corpus(&spec).unwrap();
        assert_eq!(corpus.iter().filter(|m| m.label == "low").count(), 3);
        spec.classes[0].rates.insert("length0".into(), 0.5);
        assert!(gen_corpus(&spec).is_err());
        let mut spec = small(5);
        spec.classes[0].rates.insert("marketing".into(), 1.5);
        assert!(gen_corpus(&spec).is_err());
    }

    #[test]
    fn holdout_is_balanced_and_disjoint() {
        let corpus = gen_corpus(&small(20)).unwrap();
        let (train, test) = holdout_split(&corpus, 5, 3).unwrap();
        assert_eq!(train.len() + test.len(), corpus.len());
        assert_eq!(test.iter().filter(|m| m.label == "high").count(), 5);
        assert_eq!(test.iter().filter(|m| m.label == "low").count(), 5);
        assert!(holdout_split(&corpus, 20, 3).is_err());
    }

    #[test]
    fn scored_corpus_labels_follow_scores() {
        let spec = CorpusSpec::default();
        let scored = gen_scored_corpus(&spec, 50, 0.0).unwrap();
        for m in &scored {
            let s = m.score.unwrap();
            assert!((1.0..=100.0).contains(&s));
            let u = (s - 1.0) / 99.0;
            if m.label == "high" {
                assert!(u >= 1.0 - spec.overlap - 1e-12, "{s}");
            } else {
                assert!(u <= spec.overlap + 1e-12, "{s}");
            }
        }
    }
}
