use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sender {
    pub address: String,
    pub is_alias: bool,
    pub same_org: bool,
    pub on_user_list: bool,
    pub replied_to: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Recipients {
    pub addresses: Vec<String>,
    pub to_user_only: bool,
    pub mailing_list: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Priority {
    #[default]
    None,
    Low,
    High,
}

/// An email-like message. `forwarded_thread` holds quoted or forwarded
/// text, which is ignored by the word and length features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageDoc {
    #[serde(default)]
    pub sender: Sender,
    #[serde(default)]
    pub recipients: Recipients,
    #[serde(default)]
    pub subject: String,
    #[serde(default)]
    pub body: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub forwarded_thread: String,
    pub sent_time: NaiveDateTime,
    #[serde(default)]
    pub attachments: u32,
    #[serde(default)]
    pub priority: Priority,
}

impl MessageDoc {
    pub fn new(sent_time: NaiveDateTime) -> Self {
        Self {
            sender: Sender::default(),
            recipients: Recipients::default(),
            subject: String::new(),
            body: String::new(),
            forwarded_thread: String::new(),
            sent_time,
            attachments: 0,
            priority: Priority::None,
        }
    }
}

/// One corpus line: a message with its class label and, optionally, a
/// hand-assigned criticality score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledMessage {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
    #[serde(flatten)]
    pub message: MessageDoc,
}

/// Parses a JSON-lines corpus, skipping blank lines.
pub fn parse_corpus(text: &str) -> Result<Vec<LabeledMessage>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

/// One JSON object per line, each terminated by a newline.
pub fn write_corpus(messages: &[LabeledMessage]) -> String {
    let mut out = String::new();
    for m in messages {
        out.push_str(&serde_json::to_string(m).expect("messages serialize"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_line_round_trip() {
        let line = r#"{"label":"high","sender":{"address":"a@x.org","same_org":true},"subject":"hi","body":"can you call","sent_time":"2001-03-05T09:30:00","priority":"high"}"#;
        let parsed = parse_corpus(line).unwrap();
        assert_eq!(parsed.len(), 1);
        assert!(parsed[0].message.sender.same_org);
        assert_eq!(parsed[0].message.priority, Priority::High);
        let again = parse_corpus(&write_corpus(&parsed)).unwrap();
        assert_eq!(again, parsed);
    }

    #[test]
    fn sent_time_is_required() {
        assert!(parse_corpus(r#"{"label":"low","subject":"x"}"#).is_err());
    }
}
