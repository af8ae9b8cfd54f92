//! Hand-authored default attention models.
//!
//! The numbers here are illustrative assessments, not learned values. Each
//! conditional table is a normalized product of per-parent weight vectors
//! (a log-linear form), which keeps the large focus table readable. The
//! shipped `models/attention_static.json` and `models/attention_dbn.json`
//! are generated from these tables by the `author_models` example and can be
//! replaced wholesale by any file that satisfies the model contract.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::bayesnet::{CptRow, CptSpec, DbnSpec, NetworkSpec, TemporalLink, Variable, PREV_SUFFIX};

use super::{AttentionModelFile, AttentionState, EvidenceField, TemporalModelFile, FOCUS_VARIABLE, INSPECTION_VARIABLE};

pub const APPOINTMENT: &str = "SCHEDULED_APPOINTMENT";
pub const TIME_OF_DAY: &str = "TIME_OF_DAY";
pub const DEADLINE: &str = "DEADLINE_PROXIMITY";
pub const ACOUSTICS: &str = "AMBIENT_ACOUSTICS";
pub const APP: &str = "APP_AT_FOCUS";
pub const ACTIVITY: &str = "ACTIVITY_STREAM";
pub const USAGE: &str = "USAGE_PATTERN";
pub const LOCATION: &str = "LOCATION";

pub const LOCATION_AT_DESKTOP: &str = "at-desktop";
pub const LOCATION_AWAY: &str = "away";

/// Default inspection-interval buckets, minutes.
pub const INSPECTION_BUCKETS: [f64; 5] = [1.0, 5.0, 15.0, 60.0, 240.0];

const APPOINTMENT_STATES: [&str; 3] = ["none", "meeting-now", "meeting-soon"];
const TIME_STATES: [&str; 4] = ["morning", "afternoon", "evening", "night"];
const DEADLINE_STATES: [&str; 3] = ["none", "days", "hours"];
const ACOUSTICS_STATES: [&str; 3] = ["silence", "activity", "conversation"];
const APP_STATES: [&str; 5] = ["email", "word-processor", "browser", "other", "none"];
const ACTIVITY_STATES: [&str; 3] = ["idle", "mouse", "typing"];
const USAGE_STATES: [&str; 3] = ["EMAIL-CENTRIC", "WORD-PROCESSOR CENTRIC", "OTHER"];
const LOCATION_STATES: [&str; 2] = [LOCATION_AT_DESKTOP, LOCATION_AWAY];

type Row12 = [f64; 12];

// Focus weights, columns in AttentionState order:
// catch-up, background, focused, light, browsing, mtg-in, mtg-out,
// presentation, private, family, conversation, travel.
const FOCUS_BASE: Row12 = [8.0, 10.0, 14.0, 12.0, 10.0, 6.0, 6.0, 3.0, 5.0, 4.0, 6.0, 4.0];

const FOCUS_BY_APPOINTMENT: [Row12; 3] = [
    [1.0, 1.0, 1.0, 1.0, 1.0, 0.3, 0.3, 0.3, 1.0, 1.0, 1.0, 1.0],
    [0.3, 0.3, 0.2, 0.3, 0.3, 6.0, 6.0, 4.0, 0.3, 0.3, 0.8, 1.5],
    [1.5, 1.0, 0.8, 1.2, 1.0, 1.2, 1.2, 1.0, 0.8, 0.8, 1.0, 1.5],
];

const FOCUS_BY_TIME: [Row12; 4] = [
    [1.5, 1.0, 1.2, 1.0, 1.0, 1.2, 1.1, 1.1, 0.6, 0.6, 1.0, 1.0],
    [1.0, 1.0, 1.1, 1.0, 1.1, 1.2, 1.1, 1.2, 0.8, 0.7, 1.1, 1.0],
    [0.8, 1.0, 0.8, 1.0, 1.2, 0.4, 0.5, 0.5, 2.0, 2.5, 1.0, 1.2],
    [0.6, 0.8, 0.6, 0.8, 1.2, 0.1, 0.1, 0.1, 3.0, 3.0, 0.5, 1.0],
];

const FOCUS_BY_DEADLINE: [Row12; 3] = [
    [1.0, 1.2, 0.8, 1.1, 1.2, 1.0, 1.0, 1.0, 1.2, 1.2, 1.2, 1.0],
    [1.0, 1.0, 1.3, 1.1, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
    [0.7, 0.6, 2.5, 1.0, 0.6, 1.0, 0.8, 0.8, 0.5, 0.5, 0.5, 0.7],
];

const FOCUS_BY_ACOUSTICS: [Row12; 3] = [
    [1.2, 1.2, 1.5, 1.2, 1.2, 0.2, 1.0, 0.5, 1.3, 1.0, 0.2, 1.0],
    [1.0, 1.0, 0.8, 1.0, 1.0, 1.0, 1.0, 1.5, 1.0, 1.2, 1.0, 1.2],
    [0.6, 0.7, 0.4, 0.7, 0.7, 4.0, 1.0, 2.0, 0.6, 1.2, 4.0, 1.0],
];

const FOCUS_BY_APP: [Row12; 5] = [
    [4.0, 1.2, 0.6, 1.5, 0.8, 0.8, 0.3, 0.5, 0.8, 0.8, 0.8, 0.3],
    [0.6, 0.8, 4.0, 2.0, 0.8, 0.8, 0.3, 0.5, 0.5, 0.5, 0.6, 0.3],
    [1.0, 1.5, 0.6, 1.0, 4.0, 0.8, 0.3, 0.5, 1.0, 1.2, 0.8, 0.3],
    [1.0, 2.0, 1.0, 1.5, 1.0, 1.0, 0.5, 0.8, 1.0, 1.0, 1.0, 0.5],
    [0.3, 0.5, 0.2, 0.3, 0.3, 2.0, 5.0, 3.0, 2.5, 2.5, 2.5, 5.0],
];

const APPOINTMENT_PRIOR: [f64; 3] = [0.7, 0.15, 0.15];
const TIME_PRIOR: [f64; 4] = [0.3, 0.35, 0.2, 0.15];
const DEADLINE_PRIOR: [f64; 3] = [0.6, 0.3, 0.1];
const ACOUSTICS_PRIOR: [f64; 3] = [0.5, 0.35, 0.15];
const APP_PRIOR: [f64; 5] = [0.3, 0.25, 0.2, 0.1, 0.15];

/// P(at-desktop | focus).
const AT_DESKTOP: Row12 = [0.97, 0.9, 0.97, 0.95, 0.95, 0.9, 0.03, 0.15, 0.4, 0.3, 0.6, 0.02];

const ACTIVITY_BY_FOCUS: [[f64; 3]; 12] = [
    [0.2, 0.4, 0.4],
    [0.4, 0.4, 0.2],
    [0.1, 0.2, 0.7],
    [0.2, 0.4, 0.4],
    [0.2, 0.7, 0.1],
    [0.6, 0.3, 0.1],
    [0.95, 0.03, 0.02],
    [0.85, 0.1, 0.05],
    [0.6, 0.25, 0.15],
    [0.7, 0.2, 0.1],
    [0.8, 0.15, 0.05],
    [0.95, 0.03, 0.02],
];
const ACTIVITY_BY_APP: [[f64; 3]; 5] = [
    [1.0, 1.0, 1.5],
    [1.0, 0.7, 2.5],
    [1.0, 2.0, 0.5],
    [1.0, 1.0, 1.0],
    [5.0, 0.3, 0.3],
];

const USAGE_BY_FOCUS: [[f64; 3]; 12] = [
    [0.6, 0.1, 0.3],
    [0.3, 0.2, 0.5],
    [0.15, 0.6, 0.25],
    [0.35, 0.35, 0.3],
    [0.25, 0.15, 0.6],
    [0.3, 0.2, 0.5],
    [0.2, 0.1, 0.7],
    [0.2, 0.1, 0.7],
    [0.3, 0.2, 0.5],
    [0.2, 0.1, 0.7],
    [0.3, 0.2, 0.5],
    [0.3, 0.1, 0.6],
];
const USAGE_BY_APP: [[f64; 3]; 5] = [
    [3.0, 0.5, 1.0],
    [0.5, 3.0, 1.0],
    [1.0, 1.0, 2.0],
    [1.0, 1.0, 1.5],
    [1.0, 1.0, 1.0],
];

const INSPECTION_BY_FOCUS: [[f64; 5]; 12] = [
    [0.3, 0.35, 0.2, 0.1, 0.05],
    [0.1, 0.3, 0.35, 0.2, 0.05],
    [0.02, 0.08, 0.3, 0.45, 0.15],
    [0.05, 0.25, 0.4, 0.25, 0.05],
    [0.05, 0.25, 0.4, 0.25, 0.05],
    [0.01, 0.04, 0.15, 0.6, 0.2],
    [0.01, 0.02, 0.07, 0.4, 0.5],
    [0.01, 0.02, 0.07, 0.5, 0.4],
    [0.02, 0.05, 0.2, 0.43, 0.3],
    [0.01, 0.02, 0.07, 0.3, 0.6],
    [0.02, 0.08, 0.3, 0.45, 0.15],
    [0.01, 0.02, 0.07, 0.3, 0.6],
];
/// Multipliers shifting mass toward short intervals for email-centric use.
const INSPECTION_BY_USAGE: [[f64; 5]; 3] = [
    [3.0, 2.0, 1.0, 0.5, 0.3],
    [0.3, 0.6, 1.0, 1.5, 1.5],
    [1.0, 1.0, 1.0, 1.0, 1.0],
];

/// Persistence weight of staying in the same context between slices.
const FOCUS_STICKINESS: f64 = 4.0;
const LOCATION_STICKINESS: f64 = 3.0;

fn normalize(weights: &[f64]) -> Vec<f64> {
    let z: f64 = weights.iter().sum();
    weights.iter().map(|w| w / z).collect()
}

fn var(name: &str, states: &[&str]) -> Variable {
    Variable::new(name, states)
}

fn focus_labels() -> Vec<&'static str> {
    AttentionState::ALL.iter().map(|s| s.label()).collect()
}

fn root(name: &str, prior: &[f64]) -> CptSpec {
    CptSpec {
        child: name.to_string(),
        parents: Vec::new(),
        rows: vec![CptRow { given: Vec::new(), probs: prior.to_vec() }],
    }
}

/// Enumerates parent assignments (first parent slowest) and fills each row
/// from `row(indices)`.
fn table(child: &str, parents: &[(&str, &[&str])], row: impl Fn(&[usize]) -> Vec<f64>) -> CptSpec {
    let cards: Vec<usize> = parents.iter().map(|(_, s)| s.len()).collect();
    let mut rows = Vec::new();
    let mut idx = vec![0usize; parents.len()];
    loop {
        rows.push(CptRow {
            given: idx.iter().zip(parents).map(|(&i, (_, s))| s[i].to_string()).collect(),
            probs: row(&idx),
        });
        let mut k = idx.len();
        loop {
            if k == 0 {
                return CptSpec {
                    child: child.to_string(),
                    parents: parents.iter().map(|(n, _)| n.to_string()).collect(),
                    rows,
                };
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < cards[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn focus_weights(appt: usize, time: usize, deadline: usize, acoustics: usize, app: usize) -> Row12 {
    let mut w = FOCUS_BASE;
    for (i, x) in w.iter_mut().enumerate() {
        *x *= FOCUS_BY_APPOINTMENT[appt][i]
            * FOCUS_BY_TIME[time][i]
            * FOCUS_BY_DEADLINE[deadline][i]
            * FOCUS_BY_ACOUSTICS[acoustics][i]
            * FOCUS_BY_APP[app][i];
    }
    w
}

fn focus_parents() -> Vec<(&'static str, &'static [&'static str])> {
    vec![
        (APPOINTMENT, &APPOINTMENT_STATES[..]),
        (TIME_OF_DAY, &TIME_STATES[..]),
        (DEADLINE, &DEADLINE_STATES[..]),
        (ACOUSTICS, &ACOUSTICS_STATES[..]),
        (APP, &APP_STATES[..]),
    ]
}

fn location_weights(focus: usize) -> [f64; 2] {
    [AT_DESKTOP[focus], 1.0 - AT_DESKTOP[focus]]
}

fn static_network() -> NetworkSpec {
    let focus = focus_labels();
    let inspection_labels: Vec<String> = INSPECTION_BUCKETS.iter().map(|m| format!("{m}")).collect();
    let inspection: Vec<&str> = inspection_labels.iter().map(String::as_str).collect();

    let variables = vec![
        var(APPOINTMENT, &APPOINTMENT_STATES),
        var(TIME_OF_DAY, &TIME_STATES),
        var(DEADLINE, &DEADLINE_STATES),
        var(ACOUSTICS, &ACOUSTICS_STATES),
        var(APP, &APP_STATES),
        var(FOCUS_VARIABLE, &focus),
        var(LOCATION, &LOCATION_STATES),
        var(ACTIVITY, &ACTIVITY_STATES),
        var(USAGE, &USAGE_STATES),
        var(INSPECTION_VARIABLE, &inspection),
    ];

    let cpts = vec![
        root(APPOINTMENT, &APPOINTMENT_PRIOR),
        root(TIME_OF_DAY, &TIME_PRIOR),
        root(DEADLINE, &DEADLINE_PRIOR),
        root(ACOUSTICS, &ACOUSTICS_PRIOR),
        root(APP, &APP_PRIOR),
        table(FOCUS_VARIABLE, &focus_parents(), |i| {
            normalize(&focus_weights(i[0], i[1], i[2], i[3], i[4]))
        }),
        table(LOCATION, &[(FOCUS_VARIABLE, &focus[..])], |i| location_weights(i[0]).to_vec()),
        table(ACTIVITY, &[(FOCUS_VARIABLE, &focus[..]), (APP, &APP_STATES)], |i| {
            let w: Vec<f64> = (0..3).map(|k| ACTIVITY_BY_FOCUS[i[0]][k] * ACTIVITY_BY_APP[i[1]][k]).collect();
            normalize(&w)
        }),
        table(USAGE, &[(FOCUS_VARIABLE, &focus[..]), (APP, &APP_STATES)], |i| {
            let w: Vec<f64> = (0..3).map(|k| USAGE_BY_FOCUS[i[0]][k] * USAGE_BY_APP[i[1]][k]).collect();
            normalize(&w)
        }),
        table(INSPECTION_VARIABLE, &[(FOCUS_VARIABLE, &focus[..]), (USAGE, &USAGE_STATES)], |i| {
            let w: Vec<f64> = (0..5)
                .map(|k| INSPECTION_BY_FOCUS[i[0]][k] * INSPECTION_BY_USAGE[i[1]][k])
                .collect();
            normalize(&w)
        }),
    ];
    NetworkSpec { variables, cpts }
}

fn bindings() -> BTreeMap<EvidenceField, String> {
    [
        (EvidenceField::ScheduledAppointment, APPOINTMENT),
        (EvidenceField::TimeOfDay, TIME_OF_DAY),
        (EvidenceField::DeadlineProximity, DEADLINE),
        (EvidenceField::AmbientAcoustics, ACOUSTICS),
        (EvidenceField::AppAtFocus, APP),
        (EvidenceField::ActivityStream, ACTIVITY),
        (EvidenceField::UsagePattern, USAGE),
        (EvidenceField::Location, LOCATION),
    ]
    .into_iter()
    .map(|(f, v)| (f, v.to_string()))
    .collect()
}

fn notes() -> Vec<String> {
    vec![
        "Illustrative, hand-authored probabilities; replace with assessed values.".into(),
        "Each conditional table is a normalized product of per-parent weight vectors.".into(),
        "Discretizations are authoring choices: acoustics {silence, activity, conversation}, activity {idle, mouse, typing}.".into(),
        "LOCATION depends on FOCUS_OF_ATTENTION; inspection buckets are in minutes.".into(),
    ]
}

/// The default single-slice attention model.
pub fn static_model() -> AttentionModelFile {
    AttentionModelFile {
        notes: notes(),
        network: static_network(),
        bindings: bindings(),
        inspection_buckets: INSPECTION_BUCKETS.to_vec(),
    }
}

/// The default temporal model: the static slice plus Markov links on focus
/// and location.
pub fn dbn_model() -> TemporalModelFile {
    let focus = focus_labels();
    let prev_focus = format!("{FOCUS_VARIABLE}{PREV_SUFFIX}");
    let prev_location = format!("{LOCATION}{PREV_SUFFIX}");

    let mut parents = vec![(prev_focus.as_str(), &focus[..])];
    parents.extend(focus_parents());
    let focus_transition = table(FOCUS_VARIABLE, &parents, |i| {
        let mut w = focus_weights(i[1], i[2], i[3], i[4], i[5]);
        w[i[0]] *= FOCUS_STICKINESS;
        normalize(&w)
    });
    let location_transition = table(
        LOCATION,
        &[(prev_location.as_str(), &LOCATION_STATES[..]), (FOCUS_VARIABLE, &focus[..])],
        |i| {
            let mut w = location_weights(i[1]);
            w[i[0]] *= LOCATION_STICKINESS;
            normalize(&w)
        },
    );

    let mut notes = notes();
    notes.push("Slices after the first carry persistence on FOCUS_OF_ATTENTION and LOCATION.".into());
    TemporalModelFile {
        notes,
        dbn: DbnSpec {
            slice: static_network(),
            temporal_links: vec![
                TemporalLink { from: FOCUS_VARIABLE.into(), to: FOCUS_VARIABLE.into() },
                TemporalLink { from: LOCATION.into(), to: LOCATION.into() },
            ],
            transition_cpts: vec![focus_transition, location_transition],
        },
        bindings: bindings(),
        inspection_buckets: INSPECTION_BUCKETS.to_vec(),
    }
}

/// Serializes a model document with one CPT row per line.
pub fn to_model_json<T: serde::Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("model documents serialize");
    let mut out = String::new();
    write_value(&mut out, &value, 0, false);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &serde_json::Value, depth: usize, compact: bool) {
    use serde_json::Value;
    let pad = |out: &mut String, d: usize| {
        out.push('\n');
        for _ in 0..d {
            out.push_str("  ");
        }
    };
    match v {
        Value::Object(map) if !compact => {
            let is_row = map.contains_key("given") && map.contains_key("probs");
            let is_variable = map.contains_key("states") && map.len() == 2;
            if is_row || is_variable {
                out.push_str(&serde_json::to_string(v).expect("serializable"));
                return;
            }
            out.push('{');
            for (i, (k, val)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                pad(out, depth + 1);
                let _ = write!(out, "{}: ", serde_json::to_string(k).expect("key"));
                write_value(out, val, depth + 1, false);
            }
            pad(out, depth);
            out.push('}');
        }
        Value::Array(items) if !compact && items.iter().any(|x| x.is_object() || x.is_array()) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                pad(out, depth + 1);
                write_value(out, item, depth + 1, false);
            }
            pad(out, depth);
            out.push(']');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("serializable")),
    }
}
