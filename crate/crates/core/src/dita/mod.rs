//! Command-bearing subset of DITA topics.
//!
//! A topic is the atomic unit of a DITA document: a title, an optional
//! short description, and an ordered list of steps whose code blocks hold
//! the commands a reader is expected to run. Commands may contain
//! `<placeholder>` parameters that are substituted with site-specific
//! values before execution.

mod parse;
mod serialize;

pub use parse::{load_topics_from_dir, parse_topic, ParsedTopic};
pub use serialize::serialize_topic;

use serde::{Deserialize, Serialize};

/// Placeholder names: `[a-z][a-z0-9_]*`, always wrapped in angle brackets
/// inside command text.
pub fn is_valid_placeholder_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Byte range into the raw command text, end exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

/// One `<name>` occurrence inside a command. The span covers the angle
/// brackets, so slicing the raw text with it yields `<name>` verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceholderOccurrence {
    pub name: String,
    pub span: Span,
}

/// A single documented command with its placeholder occurrences.
///
/// The raw text is line-normalized on construction: continuation lines are
/// trimmed and joined with single spaces, so a command rendered across
/// several source lines compares equal to its one-line form. Occurrences
/// are derived from the normalized text and kept in sync by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandText {
    raw: String,
    placeholders: Vec<PlaceholderOccurrence>,
}

impl CommandText {
    pub fn new(raw: impl AsRef<str>) -> Self {
        let raw = normalize_command_lines(raw.as_ref());
        let placeholders = find_placeholders(&raw);
        Self { raw, placeholders }
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn placeholders(&self) -> &[PlaceholderOccurrence] {
        &self.placeholders
    }

    /// Distinct placeholder names in first-occurrence order.
    pub fn placeholder_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = Vec::new();
        for occ in &self.placeholders {
            if !names.contains(&occ.name.as_str()) {
                names.push(&occ.name);
            }
        }
        names
    }
}

/// Joins a multi-line command into one logical line: every line is
/// end-trimmed and non-empty lines are joined with single spaces.
/// Single-line input without surrounding whitespace passes through
/// unchanged.
pub fn normalize_command_lines(text: &str) -> String {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Scans command text for placeholder occurrences, left to right.
///
/// An occurrence is a substring `<name>` where `name` matches
/// `[a-z][a-z0-9_]*`. Scanning resumes after the closing bracket, so
/// reported spans never overlap. Duplicated names are reported once per
/// occurrence.
pub fn find_placeholders(raw: &str) -> Vec<PlaceholderOccurrence> {
    let bytes = raw.as_bytes();
    let mut found = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        match scan_placeholder_at(bytes, i) {
            Some(end) => {
                found.push(PlaceholderOccurrence {
                    name: raw[i + 1..end - 1].to_string(),
                    span: Span { start: i, end },
                });
                i = end;
            }
            None => i += 1,
        }
    }
    found
}

/// Returns the end offset (past `>`) of a placeholder starting at `start`,
/// which must point at `<`.
fn scan_placeholder_at(bytes: &[u8], start: usize) -> Option<usize> {
    let mut j = start + 1;
    if j >= bytes.len() || !bytes[j].is_ascii_lowercase() {
        return None;
    }
    j += 1;
    while j < bytes.len()
        && (bytes[j].is_ascii_lowercase() || bytes[j].is_ascii_digit() || bytes[j] == b'_')
    {
        j += 1;
    }
    if j < bytes.len() && bytes[j] == b'>' {
        Some(j + 1)
    } else {
        None
    }
}

/// One step of a topic: explanatory prose followed by the commands to run,
/// both in source order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TopicStep {
    pub prose: String,
    pub code_blocks: Vec<CommandText>,
}

/// A parsed DITA topic restricted to the elements this toolkit understands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DitaTopic {
    /// Non-empty identifier, unique within a topic collection.
    pub id: String,
    pub title: String,
    pub short_desc: Option<String>,
    /// Steps in document order.
    pub steps: Vec<TopicStep>,
}

impl DitaTopic {
    /// All command texts of the topic in document order.
    pub fn commands(&self) -> impl Iterator<Item = &CommandText> {
        self.steps.iter().flat_map(|s| s.code_blocks.iter())
    }
}

/// Errors from reading or validating DITA topic files.
#[derive(Debug, thiserror::Error)]
pub enum DitaError {
    #[error("malformed XML: {0}")]
    MalformedXml(#[from] roxmltree::Error),
    #[error("unsupported root element <{found}>, expected <task> or <concept>")]
    UnsupportedRootElement { found: String },
    #[error("topic is missing a non-empty id attribute")]
    MissingTopicId,
    #[error("duplicate topic id {id:?} (first seen in {first:?}, again in {second:?})")]
    DuplicateTopicId {
        id: String,
        first: String,
        second: String,
    },
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
