//! Line-delimited record formats used between pipeline stages.
//!
//! Every file is JSON, one record per line. Writers may prepend a single
//! provenance line of the form `{"_meta": {...}}` carrying the seed and
//! config hash of the run that produced the file; readers skip it.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matcher::Snippet;
use crate::represent::Label;
use crate::Result;

/// Provenance attached to output artifacts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_sha256: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct MetaLine {
    _meta: Meta,
}

/// Wire form of a snippet, as emitted by `match` and consumed by
/// `transform`/`augment`. The skill tokens are space-joined into
/// `skill_text`; tokens never contain whitespace so the join is lossless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnippetRecord {
    pub source_id: String,
    pub skill_id: u32,
    pub skill_text: String,
    pub left: Vec<String>,
    pub right: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

impl SnippetRecord {
    pub fn from_snippet(snippet: &Snippet, label: Option<Label>) -> Self {
        SnippetRecord {
            source_id: snippet.source_id.clone(),
            skill_id: snippet.skill_id,
            skill_text: snippet.skill.join(" "),
            left: snippet.left.clone(),
            right: snippet.right.clone(),
            label,
        }
    }

    pub fn to_snippet(&self) -> Snippet {
        Snippet {
            left: self.left.clone(),
            skill: self.skill_text.split_whitespace().map(str::to_string).collect(),
            right: self.right.clone(),
            skill_id: self.skill_id,
            source_id: self.source_id.clone(),
        }
    }
}

/// Reads a JSONL file, skipping a leading `_meta` line if present.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = std::io::BufReader::new(file);
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        if serde_json::from_str::<MetaLine>(&line).is_ok() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| Error::RecordParse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Writes records as JSONL, preceded by a `_meta` line when provided.
pub fn write_jsonl<T: Serialize>(path: &Path, meta: Option<&Meta>, records: &[T]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let mut emit = |value: String| -> Result<()> {
        writeln!(out, "{value}").map_err(|e| Error::io(path, e))
    };
    if let Some(meta) = meta {
        let line = serde_json::to_string(&MetaLine { _meta: meta.clone() })
            .expect("meta serializes");
        emit(line)?;
    }
    for record in records {
        let line = serde_json::to_string(record).map_err(|e| Error::RecordParse {
            line: 0,
            message: e.to_string(),
        })?;
        emit(line)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::represent::{RepresentationMode, RepresentedInput};

    #[test]
    fn snippet_record_round_trip() {
        let snippet = Snippet {
            left: vec!["a".into(), "b".into()],
            skill: vec!["team".into(), "player".into()],
            right: vec![],
            skill_id: 3,
            source_id: "0:1".into(),
        };
        let record = SnippetRecord::from_snippet(&snippet, Some(Label::Positive));
        assert_eq!(record.skill_text, "team player");
        assert_eq!(record.to_snippet(), snippet);
    }

    #[test]
    fn jsonl_round_trip_skips_meta_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.jsonl");
        let records = vec![
            RepresentedInput {
                tokens: vec!["a".into(), "xxx".into()],
                skill_vector: None,
                mode: RepresentationMode::Masked,
                label: Some(Label::Negative),
            },
            RepresentedInput {
                tokens: vec!["b".into()],
                skill_vector: Some(vec![0.25, -1.0]),
                mode: RepresentationMode::MaskedWithEmbedding,
                label: None,
            },
        ];
        let meta = Meta {
            seed: Some(42),
            config_sha256: Some("abc".into()),
        };
        write_jsonl(&path, Some(&meta), &records).unwrap();
        let read: Vec<RepresentedInput> = read_jsonl(&path).unwrap();
        assert_eq!(read, records);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.lines().next().unwrap().contains("_meta"));
    }

    #[test]
    fn malformed_record_names_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        std::fs::write(&path, "{\"source_id\": \"0:0\"}\n").unwrap();
        let err = read_jsonl::<SnippetRecord>(&path).unwrap_err();
        assert!(matches!(err, Error::RecordParse { line: 1, .. }));
    }
}
