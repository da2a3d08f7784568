//! Corpus ingestion: plain text (one document per line) or a CSV column,
//! split into sentence-like units.
//!
//! Splitting is deliberately simple: sentence punctuation (`.`, `!`, `?`),
//! newlines inside a document, and common list-bullet symbols. Hyphens are
//! never split on (they occur inside words). Every emitted unit carries a
//! stable `doc:unit` source id.

use std::path::Path;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Plain,
    Csv,
}

impl CorpusFormat {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "plain" => Ok(CorpusFormat::Plain),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(CliError::Usage(format!(
                "unknown corpus format `{other}` (expected plain or csv)"
            ))),
        }
    }
}

const SPLIT_CHARS: [char; 13] =
    ['.', '!', '?', '\n', '\r', '•', '‣', '◦', '·', '●', '▪', '■', '*'];

/// Splits one document into trimmed, non-empty units with `doc:unit` ids.
fn split_document(doc_index: usize, text: &str, out: &mut Vec<(String, String)>) {
    let mut unit_index = 0;
    for unit in text.split(SPLIT_CHARS) {
        let unit = unit.trim();
        if unit.is_empty() {
            continue;
        }
        out.push((format!("{doc_index}:{unit_index}"), unit.to_string()));
        unit_index += 1;
    }
}

/// Reads a corpus file into `(source_id, unit text)` pairs.
pub fn ingest_corpus(
    path: &Path,
    format: CorpusFormat,
    text_column: Option<&str>,
) -> Result<Vec<(String, String)>, CliError> {
    let mut units = Vec::new();
    match format {
        CorpusFormat::Plain => {
            let content = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            for (doc_index, line) in content.lines().enumerate() {
                split_document(doc_index, line, &mut units);
            }
        }
        CorpusFormat::Csv => {
            let column = text_column.ok_or_else(|| {
                CliError::Usage("CSV input needs --text-column".to_string())
            })?;
            let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                source: std::io::Error::other(e),
            })?;
            let headers = reader
                .headers()
                .map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    source: std::io::Error::other(e),
                })?
                .clone();
            let column_index = headers
                .iter()
                .position(|h| h == column)
                .ok_or_else(|| {
                    CliError::Usage(format!("CSV has no column named `{column}`"))
                })?;
            for (doc_index, row) in reader.records().enumerate() {
                let row = row.map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    source: std::io::Error::other(e),
                })?;
                if let Some(text) = row.get(column_index) {
                    split_document(doc_index, text, &mut units);
                }
            }
        }
    }
    Ok(units)
}
