//! Corpus ingest and the stratified dev/test split.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Component, Path};

use log::warn;
use unicode_normalization::UnicodeNormalization;
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::span::Span;

pub const DEV_SUFFIX: &str = "#dev";
pub const TEST_SUFFIX: &str = "#test";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub text: String,
    /// Byte range of the line (terminator excluded) in the document text.
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    /// Subject and level, e.g. `math/grade7`.
    pub strata_key: String,
    /// Normalized source text. Line spans index into it.
    pub text: String,
    pub lines: Vec<Line>,
}

impl Document {
    /// Builds a document from already-normalized text.
    pub fn new(id: impl Into<String>, strata_key: impl Into<String>, text: String) -> Self {
        let mut lines = Vec::new();
        let mut offset = 0;
        for piece in text.split_terminator('\n') {
            lines.push(Line {
                text: piece.to_owned(),
                span: Span::new(offset, offset + piece.len()),
            });
            offset += piece.len() + 1;
        }
        Document {
            id: id.into(),
            strata_key: strata_key.into(),
            text,
            lines,
        }
    }

    /// Builds a document from raw text, applying ingest normalization.
    pub fn from_raw(id: impl Into<String>, strata_key: impl Into<String>, raw: &str) -> Self {
        Document::new(id, strata_key, normalize_source(raw))
    }

    /// Builds a document whose text is `lines` joined with LF terminators.
    pub fn from_lines<'a>(
        id: impl Into<String>,
        strata_key: impl Into<String>,
        lines: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        let mut text = String::new();
        for line in lines {
            text.push_str(line);
            text.push('\n');
        }
        Document::new(id, strata_key, text)
    }

    /// Id with any `#dev`/`#test` suffix removed.
    pub fn base_id(&self) -> &str {
        base_id(&self.id)
    }
}

pub fn base_id(id: &str) -> &str {
    id.strip_suffix(DEV_SUFFIX)
        .or_else(|| id.strip_suffix(TEST_SUFFIX))
        .unwrap_or(id)
}

/// Strips a leading byte-order mark, converts CRLF and lone CR to LF, and
/// normalizes to NFC.
pub fn normalize_source(raw: &str) -> String {
    let raw = raw.strip_prefix('\u{FEFF}').unwrap_or(raw);
    let unified = raw.replace("\r\n", "\n").replace('\r', "\n");
    unified.nfc().collect()
}

/// Decodes and normalizes file bytes.
pub fn decode_source(path: &Path, bytes: &[u8]) -> Result<String> {
    let raw = std::str::from_utf8(bytes).map_err(|e| Error::InvalidUtf8 {
        path: path.to_owned(),
        offset: e.valid_up_to(),
    })?;
    Ok(normalize_source(raw))
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// File extension to accept, without the dot.
    pub extension: String,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            extension: "txt".to_owned(),
        }
    }
}

/// Loads every `.txt` file below `root` as one document, in path order.
pub fn load_corpus(root: &Path) -> Result<Vec<Document>> {
    load_corpus_with(root, &LoadOptions::default())
}

pub fn load_corpus_with(root: &Path, options: &LoadOptions) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_owned();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some(options.extension.as_str()) {
            continue;
        }
        let rel = path.strip_prefix(root).unwrap_or(path);
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let text = decode_source(path, &bytes)?;
        let (id, strata_key) = ids_for(rel);
        docs.push(Document::new(id, strata_key, text));
    }
    Ok(docs)
}

/// `(id, strata_key)` for a path relative to the corpus root. The id is the
/// path without extension; the stratum is the first directory plus file stem.
pub fn ids_for(rel: &Path) -> (String, String) {
    let parts: Vec<String> = rel
        .components()
        .filter_map(|c| match c {
            Component::Normal(s) => Some(s.to_string_lossy().into_owned()),
            _ => None,
        })
        .collect();
    let stem = rel
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut id_parts = parts.clone();
    if let Some(last) = id_parts.last_mut() {
        *last = stem.clone();
    }
    let id = id_parts.join("/");
    let strata_key = if parts.len() > 1 {
        format!("{}/{}", parts[0], stem)
    } else {
        stem
    };
    (id, strata_key)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSplit {
    pub dev: Vec<Document>,
    pub test: Vec<Document>,
    pub ratio: f64,
}

/// Number of a document's lines allocated to dev: `ceil(ratio * n)`.
pub fn dev_line_count(n_lines: usize, ratio: f64) -> usize {
    // The epsilon absorbs binary representation error (0.7 * 10 is 7.000000000000001).
    let want = (ratio * n_lines as f64 - 1e-9).ceil();
    (want.max(0.0) as usize).min(n_lines)
}

/// Splits each document by lines: the first `ceil(ratio * n)` lines go to a
/// `#dev` document, the rest to a `#test` document. Documents are grouped by
/// stratum and ordered by id. Empty test halves are omitted.
pub fn split_corpus(docs: &[Document], ratio: f64) -> Result<CorpusSplit> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidRatio(ratio));
    }
    if docs.is_empty() {
        return Err(Error::Precondition("cannot split an empty corpus".into()));
    }

    let mut strata: BTreeMap<&str, Vec<&Document>> = BTreeMap::new();
    for doc in docs {
        strata.entry(doc.strata_key.as_str()).or_default().push(doc);
    }

    let mut dev = Vec::new();
    let mut test = Vec::new();
    for group in strata.values_mut() {
        group.sort_by(|a, b| a.id.cmp(&b.id));
        for doc in group.iter() {
            let n = doc.lines.len();
            if n == 0 {
                warn!("document {} has no lines; placing it in dev", doc.id);
            }
            let k = dev_line_count(n, ratio);
            let (head, tail) = doc.lines.split_at(k);
            dev.push(Document::from_lines(
                format!("{}{DEV_SUFFIX}", doc.id),
                doc.strata_key.clone(),
                head.iter().map(|l| l.text.as_str()),
            ));
            if !tail.is_empty() {
                test.push(Document::from_lines(
                    format!("{}{TEST_SUFFIX}", doc.id),
                    doc.strata_key.clone(),
                    tail.iter().map(|l| l.text.as_str()),
                ));
            }
        }
    }
    Ok(CorpusSplit { dev, test, ratio })
}
