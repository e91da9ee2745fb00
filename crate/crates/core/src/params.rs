//! Trained parameters and their on-disk text format.
//!
//! ```text
//! PUNKTPARAMS v1
//! [abbreviations]
//! د
//! [collocations]
//! ##number##<TAB>بەش
//! [sentence_starters]
//! ئەم
//! [forced_abbreviations]
//! پ‌.‌ز
//! ```
//!
//! Entries are NFC, one per line, sorted. A backslash escapes `\`, tab,
//! newline, CR and a leading `[`.

use std::collections::BTreeSet;

use log::warn;

use crate::error::{Error, Result};
use crate::tokenizer::TypeKey;

pub const MODEL_HEADER: &str = "PUNKTPARAMS v1";
const HEADER_PREFIX: &str = "PUNKTPARAMS ";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Parameters {
    /// Learned abbreviation types, period-stripped.
    pub abbrev_types: BTreeSet<TypeKey>,
    /// `(period-stripped left type, right type)` pairs that suppress a break.
    pub collocations: BTreeSet<(TypeKey, TypeKey)>,
    pub sentence_starters: BTreeSet<TypeKey>,
    /// Abbreviations supplied by the user, period-stripped.
    pub forced_abbrevs: BTreeSet<TypeKey>,
}

impl Parameters {
    pub fn is_abbreviation(&self, stripped: &TypeKey) -> bool {
        self.forced_abbrevs.contains(stripped) || self.abbrev_types.contains(stripped)
    }

    pub fn with_forced(mut self, forced: impl IntoIterator<Item = TypeKey>) -> Self {
        self.forced_abbrevs.extend(forced);
        self
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Abbreviations,
    Collocations,
    SentenceStarters,
    ForcedAbbreviations,
}

impl Section {
    fn from_header(s: &str) -> Option<Self> {
        Some(match s {
            "[abbreviations]" => Section::Abbreviations,
            "[collocations]" => Section::Collocations,
            "[sentence_starters]" => Section::SentenceStarters,
            "[forced_abbreviations]" => Section::ForcedAbbreviations,
            _ => return None,
        })
    }
}

fn escape(s: &str, out: &mut String) {
    for (i, c) in s.chars().enumerate() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '[' if i == 0 => out.push_str("\\["),
            c => out.push(c),
        }
    }
}

fn unescape(s: &str, line: usize) -> Result<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('[') => out.push('['),
            other => {
                return Err(Error::ModelFormat {
                    line,
                    message: format!("bad escape sequence \\{}", other.map(String::from).unwrap_or_default()),
                })
            }
        }
    }
    Ok(out)
}

fn write_section<'a>(out: &mut String, name: &str, entries: impl Iterator<Item = &'a TypeKey>) {
    out.push_str(name);
    out.push('\n');
    for k in entries {
        escape(k.as_str(), out);
        out.push('\n');
    }
}

pub fn save_params(p: &Parameters) -> Vec<u8> {
    let mut out = String::new();
    out.push_str(MODEL_HEADER);
    out.push('\n');
    write_section(&mut out, "[abbreviations]", p.abbrev_types.iter());
    out.push_str("[collocations]\n");
    for (a, b) in &p.collocations {
        escape(a.as_str(), &mut out);
        out.push('\t');
        escape(b.as_str(), &mut out);
        out.push('\n');
    }
    write_section(&mut out, "[sentence_starters]", p.sentence_starters.iter());
    write_section(&mut out, "[forced_abbreviations]", p.forced_abbrevs.iter());
    out.into_bytes()
}

pub fn load_params(bytes: &[u8]) -> Result<Parameters> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::ModelFormat {
        line: 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        message: "invalid UTF-8".into(),
    })?;
    let text = text.strip_prefix('\u{FEFF}').unwrap_or(text);
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));

    match lines.next() {
        Some((_, MODEL_HEADER)) => {}
        Some((_, h)) if h.starts_with(HEADER_PREFIX) => return Err(Error::UnsupportedVersion(h.to_owned())),
        Some((_, h)) => {
            return Err(Error::ModelFormat {
                line: 1,
                message: format!("expected header {MODEL_HEADER:?}, found {h:?}"),
            })
        }
        None => {
            return Err(Error::ModelFormat {
                line: 1,
                message: "empty model file".into(),
            })
        }
    }

    let mut p = Parameters::default();
    let mut section = None;
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            section = Some(Section::from_header(line).ok_or_else(|| Error::ModelFormat {
                line: n,
                message: format!("unknown section {line}"),
            })?);
            continue;
        }
        let Some(sec) = section else {
            return Err(Error::ModelFormat {
                line: n,
                message: "entry before any section header".into(),
            });
        };
        let fresh = match sec {
            Section::Collocations => {
                let (a, b) = line.split_once('\t').ok_or_else(|| Error::ModelFormat {
                    line: n,
                    message: "collocation entry needs two tab-separated types".into(),
                })?;
                let pair = (TypeKey::new(&unescape(a, n)?), TypeKey::new(&unescape(b, n)?));
                p.collocations.insert(pair)
            }
            Section::Abbreviations => p.abbrev_types.insert(TypeKey::new(&unescape(line, n)?)),
            Section::SentenceStarters => p.sentence_starters.insert(TypeKey::new(&unescape(line, n)?)),
            Section::ForcedAbbreviations => p.forced_abbrevs.insert(TypeKey::new(&unescape(line, n)?)),
        };
        if !fresh {
            warn!("model file line {n}: duplicate entry {line:?} ignored");
        }
    }
    Ok(p)
}

/// Parses a forced-abbreviation list: one entry per line, period-stripped and
/// normalized; blank lines and `#` comments are skipped.
pub fn parse_abbrev_list(text: &str) -> BTreeSet<TypeKey> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.starts_with('#'))
        .filter_map(TypeKey::from_entry)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_round_trip() {
        let p = Parameters::default();
        assert_eq!(load_params(&save_params(&p)).unwrap(), p);
    }

    #[test]
    fn abbreviation_is_bit_exact() {
        let mut p = Parameters::default();
        p.abbrev_types.insert(TypeKey::new("د"));
        let bytes = save_params(&p);
        assert_eq!(
            String::from_utf8(bytes.clone()).unwrap(),
            "PUNKTPARAMS v1\n[abbreviations]\nد\n[collocations]\n[sentence_starters]\n[forced_abbreviations]\n"
        );
        let back = load_params(&bytes).unwrap();
        assert_eq!(back, p);
        assert_eq!(save_params(&back), bytes);
    }

    #[test]
    fn unsupported_version() {
        let err = load_params(b"PUNKTPARAMS v999\n").unwrap_err();
        assert!(matches!(err, Error::UnsupportedVersion(ref v) if v == "PUNKTPARAMS v999"));
    }

    #[test]
    fn duplicates_are_merged() {
        let p = load_params("PUNKTPARAMS v1\n[abbreviations]\nد\nد\n[collocations]\nا\tب\nا\tب\n".as_bytes()).unwrap();
        assert_eq!(p.abbrev_types.len(), 1);
        assert_eq!(p.collocations.len(), 1);
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(load_params(b""), Err(Error::ModelFormat { .. })));
        assert!(matches!(
            load_params(b"hello\n"),
            Err(Error::ModelFormat { line: 1, .. })
        ));
        assert!(matches!(
            load_params(b"PUNKTPARAMS v1\n[bogus]\n"),
            Err(Error::ModelFormat { line: 2, .. })
        ));
        assert!(matches!(
            load_params(b"PUNKTPARAMS v1\nx\n"),
            Err(Error::ModelFormat { line: 2, .. })
        ));
        assert!(matches!(
            load_params(b"PUNKTPARAMS v1\n[collocations]\nnotab\n"),
            Err(Error::ModelFormat { line: 3, .. })
        ));
    }

    #[test]
    fn awkward_entries_round_trip() {
        let mut p = Parameters::default();
        for s in ["[abbreviations]", "a\\b", "x\ty", "pre[fix"] {
            p.sentence_starters.insert(TypeKey::new(s));
        }
        p.collocations.insert((TypeKey::new("\\"), TypeKey::new("[")));
        assert_eq!(load_params(&save_params(&p)).unwrap(), p);
    }

    #[test]
    fn abbrev_list_normalization() {
        let list = parse_abbrev_list("# forced\nد.\n\nپ\u{200C}.\u{200C}ز\nد\n");
        let keys: Vec<_> = list.iter().map(TypeKey::as_str).collect();
        assert_eq!(keys, ["د", "پ\u{200C}.\u{200C}ز"]);
    }
}
