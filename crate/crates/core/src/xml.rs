//! Sentence-tagged XML.
//!
//! ```xml
//! <?xml version="1.0" encoding="UTF-8"?>
//! <doc id="math/grade7">
//! <s>...</s>
//! <s type="fp">...</s>
//! </doc>
//! ```
//!
//! One `<s>` per output line. Newlines and carriage returns inside a sentence
//! are written as character references so that the layout holds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use quick_xml::events::{BytesRef, BytesStart, Event};
use quick_xml::{Reader, XmlVersion};

use crate::error::{Error, Result};
use crate::segmenter::SegmentedDocument;

pub const XML_DECLARATION: &str = r#"<?xml version="1.0" encoding="UTF-8"?>"#;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Judgment {
    Tp,
    Tn,
    Fp,
    Fn,
}

impl Judgment {
    pub const ALL: [Judgment; 4] = [Judgment::Tp, Judgment::Tn, Judgment::Fp, Judgment::Fn];

    pub fn as_str(self) -> &'static str {
        match self {
            Judgment::Tp => "tp",
            Judgment::Tn => "tn",
            Judgment::Fp => "fp",
            Judgment::Fn => "fn",
        }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Judgment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Judgment::ALL
            .into_iter()
            .find(|j| j.as_str() == s)
            .ok_or_else(|| Error::UnknownJudgment(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub text: String,
    pub judgment: Option<Judgment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedDocument {
    pub id: Option<String>,
    pub sentences: Vec<AnnotatedSentence>,
}

fn is_xml_char(c: char) -> bool {
    matches!(c, '\u{9}' | '\u{A}' | '\u{D}' | '\u{20}'..='\u{D7FF}' | '\u{E000}'..='\u{FFFD}' | '\u{10000}'..)
}

fn escape_into(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
}

fn check_text(index: usize, s: &str) -> Result<()> {
    if let Some(c) = s.chars().find(|&c| !is_xml_char(c)) {
        return Err(Error::InvalidSentence {
            index,
            message: format!("character U+{:04X} cannot appear in XML", c as u32),
        });
    }
    Ok(())
}

/// Serializes a list of sentences. `id` goes on the root element.
pub fn emit_sentences(id: &str, sentences: &[AnnotatedSentence]) -> Result<Vec<u8>> {
    check_text(usize::MAX, id).map_err(|_| Error::InvalidSentence {
        index: 0,
        message: format!("document id {id:?} cannot appear in XML"),
    })?;
    let mut out = String::new();
    out.push_str(XML_DECLARATION);
    out.push('\n');
    out.push_str("<doc id=\"");
    escape_into(id, &mut out);
    if sentences.is_empty() {
        out.push_str("\"/>\n");
        return Ok(out.into_bytes());
    }
    out.push_str("\">\n");
    for (i, s) in sentences.iter().enumerate() {
        if s.text.is_empty() {
            return Err(Error::InvalidSentence {
                index: i,
                message: "empty sentence".into(),
            });
        }
        check_text(i, &s.text)?;
        match s.judgment {
            Some(j) => {
                out.push_str("<s type=\"");
                out.push_str(j.as_str());
                out.push_str("\">");
            }
            None => out.push_str("<s>"),
        }
        escape_into(&s.text, &mut out);
        out.push_str("</s>\n");
    }
    out.push_str("</doc>\n");
    Ok(out.into_bytes())
}

/// Serializes a segmented document, attaching judgments by sentence index.
pub fn emit_xml(doc: &SegmentedDocument, judgments: Option<&BTreeMap<usize, Judgment>>) -> Result<Vec<u8>> {
    let n = doc.sentences.len();
    if let Some((&index, _)) = judgments.and_then(|j| j.range(n..).next()) {
        return Err(Error::JudgmentOutOfRange { index, len: n });
    }
    let sentences: Vec<AnnotatedSentence> = doc
        .sentences
        .iter()
        .enumerate()
        .map(|(i, s)| AnnotatedSentence {
            text: s.text.clone(),
            judgment: judgments.and_then(|j| j.get(&i).copied()),
        })
        .collect();
    emit_sentences(&doc.id, &sentences)
}

fn position(input: &[u8], offset: u64) -> (usize, usize) {
    let offset = (offset as usize).min(input.len());
    let before = &input[..offset];
    let line = 1 + before.iter().filter(|&&b| b == b'\n').count();
    let line_start = before.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
    let column = 1 + String::from_utf8_lossy(&before[line_start..]).chars().count();
    (line, column)
}

struct Parser<'a> {
    input: &'a [u8],
    reader: Reader<&'a [u8]>,
}

impl<'a> Parser<'a> {
    fn error_at(&self, offset: u64, message: impl Into<String>) -> Error {
        let (line, column) = position(self.input, offset);
        Error::Xml {
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.reader.buffer_position(), message)
    }

    fn next(&mut self) -> Result<Event<'a>> {
        match self.reader.read_event() {
            Ok(ev) => Ok(ev),
            Err(e) => Err(self.error_at(self.reader.error_position(), e.to_string())),
        }
    }

    fn resolve(&self, r: &BytesRef<'_>) -> Result<char> {
        if r.is_char_ref() {
            return match r.resolve_char_ref() {
                Ok(Some(c)) if is_xml_char(c) => Ok(c),
                _ => Err(self.error(format!("invalid character reference &{};", &**r))),
            };
        }
        match &**r {
            "amp" => Ok('&'),
            "lt" => Ok('<'),
            "gt" => Ok('>'),
            "quot" => Ok('"'),
            "apos" => Ok('\''),
            other => Err(self.error(format!("unknown entity &{other};"))),
        }
    }

    fn attribute(&self, start: &BytesStart<'_>, name: &str) -> Result<Option<String>> {
        for attr in start.attributes() {
            let attr = attr.map_err(|e| self.error(e.to_string()))?;
            if attr.key.as_ref() == name {
                let value = attr
                    .normalized_value(XmlVersion::Explicit1_0)
                    .map_err(|e| self.error(e.to_string()))?;
                return Ok(Some(value.into_owned()));
            }
        }
        Ok(None)
    }

    fn sentence(&mut self, start: &BytesStart<'_>) -> Result<AnnotatedSentence> {
        let judgment = match self.attribute(start, "type")? {
            Some(v) => Some(v.parse::<Judgment>()?),
            None => None,
        };
        let mut text = String::new();
        loop {
            match self.next()? {
                Event::Text(t) => text.push_str(&t.xml10_content()),
                Event::CData(c) => text.push_str(&c.xml10_content()),
                Event::GeneralRef(r) => text.push(self.resolve(&r)?),
                Event::Comment(_) => {}
                Event::End(e) if e.name().as_ref() == "s" => break,
                Event::Eof => return Err(self.error("unexpected end of input inside <s>")),
                other => return Err(self.error(format!("unexpected {} inside <s>", describe(&other)))),
            }
        }
        Ok(AnnotatedSentence { text, judgment })
    }

    fn document(mut self) -> Result<AnnotatedDocument> {
        let mut doc: Option<AnnotatedDocument> = None;
        let mut open = false;
        loop {
            let ev = self.next()?;
            match ev {
                Event::Decl(_) | Event::Comment(_) | Event::PI(_) | Event::DocType(_) if !open => {}
                Event::Comment(_) => {}
                Event::Text(ref t) if t.trim().is_empty() => {}
                Event::Start(ref e) | Event::Empty(ref e) if doc.is_none() => {
                    if e.name().as_ref() != "doc" {
                        return Err(self.error(format!("root element must be <doc>, found <{}>", e.name().as_ref())));
                    }
                    let id = self.attribute(e, "id")?;
                    open = matches!(ev, Event::Start(_));
                    doc = Some(AnnotatedDocument {
                        id,
                        sentences: Vec::new(),
                    });
                }
                Event::Start(ref e) if open && e.name().as_ref() == "s" => {
                    let s = self.sentence(e)?;
                    doc.as_mut().expect("root is open").sentences.push(s);
                }
                Event::Empty(ref e) if open && e.name().as_ref() == "s" => {
                    let s = self.sentence_empty(e)?;
                    doc.as_mut().expect("root is open").sentences.push(s);
                }
                Event::End(ref e) if open && e.name().as_ref() == "doc" => open = false,
                Event::Eof => {
                    return match doc {
                        Some(d) if !open => Ok(d),
                        Some(_) => Err(self.error("unexpected end of input inside <doc>")),
                        None => Err(self.error("missing <doc> root element")),
                    }
                }
                other => return Err(self.error(format!("unexpected {}", describe(&other)))),
            }
        }
    }

    fn sentence_empty(&self, start: &BytesStart<'_>) -> Result<AnnotatedSentence> {
        let judgment = match self.attribute(start, "type")? {
            Some(v) => Some(v.parse::<Judgment>()?),
            None => None,
        };
        Ok(AnnotatedSentence {
            text: String::new(),
            judgment,
        })
    }
}

fn describe(ev: &Event<'_>) -> String {
    match ev {
        Event::Start(e) => format!("element <{}>", e.name().as_ref()),
        Event::Empty(e) => format!("element <{}/>", e.name().as_ref()),
        Event::End(e) => format!("closing tag </{}>", e.name().as_ref()),
        Event::Text(_) | Event::GeneralRef(_) | Event::CData(_) => "text".into(),
        Event::Decl(_) => "XML declaration".into(),
        Event::PI(_) => "processing instruction".into(),
        Event::DocType(_) => "doctype".into(),
        Event::Comment(_) => "comment".into(),
        Event::Eof => "end of input".into(),
    }
}

pub fn parse_annotated_document(bytes: &[u8]) -> Result<AnnotatedDocument> {
    let mut reader = Reader::from_reader(bytes);
    reader.config_mut().check_end_names = true;
    Parser { input: bytes, reader }.document()
}

pub fn parse_annotated_xml(bytes: &[u8]) -> Result<Vec<AnnotatedSentence>> {
    Ok(parse_annotated_document(bytes)?.sentences)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenizer::Tokenizer;

    fn doc(texts: &[&str]) -> SegmentedDocument {
        SegmentedDocument::from_sentence_texts("d1", texts, &Tokenizer::default())
    }

    #[test]
    fn single_sentence_layout() {
        let bytes = emit_xml(&doc(&["سڵاو"]), None).unwrap();
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<doc id=\"d1\">\n<s>سڵاو</s>\n</doc>\n"
        );
    }

    #[test]
    fn empty_document_self_closes() {
        let bytes = emit_xml(&doc(&[]), None).unwrap();
        assert!(String::from_utf8(bytes.clone())
            .unwrap()
            .ends_with("<doc id=\"d1\"/>\n"));
        assert!(parse_annotated_xml(&bytes).unwrap().is_empty());
    }

    #[test]
    fn judgments_become_type_attributes() {
        let js = BTreeMap::from([(0, Judgment::Fp)]);
        let bytes = emit_xml(&doc(&["ا.", "ب"]), Some(&js)).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.contains("<s type=\"fp\">ا.</s>\n<s>ب</s>"));
        let back = parse_annotated_xml(&bytes).unwrap();
        assert_eq!(back[0].judgment, Some(Judgment::Fp));
        assert_eq!(back[1].judgment, None);
    }

    #[test]
    fn out_of_range_judgment() {
        let js = BTreeMap::from([(2, Judgment::Tp)]);
        assert!(matches!(
            emit_xml(&doc(&["ا"]), Some(&js)),
            Err(Error::JudgmentOutOfRange { index: 2, len: 1 })
        ));
    }

    #[test]
    fn reserved_characters_round_trip() {
        let s = AnnotatedSentence {
            text: "a<b & \"c\" 'd' > e\nf\rg\th".into(),
            judgment: Some(Judgment::Tn),
        };
        let bytes = emit_sentences("x&y", std::slice::from_ref(&s)).unwrap();
        assert_eq!(String::from_utf8_lossy(&bytes).lines().count(), 4);
        let parsed = parse_annotated_document(&bytes).unwrap();
        assert_eq!(parsed.id.as_deref(), Some("x&y"));
        assert_eq!(parsed.sentences, [s]);
    }

    #[test]
    fn hand_annotated_input() {
        let got = parse_annotated_xml("<doc id=\"a\"><s type=\"tp\">ا.</s></doc>".as_bytes()).unwrap();
        assert_eq!(
            got,
            [AnnotatedSentence {
                text: "ا.".into(),
                judgment: Some(Judgment::Tp)
            }]
        );
    }

    #[test]
    fn unknown_judgment() {
        let err = parse_annotated_xml("<doc><s type=\"xx\">ا</s></doc>".as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "unknown judgment xx");
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = parse_annotated_xml(b"<doc>\n<s>a</t>\n</doc>").unwrap_err();
        match err {
            Error::Xml { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_annotated_xml(b"<doc><s>a</s>"), Err(Error::Xml { .. })));
        assert!(matches!(parse_annotated_xml(b"<other/>"), Err(Error::Xml { .. })));
        assert!(matches!(
            parse_annotated_xml(b"<doc><s>&bogus;</s></doc>"),
            Err(Error::Xml { .. })
        ));
        assert!(matches!(parse_annotated_xml(b""), Err(Error::Xml { .. })));
        assert!(matches!(
            parse_annotated_xml(b"<doc><p>x</p></doc>"),
            Err(Error::Xml { .. })
        ));
    }

    #[test]
    fn invalid_characters_rejected_on_emit() {
        let s = AnnotatedSentence {
            text: "a\u{1}b".into(),
            judgment: None,
        };
        assert!(matches!(
            emit_sentences("x", &[s]),
            Err(Error::InvalidSentence { index: 0, .. })
        ));
        let empty = AnnotatedSentence {
            text: String::new(),
            judgment: None,
        };
        assert!(emit_sentences("x", &[empty]).is_err());
    }

    #[test]
    fn zwnj_is_preserved() {
        let s = AnnotatedSentence {
            text: "پ\u{200C}.\u{200C}ز".into(),
            judgment: None,
        };
        let back = parse_annotated_xml(&emit_sentences("x", std::slice::from_ref(&s)).unwrap()).unwrap();
        assert_eq!(back, [s]);
    }
}
