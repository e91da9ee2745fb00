//! Boundary decisions and sentence assembly.
//!
//! Each line is decided independently. A first pass classifies tokens by
//! their own shape and the abbreviation lists; a second pass looks one token
//! ahead to apply starter and collocation evidence. The last token of every
//! line closes a sentence whether or not it carries end punctuation.

use std::collections::BTreeSet;
use std::fmt;

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::params::Parameters;
use crate::span::Span;
use crate::tokenizer::{Token, Tokenizer, TypeKey};
use crate::trainer::TokenizedDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    SentenceBreak,
    Abbreviation,
    AbbreviationAndBreak,
    Ellipsis,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    None,
    LineEnd,
    UnambiguousEnder,
    ForcedAbbrev,
    LearnedAbbrev,
    CollocationSuppress,
    NumberCollocation,
    StarterBreak,
    PlainPeriod,
    Ellipsis,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::None => "none",
            Reason::LineEnd => "line_end",
            Reason::UnambiguousEnder => "unambiguous_ender",
            Reason::ForcedAbbrev => "forced_abbrev",
            Reason::LearnedAbbrev => "learned_abbrev",
            Reason::CollocationSuppress => "collocation_suppress",
            Reason::NumberCollocation => "number_collocation",
            Reason::StarterBreak => "starter_break",
            Reason::PlainPeriod => "plain_period",
            Reason::Ellipsis => "ellipsis",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundaryDecision {
    pub token_index: usize,
    pub kind: BoundaryKind,
    pub reason: Reason,
}

impl BoundaryDecision {
    fn new(token_index: usize, kind: BoundaryKind, reason: Reason) -> Self {
        BoundaryDecision {
            token_index,
            kind,
            reason,
        }
    }

    pub fn ends_sentence(&self) -> bool {
        matches!(
            self.kind,
            BoundaryKind::SentenceBreak | BoundaryKind::AbbreviationAndBreak
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SegmenterConfig {
    /// Break after every ellipsis instead of only at line ends and before
    /// sentence starters.
    pub ellipsis_breaks: bool,
}

pub fn first_pass(tokens: &[Token], params: &Parameters) -> Vec<BoundaryDecision> {
    first_pass_with(tokens, params, &SegmenterConfig::default())
}

pub fn first_pass_with(tokens: &[Token], params: &Parameters, config: &SegmenterConfig) -> Vec<BoundaryDecision> {
    let mut decisions: Vec<BoundaryDecision> = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| {
            use BoundaryKind as K;
            if t.is_unambiguous_ender() {
                BoundaryDecision::new(i, K::SentenceBreak, Reason::UnambiguousEnder)
            } else if t.is_ellipsis() {
                if config.ellipsis_breaks {
                    BoundaryDecision::new(i, K::SentenceBreak, Reason::Ellipsis)
                } else {
                    BoundaryDecision::new(i, K::Ellipsis, Reason::Ellipsis)
                }
            } else if t.is_period_final() {
                let stripped = t.type_key().strip_final_period();
                if params.forced_abbrevs.contains(&stripped) {
                    BoundaryDecision::new(i, K::Abbreviation, Reason::ForcedAbbrev)
                } else if params.abbrev_types.contains(&stripped) {
                    BoundaryDecision::new(i, K::Abbreviation, Reason::LearnedAbbrev)
                } else {
                    BoundaryDecision::new(i, K::SentenceBreak, Reason::PlainPeriod)
                }
            } else {
                BoundaryDecision::new(i, K::None, Reason::None)
            }
        })
        .collect();

    if let Some(last) = decisions.last_mut() {
        if !last.ends_sentence() {
            last.kind = if last.kind == BoundaryKind::Abbreviation {
                BoundaryKind::AbbreviationAndBreak
            } else {
                BoundaryKind::SentenceBreak
            };
            last.reason = Reason::LineEnd;
        }
    }
    decisions
}

/// Applies, at each period-final token with a successor on the line:
/// starter upgrade of abbreviations and ellipses, then collocation
/// suppression of plain-period breaks, then number-class suppression.
pub fn second_pass(tokens: &[Token], decisions: &[BoundaryDecision], params: &Parameters) -> Vec<BoundaryDecision> {
    let mut out = decisions.to_vec();
    for (i, pair) in tokens.windows(2).enumerate() {
        let (t, u) = (&pair[0], &pair[1]);
        if !t.is_period_final() {
            continue;
        }
        let next = u.type_key();
        let d = &mut out[i];
        match d.kind {
            BoundaryKind::Abbreviation | BoundaryKind::Ellipsis => {
                if params.sentence_starters.contains(&next) {
                    d.kind = BoundaryKind::AbbreviationAndBreak;
                    d.reason = Reason::StarterBreak;
                }
            }
            BoundaryKind::SentenceBreak if d.reason == Reason::PlainPeriod => {
                let stripped = t.type_key().strip_final_period();
                if params.collocations.contains(&(stripped, next.clone())) {
                    d.kind = BoundaryKind::Abbreviation;
                    d.reason = Reason::CollocationSuppress;
                } else if t.is_number() && params.collocations.contains(&(TypeKey::number(), next)) {
                    d.kind = BoundaryKind::Abbreviation;
                    d.reason = Reason::NumberCollocation;
                }
            }
            _ => {}
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub text: String,
    /// Byte range of `text` in the source document.
    pub span: Span,
    /// Token ranges in the source document.
    pub token_spans: Vec<Span>,
}

impl Sentence {
    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        let base = self.span.start;
        self.token_spans
            .iter()
            .map(move |s| &self.text[s.start - base..s.end - base])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentedDocument {
    pub id: String,
    pub sentences: Vec<Sentence>,
}

impl SegmentedDocument {
    /// Cuts `doc` after every token whose flag in `ends` is set. `ends` runs
    /// over the document's tokens in order; the final token always closes a
    /// sentence.
    pub fn from_breaks(doc: &Document, tokens: &TokenizedDocument, ends: &[bool]) -> Result<Self> {
        let spans: Vec<Span> = doc
            .lines
            .iter()
            .zip(&tokens.lines)
            .flat_map(|(line, toks)| toks.iter().map(move |t| t.span.shift(line.span.start)))
            .collect();
        if spans.len() != ends.len() {
            return Err(Error::NotComparable(format!(
                "{}: {} break flags for {} tokens",
                doc.id,
                ends.len(),
                spans.len()
            )));
        }
        let mut sentences = Vec::new();
        let mut current: Vec<Span> = Vec::new();
        for (i, span) in spans.iter().enumerate() {
            current.push(*span);
            if ends[i] || i + 1 == spans.len() {
                let span = Span::new(current[0].start, span.end);
                sentences.push(Sentence {
                    text: doc.text[span.range()].to_owned(),
                    span,
                    token_spans: std::mem::take(&mut current),
                });
            }
        }
        Ok(SegmentedDocument {
            id: doc.id.clone(),
            sentences,
        })
    }

    /// Rebuilds a segmentation from sentence texts alone, e.g. parsed from
    /// XML. Sentences are laid out one per line.
    pub fn from_sentence_texts<S: AsRef<str>>(id: impl Into<String>, texts: &[S], tokenizer: &Tokenizer) -> Self {
        let mut sentences = Vec::new();
        let mut offset = 0;
        for text in texts {
            let text = text.as_ref();
            let mut token_spans = Vec::new();
            let mut line_start = 0;
            for piece in text.split('\n') {
                token_spans.extend(
                    tokenizer
                        .tokenize(piece)
                        .into_iter()
                        .map(|t| t.span.shift(offset + line_start)),
                );
                line_start += piece.len() + 1;
            }
            if !token_spans.is_empty() {
                sentences.push(Sentence {
                    text: text.to_owned(),
                    span: Span::new(offset, offset + text.len()),
                    token_spans,
                });
            }
            offset += text.len() + 1;
        }
        SegmentedDocument {
            id: id.into(),
            sentences,
        }
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.sentences.iter().flat_map(Sentence::tokens)
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(|s| s.token_spans.len()).sum()
    }

    /// Token indices (document-wide) that end a sentence.
    pub fn boundary_indices(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut n = 0;
        for s in &self.sentences {
            n += s.token_spans.len();
            out.insert(n - 1);
        }
        out
    }

    pub fn sentence_texts(&self) -> Vec<&str> {
        self.sentences.iter().map(|s| s.text.as_str()).collect()
    }
}

/// Segments documents with fixed parameters and configuration.
#[derive(Debug, Clone)]
pub struct Segmenter<'p> {
    params: &'p Parameters,
    tokenizer: Tokenizer,
    config: SegmenterConfig,
}

impl<'p> Segmenter<'p> {
    pub fn new(params: &'p Parameters) -> Self {
        Segmenter {
            params,
            tokenizer: Tokenizer::default(),
            config: SegmenterConfig::default(),
        }
    }

    pub fn with_tokenizer(mut self, tokenizer: Tokenizer) -> Self {
        self.tokenizer = tokenizer;
        self
    }

    pub fn with_config(mut self, config: SegmenterConfig) -> Self {
        self.config = config;
        self
    }

    pub fn decide_line(&self, tokens: &[Token]) -> Vec<BoundaryDecision> {
        let first = first_pass_with(tokens, self.params, &self.config);
        second_pass(tokens, &first, self.params)
    }

    /// Per-line decisions for a tokenized document.
    pub fn decide(&self, tokens: &TokenizedDocument) -> Vec<Vec<BoundaryDecision>> {
        tokens.lines.iter().map(|l| self.decide_line(l)).collect()
    }

    pub fn segment(&self, doc: &Document) -> SegmentedDocument {
        let tokens = TokenizedDocument::new(doc, &self.tokenizer);
        let ends: Vec<bool> = self
            .decide(&tokens)
            .iter()
            .flatten()
            .map(BoundaryDecision::ends_sentence)
            .collect();
        SegmentedDocument::from_breaks(doc, &tokens, &ends).expect("one decision per token")
    }
}

pub fn segment_document(doc: &Document, params: &Parameters) -> SegmentedDocument {
    Segmenter::new(params).segment(doc)
}

/// The five abbreviations used in the Sorani evaluation: Dr., professor,
/// S.W (peace be upon him), teacher, and A.D. The last keeps its ZWNJs.
pub fn forced_abbrev_list_default() -> BTreeSet<TypeKey> {
    ["د", "پ", "د.خ", "م", "پ\u{200C}.\u{200C}ز"]
        .into_iter()
        .map(TypeKey::new)
        .collect()
}
