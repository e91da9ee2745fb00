//! End-to-end run: split, train on dev, segment test with and without forced
//! abbreviations, and score both against gold segmentations when available.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use log::warn;
use walkdir::WalkDir;

use crate::corpus::{dev_line_count, ids_for, split_corpus, CorpusSplit, Document};
use crate::error::{Error, Result};
use crate::eval::{boundary_confusion, metrics, percent, ConfusionCounts, Report};
use crate::params::Parameters;
use crate::segmenter::{forced_abbrev_list_default, SegmentedDocument, Segmenter, SegmenterConfig};
use crate::tokenizer::{Tokenizer, TypeKey};
use crate::trainer::{train_documents, TokenizedDocument, TrainerConfig};
use crate::xml::{parse_annotated_document, AnnotatedDocument};

/// Gold sentence texts per document id.
pub type GoldSet = BTreeMap<String, Vec<String>>;

/// Parses every `.xml` file under `root`, keyed by the corpus id rule
/// (relative path without extension).
pub fn load_annotated(root: &Path) -> Result<BTreeMap<String, AnnotatedDocument>> {
    let mut docs = BTreeMap::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| Error::Io {
            path: e.path().unwrap_or(root).to_owned(),
            source: e.into(),
        })?;
        let path = entry.path();
        if !entry.file_type().is_file() || path.extension().and_then(|e| e.to_str()) != Some("xml") {
            continue;
        }
        let bytes = fs::read(path).map_err(|e| Error::Io {
            path: path.to_owned(),
            source: e,
        })?;
        let doc = parse_annotated_document(&bytes).map_err(|e| e.in_file(path))?;
        let (id, _) = ids_for(path.strip_prefix(root).unwrap_or(path));
        docs.insert(id, doc);
    }
    Ok(docs)
}

/// Sentence texts of every `.xml` file under `root`.
pub fn load_gold(root: &Path) -> Result<GoldSet> {
    Ok(load_annotated(root)?
        .into_iter()
        .map(|(id, d)| (id, d.sentences.into_iter().map(|s| s.text).collect()))
        .collect())
}

/// Per-token sentence-end flags for `doc`, read off gold sentences whose
/// tokens must match the document's token stream exactly.
pub fn gold_breaks(doc: &Document, tokenizer: &Tokenizer, sentences: &[String]) -> Result<Vec<bool>> {
    let doc_tokens: Vec<String> = TokenizedDocument::new(doc, tokenizer)
        .tokens()
        .map(|t| t.text.clone())
        .collect();
    let mut ends = Vec::with_capacity(doc_tokens.len());
    let mut pos = 0;
    for sentence in sentences {
        let toks: Vec<String> = sentence
            .split('\n')
            .flat_map(|l| tokenizer.tokenize(l))
            .map(|t| t.text)
            .collect();
        for (i, t) in toks.iter().enumerate() {
            if doc_tokens.get(pos) != Some(t) {
                return Err(Error::NotComparable(format!(
                    "{}: gold token {t:?} does not match source at token {pos}",
                    doc.id
                )));
            }
            ends.push(i + 1 == toks.len());
            pos += 1;
        }
    }
    if pos != doc_tokens.len() {
        return Err(Error::NotComparable(format!(
            "{}: gold covers {pos} of {} tokens",
            doc.id,
            doc_tokens.len()
        )));
    }
    Ok(ends)
}

#[derive(Debug, Clone)]
pub struct ReproduceConfig {
    pub ratio: f64,
    pub trainer: TrainerConfig,
    pub segmenter: SegmenterConfig,
    pub tokenizer: Tokenizer,
    pub forced: BTreeSet<TypeKey>,
}

impl Default for ReproduceConfig {
    fn default() -> Self {
        ReproduceConfig {
            ratio: 0.9,
            trainer: TrainerConfig::default(),
            segmenter: SegmenterConfig::default(),
            tokenizer: Tokenizer::default(),
            forced: forced_abbrev_list_default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Run {
    pub params: Parameters,
    pub documents: Vec<SegmentedDocument>,
    /// Absent when no gold was supplied.
    pub counts: Option<ConfusionCounts>,
}

#[derive(Debug, Clone)]
pub struct Reproduction {
    pub split: CorpusSplit,
    pub trained: Parameters,
    pub without_abbrevs: Run,
    pub with_abbrevs: Run,
}

fn gold_for_test(
    test: &Document,
    originals: &BTreeMap<&str, &Document>,
    gold: &GoldSet,
    config: &ReproduceConfig,
) -> Result<Option<SegmentedDocument>> {
    let base = test.base_id();
    let Some(sentences) = gold.get(base) else {
        warn!("no gold segmentation for {base}; skipped in scoring");
        return Ok(None);
    };
    let original = originals
        .get(base)
        .ok_or_else(|| Error::NotComparable(format!("{base}: no source document")))?;
    let all_ends = gold_breaks(original, &config.tokenizer, sentences)?;
    let k = dev_line_count(original.lines.len(), config.ratio);
    let skip: usize = original.lines[..k]
        .iter()
        .map(|l| config.tokenizer.tokenize(&l.text).len())
        .sum();
    let tokens = TokenizedDocument::new(test, &config.tokenizer);
    SegmentedDocument::from_breaks(test, &tokens, &all_ends[skip..]).map(Some)
}

fn run(
    params: Parameters,
    test: &[Document],
    gold: &[Option<SegmentedDocument>],
    config: &ReproduceConfig,
    scored: bool,
) -> Result<Run> {
    let segmenter = Segmenter::new(&params)
        .with_tokenizer(config.tokenizer.clone())
        .with_config(config.segmenter);
    let documents: Vec<SegmentedDocument> = test.iter().map(|d| segmenter.segment(d)).collect();
    let counts = if scored {
        let mut total = ConfusionCounts::default();
        for (pred, g) in documents.iter().zip(gold) {
            if let Some(g) = g {
                total += boundary_confusion(pred, g)?;
            }
        }
        Some(total)
    } else {
        None
    };
    Ok(Run {
        params,
        documents,
        counts,
    })
}

pub fn reproduce(docs: &[Document], gold: Option<&GoldSet>, config: &ReproduceConfig) -> Result<Reproduction> {
    let split = split_corpus(docs, config.ratio)?;
    let trained = train_documents(&split.dev, &config.tokenizer, &config.trainer)?;

    let originals: BTreeMap<&str, &Document> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
    let gold_docs: Vec<Option<SegmentedDocument>> = match gold {
        Some(g) => split
            .test
            .iter()
            .map(|t| gold_for_test(t, &originals, g, config))
            .collect::<Result<_>>()?,
        None => vec![None; split.test.len()],
    };

    let without_abbrevs = run(trained.clone(), &split.test, &gold_docs, config, gold.is_some())?;
    let with_abbrevs = run(
        trained.clone().with_forced(config.forced.iter().cloned()),
        &split.test,
        &gold_docs,
        config,
        gold.is_some(),
    )?;
    Ok(Reproduction {
        split,
        trained,
        without_abbrevs,
        with_abbrevs,
    })
}

impl Reproduction {
    /// Side-by-side table followed by one key=value block per run.
    pub fn report(&self) -> Result<String> {
        let mut out = String::new();
        let sentences = |r: &Run| r.documents.iter().map(|d| d.sentences.len()).sum::<usize>();
        let _ = writeln!(
            out,
            "dev documents={} test documents={}",
            self.split.dev.len(),
            self.split.test.len()
        );
        let _ = writeln!(
            out,
            "learned abbreviations={} collocations={} sentence_starters={}",
            self.trained.abbrev_types.len(),
            self.trained.collocations.len(),
            self.trained.sentence_starters.len()
        );
        let _ = writeln!(out, "{:<12}{:>18}{:>18}", "", "without_abbrevs", "with_abbrevs");
        let _ = writeln!(
            out,
            "{:<12}{:>18}{:>18}",
            "sentences",
            sentences(&self.without_abbrevs),
            sentences(&self.with_abbrevs)
        );

        let (Some(a), Some(b)) = (self.without_abbrevs.counts, self.with_abbrevs.counts) else {
            out.push_str("no gold segmentation supplied; metrics not computed\n");
            return Ok(out);
        };
        let ma = metrics(&a)?;
        let mb = metrics(&b)?;
        for (name, x, y) in [
            ("tp", a.tp as f64, b.tp as f64),
            ("tn", a.tn as f64, b.tn as f64),
            ("fp", a.fp as f64, b.fp as f64),
            ("fn", a.fn_ as f64, b.fn_ as f64),
        ] {
            let _ = writeln!(out, "{name:<12}{x:>18}{y:>18}");
        }
        for (name, x, y) in [
            ("precision", ma.precision, mb.precision),
            ("recall", ma.recall, mb.recall),
            ("f1", ma.f1, mb.f1),
            ("error_rate", ma.error_rate, mb.error_rate),
        ] {
            let _ = writeln!(
                out,
                "{name:<12}{:>18}{:>18}",
                format!("{:.2}%", percent(x)),
                format!("{:.2}%", percent(y))
            );
        }
        out.push_str("\n[without_abbreviations]\n");
        out.push_str(&Report::new(a)?.key_values());
        out.push_str("\n[with_abbreviations]\n");
        out.push_str(&Report::new(b)?.key_values());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gold_alignment() {
        let doc = Document::from_raw("a", "a", "د. ئەحمەد هات. ڕۆیشت\nسڵاو");
        let gold = vec!["د. ئەحمەد هات.".to_owned(), "ڕۆیشت".to_owned(), "سڵاو".to_owned()];
        let ends = gold_breaks(&doc, &Tokenizer::default(), &gold).unwrap();
        assert_eq!(ends, [false, false, true, true, true]);

        let wrong = vec!["د. ئەحمەد".to_owned()];
        assert!(matches!(
            gold_breaks(&doc, &Tokenizer::default(), &wrong),
            Err(Error::NotComparable(_))
        ));
    }

    #[test]
    fn reproduce_without_gold() {
        let docs: Vec<Document> = (0..2)
            .map(|i| {
                let lines: Vec<String> = (0..10).map(|j| format!("ئەم وانەیە {i} {j}. د. ئەحمەد هات.")).collect();
                Document::from_lines(format!("s{i}/x"), format!("s{i}/x"), lines.iter().map(String::as_str))
            })
            .collect();
        let r = reproduce(&docs, None, &ReproduceConfig::default()).unwrap();
        assert_eq!(r.split.test.len(), 2);
        assert!(r.without_abbrevs.counts.is_none());
        assert!(r.report().unwrap().contains("metrics not computed"));
    }
}
