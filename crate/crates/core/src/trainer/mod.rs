//! Unsupervised learning of abbreviation types, collocations and frequent
//! sentence starters.
//!
//! Training makes two passes. The first counts types with and without a final
//! period and scores abbreviation candidates. The second recounts with the
//! learned abbreviations marking which periods are provisional sentence
//! boundaries, then scores collocations and sentence starters against those
//! boundaries. No case statistics are kept since the script is caseless.

mod counts;
mod detect;
mod stats;

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::params::Parameters;
use crate::tokenizer::{Token, Tokenizer};

pub use counts::{collect_counts, count_document, is_provisional_boundary, CountTable};
pub use detect::{
    abbrev_score, detect_abbreviations, detect_collocations, detect_sentence_starters, is_abbrev_candidate,
    is_collocation_candidate, ABBREV_PERIOD_RATE,
};
pub use stats::{log_likelihood, pair_llr, PROB_CLAMP};

/// A document as lines of tokens. Empty lines are kept as empty vectors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenizedDocument {
    pub lines: Vec<Vec<Token>>,
}

impl TokenizedDocument {
    pub fn new(doc: &Document, tokenizer: &Tokenizer) -> Self {
        TokenizedDocument {
            lines: doc.lines.iter().map(|l| tokenizer.tokenize(&l.text)).collect(),
        }
    }

    /// Tokenizes LF-separated text with the default tokenizer.
    pub fn from_text(text: &str) -> Self {
        let tokenizer = Tokenizer::default();
        TokenizedDocument {
            lines: text.split('\n').map(|l| tokenizer.tokenize(l)).collect(),
        }
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.lines.iter().flatten()
    }

    pub fn token_count(&self) -> usize {
        self.lines.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainerConfig {
    pub abbrev_threshold: f64,
    pub colloc_threshold: f64,
    pub starter_threshold: f64,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        TrainerConfig {
            abbrev_threshold: 0.3,
            colloc_threshold: 7.88,
            starter_threshold: 30.0,
        }
    }
}

/// Learns parameters from `docs`. `forced_abbrevs` is left empty.
pub fn train(docs: &[TokenizedDocument], config: &TrainerConfig) -> Result<Parameters> {
    if docs.iter().all(|d| d.token_count() == 0) {
        return Err(Error::EmptyCorpus);
    }
    let first = collect_counts(docs, &Default::default());
    let abbrev_types = detect_abbreviations(&first, config.abbrev_threshold);

    let second = collect_counts(docs, &abbrev_types);
    let collocations = detect_collocations(&second, config.colloc_threshold);
    let sentence_starters = detect_sentence_starters(&second, config.starter_threshold);

    Ok(Parameters {
        abbrev_types,
        collocations,
        sentence_starters,
        forced_abbrevs: Default::default(),
    })
}

/// Tokenizes and trains in one step.
pub fn train_documents(docs: &[Document], tokenizer: &Tokenizer, config: &TrainerConfig) -> Result<Parameters> {
    let tokenized: Vec<TokenizedDocument> = docs.iter().map(|d| TokenizedDocument::new(d, tokenizer)).collect();
    train(&tokenized, config)
}
