//! Unsupervised sentence boundary detection for caseless Persian-Arabic
//! script, tuned for Kurdish (Sorani).
//!
//! The pipeline is: load a corpus ([`corpus`]), split it into dev and test
//! halves, tokenize ([`tokenizer`]), learn abbreviation types, collocations
//! and sentence starters from dev ([`trainer`]), segment test ([`segmenter`]),
//! write sentence-tagged XML ([`xml`]) and score the result ([`eval`]).
//!
//! ```
//! use sorani_sbd::{segment_document, Document, Parameters, forced_abbrev_list_default};
//!
//! let doc = Document::from_raw("doc", "doc", "د. ئەحمەد هات.");
//! let params = Parameters::default().with_forced(forced_abbrev_list_default());
//! let seg = segment_document(&doc, &params);
//! assert_eq!(seg.sentence_texts(), ["د. ئەحمەد هات."]);
//! ```

pub mod corpus;
pub mod error;
pub mod eval;
pub mod params;
pub mod pipeline;
pub mod segmenter;
pub mod span;
pub mod tokenizer;
pub mod trainer;
pub mod xml;

pub use corpus::{load_corpus, split_corpus, CorpusSplit, Document, Line};
pub use error::{Error, ErrorClass, Result};
pub use eval::{boundary_confusion, confusion_from_annotations, metrics, ConfusionCounts, Metrics, Report};
pub use params::{load_params, save_params, Parameters};
pub use segmenter::{
    first_pass, forced_abbrev_list_default, second_pass, segment_document, BoundaryDecision, BoundaryKind,
    SegmentedDocument, Segmenter, SegmenterConfig, Sentence,
};
pub use span::Span;
pub use tokenizer::{strip_final_period, tokenize_line, type_of, Token, TokenFlags, Tokenizer, TypeKey};
pub use trainer::{train, CountTable, TokenizedDocument, TrainerConfig};
pub use xml::{emit_xml, parse_annotated_xml, AnnotatedSentence, Judgment};
