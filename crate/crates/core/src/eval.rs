//! Confusion counts and the derived precision, recall, F1 and error rate.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};
use crate::segmenter::SegmentedDocument;
use crate::xml::{AnnotatedSentence, Judgment};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> Self {
        ConfusionCounts { tp, tn, fp, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn scaled(&self, m: u64) -> Self {
        ConfusionCounts::new(self.tp * m, self.tn * m, self.fp * m, self.fn_ * m)
    }

    pub fn record(&mut self, j: Judgment) {
        match j {
            Judgment::Tp => self.tp += 1,
            Judgment::Tn => self.tn += 1,
            Judgment::Fp => self.fp += 1,
            Judgment::Fn => self.fn_ += 1,
        }
    }
}

impl Add for ConfusionCounts {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        ConfusionCounts::new(self.tp + o.tp, self.tn + o.tn, self.fp + o.fp, self.fn_ + o.fn_)
    }
}

impl AddAssign for ConfusionCounts {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl std::iter::Sum for ConfusionCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ConfusionCounts::default(), Add::add)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub error_rate: f64,
}

pub fn confusion_from_annotations(sentences: &[AnnotatedSentence]) -> Result<ConfusionCounts> {
    let mut c = ConfusionCounts::default();
    for (i, s) in sentences.iter().enumerate() {
        c.record(s.judgment.ok_or(Error::MissingJudgment(i))?);
    }
    Ok(c)
}

/// Compares sentence-final token positions of two segmentations of the same
/// token stream. Tokens that end a sentence in neither count as `tn`.
pub fn boundary_confusion(pred: &SegmentedDocument, gold: &SegmentedDocument) -> Result<ConfusionCounts> {
    if !pred.tokens().eq(gold.tokens()) {
        let p = pred.token_count();
        let g = gold.token_count();
        let at = pred
            .tokens()
            .zip(gold.tokens())
            .position(|(a, b)| a != b)
            .unwrap_or(p.min(g));
        return Err(Error::NotComparable(format!(
            "{} vs {}: token streams diverge at token {at} ({p} vs {g} tokens)",
            pred.id, gold.id
        )));
    }
    let pb = pred.boundary_indices();
    let gb = gold.boundary_indices();
    let tp = pb.intersection(&gb).count() as u64;
    let fp = pb.difference(&gb).count() as u64;
    let fn_ = gb.difference(&pb).count() as u64;
    let tn = pred.token_count() as u64 - tp - fp - fn_;
    Ok(ConfusionCounts::new(tp, tn, fp, fn_))
}

pub fn metrics(c: &ConfusionCounts) -> Result<Metrics> {
    let total = c.total();
    if total == 0 {
        return Err(Error::UndefinedMetric("error_rate"));
    }
    if c.tp + c.fp == 0 {
        return Err(Error::UndefinedMetric("precision"));
    }
    if c.tp + c.fn_ == 0 {
        return Err(Error::UndefinedMetric("recall"));
    }
    let precision = c.tp as f64 / (c.tp + c.fp) as f64;
    let recall = c.tp as f64 / (c.tp + c.fn_) as f64;
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let error_rate = (c.fp + c.fn_) as f64 / total as f64;
    Ok(Metrics {
        precision,
        recall,
        f1,
        error_rate,
    })
}

/// Percentage rounded half-up to two decimals.
pub fn percent(fraction: f64) -> f64 {
    // The offset keeps exact halves like 0.123450000 from rounding down after
    // binary representation error.
    ((fraction * 10_000.0) + 0.5 + 1e-9).floor() / 100.0
}

/// Human-readable report followed by the key=value block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Report {
    pub counts: ConfusionCounts,
    pub metrics: Metrics,
}

impl Report {
    pub fn new(counts: ConfusionCounts) -> Result<Self> {
        Ok(Report {
            counts,
            metrics: metrics(&counts)?,
        })
    }

    /// `tp= tn= fp= fn= precision= recall= f1= error_rate=`, one per line.
    pub fn key_values(&self) -> String {
        let c = &self.counts;
        let m = &self.metrics;
        format!(
            "tp={}\ntn={}\nfp={}\nfn={}\nprecision={:.2}%\nrecall={:.2}%\nf1={:.2}%\nerror_rate={:.2}%\n",
            c.tp,
            c.tn,
            c.fp,
            c.fn_,
            percent(m.precision),
            percent(m.recall),
            percent(m.f1),
            percent(m.error_rate)
        )
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.metrics;
        writeln!(f, "Precision  {:>7.2}%", percent(m.precision))?;
        writeln!(f, "Recall     {:>7.2}%", percent(m.recall))?;
        writeln!(f, "F1         {:>7.2}%", percent(m.f1))?;
        writeln!(f, "Error rate {:>7.2}%", percent(m.error_rate))?;
        f.write_str(&self.key_values())
    }
}
