use std::collections::{BTreeSet, HashMap};

use crate::tokenizer::{Token, TypeKey};

use super::TokenizedDocument;

/// Frequency statistics over a tokenized corpus. Bigrams are counted between
/// adjacent tokens of the same line, keyed by full type keys.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    pub total_tokens: u64,
    /// Period-final tokens (standalone periods and ellipses included).
    pub n_periods: u64,
    /// Keyed by the period-final type, e.g. `د.`.
    pub with_period: HashMap<TypeKey, u64>,
    /// Keyed by the bare type, e.g. `د`.
    pub without_period: HashMap<TypeKey, u64>,
    pub bigrams: HashMap<(TypeKey, TypeKey), u64>,
    /// Types of tokens that directly follow a provisional boundary.
    pub starts: HashMap<TypeKey, u64>,
    /// Provisional boundaries that are followed by a token in the same
    /// document, so `starts` sums to `n_starts`.
    pub n_starts: u64,
}

fn bump<K: std::hash::Hash + Eq>(map: &mut HashMap<K, u64>, key: K, by: u64) {
    *map.entry(key).or_insert(0) += by;
}

fn merge_map<K: std::hash::Hash + Eq + Clone>(into: &mut HashMap<K, u64>, from: &HashMap<K, u64>) {
    for (k, v) in from {
        bump(into, k.clone(), *v);
    }
}

impl CountTable {
    /// Occurrences of a full type key (period-final or not).
    pub fn count(&self, key: &TypeKey) -> u64 {
        let table = if key.is_period_final() {
            &self.with_period
        } else {
            &self.without_period
        };
        table.get(key).copied().unwrap_or(0)
    }

    /// Occurrences of a period-stripped type with and without a final period.
    pub fn total(&self, stripped: &TypeKey) -> u64 {
        self.with_period.get(&stripped.with_period()).copied().unwrap_or(0)
            + self.without_period.get(stripped).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, other: &CountTable) {
        self.total_tokens += other.total_tokens;
        self.n_periods += other.n_periods;
        self.n_starts += other.n_starts;
        merge_map(&mut self.with_period, &other.with_period);
        merge_map(&mut self.without_period, &other.without_period);
        merge_map(&mut self.bigrams, &other.bigrams);
        merge_map(&mut self.starts, &other.starts);
    }

    pub fn merged(mut self, other: &CountTable) -> CountTable {
        self.merge(other);
        self
    }

    /// Multiplies every count by `m`.
    pub fn scaled(&self, m: u64) -> CountTable {
        let scale = |map: &HashMap<TypeKey, u64>| map.iter().map(|(k, v)| (k.clone(), v * m)).collect();
        CountTable {
            total_tokens: self.total_tokens * m,
            n_periods: self.n_periods * m,
            with_period: scale(&self.with_period),
            without_period: scale(&self.without_period),
            bigrams: self.bigrams.iter().map(|(k, v)| (k.clone(), v * m)).collect(),
            starts: scale(&self.starts),
            n_starts: self.n_starts * m,
        }
    }
}

/// Whether `token` closes a provisional sentence: line ends, unambiguous
/// enders, and period-final tokens that are not known abbreviations.
pub fn is_provisional_boundary(token: &Token, key: &TypeKey, abbrevs: &BTreeSet<TypeKey>) -> bool {
    token.is_line_end()
        || token.is_unambiguous_ender()
        || (token.is_period_final() && !abbrevs.contains(&key.strip_final_period()))
}

/// Counts one document. `abbrevs` (period-stripped) decides which
/// period-final tokens count as provisional boundaries.
pub fn count_document(doc: &TokenizedDocument, abbrevs: &BTreeSet<TypeKey>) -> CountTable {
    let mut table = CountTable::default();
    let mut after_boundary = false;
    for line in &doc.lines {
        let keys: Vec<TypeKey> = line.iter().map(Token::type_key).collect();
        for (i, (token, key)) in line.iter().zip(&keys).enumerate() {
            table.total_tokens += 1;
            if token.is_period_final() {
                table.n_periods += 1;
                bump(&mut table.with_period, key.clone(), 1);
            } else {
                bump(&mut table.without_period, key.clone(), 1);
            }
            if i > 0 {
                bump(&mut table.bigrams, (keys[i - 1].clone(), key.clone()), 1);
            }
            if after_boundary {
                table.n_starts += 1;
                bump(&mut table.starts, key.clone(), 1);
            }
            after_boundary = is_provisional_boundary(token, key, abbrevs);
        }
    }
    table
}

pub fn collect_counts(docs: &[TokenizedDocument], abbrevs: &BTreeSet<TypeKey>) -> CountTable {
    docs.iter()
        .map(|d| count_document(d, abbrevs))
        .fold(CountTable::default(), |acc, t| acc.merged(&t))
}
