use std::collections::BTreeSet;

use log::debug;

use super::counts::CountTable;
use super::stats::{log_likelihood, pair_llr};
use crate::error::{Error, Result};
use crate::tokenizer::TypeKey;

/// Rate of a final period on a true abbreviation under the alternative.
pub const ABBREV_PERIOD_RATE: f64 = 0.99;

fn rate(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Types eligible for abbreviation scoring: containing a letter and not the
/// number class.
pub fn is_abbrev_candidate(stripped: &TypeKey) -> bool {
    !stripped.is_number() && stripped.has_letter()
}

/// Left sides a collocation may have: the number class, or an initial (a
/// single letter apart from periods).
pub fn is_collocation_candidate(stripped: &TypeKey) -> bool {
    stripped.is_number() || (is_abbrev_candidate(stripped) && stripped.non_period_len() == 1)
}

/// Abbreviation score of a period-stripped type:
/// `llr * (internal periods + 1) * exp(-len) * len^(-count without period)`.
pub fn abbrev_score(key: &TypeKey, counts: &CountTable) -> Result<f64> {
    if key.is_period_final() {
        return Err(Error::Precondition(format!(
            "abbrev_score: {key} is not period-stripped"
        )));
    }
    let with = counts.with_period.get(&key.with_period()).copied().unwrap_or(0);
    if with == 0 {
        return Err(Error::Precondition(format!("abbrev_score: {key}. never observed")));
    }
    let len = key.non_period_len();
    if len == 0 {
        return Err(Error::Precondition(
            "abbrev_score: type has no non-period characters".into(),
        ));
    }
    let without = counts.without_period.get(key).copied().unwrap_or(0);
    let n = with + without;
    let p0 = rate(counts.n_periods, counts.total_tokens);

    let llr = 2.0 * (log_likelihood(with, n, ABBREV_PERIOD_RATE)? - log_likelihood(with, n, p0)?);
    let f_periods = (key.internal_periods() + 1) as f64;
    let f_length = (-(len as f64)).exp();
    let f_penalty = (len as f64).powf(-(without as f64));
    Ok(llr * f_periods * f_length * f_penalty)
}

pub fn detect_abbreviations(counts: &CountTable, threshold: f64) -> BTreeSet<TypeKey> {
    let mut found = BTreeSet::new();
    for key in counts.with_period.keys() {
        let stripped = key.strip_final_period();
        if !is_abbrev_candidate(&stripped) {
            continue;
        }
        match abbrev_score(&stripped, counts) {
            Ok(score) if score >= threshold => {
                debug!("abbreviation {stripped}: score {score:.10e}");
                found.insert(stripped);
            }
            Ok(_) => {}
            Err(e) => debug!("abbreviation {stripped} skipped: {e}"),
        }
    }
    found
}

/// Pairs `(a, b)` where the period-final form of `a` is followed by `b` more
/// often than chance. `a` is the number class or an initial.
pub fn detect_collocations(counts: &CountTable, threshold: f64) -> BTreeSet<(TypeKey, TypeKey)> {
    let n = counts.total_tokens;
    let mut found = BTreeSet::new();
    for ((left, right), &c12) in &counts.bigrams {
        if !left.is_period_final() {
            continue;
        }
        let stripped = left.strip_final_period();
        if !is_collocation_candidate(&stripped) {
            continue;
        }
        let c1 = counts.total(&stripped);
        let c2 = counts.count(right);
        let Ok(llr) = pair_llr(c1, c2, c12, n) else {
            debug!("collocation ({stripped}, {right}) outside pair_llr domain");
            continue;
        };
        if llr >= threshold && rate(c12, c1) > rate(c2, n) {
            debug!("collocation ({stripped}, {right}): llr {llr:.10e}");
            found.insert((stripped, right.clone()));
        }
    }
    found
}

pub fn detect_sentence_starters(counts: &CountTable, threshold: f64) -> BTreeSet<TypeKey> {
    let n = counts.total_tokens;
    let mut found = BTreeSet::new();
    for (key, &starts) in &counts.starts {
        let c = counts.count(key);
        let Ok(llr) = pair_llr(counts.n_starts, c, starts, n) else {
            continue;
        };
        if llr >= threshold && rate(starts, counts.n_starts) > rate(c, n) {
            debug!("sentence starter {key}: llr {llr:.10e}");
            found.insert(key.clone());
        }
    }
    found
}
