//! Line tokenization for Persian-Arabic-script text.
//!
//! A line is split on whitespace, and a fixed set of punctuation characters
//! always forms single-character tokens. A run of periods directly after a
//! word character stays attached to that word, so `د.` and `1.` come out as
//! single period-final tokens while `؟` stands alone. Periods followed by
//! more word characters stay inside the token (`د.خ`, `پ‌.‌ز`, `3.5`).
//!
//! The zero-width non-joiner (U+200C) is an ordinary word character.

use std::fmt;

use bitflags::bitflags;
use unicode_normalization::UnicodeNormalization;

use crate::span::Span;

/// Class key shared by every numeral, whatever digit block it is written in.
pub const NUMBER_KEY: &str = "##number##";

/// Characters that always form a token of their own.
pub const STANDALONE_PUNCTUATION: &[char] = &[
    '?', '!', '؟', '،', '؛', ':', '(', ')', '«', '»', '"', '\'', '—', '–', '_', '-',
];

/// Default set of unambiguous sentence enders.
pub const DEFAULT_ENDERS: &[char] = &['?', '!', '؟'];

const DECIMAL_SEPARATORS: &[char] = &['.', ',', '\u{066B}'];

bitflags! {
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
    pub struct TokenFlags: u8 {
        const PERIOD_FINAL = 1 << 0;
        const ELLIPSIS = 1 << 1;
        const NUMBER = 1 << 2;
        const UNAMBIGUOUS_ENDER = 1 << 3;
        const LINE_START = 1 << 4;
        const LINE_END = 1 << 5;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub text: String,
    /// Byte range within the line.
    pub span: Span,
    pub flags: TokenFlags,
}

impl Token {
    pub fn is_period_final(&self) -> bool {
        self.flags.contains(TokenFlags::PERIOD_FINAL)
    }

    pub fn is_number(&self) -> bool {
        self.flags.contains(TokenFlags::NUMBER)
    }

    pub fn is_ellipsis(&self) -> bool {
        self.flags.contains(TokenFlags::ELLIPSIS)
    }

    pub fn is_unambiguous_ender(&self) -> bool {
        self.flags.contains(TokenFlags::UNAMBIGUOUS_ENDER)
    }

    pub fn is_line_end(&self) -> bool {
        self.flags.contains(TokenFlags::LINE_END)
    }

    pub fn type_key(&self) -> TypeKey {
        type_of(self)
    }
}

/// Normalized type of a token: NFC, lowercased, numerals collapsed to
/// [`NUMBER_KEY`], and at most one trailing period.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeKey(String);

impl TypeKey {
    /// Wraps `s` after NFC normalization. No other normalization is applied.
    pub fn new(s: &str) -> Self {
        TypeKey(s.nfc().collect())
    }

    pub fn number() -> Self {
        TypeKey(NUMBER_KEY.to_owned())
    }

    /// Normalizes a free-standing entry (e.g. a line of an abbreviation list)
    /// the way a token with that text would be, then strips its final period.
    /// Returns `None` for entries that normalize to nothing.
    pub fn from_entry(entry: &str) -> Option<Self> {
        let entry = entry.trim();
        if entry.is_empty() {
            return None;
        }
        let key = normalize_text(entry, &flags_for(entry, DEFAULT_ENDERS)).strip_final_period();
        if key.0.is_empty() {
            None
        } else {
            Some(key)
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_period_final(&self) -> bool {
        self.0.ends_with('.')
    }

    pub fn is_number(&self) -> bool {
        self.0 == NUMBER_KEY
    }

    pub fn strip_final_period(&self) -> TypeKey {
        strip_final_period(self)
    }

    pub fn with_period(&self) -> TypeKey {
        TypeKey(format!("{}.", self.0))
    }

    /// Characters other than `.`.
    pub fn non_period_len(&self) -> usize {
        self.0.chars().filter(|&c| c != '.').count()
    }

    pub fn internal_periods(&self) -> usize {
        self.strip_final_period().0.matches('.').count()
    }

    pub fn has_letter(&self) -> bool {
        self.0.chars().any(char::is_alphabetic)
    }
}

impl fmt::Display for TypeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Configurable tokenizer. The default uses [`DEFAULT_ENDERS`].
#[derive(Debug, Clone)]
pub struct Tokenizer {
    enders: Vec<char>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer {
            enders: DEFAULT_ENDERS.to_vec(),
        }
    }
}

impl Tokenizer {
    /// Builds a tokenizer whose unambiguous enders are `enders`. Each ender is
    /// also treated as standalone punctuation. An ender of `.` is ignored since
    /// the period is always ambiguous.
    pub fn with_enders(enders: impl IntoIterator<Item = char>) -> Self {
        let mut enders: Vec<char> = enders.into_iter().filter(|c| *c != '.' && !c.is_whitespace()).collect();
        enders.sort_unstable();
        enders.dedup();
        Tokenizer { enders }
    }

    pub fn enders(&self) -> &[char] {
        &self.enders
    }

    fn is_standalone(&self, c: char) -> bool {
        STANDALONE_PUNCTUATION.contains(&c) || self.enders.contains(&c)
    }

    fn is_word_char(&self, c: char) -> bool {
        !c.is_whitespace() && c != '.' && !self.is_standalone(c)
    }

    pub fn tokenize(&self, line: &str) -> Vec<Token> {
        let mut tokens = Vec::new();
        let mut chars = line.char_indices().peekable();

        while let Some((start, c)) = chars.next() {
            if c.is_whitespace() {
                continue;
            }
            let mut end = start + c.len_utf8();
            if c == '.' {
                // Detached period run.
                while let Some(&(i, '.')) = chars.peek() {
                    end = i + 1;
                    chars.next();
                }
            } else if self.is_word_char(c) {
                while let Some(&(i, n)) = chars.peek() {
                    if n == '.' || self.is_word_char(n) {
                        end = i + n.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
            }
            let text = &line[start..end];
            tokens.push(Token {
                text: text.to_owned(),
                span: Span::new(start, end),
                flags: flags_for(text, &self.enders),
            });
        }

        if let Some(first) = tokens.first_mut() {
            first.flags |= TokenFlags::LINE_START;
        }
        if let Some(last) = tokens.last_mut() {
            last.flags |= TokenFlags::LINE_END;
        }
        tokens
    }
}

/// Tokenizes `line` with the default tokenizer.
pub fn tokenize_line(line: &str) -> Vec<Token> {
    Tokenizer::default().tokenize(line)
}

fn flags_for(text: &str, enders: &[char]) -> TokenFlags {
    let mut flags = TokenFlags::empty();
    if text.ends_with('.') {
        flags |= TokenFlags::PERIOD_FINAL;
        let run = text.chars().rev().take_while(|&c| c == '.').count();
        if run >= 3 {
            flags |= TokenFlags::ELLIPSIS;
        }
    }
    if is_number(text.strip_suffix('.').unwrap_or(text)) {
        flags |= TokenFlags::NUMBER;
    }
    let mut chars = text.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if enders.contains(&c) {
            flags |= TokenFlags::UNAMBIGUOUS_ENDER;
        }
    }
    flags
}

/// ASCII, Arabic-Indic (U+0660..=U+0669) and Eastern Arabic-Indic
/// (U+06F0..=U+06F9) digits.
pub fn is_digit(c: char) -> bool {
    c.is_ascii_digit() || ('\u{0660}'..='\u{0669}').contains(&c) || ('\u{06F0}'..='\u{06F9}').contains(&c)
}

/// Nonempty digit sequence with at most one internal decimal separator.
pub fn is_number(s: &str) -> bool {
    let chars: Vec<char> = s.chars().collect();
    if chars.is_empty() {
        return false;
    }
    let mut separators = 0;
    for (i, &c) in chars.iter().enumerate() {
        if is_digit(c) {
            continue;
        }
        if DECIMAL_SEPARATORS.contains(&c) && i > 0 && i + 1 < chars.len() {
            separators += 1;
            if separators > 1 {
                return false;
            }
            continue;
        }
        return false;
    }
    true
}

fn normalize_text(text: &str, flags: &TokenFlags) -> TypeKey {
    // "1..." collapses to the same key as "1.".
    let numeric_run = flags.contains(TokenFlags::PERIOD_FINAL) && is_number(text.trim_end_matches('.'));
    if flags.contains(TokenFlags::NUMBER) || numeric_run {
        let mut key = NUMBER_KEY.to_owned();
        if flags.contains(TokenFlags::PERIOD_FINAL) {
            key.push('.');
        }
        return TypeKey(key);
    }
    let mut key: String = text.to_lowercase().nfc().collect();
    if key.ends_with('.') {
        let trimmed = key.trim_end_matches('.').len();
        key.truncate(trimmed + 1);
    }
    TypeKey(key)
}

pub fn type_of(token: &Token) -> TypeKey {
    normalize_text(&token.text, &token.flags)
}

/// Removes exactly one trailing period, if any.
pub fn strip_final_period(key: &TypeKey) -> TypeKey {
    match key.0.strip_suffix('.') {
        Some(rest) => TypeKey(rest.to_owned()),
        None => key.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.text.as_str()).collect()
    }

    #[test]
    fn empty_and_blank_lines() {
        assert!(tokenize_line("").is_empty());
        assert!(tokenize_line("  \t ").is_empty());
    }

    #[test]
    fn arabic_question_mark_stands_alone() {
        let toks = tokenize_line("چۆنی؟ باشم");
        assert_eq!(texts(&toks), ["چۆنی", "؟", "باشم"]);
        assert!(toks[1].is_unambiguous_ender());
        assert!(!toks[0].is_unambiguous_ender());
        assert!(toks[0].flags.contains(TokenFlags::LINE_START));
        assert!(toks[2].is_line_end());
    }

    #[test]
    fn ordinal_numeral_is_period_final_number() {
        let toks = tokenize_line("1. پێشەکی");
        assert_eq!(texts(&toks), ["1.", "پێشەکی"]);
        assert!(toks[0].is_period_final());
        assert!(toks[0].is_number());
        assert!(!toks[1].is_number());
    }

    #[test]
    fn abbreviation_keeps_its_period() {
        let toks = tokenize_line("د. ئەحمەد");
        assert_eq!(texts(&toks), ["د.", "ئەحمەد"]);
        assert!(toks[0].is_period_final());
        assert!(!toks[0].is_number());
    }

    #[test]
    fn ordinal_punctuation_variants() {
        let toks = tokenize_line("٢- بەش ٣_ بەش ۴. بەش");
        assert_eq!(texts(&toks), ["٢", "-", "بەش", "٣", "_", "بەش", "۴.", "بەش"]);
        assert!(toks[0].is_number());
        assert!(!toks[1].is_unambiguous_ender());
        assert!(toks[6].is_number() && toks[6].is_period_final());
    }

    #[test]
    fn internal_periods_and_zwnj() {
        let toks = tokenize_line("د.خ پ\u{200C}.\u{200C}ز.");
        assert_eq!(texts(&toks), ["د.خ", "پ\u{200C}.\u{200C}ز."]);
        assert!(!toks[0].is_period_final());
        assert!(toks[1].is_period_final());
    }

    #[test]
    fn period_runs() {
        let toks = tokenize_line("هات... . ؟.. ...");
        assert_eq!(texts(&toks), ["هات...", ".", "؟", "..", "..."]);
        assert!(toks[0].is_ellipsis() && toks[0].is_period_final());
        assert!(toks[1].is_period_final() && !toks[1].is_ellipsis());
        assert!(!toks[3].is_ellipsis());
        assert!(toks[4].is_ellipsis());
    }

    #[test]
    fn number_predicate() {
        for s in ["0", "١٢٣", "۱۲۳", "3.5", "3,5", "٣٫٥", "1٢۳"] {
            assert!(is_number(s), "{s}");
        }
        for s in ["", ".5", "5.", "1.2.3", "a1", "۱۲x"] {
            assert!(!is_number(s), "{s}");
        }
        let toks = tokenize_line("3.5.");
        assert!(toks[0].is_number() && toks[0].is_period_final());
    }

    #[test]
    fn type_keys() {
        let toks = tokenize_line("1. د. Hello هات... ۲");
        let keys: Vec<String> = toks.iter().map(|t| type_of(t).to_string()).collect();
        assert_eq!(keys, ["##number##.", "د.", "hello", "هات.", "##number##"]);
    }

    #[test]
    fn numeral_with_ellipsis_keys_as_number() {
        let t = &tokenize_line("1...")[0];
        assert!(!t.is_number() && t.is_ellipsis());
        assert_eq!(type_of(t).as_str(), "##number##.");
    }

    #[test]
    fn strip_final_period_cases() {
        assert_eq!(TypeKey::new("د.").strip_final_period().as_str(), "د");
        assert_eq!(TypeKey::new("د.خ").strip_final_period().as_str(), "د.خ");
        assert_eq!(TypeKey::new("##number##.").strip_final_period().as_str(), NUMBER_KEY);
        let once = TypeKey::new("د.").strip_final_period();
        assert_eq!(once.strip_final_period(), once);
    }

    #[test]
    fn type_keys_are_nfc() {
        // U+0627 U+0653 composes to U+0622 under NFC.
        let toks = tokenize_line("\u{0627}\u{0653}و");
        assert_eq!(type_of(&toks[0]).as_str(), "\u{0622}و");
    }

    #[test]
    fn entry_normalization() {
        assert_eq!(TypeKey::from_entry(" د. ").unwrap().as_str(), "د");
        assert_eq!(TypeKey::from_entry("د.خ").unwrap().as_str(), "د.خ");
        assert_eq!(TypeKey::from_entry("12.").unwrap().as_str(), NUMBER_KEY);
        assert_eq!(TypeKey::from_entry("."), None);
        assert_eq!(TypeKey::from_entry(""), None);
    }

    #[test]
    fn custom_enders() {
        let tok = Tokenizer::with_enders(['?', '!', '؟', '۔']);
        let toks = tok.tokenize("هات۔ ڕۆیشت");
        assert_eq!(texts(&toks), ["هات", "۔", "ڕۆیشت"]);
        assert!(toks[1].is_unambiguous_ender());
    }
}
