//! Normalization primitives: lowercasing, diacritics stripping and
//! punctuation folding.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::UnicodeNormalization;

/// Canonical stand-in for every punctuation character during alignment.
pub const PUNCT_PLACEHOLDER: char = '.';

/// Whether casing and diacritics survive tokenization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CasingMode {
    Cased,
    /// Input is lowercased and stripped of diacritics before tokenization,
    /// so transformations have to restore both.
    Uncased,
}

impl CasingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CasingMode::Cased => "cased",
            CasingMode::Uncased => "uncased",
        }
    }
}

impl fmt::Display for CasingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown casing mode `{0}` (expected `cased` or `uncased`)")]
pub struct ParseCasingError(pub String);

impl FromStr for CasingMode {
    type Err = ParseCasingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cased" => Ok(CasingMode::Cased),
            "uncased" => Ok(CasingMode::Uncased),
            other => Err(ParseCasingError(other.into())),
        }
    }
}

pub fn is_mark(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::NonspacingMark
            | GeneralCategory::SpacingMark
            | GeneralCategory::EnclosingMark
    )
}

/// Punctuation categories plus currency and math symbols.
pub fn is_punctuation(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
            | GeneralCategory::CurrencySymbol
            | GeneralCategory::MathSymbol
    )
}

/// Canonical decomposition, removal of all combining marks, recomposition.
pub fn strip_diacritics(text: &str) -> String {
    text.nfd().filter(|&c| !is_mark(c)).nfc().collect()
}

/// Lowercase and strip diacritics, the view an uncased tokenizer works on.
pub fn uncase(text: &str) -> String {
    strip_diacritics(&text.to_lowercase())
}

/// Normalization applied by the tokenizer for the given casing mode.
pub fn normalize_for_casing(text: &str, casing: CasingMode) -> String {
    match casing {
        CasingMode::Cased => text.into(),
        CasingMode::Uncased => NormalizedView::uncased(text).normalized,
    }
}

fn single(mut it: impl Iterator<Item = char>) -> Option<char> {
    let first = it.next()?;
    match it.next() {
        None => Some(first),
        Some(_) => None,
    }
}

/// Lowercase mapping when it is a single character.
pub fn lower_char(c: char) -> Option<char> {
    single(c.to_lowercase())
}

/// Uppercase mapping when it is a single character.
pub fn upper_char(c: char) -> Option<char> {
    single(c.to_uppercase())
}

/// Diacritics-stripped form of a character when it is a single character.
pub fn strip_char(c: char) -> Option<char> {
    let mut buf = [0u8; 4];
    single(strip_diacritics(c.encode_utf8(&mut buf)).chars())
}

/// One-to-one character fold used for edit scripts: lowercase, and in
/// uncased mode also diacritics-free. Characters without a single-character
/// image are kept as they are.
pub fn fold_char(c: char, casing: CasingMode) -> char {
    let mut buf = [0u8; 4];
    let lowered: String = c.encode_utf8(&mut buf).to_lowercase();
    let folded = match casing {
        CasingMode::Cased => lowered,
        CasingMode::Uncased => strip_diacritics(&lowered),
    };
    single(folded.chars()).unwrap_or(c)
}

fn alignment_fold(c: char, out: &mut impl FnMut(char)) {
    if c.is_whitespace() {
        out(' ');
    } else if is_punctuation(c) {
        out(PUNCT_PLACEHOLDER);
    } else {
        let mut buf = [0u8; 4];
        for n in uncase(c.encode_utf8(&mut buf)).chars() {
            out(if is_punctuation(n) { PUNCT_PLACEHOLDER } else { n });
        }
    }
}

/// Text as compared during alignment: lowercased, without diacritics, every
/// punctuation character replaced by [`PUNCT_PLACEHOLDER`] and every
/// whitespace character by a plain space.
pub fn alignment_normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        alignment_fold(c, &mut |n| out.push(n));
    }
    out
}

/// A normalized string together with the original it was derived from.
///
/// `provenance[k]` is the character index in `original` that produced
/// normalized character `k`. Each original character is folded on its own,
/// so the map is monotone and character ranges of the normalized text can
/// be mapped back to contiguous ranges of the original.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedView {
    pub original: String,
    pub normalized: String,
    pub provenance: Vec<usize>,
}

impl NormalizedView {
    fn build(text: &str, mut fold: impl FnMut(char, &mut dyn FnMut(char))) -> Self {
        let mut normalized = String::with_capacity(text.len());
        let mut provenance = Vec::with_capacity(text.len());
        for (idx, c) in text.chars().enumerate() {
            fold(c, &mut |n| {
                normalized.push(n);
                provenance.push(idx);
            });
        }
        NormalizedView {
            original: text.into(),
            normalized,
            provenance,
        }
    }

    pub fn for_alignment(text: &str) -> Self {
        Self::build(text, |c, out| alignment_fold(c, &mut |n| out(n)))
    }

    pub fn uncased(text: &str) -> Self {
        Self::build(text, |c, out| {
            let mut buf = [0u8; 4];
            for n in uncase(c.encode_utf8(&mut buf)).chars() {
                out(n);
            }
        })
    }

    pub fn identity(text: &str) -> Self {
        Self::build(text, |c, out| out(c))
    }

    /// Number of characters in the original text.
    pub fn original_len(&self) -> usize {
        self.original.chars().count()
    }

    /// Maps a normalized boundary (0..=normalized length) to an original
    /// character boundary. Original characters that vanished during folding
    /// stick to the preceding normalized character.
    pub fn original_boundary(&self, normalized_boundary: usize) -> usize {
        if normalized_boundary == 0 {
            0
        } else if normalized_boundary >= self.provenance.len() {
            self.original_len()
        } else {
            self.provenance[normalized_boundary]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("case_diff arguments differ in length ({left} vs {right} characters)")]
pub struct LengthMismatch {
    pub left: usize,
    pub right: usize,
}

/// 1-based positions where `target` is uppercase and `lowercased` is not.
pub fn case_diff(lowercased: &str, target: &str) -> Result<Vec<usize>, LengthMismatch> {
    let left = lowercased.chars().count();
    let right = target.chars().count();
    if left != right {
        return Err(LengthMismatch { left, right });
    }
    Ok(lowercased
        .chars()
        .zip(target.chars())
        .enumerate()
        .filter(|(_, (l, t))| t.is_uppercase() && !l.is_uppercase())
        .map(|(i, _)| i + 1)
        .collect())
}
