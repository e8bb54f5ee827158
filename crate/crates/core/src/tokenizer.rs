//! Subword tokenization with the leading-space convention: the first subword
//! of every word carries a prepended space, continuation subwords carry no
//! marker.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::ops::Range;

use crate::textnorm::{CasingMode, NormalizedView};

/// Marker prepended to word-initial subwords.
pub const WORD_START: char = ' ';

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TokenizeError {
    #[error("sentence is empty")]
    EmptySentence,
    #[error("character {0:?} cannot be covered by the vocabulary")]
    Uncoverable(char),
    #[error("vocabulary is empty")]
    EmptyVocabulary,
    #[error("vocabulary piece {0:?} is not normalized for uncased mode")]
    NotNormalized(String),
    #[error("vocabulary piece {0:?} is empty or whitespace")]
    BlankPiece(String),
    #[error("chunk size must be at least 1")]
    ZeroChunk,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subword {
    /// Piece text; word-initial pieces start with [`WORD_START`].
    pub text: String,
    /// The slice of the raw sentence this piece was produced from, with the
    /// same leading space. Equal to `text` in cased mode.
    pub original: String,
    pub word_index: usize,
    pub is_word_initial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubwordSequence {
    pub subwords: Vec<Subword>,
    pub source_sentence: String,
}

impl SubwordSequence {
    pub fn len(&self) -> usize {
        self.subwords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subwords.is_empty()
    }

    pub fn texts(&self) -> Vec<&str> {
        self.subwords.iter().map(|s| s.text.as_str()).collect()
    }

    /// Concatenation of the pieces with the leading space removed.
    pub fn detokenize(&self) -> String {
        let joined: String = self.subwords.iter().map(|s| s.text.as_str()).collect();
        joined.strip_prefix(WORD_START).unwrap_or(&joined).into()
    }

    /// One entry per word: the concatenated word text (with its leading
    /// space) and the range of subword indices it spans.
    pub fn group_words(&self) -> Vec<(String, Range<usize>)> {
        group_by_word(&self.subwords, |s| s.text.as_str())
    }

    /// Like [`group_words`](Self::group_words) but over the original text.
    pub fn group_original_words(&self) -> Vec<(String, Range<usize>)> {
        group_by_word(&self.subwords, |s| s.original.as_str())
    }
}

fn group_by_word<'a>(
    subwords: &'a [Subword],
    text: impl Fn(&'a Subword) -> &'a str,
) -> Vec<(String, Range<usize>)> {
    let mut out: Vec<(String, Range<usize>)> = Vec::new();
    for (i, sw) in subwords.iter().enumerate() {
        match out.last_mut() {
            Some((word, range)) if !sw.is_word_initial => {
                word.push_str(text(sw));
                range.end = i + 1;
            }
            _ => out.push((text(sw).into(), i..i + 1)),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenizerMode {
    /// Greedy longest-prefix matching against a fixed vocabulary.
    VocabGreedy {
        vocabulary: BTreeSet<String>,
        /// Emit single-character pieces for characters the vocabulary
        /// cannot cover instead of failing.
        unknown_fallback: bool,
    },
    /// One subword per whitespace-separated word.
    Word,
    /// Words cut into chunks of at most `k` characters.
    CharChunks(usize),
}

#[derive(Clone, Debug)]
pub struct Tokenizer {
    mode: TokenizerMode,
    casing: CasingMode,
    longest_piece: usize,
}

impl Tokenizer {
    pub fn new(mode: TokenizerMode, casing: CasingMode) -> Result<Self, TokenizeError> {
        let mut longest_piece = 0;
        match &mode {
            TokenizerMode::VocabGreedy { vocabulary, .. } => {
                if vocabulary.is_empty() {
                    return Err(TokenizeError::EmptyVocabulary);
                }
                for piece in vocabulary {
                    let body = piece.strip_prefix(WORD_START).unwrap_or(piece);
                    if body.is_empty() || body.chars().any(char::is_whitespace) {
                        return Err(TokenizeError::BlankPiece(piece.clone()));
                    }
                    if casing == CasingMode::Uncased
                        && NormalizedView::uncased(piece).normalized != *piece
                    {
                        return Err(TokenizeError::NotNormalized(piece.clone()));
                    }
                    longest_piece = longest_piece.max(piece.chars().count());
                }
            }
            TokenizerMode::CharChunks(0) => return Err(TokenizeError::ZeroChunk),
            _ => {}
        }
        Ok(Tokenizer {
            mode,
            casing,
            longest_piece,
        })
    }

    pub fn word(casing: CasingMode) -> Self {
        Tokenizer::new(TokenizerMode::Word, casing).expect("word mode is always valid")
    }

    /// Parses a vocabulary file: one piece per line, a leading space marks a
    /// word-initial piece. Empty lines are ignored.
    pub fn from_vocab_text(
        text: &str,
        casing: CasingMode,
        unknown_fallback: bool,
    ) -> Result<Self, TokenizeError> {
        let vocabulary = text
            .lines()
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect();
        Tokenizer::new(
            TokenizerMode::VocabGreedy {
                vocabulary,
                unknown_fallback,
            },
            casing,
        )
    }

    pub fn mode(&self) -> &TokenizerMode {
        &self.mode
    }

    pub fn casing(&self) -> CasingMode {
        self.casing
    }

    pub fn tokenize(&self, sentence: &str) -> Result<SubwordSequence, TokenizeError> {
        let mut subwords = Vec::new();
        for (word_index, word) in sentence.split_whitespace().enumerate() {
            let view = match self.casing {
                CasingMode::Cased => NormalizedView::identity(word),
                CasingMode::Uncased => NormalizedView::uncased(word),
            };
            let chars: Vec<char> = view.normalized.chars().collect();
            let original: Vec<char> = word.chars().collect();
            if chars.is_empty() {
                // the word folded away entirely (standalone marks); keep it
                subwords.push(Subword {
                    text: prefixed(&original),
                    original: prefixed(&original),
                    word_index,
                    is_word_initial: true,
                });
                continue;
            }
            let cuts = self.segment(&chars)?;
            let mut start = 0;
            for (n, end) in cuts.into_iter().enumerate() {
                let ostart = view.original_boundary(start);
                let oend = view.original_boundary(end);
                let (text, orig) = if n == 0 {
                    (prefixed(&chars[start..end]), prefixed(&original[ostart..oend]))
                } else {
                    (
                        chars[start..end].iter().collect(),
                        original[ostart..oend].iter().collect(),
                    )
                };
                subwords.push(Subword {
                    text,
                    original: orig,
                    word_index,
                    is_word_initial: n == 0,
                });
                start = end;
            }
        }
        if subwords.is_empty() {
            return Err(TokenizeError::EmptySentence);
        }
        Ok(SubwordSequence {
            subwords,
            source_sentence: sentence.to_string(),
        })
    }

    /// End offsets of the pieces of one word.
    fn segment(&self, chars: &[char]) -> Result<Vec<usize>, TokenizeError> {
        match &self.mode {
            TokenizerMode::Word => Ok(alloc::vec![chars.len()]),
            TokenizerMode::CharChunks(k) => {
                Ok((1..=chars.len().div_ceil(*k)).map(|i| (i * k).min(chars.len())).collect())
            }
            TokenizerMode::VocabGreedy {
                vocabulary,
                unknown_fallback,
            } => {
                let mut cuts = Vec::new();
                let mut start = 0;
                let mut key = String::new();
                while start < chars.len() {
                    let max_len = (chars.len() - start).min(self.longest_piece);
                    let mut matched = None;
                    for len in (1..=max_len).rev() {
                        key.clear();
                        if start == 0 {
                            key.push(WORD_START);
                        }
                        key.extend(&chars[start..start + len]);
                        if vocabulary.contains(&key) {
                            matched = Some(len);
                            break;
                        }
                    }
                    let len = match matched {
                        Some(len) => len,
                        None if *unknown_fallback => 1,
                        None => return Err(TokenizeError::Uncoverable(chars[start])),
                    };
                    start += len;
                    cuts.push(start);
                }
                Ok(cuts)
            }
        }
    }
}

fn prefixed(chars: &[char]) -> String {
    let mut s = String::with_capacity(chars.len() + 1);
    s.push(WORD_START);
    s.extend(chars);
    s
}
