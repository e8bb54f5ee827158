//! Dictionary induction, label encoding of gold corrections and decoding of
//! labels back to text, for all four granularities.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write as _};
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::align::{align, AlignError};
use crate::editscript::{
    build_char_transformation, build_string_transformation, ParseTransformationError,
    Transformation,
};
use crate::textnorm::CasingMode;
use crate::tokenizer::{SubwordSequence, TokenizeError, Tokenizer, WORD_START};

pub const UNCORRECTABLE_ID: usize = 0;
pub const KEEP_ID: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grain {
    Char,
    String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnitKind {
    Subword,
    Word,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GranularityMode {
    pub grain: Grain,
    pub unit: UnitKind,
}

impl GranularityMode {
    pub const CHAR_AT_SUBWORD: Self = Self::new(Grain::Char, UnitKind::Subword);
    pub const CHAR_AT_WORD: Self = Self::new(Grain::Char, UnitKind::Word);
    pub const STRING_AT_SUBWORD: Self = Self::new(Grain::String, UnitKind::Subword);
    pub const STRING_AT_WORD: Self = Self::new(Grain::String, UnitKind::Word);

    pub const ALL: [Self; 4] = [
        Self::CHAR_AT_SUBWORD,
        Self::CHAR_AT_WORD,
        Self::STRING_AT_SUBWORD,
        Self::STRING_AT_WORD,
    ];

    pub const fn new(grain: Grain, unit: UnitKind) -> Self {
        GranularityMode { grain, unit }
    }

    /// The label turning `unit` into `target` at this granularity.
    pub fn build(self, unit: &str, target: &str, casing: CasingMode) -> Transformation {
        match self.grain {
            Grain::Char => build_char_transformation(unit, target, casing).into(),
            Grain::String => build_string_transformation(unit, target).into(),
        }
    }
}

impl fmt::Display for GranularityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let grain = match self.grain {
            Grain::Char => "char",
            Grain::String => "string",
        };
        let unit = match self.unit {
            UnitKind::Subword => "subword",
            UnitKind::Word => "word",
        };
        write!(f, "{grain}-at-{unit}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown granularity `{0}`")]
pub struct ParseModeError(pub String);

impl FromStr for GranularityMode {
    type Err = ParseModeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GranularityMode::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| ParseModeError(s.into()))
    }
}

/// The units a sentence is labeled on: what the labels are applied to, and
/// the raw text each one came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Units {
    pub texts: Vec<String>,
    pub originals: Vec<String>,
}

pub fn units_of(seq: &SubwordSequence, unit: UnitKind) -> Units {
    match unit {
        UnitKind::Subword => Units {
            texts: seq.subwords.iter().map(|s| s.text.clone()).collect(),
            originals: seq.subwords.iter().map(|s| s.original.clone()).collect(),
        },
        UnitKind::Word => Units {
            texts: seq.group_words().into_iter().map(|(w, _)| w).collect(),
            originals: seq.group_original_words().into_iter().map(|(w, _)| w).collect(),
        },
    }
}

/// Gold text each unit should become, from aligning the subwords with the
/// gold sentence written in the same leading-space convention.
pub fn unit_targets(
    seq: &SubwordSequence,
    gold: &str,
    unit: UnitKind,
) -> Result<Vec<String>, AlignError> {
    let mut prepared = String::with_capacity(gold.len() + 1);
    prepared.push(WORD_START);
    prepared.push_str(gold.trim());
    let alignment = align(&seq.texts(), &prepared)?;
    let spans = alignment.spans.into_iter().map(|s| s.text);
    Ok(match unit {
        UnitKind::Subword => spans.collect(),
        UnitKind::Word => {
            let spans: Vec<String> = spans.collect();
            seq.group_words()
                .into_iter()
                .map(|(_, range)| spans[range].concat())
                .collect()
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PairError {
    #[error(transparent)]
    Tokenize(#[from] TokenizeError),
    #[error(transparent)]
    Align(#[from] AlignError),
}

/// Transformation occurrence counts, mergeable across workers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransformationCounts {
    counts: BTreeMap<Transformation, u64>,
}

impl TransformationCounts {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts the transformations of one sentence pair.
    pub fn add_pair(
        &mut self,
        tokenizer: &Tokenizer,
        mode: GranularityMode,
        source: &str,
        gold: &str,
    ) -> Result<(), PairError> {
        let seq = tokenizer.tokenize(source)?;
        let targets = unit_targets(&seq, gold, mode.unit)?;
        let units = units_of(&seq, mode.unit);
        for (unit, target) in units.texts.iter().zip(&targets) {
            let t = mode.build(unit, target, tokenizer.casing());
            *self.counts.entry(t).or_insert(0) += 1;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: TransformationCounts) {
        for (t, c) in other.counts {
            *self.counts.entry(t).or_insert(0) += c;
        }
    }

    pub fn get(&self, t: &Transformation) -> u64 {
        self.counts.get(t).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Keeps entries seen at least `min_count` times and orders them by
    /// descending count, ties by serialized form.
    pub fn into_dictionary(
        self,
        mode: GranularityMode,
        casing: CasingMode,
        min_count: u64,
    ) -> TransformationDictionary {
        let keep_count = self.get(&Transformation::Keep);
        let mut kept: Vec<(String, Transformation, u64)> = self
            .counts
            .into_iter()
            .filter(|(t, c)| {
                *c >= min_count && !matches!(t, Transformation::Keep | Transformation::Uncorrectable)
            })
            .map(|(t, c)| (t.to_string(), t, c))
            .collect();
        kept.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
        let mut entries = Vec::with_capacity(kept.len() + 2);
        entries.push((Transformation::Uncorrectable, 0));
        entries.push((Transformation::Keep, keep_count));
        entries.extend(kept.into_iter().map(|(_, t, c)| (t, c)));
        TransformationDictionary::from_entries(mode, casing, min_count, entries)
            .expect("entries are unique by construction")
    }
}

/// Pair that could not contribute to induction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skipped {
    /// Index into the authentic pairs followed by the used synthetic pairs.
    pub index: usize,
    pub error: PairError,
}

/// Induces a dictionary from authentic pairs plus the first
/// `synthetic_limit` synthetic pairs, counted together before thresholding.
pub fn induce<S: AsRef<str>>(
    pairs: &[(S, S)],
    synthetic_pairs: &[(S, S)],
    synthetic_limit: usize,
    tokenizer: &Tokenizer,
    mode: GranularityMode,
    min_count: u64,
) -> (TransformationDictionary, Vec<Skipped>) {
    let mut counts = TransformationCounts::new();
    let mut skipped = Vec::new();
    let used = synthetic_limit.min(synthetic_pairs.len());
    for (index, (source, gold)) in pairs.iter().chain(&synthetic_pairs[..used]).enumerate() {
        if let Err(error) = counts.add_pair(tokenizer, mode, source.as_ref(), gold.as_ref()) {
            skipped.push(Skipped { index, error });
        }
    }
    (counts.into_dictionary(mode, tokenizer.casing(), min_count), skipped)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformationDictionary {
    mode: GranularityMode,
    casing: CasingMode,
    min_count: u64,
    entries: Vec<(Transformation, u64)>,
    index: BTreeMap<Transformation, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DictionaryError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Transformation {
        line: usize,
        source: ParseTransformationError,
    },
    #[error("duplicate entry `{0}`")]
    Duplicate(String),
    #[error("entries 0 and 1 must be UNCORRECTABLE and KEEP")]
    MissingSpecials,
}

fn format_err(line: usize, message: impl Into<String>) -> DictionaryError {
    DictionaryError::Format {
        line,
        message: message.into(),
    }
}

impl TransformationDictionary {
    pub fn from_entries(
        mode: GranularityMode,
        casing: CasingMode,
        min_count: u64,
        entries: Vec<(Transformation, u64)>,
    ) -> Result<Self, DictionaryError> {
        if entries.len() < 2
            || entries[UNCORRECTABLE_ID].0 != Transformation::Uncorrectable
            || entries[KEEP_ID].0 != Transformation::Keep
        {
            return Err(DictionaryError::MissingSpecials);
        }
        let mut index = BTreeMap::new();
        for (id, (t, _)) in entries.iter().enumerate() {
            if index.insert(t.clone(), id).is_some() {
                return Err(DictionaryError::Duplicate(t.to_string()));
            }
        }
        Ok(TransformationDictionary {
            mode,
            casing,
            min_count,
            entries,
            index,
        })
    }

    pub fn mode(&self) -> GranularityMode {
        self.mode
    }

    pub fn casing(&self) -> CasingMode {
        self.casing
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Never true: the two special entries are always present.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&Transformation> {
        self.entries.get(id).map(|(t, _)| t)
    }

    pub fn count(&self, id: usize) -> Option<u64> {
        self.entries.get(id).map(|(_, c)| *c)
    }

    pub fn id_of(&self, t: &Transformation) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn entries(&self) -> &[(Transformation, u64)] {
        &self.entries
    }

    /// The first `max_entries` entries (never fewer than the two specials).
    pub fn truncated(&self, max_entries: usize) -> Self {
        let entries = self.entries[..max_entries.clamp(2, self.entries.len())].to_vec();
        Self::from_entries(self.mode, self.casing, self.min_count, entries)
            .expect("prefix of a valid dictionary")
    }

    /// Serializes to the dictionary file format: a header line, then
    /// `id<TAB>count<TAB>transformation` per entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "mode={} casing={} min_count={}",
            self.mode, self.casing, self.min_count
        );
        for (id, (t, c)) in self.entries.iter().enumerate() {
            let _ = writeln!(out, "{id}\t{c}\t{t}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, DictionaryError> {
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or_default();
        let mut mode = None;
        let mut casing = None;
        let mut min_count = None;
        for field in header.split(' ') {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| format_err(1, "malformed header"))?;
            match key {
                "mode" => mode = Some(value.parse().map_err(|e: ParseModeError| format_err(1, e.to_string()))?),
                "casing" => {
                    casing = Some(value.parse().map_err(|e: crate::textnorm::ParseCasingError| {
                        format_err(1, e.to_string())
                    })?)
                }
                "min_count" => {
                    min_count = Some(value.parse().map_err(|_| format_err(1, "bad min_count"))?)
                }
                other => return Err(format_err(1, alloc::format!("unknown header key `{other}`"))),
            }
        }
        let (Some(mode), Some(casing), Some(min_count)) = (mode, casing, min_count) else {
            return Err(format_err(1, "header needs mode, casing and min_count"));
        };
        let mut entries = Vec::new();
        let mut ended = false;
        for (n, line) in lines.enumerate() {
            let line_no = n + 2;
            if line.is_empty() {
                ended = true;
                continue;
            }
            if ended {
                return Err(format_err(line_no, "content after end of file"));
            }
            let mut fields = line.splitn(3, '\t');
            let (Some(id), Some(count), Some(t)) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(format_err(line_no, "expected id, count and transformation"));
            };
            if id.parse::<usize>().ok() != Some(entries.len()) || id.starts_with('+') {
                return Err(format_err(line_no, "ids must be consecutive from 0"));
            }
            let count: u64 = count
                .parse()
                .map_err(|_| format_err(line_no, "bad count"))?;
            let t: Transformation = t.parse().map_err(|source| DictionaryError::Transformation {
                line: line_no,
                source,
            })?;
            entries.push((t, count));
        }
        if !text.ends_with('\n') {
            return Err(format_err(entries.len() + 1, "missing final newline"));
        }
        Self::from_entries(mode, casing, min_count, entries)
    }
}

/// Units of a sentence and one dictionary id per unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSentence {
    pub units: Vec<String>,
    pub labels: Vec<usize>,
}

impl LabeledSentence {
    pub fn uncorrectable_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == UNCORRECTABLE_ID).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error(transparent)]
    Tokenize(#[from] TokenizeError),
    #[error("dictionary is {dict} but the tokenizer is {tokenizer}")]
    CasingMismatch {
        dict: CasingMode,
        tokenizer: CasingMode,
    },
    #[error("{labels} labels for {units} units")]
    LabelCount { labels: usize, units: usize },
    #[error("label {0} is not in the dictionary")]
    UnknownLabel(usize),
}

fn check_casing(dict: &TransformationDictionary, tokenizer: &Tokenizer) -> Result<(), CodecError> {
    if dict.casing() != tokenizer.casing() {
        return Err(CodecError::CasingMismatch {
            dict: dict.casing(),
            tokenizer: tokenizer.casing(),
        });
    }
    Ok(())
}

/// Finds the label for one unit: the directly built transformation when the
/// dictionary has it, otherwise the first entry in a random order that
/// produces the target, otherwise the uncorrectable marker.
pub fn encode_unit(
    unit: &str,
    target: &str,
    dict: &TransformationDictionary,
    rng: &mut ChaCha8Rng,
) -> usize {
    let direct = dict.mode().build(unit, target, dict.casing());
    if let Some(id) = dict.id_of(&direct) {
        return id;
    }
    let mut order: Vec<usize> = (KEEP_ID + 1..dict.len()).collect();
    order.shuffle(rng);
    order
        .into_iter()
        .find(|&id| {
            dict.get(id)
                .and_then(|t| t.apply(unit))
                .is_some_and(|out| out == target)
        })
        .unwrap_or(UNCORRECTABLE_ID)
}

/// Encodes the correction of `source` into `gold` as one label per unit.
/// Pairs that cannot be aligned get the uncorrectable label throughout.
pub fn encode(
    source: &str,
    gold: &str,
    dict: &TransformationDictionary,
    tokenizer: &Tokenizer,
    seed: u64,
) -> Result<LabeledSentence, CodecError> {
    check_casing(dict, tokenizer)?;
    let seq = tokenizer.tokenize(source)?;
    let units = units_of(&seq, dict.mode().unit);
    let labels = match unit_targets(&seq, gold, dict.mode().unit) {
        Ok(targets) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            units
                .texts
                .iter()
                .zip(&targets)
                .map(|(unit, target)| encode_unit(unit, target, dict, &mut rng))
                .collect()
        }
        Err(_) => alloc::vec![UNCORRECTABLE_ID; units.texts.len()],
    };
    Ok(LabeledSentence {
        units: units.texts,
        labels,
    })
}

/// Decodes labels into a sentence. Uncorrectable and inapplicable labels
/// leave the unit as it was in the source.
pub fn apply_labels(
    source: &str,
    labels: &[usize],
    dict: &TransformationDictionary,
    tokenizer: &Tokenizer,
) -> Result<String, CodecError> {
    check_casing(dict, tokenizer)?;
    let seq = tokenizer.tokenize(source)?;
    let units = units_of(&seq, dict.mode().unit);
    if units.texts.len() != labels.len() {
        return Err(CodecError::LabelCount {
            labels: labels.len(),
            units: units.texts.len(),
        });
    }
    let mut out = String::with_capacity(source.len() + 8);
    for ((unit, original), &id) in units.texts.iter().zip(&units.originals).zip(labels) {
        let t = dict.get(id).ok_or(CodecError::UnknownLabel(id))?;
        match t.apply(unit) {
            Some(text) => out.push_str(&text),
            None => out.push_str(original),
        }
    }
    Ok(match out.strip_prefix(WORD_START) {
        Some(rest) => rest.into(),
        None => out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenizer::TokenizerMode;
    use alloc::vec;

    fn example_tokenizer() -> Tokenizer {
        Tokenizer::new(
            TokenizerMode::VocabGreedy {
                vocabulary: [" gathe", "rin", " lea", "fes", "g", "s"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                unknown_fallback: true,
            },
            CasingMode::Uncased,
        )
        .unwrap()
    }

    const PAIR: (&str, &str) = ("gatherin leafes", "Gathering leaves");

    fn serialized(dict: &TransformationDictionary) -> Vec<String> {
        dict.entries().iter().map(|(t, _)| t.to_string()).collect()
    }

    #[test]
    fn mode_names() {
        for m in GranularityMode::ALL {
            assert_eq!(m.to_string().parse::<GranularityMode>().unwrap(), m);
        }
        assert_eq!(GranularityMode::CHAR_AT_SUBWORD.to_string(), "char-at-subword");
        assert!("char-at-line".parse::<GranularityMode>().is_err());
    }

    #[test]
    fn example_dictionaries() {
        let tok = example_tokenizer();
        let expected: [(GranularityMode, &[&str]); 4] = [
            (
                GranularityMode::CHAR_AT_SUBWORD,
                &["UNCORRECTABLE", "KEEP", "CHAR ins@e1=g", "CHAR rep@s1=v", "CHAR upc@s2"],
            ),
            (
                GranularityMode::STRING_AT_SUBWORD,
                &["UNCORRECTABLE", "KEEP", "APPEND g", "REPLACE %20Gathe", "REPLACE ves"],
            ),
            (
                GranularityMode::CHAR_AT_WORD,
                &["UNCORRECTABLE", "KEEP", "CHAR ins@e1=g;upc@s2", "CHAR rep@e3=v"],
            ),
            (
                GranularityMode::STRING_AT_WORD,
                &["UNCORRECTABLE", "KEEP", "REPLACE %20Gathering", "REPLACE %20leaves"],
            ),
        ];
        for (mode, entries) in expected {
            let (dict, skipped) = induce(&[PAIR], &[], 0, &tok, mode, 1);
            assert!(skipped.is_empty());
            assert_eq!(serialized(&dict), entries.to_vec(), "{mode}");
        }
    }

    #[test]
    fn example_encoding_and_decoding() {
        let tok = example_tokenizer();
        let (dict, _) = induce(&[PAIR], &[], 0, &tok, GranularityMode::CHAR_AT_SUBWORD, 1);
        let labeled = encode(PAIR.0, PAIR.1, &dict, &tok, 7).unwrap();
        assert_eq!(labeled.units, vec![" gathe", "rin", " lea", "fes"]);
        let names: Vec<String> = labeled
            .labels
            .iter()
            .map(|&l| dict.get(l).unwrap().to_string())
            .collect();
        assert_eq!(names, vec!["CHAR upc@s2", "CHAR ins@e1=g", "KEEP", "CHAR rep@s1=v"]);
        assert_eq!(apply_labels(PAIR.0, &labeled.labels, &dict, &tok).unwrap(), PAIR.1);
    }

    #[test]
    fn threshold_extremes() {
        let tok = example_tokenizer();
        let (dict, _) = induce(&[PAIR], &[], 0, &tok, GranularityMode::CHAR_AT_SUBWORD, u64::MAX);
        assert_eq!(serialized(&dict), vec!["UNCORRECTABLE", "KEEP"]);
        let triple = [PAIR, PAIR, PAIR];
        let (three, _) = induce(&triple, &[], 0, &tok, GranularityMode::CHAR_AT_SUBWORD, 3);
        let (one, _) = induce(&[PAIR], &[], 0, &tok, GranularityMode::CHAR_AT_SUBWORD, 1);
        assert_eq!(serialized(&three), serialized(&one));
    }

    #[test]
    fn synthetic_pairs_are_capped_and_pooled() {
        let tok = Tokenizer::word(CasingMode::Cased);
        let auth = [("a b", "a c")];
        let synth = [("x b", "x c"), ("y q", "y z")];
        let (dict, _) = induce(&auth, &synth, 1, &tok, GranularityMode::STRING_AT_WORD, 2);
        assert_eq!(serialized(&dict), vec!["UNCORRECTABLE", "KEEP", "REPLACE %20c"]);
        let (dict, _) = induce(&auth, &synth, 0, &tok, GranularityMode::STRING_AT_WORD, 2);
        assert_eq!(dict.len(), 2);
    }

    #[test]
    fn identity_and_fallback() {
        let tok = Tokenizer::word(CasingMode::Cased);
        let (dict, _) = induce(&[("x y", "x z")], &[], 0, &tok, GranularityMode::CHAR_AT_WORD, 1);
        let keep = encode("x y", "x y", &dict, &tok, 0).unwrap();
        assert!(keep.labels.iter().all(|&l| l == KEEP_ID));
        let none = encode("ab", "zq", &dict, &tok, 0).unwrap();
        assert_eq!(none.labels, vec![UNCORRECTABLE_ID]);
        // " q" -> " z" builds "rep@e1=z"; the search finds "rep@s2=z"
        let entries = vec![
            (Transformation::Uncorrectable, 0),
            (Transformation::Keep, 1),
            ("CHAR del@s1".parse().unwrap(), 1),
            ("CHAR rep@s2=z".parse().unwrap(), 1),
        ];
        let dict =
            TransformationDictionary::from_entries(GranularityMode::CHAR_AT_WORD, CasingMode::Cased, 1, entries)
                .unwrap();
        let found = encode("q", "z", &dict, &tok, 0).unwrap();
        assert_eq!(found.labels, vec![3]);
    }

    #[test]
    fn decoding_errors_and_inapplicable() {
        let tok = Tokenizer::word(CasingMode::Cased);
        let entries = vec![
            (Transformation::Uncorrectable, 0),
            (Transformation::Keep, 1),
            ("CHAR rep@s9=x".parse().unwrap(), 1),
        ];
        let dict =
            TransformationDictionary::from_entries(GranularityMode::CHAR_AT_WORD, CasingMode::Cased, 1, entries)
                .unwrap();
        assert_eq!(apply_labels("ab cd", &[2, 1], &dict, &tok).unwrap(), "ab cd");
        assert_eq!(
            apply_labels("ab cd", &[1], &dict, &tok),
            Err(CodecError::LabelCount { labels: 1, units: 2 })
        );
        assert_eq!(apply_labels("ab", &[5], &dict, &tok), Err(CodecError::UnknownLabel(5)));
        let uncased = Tokenizer::word(CasingMode::Uncased);
        assert!(matches!(
            apply_labels("ab", &[1], &dict, &uncased),
            Err(CodecError::CasingMismatch { .. })
        ));
    }

    #[test]
    fn uncorrectable_restores_original_casing() {
        let tok = Tokenizer::word(CasingMode::Uncased);
        let (dict, _) = induce(&[("x", "x")], &[], 0, &tok, GranularityMode::CHAR_AT_WORD, 1);
        assert_eq!(apply_labels("Praha je", &[0, 1], &dict, &tok).unwrap(), "Praha je");
        assert_eq!(apply_labels("Praha je", &[1, 1], &dict, &tok).unwrap(), "praha je");
    }

    #[test]
    fn dictionary_text_round_trip() {
        let tok = example_tokenizer();
        for mode in GranularityMode::ALL {
            let (dict, _) = induce(&[PAIR, PAIR], &[], 0, &tok, mode, 1);
            let text = dict.to_text();
            let back = TransformationDictionary::from_text(&text).unwrap();
            assert_eq!(back, dict);
            assert_eq!(back.to_text(), text);
        }
        let text = "mode=char-at-subword casing=cased min_count=2\n0\t0\tUNCORRECTABLE\n1\t5\tKEEP\n2\t3\tCHAR upc@s1\n";
        let dict = TransformationDictionary::from_text(text).unwrap();
        assert_eq!(dict.len(), 3);
        assert_eq!(dict.to_text(), text);
    }

    #[test]
    fn malformed_dictionaries() {
        let bad = [
            "mode=char-at-subword casing=cased\n0\t0\tUNCORRECTABLE\n1\t0\tKEEP\n",
            "mode=char-at-subword casing=cased min_count=1\n0\t0\tKEEP\n1\t0\tUNCORRECTABLE\n",
            "mode=char-at-subword casing=cased min_count=1\n0\t0\tUNCORRECTABLE\n2\t0\tKEEP\n",
            "mode=char-at-subword casing=cased min_count=1\n0\t0\tUNCORRECTABLE\n1\t0\tKEEP\n2\t1\tKEEP\n",
            "mode=char-at-subword casing=cased min_count=1\n0\t0\tUNCORRECTABLE\n1\t0\tKEEP",
            "mode=char-at-subword casing=cased min_count=1\n0\t0\tUNCORRECTABLE\n1\tx\tKEEP\n",
            "mode=char-at-subword casing=cased min_count=1\n0\t0\tUNCORRECTABLE\n1\t0\tKEEP\n2\t1\tCHAR\n",
        ];
        for text in bad {
            assert!(TransformationDictionary::from_text(text).is_err(), "{text:?}");
        }
    }

    #[test]
    fn truncation_keeps_specials() {
        let tok = example_tokenizer();
        let (dict, _) = induce(&[PAIR], &[], 0, &tok, GranularityMode::CHAR_AT_SUBWORD, 1);
        assert_eq!(dict.truncated(0).len(), 2);
        assert_eq!(dict.truncated(3).len(), 3);
        assert_eq!(dict.truncated(100).len(), dict.len());
    }
}
