//! Edit-level scoring, oracle upper-bound analysis and iterative
//! correction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::SentencePair;
use crate::textnorm::CasingMode;
use crate::transform::{
    apply_labels, encode, units_of, CodecError, GranularityMode, TransformationDictionary, KEEP_ID,
};
use crate::tokenizer::Tokenizer;

pub const BETA: f64 = 0.5;

/// Tab-separated header of [`OracleAnalysisRow::to_tsv`].
pub const TSV_HEADER: &str = "mode\tcasing\tmin_count\tdict_size\tprecision\trecall\tf0.5";

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// F-measure from precision and recall; 0 when both are 0.
pub fn f_beta_from(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let den = b2 * precision + recall;
    if den == 0.0 {
        0.0
    } else {
        (1.0 + b2) * precision * recall / den
    }
}

/// F-measure from edit counts. Precision with no proposed edits and recall
/// with no gold edits are both 1.
pub fn f_beta(tp: u64, fp: u64, fn_: u64, beta: f64) -> f64 {
    f_beta_from(ratio(tp, tp + fp), ratio(tp, tp + fn_), beta)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EvalCounts {
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub precision: f64,
    pub recall: f64,
    pub f_half: f64,
}

impl EvalCounts {
    pub fn from_counts(tp: u64, fp: u64, fn_: u64) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        EvalCounts {
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_,
            precision,
            recall,
            f_half: f_beta_from(precision, recall, BETA),
        }
    }

    /// Micro-averaged sum of two count sets.
    pub fn combine(&self, other: &EvalCounts) -> Self {
        Self::from_counts(
            self.true_positives + other.true_positives,
            self.false_positives + other.false_positives,
            self.false_negatives + other.false_negatives,
        )
    }
}

/// Token span `start..end` of the source replaced by `correction`
/// (space-joined tokens, empty for deletions).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TokenEdit {
    pub start: usize,
    pub end: usize,
    pub correction: String,
}

impl TokenEdit {
    pub fn new(start: usize, end: usize, correction: impl Into<String>) -> Self {
        TokenEdit {
            start,
            end,
            correction: correction.into(),
        }
    }
}

/// Token-level minimal edit script. Each replaced or deleted token is its
/// own span; consecutive insertions into the same gap form one span.
pub fn extract_edits<S: AsRef<str>, T: AsRef<str>>(source: &[S], hypothesis: &[T]) -> Vec<TokenEdit> {
    let (n, m) = (source.len(), hypothesis.len());
    let eq = |i: usize, j: usize| source[i].as_ref() == hypothesis[j].as_ref();
    // suffix distances, row-major (n+1) x (m+1)
    let w = m + 1;
    let mut d = vec![0usize; (n + 1) * w];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            d[i * w + j] = if i == n {
                m - j
            } else if j == m {
                n - i
            } else {
                let sub = d[(i + 1) * w + j + 1] + usize::from(!eq(i, j));
                sub.min(d[(i + 1) * w + j] + 1).min(d[i * w + j + 1] + 1)
            };
        }
    }
    let mut edits: Vec<TokenEdit> = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        let here = d[i * w + j];
        if i < n && j < m && eq(i, j) && here == d[(i + 1) * w + j + 1] {
            i += 1;
            j += 1;
        } else if i < n && j < m && here == d[(i + 1) * w + j + 1] + 1 {
            edits.push(TokenEdit::new(i, i + 1, hypothesis[j].as_ref()));
            i += 1;
            j += 1;
        } else if i < n && here == d[(i + 1) * w + j] + 1 {
            edits.push(TokenEdit::new(i, i + 1, ""));
            i += 1;
        } else {
            let token = hypothesis[j].as_ref();
            match edits.last_mut() {
                Some(last) if last.start == i && last.end == i => {
                    last.correction.push(' ');
                    last.correction.push_str(token);
                }
                _ => edits.push(TokenEdit::new(i, i, token)),
            }
            j += 1;
        }
    }
    edits
}

fn tokens(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// Gold edits of a pair in the normalized span form hypotheses are matched
/// against: the edits that turn the source into the (replayed) gold.
pub fn gold_token_edits(pair: &SentencePair) -> Vec<TokenEdit> {
    extract_edits(&tokens(&pair.source), &tokens(&pair.gold))
}

/// Counts for one sentence: hypothesis edits matched to gold edits by exact
/// `(start, end, correction)` equality.
pub fn sentence_counts(pair: &SentencePair, hypothesis: &str) -> EvalCounts {
    let gold = gold_token_edits(pair);
    let hyp = extract_edits(&tokens(&pair.source), &tokens(hypothesis));
    let tp = hyp.iter().filter(|e| gold.binary_search(e).is_ok()).count() as u64;
    EvalCounts::from_counts(tp, hyp.len() as u64 - tp, gold.len() as u64 - tp)
}

/// Micro-averaged scores of `hypotheses[i]` against `pairs[i]`.
pub fn score<S: AsRef<str>>(pairs: &[SentencePair], hypotheses: &[S]) -> EvalCounts {
    assert_eq!(pairs.len(), hypotheses.len(), "one hypothesis per pair");
    pairs
        .iter()
        .zip(hypotheses)
        .map(|(p, h)| sentence_counts(p, h.as_ref()))
        .fold(EvalCounts::from_counts(0, 0, 0), |acc, c| acc.combine(&c))
}

/// Predicts one dictionary label per unit of `context`.
pub trait Classifier {
    fn predict(&self, units: &[String], context: &str) -> Vec<usize>;
}

/// Predicts the same label for every unit.
#[derive(Clone, Copy, Debug)]
pub struct ConstantClassifier(pub usize);

impl ConstantClassifier {
    pub const KEEP: Self = ConstantClassifier(KEEP_ID);
}

impl Classifier for ConstantClassifier {
    fn predict(&self, units: &[String], _context: &str) -> Vec<usize> {
        vec![self.0; units.len()]
    }
}

/// Perfect predictions for one sentence: the labels that encode the step
/// from the current text to the known gold.
pub struct OracleClassifier<'a> {
    pub gold: &'a str,
    pub dict: &'a TransformationDictionary,
    pub tokenizer: &'a Tokenizer,
    pub seed: u64,
}

impl Classifier for OracleClassifier<'_> {
    fn predict(&self, units: &[String], context: &str) -> Vec<usize> {
        match encode(context, self.gold, self.dict, self.tokenizer, self.seed) {
            Ok(labeled) if labeled.labels.len() == units.len() => labeled.labels,
            _ => vec![KEEP_ID; units.len()],
        }
    }
}

/// Predicts, for each unit, the label most often encoded for that unit
/// text in training data; unseen units are kept.
#[derive(Clone, Debug, Default)]
pub struct FrequencyBaseline {
    table: BTreeMap<String, usize>,
}

impl FrequencyBaseline {
    pub fn train(
        pairs: &[SentencePair],
        dict: &TransformationDictionary,
        tokenizer: &Tokenizer,
        seed: u64,
    ) -> Self {
        let mut counts: BTreeMap<String, BTreeMap<usize, u64>> = BTreeMap::new();
        for (index, pair) in pairs.iter().enumerate() {
            let Ok(labeled) = encode(&pair.source, &pair.gold, dict, tokenizer, seed ^ index as u64) else {
                continue;
            };
            for (unit, label) in labeled.units.into_iter().zip(labeled.labels) {
                *counts.entry(unit).or_default().entry(label).or_insert(0) += 1;
            }
        }
        let table = counts
            .into_iter()
            .filter_map(|(unit, labels)| {
                // highest count, lowest id on ties
                let best = labels
                    .into_iter()
                    .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))?;
                Some((unit, best.0))
            })
            .collect();
        FrequencyBaseline { table }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl Classifier for FrequencyBaseline {
    fn predict(&self, units: &[String], _context: &str) -> Vec<usize> {
        units
            .iter()
            .map(|u| self.table.get(u).copied().unwrap_or(KEEP_ID))
            .collect()
    }
}

/// Runs tokenize, predict, apply until a round leaves the text unchanged or
/// `max_iterations` rounds have run. Returns the text and the number of
/// rounds, counting the unchanged one.
pub fn iterate_correct<C: Classifier + ?Sized>(
    sentence: &str,
    classifier: &C,
    dict: &TransformationDictionary,
    tokenizer: &Tokenizer,
    max_iterations: usize,
) -> (String, usize) {
    let mut current = sentence.to_string();
    for round in 1..=max_iterations.max(1) {
        let Ok(seq) = tokenizer.tokenize(&current) else {
            return (current, round);
        };
        let units = units_of(&seq, dict.mode().unit).texts;
        let labels = classifier.predict(&units, &current);
        let next = match apply_labels(&current, &labels, dict, tokenizer) {
            Ok(next) => next,
            Err(_) => return (current, round),
        };
        if next == current {
            return (current, round);
        }
        current = next;
    }
    (current, max_iterations.max(1))
}

/// Oracle hypothesis for one pair after up to `iterations` rounds.
pub fn oracle_hypothesis(
    pair: &SentencePair,
    dict: &TransformationDictionary,
    tokenizer: &Tokenizer,
    seed: u64,
    iterations: usize,
) -> String {
    let oracle = OracleClassifier {
        gold: &pair.gold,
        dict,
        tokenizer,
        seed,
    };
    iterate_correct(&pair.source, &oracle, dict, tokenizer, iterations).0
}

/// One configuration of the oracle analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleAnalysisRow {
    pub mode: GranularityMode,
    pub casing: CasingMode,
    pub min_count: u64,
    pub dictionary_size: usize,
    pub iterations: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_half: f64,
}

impl OracleAnalysisRow {
    /// Row under [`TSV_HEADER`].
    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}",
            self.mode, self.casing, self.min_count, self.dictionary_size, self.precision, self.recall, self.f_half
        )
    }
}

/// Scores oracle predictions on `corpus` after `iterations` rounds. The
/// `i`-th pair is encoded with seed `seed ^ i`.
pub fn oracle_analysis(
    corpus: &[SentencePair],
    dict: &TransformationDictionary,
    tokenizer: &Tokenizer,
    seed: u64,
    iterations: usize,
) -> Result<(EvalCounts, OracleAnalysisRow), CodecError> {
    if dict.casing() != tokenizer.casing() {
        return Err(CodecError::CasingMismatch {
            dict: dict.casing(),
            tokenizer: tokenizer.casing(),
        });
    }
    let hypotheses: Vec<String> = corpus
        .iter()
        .enumerate()
        .map(|(i, pair)| oracle_hypothesis(pair, dict, tokenizer, seed ^ i as u64, iterations))
        .collect();
    let counts = score(corpus, &hypotheses);
    Ok((counts, analysis_row(dict, iterations, &counts)))
}

pub fn analysis_row(dict: &TransformationDictionary, iterations: usize, counts: &EvalCounts) -> OracleAnalysisRow {
    OracleAnalysisRow {
        mode: dict.mode(),
        casing: dict.casing(),
        min_count: dict.min_count(),
        dictionary_size: dict.len(),
        iterations,
        precision: counts.precision,
        recall: counts.recall,
        f_half: counts.f_half,
    }
}

/// F0.5 reachable if every label were predicted correctly in a single
/// round. Uncorrectable units stay as in the source.
pub fn oracle_upper_bound(
    corpus: &[SentencePair],
    dict: &TransformationDictionary,
    tokenizer: &Tokenizer,
    seed: u64,
) -> Result<(EvalCounts, OracleAnalysisRow), CodecError> {
    oracle_analysis(corpus, dict, tokenizer, seed, 1)
}
