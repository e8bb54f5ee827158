//! Extended LCS alignment: every input subword is aligned to a contiguous,
//! possibly empty, run of gold characters so that the summed match quality
//! is maximal.
//!
//! All comparisons happen on [`alignment_normalize`]d text, so casing,
//! diacritics and the identity of punctuation characters do not influence
//! the result. The returned spans are cut from the original gold text.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::textnorm::{alignment_normalize, NormalizedView};

/// Longest gold span a subword of `len` characters may be aligned to.
pub fn max_span_len(subword_len: usize) -> usize {
    8 + 3 * subword_len
}

pub const BRUTEFORCE_MAX_SUBWORDS: usize = 5;
pub const BRUTEFORCE_MAX_GOLD: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlignError {
    #[error("no subwords to align")]
    NoSubwords,
    #[error("gold sentence is empty or whitespace only")]
    EmptyGold,
    #[error("gold text cannot be covered within the span length bound")]
    NoAlignment,
    #[error("instance too large for exhaustive alignment")]
    TooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignedSpan {
    /// Character offset of the span in the gold text.
    pub start: usize,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Alignment {
    /// One span per subword, in order.
    pub spans: Vec<AlignedSpan>,
    pub total_weight: f64,
}

impl Alignment {
    pub fn span_texts(&self) -> Vec<&str> {
        self.spans.iter().map(|s| s.text.as_str()).collect()
    }
}

fn edit_distance(a: &[char], b: &[char]) -> usize {
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let next = (diag + usize::from(ca != cb)).min(row[j] + 1).min(row[j + 1] + 1);
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[b.len()]
}

fn similarity(distance: usize, a_len: usize, b_len: usize) -> f64 {
    let longest = a_len.max(b_len);
    if longest == 0 {
        1.0
    } else {
        1.0 - distance as f64 / longest as f64
    }
}

/// `1 - distance / max(|a|, |b|)`, 1 for two empty strings.
pub fn levenshtein_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    similarity(edit_distance(&a, &b), a.len(), b.len())
}

fn trim(s: &[char]) -> &[char] {
    let start = s.iter().position(|c| !c.is_whitespace()).unwrap_or(s.len());
    let end = s.iter().rposition(|c| !c.is_whitespace()).map_or(start, |e| e + 1);
    &s[start..end]
}

fn tiered_cost(subword: &[char], span: &[char], similarity: impl FnOnce() -> f64) -> f64 {
    if subword == span {
        1.0
    } else if trim(subword) == trim(span) {
        0.75
    } else {
        0.5 * similarity()
    }
}

/// Match quality of a subword against a gold span; both already normalized.
pub fn span_cost(subword: &str, span: &str) -> f64 {
    let s: Vec<char> = subword.chars().collect();
    let g: Vec<char> = span.chars().collect();
    tiered_cost(&s, &g, || levenshtein_similarity(subword, span))
}

struct Prepared {
    subwords: Vec<Vec<char>>,
    gold: NormalizedView,
    chars: Vec<char>,
    /// `blank_suffix[j]`: gold[j..] is empty or whitespace only.
    blank_suffix: Vec<bool>,
    /// `boundary[j]`: j is 0, or gold[j] or gold[j - 1] is whitespace.
    boundary: Vec<bool>,
}

fn prepare<S: AsRef<str>>(subwords: &[S], gold: &str) -> Result<Prepared, AlignError> {
    if subwords.is_empty() {
        return Err(AlignError::NoSubwords);
    }
    if gold.trim().is_empty() {
        return Err(AlignError::EmptyGold);
    }
    let view = NormalizedView::for_alignment(gold);
    let chars: Vec<char> = view.normalized.chars().collect();
    let mut blank_suffix = vec![true; chars.len() + 1];
    for j in (0..chars.len()).rev() {
        blank_suffix[j] = blank_suffix[j + 1] && chars[j].is_whitespace();
    }
    let boundary = (0..=chars.len())
        .map(|j| j == 0 || chars[j - 1].is_whitespace() || chars.get(j).is_some_and(|c| c.is_whitespace()))
        .collect();
    Ok(Prepared {
        subwords: subwords
            .iter()
            .map(|s| alignment_normalize(s.as_ref()).chars().collect())
            .collect(),
        gold: view,
        chars,
        blank_suffix,
        boundary,
    })
}

impl Prepared {
    /// Whether subword `i` may be aligned to a non-empty span starting at
    /// `j`. Word-initial subwords only start at gold word boundaries.
    fn may_start(&self, i: usize, j: usize) -> bool {
        self.boundary[j] || !self.subwords[i].first().is_some_and(|c| c.is_whitespace())
    }

    fn finish(&self, lengths: &[usize], total_weight: f64) -> Alignment {
        let original: Vec<char> = self.gold.original.chars().collect();
        let mut j = 0;
        let spans = lengths
            .iter()
            .map(|&l| {
                let start = self.gold.original_boundary(j);
                let end = self.gold.original_boundary(j + l);
                let start = if l == 0 { end } else { start };
                j += l;
                AlignedSpan {
                    start,
                    text: original[start..end].iter().collect(),
                }
            })
            .collect();
        Alignment {
            spans,
            total_weight,
        }
    }
}

/// Maximum-weight alignment of `subwords` to `gold`.
///
/// `weight(i, j)` is the best score for aligning subwords `i..` to gold
/// characters `j..`; it is either the score of leaving subword `i` unaligned
/// or, for every span length `l` up to [`max_span_len`], the cost of the
/// span plus `weight(i + 1, j + l)`. Whitespace-only spans are never
/// candidates, and a word-initial subword's span must start at a word
/// boundary of the gold text, so a span never takes the tail of the
/// previous gold word. Past the last subword only blank gold remainders
/// are admissible. On ties the shorter span for the earlier subword wins.
pub fn align<S: AsRef<str>>(subwords: &[S], gold: &str) -> Result<Alignment, AlignError> {
    let p = prepare(subwords, gold)?;
    let n = p.subwords.len();
    let g = &p.chars;
    let width = g.len() + 1;
    let mut weight = vec![f64::NEG_INFINITY; (n + 1) * width];
    let mut choice = vec![0usize; n * width];
    for j in 0..width {
        if p.blank_suffix[j] {
            weight[n * width + j] = 0.0;
        }
    }

    let mut prev_col = Vec::new();
    let mut col = Vec::new();
    for i in (0..n).rev() {
        let s = &p.subwords[i];
        let m = s.len();
        let bound = max_span_len(m);
        for j in (0..width).rev() {
            let mut best = weight[(i + 1) * width + j];
            let mut best_len = 0;
            let longest = if p.may_start(i, j) { bound.min(g.len() - j) } else { 0 };
            // edit distance columns between s and g[j..j + l], grown with l
            prev_col.clear();
            prev_col.extend(0..=m);
            let mut blank = true;
            for l in 1..=longest {
                let gc = g[j + l - 1];
                col.clear();
                col.push(l);
                for k in 1..=m {
                    let sub = prev_col[k - 1] + usize::from(s[k - 1] != gc);
                    col.push(sub.min(prev_col[k] + 1).min(col[k - 1] + 1));
                }
                core::mem::swap(&mut prev_col, &mut col);
                blank &= gc.is_whitespace();
                let rest = weight[(i + 1) * width + j + l];
                if blank || rest == f64::NEG_INFINITY {
                    continue;
                }
                let span = &g[j..j + l];
                let cost = tiered_cost(s, span, || similarity(prev_col[m], m, l));
                if cost + rest > best {
                    best = cost + rest;
                    best_len = l;
                }
            }
            weight[i * width + j] = best;
            choice[i * width + j] = best_len;
        }
    }

    let total = weight[0];
    if total == f64::NEG_INFINITY {
        return Err(AlignError::NoAlignment);
    }
    let mut lengths = Vec::with_capacity(n);
    let mut j = 0;
    for i in 0..n {
        let l = choice[i * width + j];
        lengths.push(l);
        j += l;
    }
    Ok(p.finish(&lengths, total))
}

/// Exhaustive reference for [`align`] on small inputs: enumerates every
/// assignment of span lengths and keeps the first maximum in lexicographic
/// order of the lengths.
pub fn align_bruteforce<S: AsRef<str>>(
    subwords: &[S],
    gold: &str,
) -> Result<Alignment, AlignError> {
    if subwords.len() > BRUTEFORCE_MAX_SUBWORDS || gold.chars().count() > BRUTEFORCE_MAX_GOLD {
        return Err(AlignError::TooLarge);
    }
    let p = prepare(subwords, gold)?;

    struct Search<'a> {
        p: &'a Prepared,
        lengths: Vec<usize>,
        best: Option<(f64, Vec<usize>)>,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize, j: usize, acc: f64) {
            let g = &self.p.chars;
            if i == self.p.subwords.len() {
                if self.p.blank_suffix[j] && self.best.as_ref().is_none_or(|(w, _)| acc > *w) {
                    self.best = Some((acc, self.lengths.clone()));
                }
                return;
            }
            let s: String = self.p.subwords[i].iter().collect();
            let bound = max_span_len(self.p.subwords[i].len());
            let longest = if self.p.may_start(i, j) { bound.min(g.len() - j) } else { 0 };
            for l in 0..=longest {
                let cost = if l == 0 {
                    0.0
                } else {
                    let span: String = g[j..j + l].iter().collect();
                    if span.trim().is_empty() {
                        continue;
                    }
                    span_cost(&s, &span)
                };
                self.lengths.push(l);
                self.go(i + 1, j + l, acc + cost);
                self.lengths.pop();
            }
        }
    }

    let mut search = Search {
        p: &p,
        lengths: Vec::new(),
        best: None,
    };
    search.go(0, 0, 0.0);
    let (total, lengths) = search.best.ok_or(AlignError::NoAlignment)?;
    Ok(p.finish(&lengths, total))
}
