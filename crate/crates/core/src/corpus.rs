//! Parallel corpora: M² and TSV formats, and seeded synthetic error
//! generation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::textnorm::strip_diacritics;

/// M² placeholder for an empty field.
pub const M2_NONE: &str = "-NONE-";

/// One `A` line of an M² block. Token offsets refer to the whitespace
/// tokenization of the source sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldEdit {
    pub start_token: usize,
    pub end_token: usize,
    pub type_tag: String,
    /// Raw correction field; [`M2_NONE`] and the empty string both mean
    /// deletion.
    pub correction: String,
    pub required: String,
    pub comment: String,
    pub annotator: usize,
    /// `-1 -1` lines stating that the annotator made no edits.
    pub noop: bool,
}

impl GoldEdit {
    pub fn new(start_token: usize, end_token: usize, correction: impl Into<String>, annotator: usize) -> Self {
        GoldEdit {
            start_token,
            end_token,
            type_tag: "X".into(),
            correction: correction.into(),
            required: "REQUIRED".into(),
            comment: M2_NONE.into(),
            annotator,
            noop: false,
        }
    }

    pub fn correction_text(&self) -> &str {
        if self.correction == M2_NONE {
            ""
        } else {
            &self.correction
        }
    }

    fn to_line(&self) -> String {
        let span = if self.noop {
            "-1 -1".to_string()
        } else {
            format!("{} {}", self.start_token, self.end_token)
        };
        format!(
            "A {span}|||{}|||{}|||{}|||{}|||{}",
            self.type_tag, self.correction, self.required, self.comment, self.annotator
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentencePair {
    pub source: String,
    pub gold: String,
    /// Span annotations; empty for pairs that did not come from M².
    pub gold_edits: Vec<GoldEdit>,
}

impl SentencePair {
    pub fn new(source: impl Into<String>, gold: impl Into<String>) -> Self {
        SentencePair {
            source: source.into(),
            gold: gold.into(),
            gold_edits: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: edits of annotator {annotator} overlap")]
    Overlap { line: usize, annotator: usize },
    #[error("line {line}: edit span {start}..{end} exceeds {tokens} source tokens")]
    OutOfRange {
        line: usize,
        start: usize,
        end: usize,
        tokens: usize,
    },
}

fn malformed(line: usize, message: impl Into<String>) -> CorpusError {
    CorpusError::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_edit(line_no: usize, body: &str) -> Result<GoldEdit, CorpusError> {
    let fields: Vec<&str> = body.split("|||").collect();
    if fields.len() != 6 {
        return Err(malformed(line_no, "expected 6 `|||`-separated fields"));
    }
    let (start, end) = fields[0]
        .split_once(' ')
        .ok_or_else(|| malformed(line_no, "expected `<start> <end>`"))?;
    let annotator = fields[5]
        .parse()
        .map_err(|_| malformed(line_no, "bad annotator id"))?;
    let index = |s: &str| -> Result<i64, CorpusError> {
        s.parse().map_err(|_| malformed(line_no, format!("bad token index `{s}`")))
    };
    let (start, end) = (index(start)?, index(end)?);
    let noop = start == -1 && end == -1;
    if !noop && (start < 0 || end < start) {
        return Err(malformed(line_no, "invalid token span"));
    }
    Ok(GoldEdit {
        start_token: if noop { 0 } else { start as usize },
        end_token: if noop { 0 } else { end as usize },
        type_tag: fields[1].into(),
        correction: fields[2].into(),
        required: fields[3].into(),
        comment: fields[4].into(),
        annotator,
        noop,
    })
}

/// Applies one annotator's edits to a tokenized source, right to left.
/// `lines` gives the file line of each edit for error reporting.
fn replay_checked(
    source: &str,
    edits: &[GoldEdit],
    lines: &[usize],
    annotator: usize,
) -> Result<String, CorpusError> {
    let mut tokens: Vec<&str> = source.split_whitespace().collect();
    let mut chosen: Vec<(usize, &GoldEdit)> = edits
        .iter()
        .zip(lines)
        .filter(|(e, _)| e.annotator == annotator && !e.noop)
        .map(|(e, &l)| (l, e))
        .collect();
    chosen.sort_by_key(|(_, e)| (e.start_token, e.end_token));
    for (line, e) in &chosen {
        if e.end_token > tokens.len() {
            return Err(CorpusError::OutOfRange {
                line: *line,
                start: e.start_token,
                end: e.end_token,
                tokens: tokens.len(),
            });
        }
    }
    for pair in chosen.windows(2) {
        let (a, (line, b)) = (pair[0].1, pair[1]);
        let both_inserts = a.start_token == a.end_token && b.start_token == b.end_token;
        if b.start_token < a.end_token || (both_inserts && a.start_token == b.start_token) {
            return Err(CorpusError::Overlap { line, annotator });
        }
    }
    for (_, e) in chosen.iter().rev() {
        tokens.splice(e.start_token..e.end_token, e.correction_text().split_whitespace());
    }
    Ok(tokens.join(" "))
}

/// Gold sentence obtained by replaying `annotator`'s edits on `source`.
pub fn replay(source: &str, edits: &[GoldEdit], annotator: usize) -> Result<String, CorpusError> {
    let lines = alloc::vec![0; edits.len()];
    replay_checked(source, edits, &lines, annotator)
}

/// Parses an M² file. Gold sentences replay the edits of `annotator`;
/// blocks without edits from that annotator keep the source.
pub fn parse_m2(contents: &str, annotator: usize) -> Result<Vec<SentencePair>, CorpusError> {
    struct Block {
        source: String,
        edits: Vec<GoldEdit>,
        lines: Vec<usize>,
    }
    let mut pairs = Vec::new();
    let mut current: Option<Block> = None;
    let finish = |block: Block, pairs: &mut Vec<SentencePair>| -> Result<(), CorpusError> {
        let gold = replay_checked(&block.source, &block.edits, &block.lines, annotator)?;
        pairs.push(SentencePair {
            source: block.source,
            gold,
            gold_edits: block.edits,
        });
        Ok(())
    };
    for (n, raw) in contents.split('\n').enumerate() {
        let line_no = n + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            if let Some(block) = current.take() {
                finish(block, &mut pairs)?;
            }
        } else if let Some(source) = line.strip_prefix("S ").or((line == "S").then_some("")) {
            if let Some(block) = current.take() {
                finish(block, &mut pairs)?;
            }
            current = Some(Block {
                source: source.into(),
                edits: Vec::new(),
                lines: Vec::new(),
            });
        } else if let Some(body) = line.strip_prefix("A ") {
            let block = current
                .as_mut()
                .ok_or_else(|| malformed(line_no, "`A` line outside a block"))?;
            block.edits.push(parse_edit(line_no, body)?);
            block.lines.push(line_no);
        } else {
            return Err(malformed(line_no, "expected `S` or `A` line"));
        }
    }
    if let Some(block) = current.take() {
        finish(block, &mut pairs)?;
    }
    Ok(pairs)
}

/// Writes pairs as M², each block followed by a blank line.
pub fn serialize_m2(pairs: &[SentencePair]) -> String {
    let mut out = String::new();
    for pair in pairs {
        let _ = writeln!(out, "S {}", pair.source);
        for edit in &pair.gold_edits {
            let _ = writeln!(out, "{}", edit.to_line());
        }
        out.push('\n');
    }
    out
}

/// `source<TAB>gold` per line; blank lines are skipped.
pub fn parse_tsv(contents: &str) -> Result<Vec<SentencePair>, CorpusError> {
    let mut pairs = Vec::new();
    for (n, raw) in contents.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(source), Some(gold), None) => pairs.push(SentencePair::new(source, gold)),
            _ => {
                let count = line.split('\t').count();
                return Err(malformed(n + 1, format!("expected 2 tab-separated fields, found {count}")));
            }
        }
    }
    Ok(pairs)
}

pub fn serialize_tsv(pairs: &[SentencePair]) -> String {
    let mut out = String::new();
    for p in pairs {
        let _ = writeln!(out, "{}\t{}", p.source, p.gold);
    }
    out
}

/// Probabilities of the synthetic error operations. Character operations
/// are drawn per character, word operations per word.
///
/// The defaults (0.02 per character, 0.05 per word) are a starting point,
/// not calibrated against any particular corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct CorruptionConfig {
    pub substitute_char: f64,
    pub insert_char: f64,
    pub delete_char: f64,
    pub swap_adjacent_chars: f64,
    pub strip_word_diacritics: f64,
    pub toggle_word_casing: f64,
    pub swap_adjacent_words: f64,
    /// Characters used for substitutions and insertions.
    pub alphabet: Vec<char>,
    /// Optional keyboard neighbours preferred for substitutions.
    pub neighbors: BTreeMap<char, Vec<char>>,
    /// Path of a neighbour map file, resolved by the caller.
    pub neighbors_file: Option<String>,
    pub seed: u64,
}

impl Default for CorruptionConfig {
    fn default() -> Self {
        CorruptionConfig {
            substitute_char: 0.02,
            insert_char: 0.02,
            delete_char: 0.02,
            swap_adjacent_chars: 0.02,
            strip_word_diacritics: 0.05,
            toggle_word_casing: 0.05,
            swap_adjacent_words: 0.05,
            alphabet: "abcdefghijklmnopqrstuvwxyz".chars().collect(),
            neighbors: BTreeMap::new(),
            neighbors_file: None,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("probability `{key}` = {value} is outside [0, 1]")]
    Probability { key: &'static str, value: f64 },
    #[error("alphabet is empty")]
    EmptyAlphabet,
}

impl CorruptionConfig {
    /// Zero probabilities everywhere: corruption is the identity.
    pub fn disabled() -> Self {
        CorruptionConfig {
            substitute_char: 0.0,
            insert_char: 0.0,
            delete_char: 0.0,
            swap_adjacent_chars: 0.0,
            strip_word_diacritics: 0.0,
            toggle_word_casing: 0.0,
            swap_adjacent_words: 0.0,
            ..Default::default()
        }
    }

    fn probabilities(&self) -> [(&'static str, f64); 7] {
        [
            ("substitute_char", self.substitute_char),
            ("insert_char", self.insert_char),
            ("delete_char", self.delete_char),
            ("swap_adjacent_chars", self.swap_adjacent_chars),
            ("strip_word_diacritics", self.strip_word_diacritics),
            ("toggle_word_casing", self.toggle_word_casing),
            ("swap_adjacent_words", self.swap_adjacent_words),
        ]
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (key, value) in self.probabilities() {
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::Probability { key, value });
            }
        }
        if self.alphabet.is_empty() {
            return Err(ConfigError::EmptyAlphabet);
        }
        Ok(())
    }

    /// Parses `key=value` lines over the defaults; `#` starts a comment
    /// line. Keys are the field names.
    pub fn from_kv_text(text: &str) -> Result<Self, ConfigError> {
        let mut config = CorruptionConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ConfigError::Syntax { line: n + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected key=value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let prob = || -> Result<f64, ConfigError> {
                value.parse().map_err(|_| err(format!("`{value}` is not a number")))
            };
            match key {
                "substitute_char" => config.substitute_char = prob()?,
                "insert_char" => config.insert_char = prob()?,
                "delete_char" => config.delete_char = prob()?,
                "swap_adjacent_chars" => config.swap_adjacent_chars = prob()?,
                "strip_word_diacritics" => config.strip_word_diacritics = prob()?,
                "toggle_word_casing" => config.toggle_word_casing = prob()?,
                "swap_adjacent_words" => config.swap_adjacent_words = prob()?,
                "alphabet" => config.alphabet = value.chars().collect(),
                "neighbors_file" => config.neighbors_file = Some(value.into()),
                "seed" => {
                    config.seed = value.parse().map_err(|_| err(format!("bad seed `{value}`")))?
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn to_kv_text(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.probabilities() {
            let _ = writeln!(out, "{key}={value}");
        }
        let alphabet: String = self.alphabet.iter().collect();
        let _ = writeln!(out, "alphabet={alphabet}");
        if let Some(path) = &self.neighbors_file {
            let _ = writeln!(out, "neighbors_file={path}");
        }
        let _ = writeln!(out, "seed={}", self.seed);
        out
    }
}

/// Parses a neighbour map: each line is a character, whitespace, and the
/// characters considered adjacent to it.
pub fn parse_neighbors(text: &str) -> Result<BTreeMap<char, Vec<char>>, ConfigError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap_or_default();
        let mut key_chars = key.chars();
        let (Some(c), None, Some(near), None) =
            (key_chars.next(), key_chars.next(), parts.next(), parts.next())
        else {
            return Err(ConfigError::Syntax {
                line: n + 1,
                message: "expected `<char> <neighbours>`".into(),
            });
        };
        map.insert(c, near.chars().collect());
    }
    Ok(map)
}

fn pick(rng: &mut ChaCha8Rng, from: &[char]) -> char {
    from[rng.random_range(0..from.len())]
}

fn toggle_first(word: &str) -> String {
    let mut chars = word.chars();
    let Some(first) = chars.next() else {
        return String::new();
    };
    let mut out = String::with_capacity(word.len());
    if first.is_uppercase() {
        out.extend(first.to_lowercase());
    } else {
        out.extend(first.to_uppercase());
    }
    out.push_str(chars.as_str());
    out
}

fn corrupt_chars(word: &str, config: &CorruptionConfig, rng: &mut ChaCha8Rng) -> String {
    let chars: Vec<char> = word.chars().collect();
    let mut out = String::with_capacity(word.len() + 4);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let u: f64 = rng.random();
        let mut edge = config.delete_char;
        if u < edge {
            i += 1;
        } else if u < {
            edge += config.substitute_char;
            edge
        } {
            let pool = config
                .neighbors
                .get(&c)
                .filter(|n| !n.is_empty())
                .map_or(config.alphabet.as_slice(), |n| n.as_slice());
            out.push(pick(rng, pool));
            i += 1;
        } else if u < edge + config.swap_adjacent_chars && i + 1 < chars.len() {
            out.push(chars[i + 1]);
            out.push(c);
            i += 2;
        } else {
            out.push(c);
            i += 1;
        }
        if rng.random::<f64>() < config.insert_char {
            out.push(pick(rng, &config.alphabet));
        }
    }
    if out.is_empty() {
        word.into()
    } else {
        out
    }
}

/// Produces an erroneous source for `gold` using the configured seed.
pub fn corrupt(gold: &str, config: &CorruptionConfig) -> SentencePair {
    corrupt_with_seed(gold, config, config.seed)
}

/// Corruption for the `index`-th sentence of a corpus, seeded with
/// `seed ^ index` so sentences can be processed independently.
pub fn corrupt_indexed(gold: &str, config: &CorruptionConfig, index: u64) -> SentencePair {
    corrupt_with_seed(gold, config, config.seed ^ index)
}

fn corrupt_with_seed(gold: &str, config: &CorruptionConfig, seed: u64) -> SentencePair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words: Vec<String> = gold.split_whitespace().map(String::from).collect();
    let mut i = 0;
    while i + 1 < words.len() {
        if rng.random::<f64>() < config.swap_adjacent_words {
            words.swap(i, i + 1);
            i += 2;
        } else {
            i += 1;
        }
    }
    for word in &mut words {
        if rng.random::<f64>() < config.strip_word_diacritics {
            let stripped = strip_diacritics(word);
            if !stripped.is_empty() {
                *word = stripped;
            }
        }
        if rng.random::<f64>() < config.toggle_word_casing {
            *word = toggle_first(word);
        }
        *word = corrupt_chars(word, config, &mut rng);
    }
    SentencePair::new(words.join(" "), gold)
}
