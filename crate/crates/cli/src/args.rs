use std::fmt::Display;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gec_xform_core::{CasingMode, GranularityMode};
use serde::{Serialize, Serializer};

use crate::io::CorpusFormat;

fn display<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

fn display_opt<T: Display, S: Serializer>(value: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Parser)]
#[command(name = "gec-xform", version, about = "Induce, encode, apply and evaluate GEC correction transformations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a transformation dictionary from parallel corpora.
    Induce(InduceArgs),
    /// Encode corpus corrections as one dictionary label per unit.
    Encode(EncodeArgs),
    /// Apply label files to source sentences.
    Apply(ApplyArgs),
    /// Score hypotheses against a gold corpus.
    Evaluate(EvaluateArgs),
    /// Oracle upper-bound sweep over modes, thresholds and iterations.
    Analyze(AnalyzeArgs),
    /// Generate synthetic (erroneous, gold) pairs from gold sentences.
    Corrupt(CorruptArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenizerKind {
    /// Greedy longest match over `--vocab`.
    Vocab,
    /// Whitespace-separated words.
    Word,
    /// Words cut into `--chunk-size` character pieces.
    Chars,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct TokenizerArgs {
    #[arg(long, value_enum, default_value_t = TokenizerKind::Word)]
    pub tokenizer: TokenizerKind,
    /// Vocabulary file, one piece per line, word-initial pieces with a
    /// leading space.
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub chunk_size: usize,
    /// Fail on characters the vocabulary cannot cover instead of emitting
    /// single-character pieces.
    #[arg(long)]
    pub no_unknown_fallback: bool,
    /// Defaults to cased, or to the dictionary's casing where one is given.
    #[arg(long)]
    #[serde(serialize_with = "display_opt")]
    pub casing: Option<CasingMode>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CorpusArgs {
    /// Parallel corpus files (TSV or M²), read in order.
    #[arg(long = "input", required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = CorpusFormat::Auto)]
    pub format: CorpusFormat,
    /// M² annotator whose edits define the gold sentences.
    #[arg(long, default_value_t = 0)]
    pub annotator: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct InduceArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub tokenizer: TokenizerArgs,
    #[arg(long, default_value_t = GranularityMode::CHAR_AT_SUBWORD)]
    #[serde(serialize_with = "display")]
    pub mode: GranularityMode,
    #[arg(long, default_value_t = 1)]
    pub min_count: u64,
    /// Synthetic corpora pooled with the authentic ones before thresholding.
    #[arg(long, num_args = 1..)]
    pub synthetic: Vec<PathBuf>,
    /// Use at most this many synthetic pairs.
    #[arg(long)]
    pub synthetic_limit: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub tokenizer: TokenizerArgs,
    #[arg(long)]
    pub dict: PathBuf,
    /// Expected dictionary mode; a mismatch is an error.
    #[arg(long)]
    #[serde(serialize_with = "display_opt")]
    pub mode: Option<GranularityMode>,
    /// Fallback search seed; sentence `i` uses `seed ^ i`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceFormat {
    /// `.m2` is M², `.tsv` is TSV, anything else plain text.
    Auto,
    /// One sentence per line.
    Text,
    Tsv,
    M2,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ApplyArgs {
    /// Source sentences.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = SourceFormat::Auto)]
    pub format: SourceFormat,
    #[arg(long, default_value_t = 0)]
    pub annotator: usize,
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long)]
    pub dict: PathBuf,
    #[command(flatten)]
    pub tokenizer: TokenizerArgs,
    #[arg(long)]
    #[serde(serialize_with = "display_opt")]
    pub mode: Option<GranularityMode>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Corrected sentences, one per corpus pair.
    #[arg(long)]
    pub hypotheses: PathBuf,
    /// Dictionary the hypotheses were produced with, for the report row.
    #[arg(long)]
    pub dict: PathBuf,
    #[arg(long)]
    #[serde(serialize_with = "display_opt")]
    pub mode: Option<GranularityMode>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub tokenizer: TokenizerArgs,
    #[arg(long, num_args = 1..)]
    pub synthetic: Vec<PathBuf>,
    #[arg(long)]
    pub synthetic_limit: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub min_counts: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "1,4")]
    pub iterations: Vec<usize>,
    /// Keep only the most frequent entries of every dictionary.
    #[arg(long)]
    pub truncate: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CorruptArgs {
    /// Gold sentences, one per line.
    #[arg(long)]
    pub input: PathBuf,
    /// `key=value` corruption settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Keyboard neighbour map; overrides `neighbors_file` in the config.
    #[arg(long)]
    pub neighbors: Option<PathBuf>,
    /// Overrides the config seed; sentence `i` uses `seed ^ i`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output TSV of `source<TAB>gold`.
    #[arg(long)]
    pub out: PathBuf,
}
