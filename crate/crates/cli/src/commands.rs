use std::path::Path;

use gec_xform_core::corpus::{corrupt_indexed, parse_m2, parse_neighbors, parse_tsv, serialize_tsv};
use gec_xform_core::evaluate::{analysis_row, oracle_hypothesis, score, TSV_HEADER};
use gec_xform_core::transform::{apply_labels, encode, PairError, TransformationCounts};
use gec_xform_core::{
    CasingMode, CorruptionConfig, GranularityMode, SentencePair, Tokenizer, TokenizerMode, TransformationDictionary,
};
use rayon::prelude::*;

use crate::args::{
    AnalyzeArgs, ApplyArgs, CorpusArgs, CorruptArgs, EncodeArgs, EvaluateArgs, InduceArgs, SourceFormat,
    TokenizerArgs, TokenizerKind,
};
use crate::error::{CliError, Result};
use crate::io::{format_labels, join_lines, lines, parse_corpus, parse_labels, read_dictionary, read_input, Input};
use crate::manifest::RunManifest;

const SCORING_NOTE: &str =
    "precision is 1 when no edits are proposed, recall is 1 when the gold has no edits; F0.5 is 0 when both P and R are 0";

/// Tokenizer from flags; `default_casing` applies when `--casing` is absent.
pub fn build_tokenizer(args: &TokenizerArgs, default_casing: CasingMode) -> Result<(Tokenizer, Option<Input>)> {
    let casing = args.casing.unwrap_or(default_casing);
    match args.tokenizer {
        TokenizerKind::Word => Ok((Tokenizer::word(casing), None)),
        TokenizerKind::Chars => Tokenizer::new(TokenizerMode::CharChunks(args.chunk_size), casing)
            .map(|t| (t, None))
            .map_err(|e| CliError::usage(format!("--chunk-size: {e}"))),
        TokenizerKind::Vocab => {
            let path = args
                .vocab
                .as_deref()
                .ok_or_else(|| CliError::usage("--tokenizer vocab requires --vocab"))?;
            let input = read_input(path)?;
            let tokenizer = Tokenizer::from_vocab_text(&input.text, casing, !args.no_unknown_fallback)
                .map_err(|e| CliError::format(path, e))?;
            Ok((tokenizer, Some(input)))
        }
    }
}

fn load_corpora(args: &CorpusArgs) -> Result<(Vec<Input>, Vec<SentencePair>)> {
    let mut inputs = Vec::new();
    let mut pairs = Vec::new();
    for path in &args.inputs {
        let input = read_input(path)?;
        pairs.extend(parse_corpus(&input, args.format, args.annotator)?);
        inputs.push(input);
    }
    Ok((inputs, pairs))
}

fn load_synthetic(paths: &[std::path::PathBuf], limit: Option<usize>) -> Result<(Vec<Input>, Vec<SentencePair>)> {
    let args = CorpusArgs {
        inputs: paths.to_vec(),
        format: crate::io::CorpusFormat::Auto,
        annotator: 0,
    };
    let (inputs, mut pairs) = load_corpora(&args)?;
    pairs.truncate(limit.unwrap_or(usize::MAX));
    Ok((inputs, pairs))
}

fn check_mode(dict: &TransformationDictionary, expected: Option<GranularityMode>, path: &Path) -> Result<()> {
    match expected {
        Some(mode) if mode != dict.mode() => Err(CliError::usage(format!(
            "{} is a {} dictionary, but --mode {mode} was requested",
            path.display(),
            dict.mode()
        ))),
        _ => Ok(()),
    }
}

fn check_casing(dict: &TransformationDictionary, tokenizer: &Tokenizer, path: &Path) -> Result<()> {
    if dict.casing() != tokenizer.casing() {
        return Err(CliError::usage(format!(
            "{} is a {} dictionary, but the tokenizer is {}",
            path.display(),
            dict.casing(),
            tokenizer.casing()
        )));
    }
    Ok(())
}

/// Counts transformations over all pairs in parallel; returns the counts and
/// the failed pairs in input order.
pub fn count_transformations(
    pairs: &[&SentencePair],
    tokenizer: &Tokenizer,
    mode: GranularityMode,
) -> (TransformationCounts, Vec<(usize, PairError)>) {
    let (counts, mut skipped) = pairs
        .par_iter()
        .enumerate()
        .fold(
            || (TransformationCounts::new(), Vec::new()),
            |(mut counts, mut skipped), (i, pair)| {
                if let Err(e) = counts.add_pair(tokenizer, mode, &pair.source, &pair.gold) {
                    skipped.push((i, e));
                }
                (counts, skipped)
            },
        )
        .reduce(
            || (TransformationCounts::new(), Vec::new()),
            |(mut a, mut sa), (b, sb)| {
                a.merge(b);
                sa.extend(sb);
                (a, sa)
            },
        );
    skipped.sort_by_key(|(i, _)| *i);
    (counts, skipped)
}

fn report_skipped(skipped: &[(usize, PairError)]) {
    if skipped.is_empty() {
        return;
    }
    eprintln!("warning: {} pairs could not be aligned and were skipped", skipped.len());
    for (i, e) in skipped.iter().take(5) {
        eprintln!("  pair {}: {e}", i + 1);
    }
}

pub fn induce(args: &InduceArgs) -> Result<()> {
    let (tokenizer, vocab) = build_tokenizer(&args.tokenizer, CasingMode::Cased)?;
    let (inputs, pairs) = load_corpora(&args.corpus)?;
    let (synthetic_inputs, synthetic) = load_synthetic(&args.synthetic, args.synthetic_limit)?;
    let all: Vec<&SentencePair> = pairs.iter().chain(&synthetic).collect();
    let (counts, skipped) = count_transformations(&all, &tokenizer, args.mode);
    report_skipped(&skipped);
    let dict = counts.into_dictionary(args.mode, tokenizer.casing(), args.min_count);
    RunManifest::new("induce", args)
        .seed("seed", args.seed)
        .inputs(&inputs)
        .inputs(&synthetic_inputs)
        .inputs(vocab.as_ref())
        .note("skipped_pairs", &skipped.len().to_string())
        .write_with(&args.out, &dict.to_text())
}

pub fn encode_cmd(args: &EncodeArgs) -> Result<()> {
    let (dict_input, dict) = read_dictionary(&args.dict)?;
    check_mode(&dict, args.mode, &args.dict)?;
    let (tokenizer, vocab) = build_tokenizer(&args.tokenizer, dict.casing())?;
    check_casing(&dict, &tokenizer, &args.dict)?;
    let (inputs, pairs) = load_corpora(&args.corpus)?;
    let encoded: Vec<Result<Vec<usize>>> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, pair)| {
            encode(&pair.source, &pair.gold, &dict, &tokenizer, args.seed ^ i as u64)
                .map(|l| l.labels)
                .map_err(|e| CliError::usage(format!("pair {}: {e}", i + 1)))
        })
        .collect();
    let labels = encoded.into_iter().collect::<Result<Vec<_>>>()?;
    let uncorrectable: usize = labels.iter().flatten().filter(|&&l| l == 0).count();
    if uncorrectable > 0 {
        eprintln!("{uncorrectable} units are uncorrectable with this dictionary");
    }
    let text = join_lines(&labels.iter().map(|l| format_labels(l)).collect::<Vec<_>>());
    RunManifest::new("encode", args)
        .seed("seed", args.seed)
        .inputs(&inputs)
        .input(&dict_input)
        .inputs(vocab.as_ref())
        .note("uncorrectable_units", &uncorrectable.to_string())
        .write_with(&args.out, &text)
}

fn read_sources(input: &Input, format: SourceFormat, annotator: usize) -> Result<Vec<String>> {
    let ext = input.path.extension().map(|e| e.to_string_lossy().to_ascii_lowercase());
    let format = match (format, ext.as_deref()) {
        (SourceFormat::Auto, Some("m2")) => SourceFormat::M2,
        (SourceFormat::Auto, Some("tsv")) => SourceFormat::Tsv,
        (SourceFormat::Auto, _) => SourceFormat::Text,
        (other, _) => other,
    };
    let pairs = match format {
        SourceFormat::Text => return Ok(lines(&input.text).into_iter().map(String::from).collect()),
        SourceFormat::M2 => parse_m2(&input.text, annotator),
        _ => parse_tsv(&input.text),
    };
    Ok(pairs
        .map_err(|e| CliError::format(&input.path, e))?
        .into_iter()
        .map(|p| p.source)
        .collect())
}

pub fn apply(args: &ApplyArgs) -> Result<()> {
    let (dict_input, dict) = read_dictionary(&args.dict)?;
    check_mode(&dict, args.mode, &args.dict)?;
    let (tokenizer, vocab) = build_tokenizer(&args.tokenizer, dict.casing())?;
    check_casing(&dict, &tokenizer, &args.dict)?;
    let input = read_input(&args.input)?;
    let sources = read_sources(&input, args.format, args.annotator)?;
    let labels_input = read_input(&args.labels)?;
    let labels = parse_labels(&labels_input)?;
    if labels.len() != sources.len() {
        return Err(CliError::usage(format!(
            "{} has {} label lines for {} sentences",
            args.labels.display(),
            labels.len(),
            sources.len()
        )));
    }
    let outputs: Vec<Result<String>> = sources
        .par_iter()
        .zip(&labels)
        .enumerate()
        .map(|(i, (source, labels))| {
            apply_labels(source, labels, &dict, &tokenizer)
                .map_err(|e| CliError::usage(format!("sentence {}: {e}", i + 1)))
        })
        .collect();
    let outputs = outputs.into_iter().collect::<Result<Vec<_>>>()?;
    RunManifest::new("apply", args)
        .input(&input)
        .input(&labels_input)
        .input(&dict_input)
        .inputs(vocab.as_ref())
        .write_with(&args.out, &join_lines(&outputs))
}

pub fn evaluate(args: &EvaluateArgs) -> Result<()> {
    let (dict_input, dict) = read_dictionary(&args.dict)?;
    check_mode(&dict, args.mode, &args.dict)?;
    let (inputs, pairs) = load_corpora(&args.corpus)?;
    let hyp_input = read_input(&args.hypotheses)?;
    let hypotheses = lines(&hyp_input.text);
    if hypotheses.len() != pairs.len() {
        return Err(CliError::usage(format!(
            "{} has {} lines for {} pairs",
            args.hypotheses.display(),
            hypotheses.len(),
            pairs.len()
        )));
    }
    let counts = score(&pairs, &hypotheses);
    let row = analysis_row(&dict, 1, &counts);
    let text = format!("{TSV_HEADER}\n{}\n", row.to_tsv());
    print!("{text}");
    RunManifest::new("evaluate", args)
        .inputs(&inputs)
        .input(&hyp_input)
        .input(&dict_input)
        .note("scoring", SCORING_NOTE)
        .write_with(&args.out, &text)
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let (tokenizer, vocab) = build_tokenizer(&args.tokenizer, CasingMode::Cased)?;
    let (inputs, pairs) = load_corpora(&args.corpus)?;
    let (synthetic_inputs, synthetic) = load_synthetic(&args.synthetic, args.synthetic_limit)?;
    let induction: Vec<&SentencePair> = pairs.iter().chain(&synthetic).collect();
    let mut out = format!("{TSV_HEADER}\titerations\n");
    for mode in GranularityMode::ALL {
        let (counts, skipped) = count_transformations(&induction, &tokenizer, mode);
        report_skipped(&skipped);
        for &min_count in &args.min_counts {
            let mut dict = counts.clone().into_dictionary(mode, tokenizer.casing(), min_count);
            if let Some(max) = args.truncate {
                dict = dict.truncated(max);
            }
            for &iterations in &args.iterations {
                let hypotheses: Vec<String> = pairs
                    .par_iter()
                    .enumerate()
                    .map(|(i, pair)| oracle_hypothesis(pair, &dict, &tokenizer, args.seed ^ i as u64, iterations))
                    .collect();
                let row = analysis_row(&dict, iterations, &score(&pairs, &hypotheses));
                out.push_str(&row.to_tsv());
                out.push_str(&format!("\t{iterations}\n"));
            }
        }
    }
    print!("{out}");
    RunManifest::new("analyze", args)
        .seed("seed", args.seed)
        .inputs(&inputs)
        .inputs(&synthetic_inputs)
        .inputs(vocab.as_ref())
        .note("scoring", SCORING_NOTE)
        .write_with(&args.out, &out)
}

pub fn corrupt(args: &CorruptArgs) -> Result<()> {
    let input = read_input(&args.input)?;
    let mut manifest = RunManifest::new("corrupt", args);
    let mut config = match &args.config {
        Some(path) => {
            let config_input = read_input(path)?;
            let config = CorruptionConfig::from_kv_text(&config_input.text).map_err(|e| CliError::format(path, e))?;
            manifest = manifest.input(&config_input);
            config
        }
        None => CorruptionConfig::default(),
    };
    let neighbors_path = args
        .neighbors
        .clone()
        .or_else(|| config.neighbors_file.as_ref().map(Into::into));
    if let Some(path) = neighbors_path {
        let neighbors_input = read_input(&path)?;
        config.neighbors = parse_neighbors(&neighbors_input.text).map_err(|e| CliError::format(&path, e))?;
        manifest = manifest.input(&neighbors_input);
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let golds: Vec<&str> = lines(&input.text).into_iter().filter(|l| !l.trim().is_empty()).collect();
    let pairs: Vec<SentencePair> = golds
        .par_iter()
        .enumerate()
        .map(|(i, gold)| corrupt_indexed(gold, &config, i as u64))
        .collect();
    manifest
        .seed("seed", config.seed)
        .input(&input)
        .write_with(&args.out, &serialize_tsv(&pairs))
}
